from hypothesis import given, settings

from mmw import coding as C
from mmw.diagonal import diagonalize
from mmw.proofsys import Q, check
from mmw.serial import Reader, Writer
from mmw.syntax import And, UnaryPredicate, parse
from conftest import formulas


def roundtrip(*parts):
    w = Writer(parts)
    texts = [w.expr(x) for x in parts]
    r = Reader(w.header())
    return w, [r.formula(t) for t in texts]


@settings(max_examples=300)
@given(formulas())
def test_small_formulas_roundtrip(f):
    w, (g,) = roundtrip(f)
    assert g == f


def test_diagonal_sentence_is_compact():
    d = diagonalize(C.STANDARD, UnaryPredicate(parse("~x0 = 0"), 0))
    w, (psi, bic) = roundtrip(d.psi, d.biconditional)
    assert psi == d.psi and bic == d.biconditional
    size = sum(len(t) for _, t in w.header())
    assert 10 * size < C.STANDARD.encode(d.psi).bit_length() // 8


def test_shared_subformulas_become_one_object():
    big = parse("forall x0. forall x1. forall x2. ((x0 + x1) = x2 -> (x1 + x0) = x2)")
    for _ in range(4):
        big = And(big, big)
    w, (g,) = roundtrip(And(big, big))
    assert g.left is g.right
    assert any(label.startswith("f") for label, _ in w.header())


def test_proof_roundtrip():
    d = diagonalize(C.STANDARD, UnaryPredicate(parse("x0 = x0"), 0))
    p = d.certificate
    w = Writer([p])
    text = w.proof(p)
    q = Reader(w.header()).proof(text)
    assert q.goal == p.goal and check(Q, q).accepted
