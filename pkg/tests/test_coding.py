import threading

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import formulas, terms
from oracles import expanded_tokens
from mmw import coding as C
from mmw.syntax import Eq, Not, UnaryPredicate, Var, apply, numeral, parse

GOLDEN = {
    "0 = 0": 9249,
    "~0 = 0": 336929,
    "x0 = x0": 9609384,
    "forall x1. x1 = x1": 17072401761441000,
    "S(0) = num(2)": 304121921,
    "num(5) = num(6)": 10960688737911955336005697,
}


@pytest.mark.parametrize("text,code", sorted(GOLDEN.items()))
def test_golden_codes(text, code):
    f = parse(text)
    assert C.encode(C.STANDARD, f) == code
    assert C.decode(C.STANDARD, code) == f


def test_token_values_are_pinned():
    assert (C.NOT, C.FORALL, C.EXISTS) == (10, 15, 16)
    assert sorted((C.ZERO, C.SUCC, C.ADD, C.MUL, C.VAR, C.BIT0, C.BIT1, C.END)) == list(range(1, 9))


@settings(max_examples=1500)
@given(formulas())
def test_encode_decode_roundtrip(f):
    assert C.decode(C.STANDARD, C.encode(C.STANDARD, f)) == f


@settings(max_examples=300)
@given(formulas(max_num=300))
def test_tokens_match_expanded_tree(f):
    assert list(C.tokens(f)) == expanded_tokens(f)


@settings(max_examples=300)
@given(terms(max_num=2 ** 20))
def test_term_tokens_match(t):
    assert list(C.tokens(t)) == expanded_tokens(t)


@given(st.integers(0, 2 ** 200))
def test_numeral_length_formula(n):
    assert C.numeral_length(n) == len(C.numeral_tokens(n))


@given(formulas(), formulas())
def test_codes_are_injective(f, g):
    assert (C.encode(C.STANDARD, f) == C.encode(C.STANDARD, g)) == (f == g)


def test_negation_code_arithmetic():
    f = parse("forall x0. ~S(x0) = 0")
    n = len(C.tokens(f))
    assert C.encode(C.STANDARD, Not(f)) == C.NOT * 32 ** n + C.encode(C.STANDARD, f)


def test_concatenation_is_arithmetic():
    a, b = parse("0 = 0"), parse("x0 = x0")
    ca, cb = C.encode(C.STANDARD, a), C.encode(C.STANDARD, b)
    joined = C.tokens_to_int(C.tokens(a) + C.tokens(b))
    assert joined == ca * 32 ** len(C.tokens(b)) + cb


def test_no_zero_digits_in_codes():
    code = C.encode(C.STANDARD, parse("exists x3 < num(100). (x3 * x3) = num(49)"))
    assert 0 not in C.int_to_tokens(code)


def test_bad_code_rejected():
    with pytest.raises(C.CodingError):
        C.decode(C.STANDARD, C.tokens_to_int(bytes([C.EQ, C.ZERO])))
    with pytest.raises(C.CodingError):
        C.decode(C.STANDARD, 0)


def test_direct_numbering_reservation():
    n = C.Numbering("direct")
    p = UnaryPredicate(Eq(Var(0), Var(0)), 0)
    c, psi = n.reserve_direct(p)
    assert psi == apply(p, numeral(c))
    assert n.encode(psi) == c and n.decode(c) == psi
    # reserved codes lie outside the standard image
    assert C.int_to_tokens(c)[0] == C.DIRECT_MARK
    other = parse("0 = 0")
    assert n.encode(other) == C.STANDARD.encode(other)


def test_direct_reservation_collision():
    n = C.Numbering("direct")
    p = UnaryPredicate(Eq(Var(0), Var(0)), 0)
    c, psi = n.reserve_direct(p)
    c2, psi2 = n.reserve_direct(p)
    assert c2 != c and psi2 != psi


def test_direct_reservations_are_thread_safe():
    n = C.Numbering("direct")
    p = UnaryPredicate(Eq(Var(0), Var(0)), 0)
    got = []

    def worker():
        for _ in range(50):
            got.append(n.reserve_direct(p)[0])

    threads = [threading.Thread(target=worker) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(set(got)) == 200


def test_standard_numbering_refuses_reservation():
    with pytest.raises(C.CodingError):
        C.STANDARD.reserve_direct(UnaryPredicate(Eq(Var(0), Var(0)), 0))


def test_digest_is_structural():
    f = parse("forall x0. (x0 + 0) = x0")
    assert C.digest(f) == C.digest(parse("forall x0. (x0+0)=x0"))
    assert C.digest(f) != C.digest(parse("forall x1. (x1 + 0) = x1"))
