import pytest

from golden import all_golden, arithmetic_facts, exists_weakening
from mutations import suite
from mmw.proofsys import (
    PA, Q, TOY, Axiom, FalseEquation, LogicAxiom, ModusPonens, ProofBuilder, ProofObject, Step,
    TheoryError, check, check_logic_axiom, compute_proof, induction_instance, is_tautology,
    parse_theory, search,
)
from mmw.syntax import (
    BOT, Eq, Exists, ForAll, Imp, Not, Var, parse,
)


@pytest.fixture(scope="module")
def golden():
    return all_golden()


def test_golden_proofs_accepted(golden):
    for p in golden:
        assert check(Q, p).accepted, check(Q, p)


def test_mutation_suite(golden):
    results = suite(golden)
    breaking = [(label, m) for label, m, e in results if e is False]
    preserving = [(label, m) for label, m, e in results if e is True]
    assert len(breaking) >= 100
    for label, m in breaking:
        assert not check(Q, m).accepted, label
    for label, m in preserving:
        assert check(Q, m).accepted, label


def test_rejection_names_the_step():
    p = arithmetic_facts()
    steps = list(p.steps)
    steps[1] = Step(steps[1].formula, Axiom())
    r = check(Q, ProofObject(p.goal, tuple(steps)))
    assert not r.accepted and r.step == 2 and "axiom" in r.reason


def test_empty_and_goal_mismatch():
    assert not check(Q, ProofObject(BOT, ())).accepted
    p = arithmetic_facts()
    assert not check(Q, ProofObject(Not(p.goal), p.steps)).accepted


def test_text_roundtrip(golden):
    for p in golden:
        q = ProofObject.from_text(p.to_text())
        assert q == p and q.digest() == p.digest()
        assert check(Q, q).accepted


def test_compute_rejects_false_and_open():
    with pytest.raises(FalseEquation):
        compute_proof(Q, parse("(num(2) + num(2)) = num(5)"))
    with pytest.raises(ValueError):
        compute_proof(Q, parse("x0 = x0"))


def test_inst_capture_rejected():
    # (forall x0. exists x1. ~x1 = x0) -> exists x1. ~x1 = x1 is not a valid instance
    fa = ForAll(0, Exists(1, Not(Eq(Var(1), Var(0)))))
    bad = Imp(fa, Exists(1, Not(Eq(Var(1), Var(1)))))
    assert check_logic_axiom(bad, LogicAxiom("INST", term=Var(1))) is not None


@pytest.mark.parametrize("schema,text,ok", [
    ("P1", "(0 = 0 -> (x0 = x0 -> 0 = 0))", True),
    ("P1", "(0 = 0 -> (x0 = x0 -> x0 = x0))", False),
    ("P3", "((~0 = 0 -> ~x0 = 0) -> (x0 = 0 -> 0 = 0))", True),
    ("REFL", "num(5) = num(5)", True),
    ("REFL", "num(5) = num(6)", False),
    ("EXDEF", "(exists x0. x0 = 0 <-> ~forall x0. ~x0 = 0)", True),
    ("VAC", "(0 = 0 -> forall x3. 0 = 0)", True),
    ("VAC", "(x3 = 0 -> forall x3. x3 = 0)", False),
])
def test_logic_schemas(schema, text, ok):
    assert (check_logic_axiom(parse(text), LogicAxiom(schema)) is None) == ok


def test_tautology_check():
    assert is_tautology(parse("((0 = 0 -> x0 = 0) | (x0 = 0 -> 0 = 0))"))
    assert not is_tautology(parse("(0 = 0 -> x0 = 0)"))
    # atoms are compared structurally, so a quantified atom is opaque
    assert is_tautology(parse("(forall x0. x0 = 0 -> forall x0. x0 = 0)"))


def test_induction_axioms_only_in_pa():
    inst = induction_instance(parse("(x0 + 0) = x0"), 0)
    assert PA.is_axiom(inst) and not Q.is_axiom(inst)
    b = ProofBuilder()
    b.axiom(inst)
    p = b.build(inst)
    assert check(PA, p).accepted and not check(Q, p).accepted


def test_toy_theory_proves_bot():
    b = ProofBuilder()
    k = b.axiom(parse("0 = S(0)"))
    assert b.formula(k) == BOT
    assert check(TOY, b.build(BOT)).accepted


def test_extends():
    assert PA.extends(Q) and not Q.extends(PA) and TOY.extends(Q)


def test_search_finds_and_is_checked():
    for text in ("~ S(num(9)) = 0", "(forall x0. (x0 + 0) = x0 & ~ S(0) = 0)"):
        p = search(Q, parse(text))
        assert p is not None and check(Q, p).accepted


def test_search_none_means_not_found():
    assert search(Q, BOT, 200) is None


def test_search_is_seeded():
    goal = parse("(forall x0. (x0 + 0) = x0 & ~ S(0) = 0)")
    assert search(Q, goal, 2000, 7) == search(Q, goal, 2000, 7)


def test_macro_step_rechecked():
    inner = exists_weakening()
    b = ProofBuilder()
    b.macro(inner)
    assert check(Q, b.build(inner.goal)).accepted
    broken = ProofObject(inner.goal, inner.steps[:-1])
    b2 = ProofBuilder()
    b2.macro(broken)
    assert not check(Q, b2.build(inner.goal)).accepted


def test_mp_chain():
    b = ProofBuilder()
    a = b.compute(parse("0 = 0"))
    imp = b.taut(Imp(parse("0 = 0"), Imp(parse("x0 = x0"), parse("0 = 0"))))
    k = b.mp(a, imp)
    assert check(Q, b.build(b.formula(k))).accepted
    assert check(Q, ProofObject(b.formula(k), (b.steps[0], b.steps[1], Step(b.formula(k), ModusPonens(2, 1))))) \
        .accepted is False


def test_parse_theory():
    t = parse_theory("name: T\nbase: Q\nscheme: induction\nextra: num(2) = num(2)\n")
    assert t.extends(PA) and t.is_axiom(parse("num(2) = num(2)"))
    with pytest.raises(TheoryError):
        parse_theory("name: T\nextra: x0 = 0\n")
    with pytest.raises(TheoryError):
        parse_theory("base: Q\n")

