import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import delta0_sentences, truth
from mmw import assumptions as A
from mmw.hierarchy import is_delta0
from mmw.semantics import (
    Assumption, BooleanTrace, InvalidHint, NotDelta0, UnboundVariable, Witness, eval_bounded,
    eval_delta0, eval_term, eval_with_hints, replay,
)
from mmw.syntax import Exists, ForAll, Not, Var, numeral, parse


def test_exhaustive_delta0_small():
    n = 0
    for f in delta0_sentences(5):
        v = eval_bounded(f, 50)
        assert v.value == truth(f), f
        if is_delta0(f):
            assert eval_delta0(f) == truth(f), f
        n += 1
    assert n > 500


@settings(max_examples=200)
@given(st.integers(0, 40), st.integers(0, 40))
def test_bounded_arithmetic(a, b):
    f = parse(f"exists x0 < num({a + 1}). (x0 + num({b})) = num({a + b})")
    assert eval_delta0(f) is True


def test_eval_term():
    assert eval_term(parse("(x0 * S(x0)) = 0").left, {0: 7}) == 56


def test_sigma1_witness():
    v = eval_bounded(parse("exists x0. (x0 * x0) = num(49)"), 100)
    assert v.value is True
    assert isinstance(v.certificate, Witness) and v.certificate.value == 7


def test_pi1_refuted_by_counterexample():
    v = eval_bounded(parse("forall x0. ~(x0 * x0) = num(49)"), 100)
    assert v.value is False
    assert isinstance(v.certificate, Witness) and v.certificate.value == 7


def test_unbounded_undecided_below_bound():
    v = eval_bounded(parse("exists x0. x0 = num(500)"), 100)
    assert v.value is None and v.label() == "Unknown"
    v = eval_bounded(parse("forall x0. ~S(x0) = 0"), 100)
    assert v.value is None


def test_delta0_part_is_a_direct_trace():
    v = eval_bounded(parse("forall x0 < num(4). ~S(x0) = 0"))
    assert v.value is True and isinstance(v.certificate, BooleanTrace)


def test_needs_a_sentence():
    with pytest.raises(UnboundVariable):
        eval_bounded(parse("x0 = 0"))


def test_eval_delta0_rejects_unbounded():
    with pytest.raises(NotDelta0):
        eval_delta0(parse("exists x0. x0 = 0"))


def test_assumption_hint_decides_and_is_tracked():
    f = Not(parse("forall x0. ~S(x0) = 0"))
    v = eval_with_hints(f, [((0,), Assumption(A.CON_PA, True))])
    assert v.value is False
    assert v.certificate.assumptions() == {A.CON_PA}


def test_hint_at_missing_path_rejected():
    with pytest.raises(InvalidHint):
        eval_with_hints(parse("0 = 0"), [((3,), Assumption(A.CON_PA, True))])


def test_duplicate_hint_rejected():
    h = Assumption(A.CON_PA, True)
    with pytest.raises(InvalidHint):
        eval_with_hints(parse("forall x0. x0 = x0"), [((), h), ((), h)])


def test_replay_law():
    f = parse("exists x0 < num(20). (x0 * x0) = num(16)")
    v = eval_bounded(f)
    assert replay(f, v)


def test_unknown_assumption_name_rejected():
    with pytest.raises(A.UnknownAssumption):
        Assumption("the moon is cheese")


def test_quantifier_bound_uses_outer_value():
    f = ForAll(0, Exists(1, parse("x1 = x1"), Var(0)), numeral(3))
    # x0 = 0 has an empty range for x1
    assert eval_delta0(f) is False


def _quantified(draw_body):
    return st.tuples(st.sampled_from(["exists", "forall"]), st.sampled_from(["exists", "forall"]),
                     draw_body)


@settings(max_examples=150)
@given(_quantified(st.sampled_from([
    "(x0 * x1) = num(12)", "~(x0 + x1) = num(9)", "(x0 * x0) = (x1 + num(3))",
    "(x1 = S(x0) | x0 = num(30))", "exists x2 < x1. (x2 * x0) = num(6)",
])), st.integers(1, 25), st.integers(1, 25))
def test_bounded_verdicts_are_monotone(parts, b, extra):
    q0, q1, body = parts
    f = parse(f"{q0} x0. {q1} x1. {body}")
    v = eval_bounded(f, b)
    w = eval_bounded(f, b + extra)
    if v.value is not None:
        assert w.value is v.value
        assert replay(f, v)
