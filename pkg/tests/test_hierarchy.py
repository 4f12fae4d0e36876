import pytest
from hypothesis import given, settings

from conftest import formulas
from mmw.hierarchy import DELTA0, Pi, Sigma, classify, is_delta0, prenex
from mmw.syntax import free_vars, parse


@pytest.mark.parametrize("text,cls", [
    ("0 = 0", "Δ0"),
    ("forall x0 < num(5). exists x1 < x0. x1 = x1", "Δ0"),
    ("forall x0. ~S(x0) = 0", "Π1"),
    ("exists x0. x0 = num(3)", "Σ1"),
    ("~forall x0. x0 = 0", "Σ1"),
    ("forall x0. exists x1. x1 = S(x0)", "Π2"),
    ("(forall x0. x0 = x0 -> 0 = 0)", "Σ1"),
    ("(forall x0. x0 = x0 & exists x1. x1 = 0)", "Π2"),
    ("(forall x0. x0 = x0 <-> 0 = 0)", "Σ2"),
    ("exists x0. forall x1. exists x2. (x0 + x1) = x2", "Σ3"),
])
def test_classify_examples(text, cls):
    assert str(classify(parse(text))) == cls


def test_class_inclusion():
    assert DELTA0.within(Pi(1)) and DELTA0.within(Sigma(1))
    assert Pi(1).within(Sigma(2)) and not Pi(1).within(Sigma(1))
    assert Sigma(2).within(Sigma(3)) and not Sigma(2).within(Pi(2))
    assert Pi(3).dual() == Sigma(3)


@settings(max_examples=400)
@given(formulas())
def test_prenex_preserves_class_and_free_variables(f):
    g = prenex(f)
    assert classify(g) == classify(f)
    assert free_vars(g) == free_vars(f)


@settings(max_examples=400)
@given(formulas())
def test_delta0_iff_no_unbounded_quantifier(f):
    from mmw.syntax import subformulas
    quants = [s for s in subformulas(f) if hasattr(s, "var")]
    # a bound that mentions its own variable is read as unbounded
    bad = any(q.bound is None or q.var in free_vars(q.bound) for q in quants)
    assert is_delta0(f) == (not bad)
    assert (classify(f) == DELTA0) == is_delta0(f)
