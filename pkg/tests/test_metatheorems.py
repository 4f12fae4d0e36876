import pytest

from mmw import assumptions as A
from mmw import metatheorems as MT
from mmw.modal import parse_modal
from mmw.proofsys import Q, TOY
from mmw.provability import pa_not_con
from mmw.syntax import parse


def steps_of(claim, label):
    for n in claim.walk():
        if getattr(n, "statement", {}).get("label") == label:
            ev = n.evidence()[0]
            return len(ev.args["proof"].steps)
    raise LookupError(label)


def test_kreisel_audit():
    c = MT.kreisel_audit()
    assert c.holds and c.assumptions() == {A.K_FALSE, A.PAK_OMEGA_CON}
    p1, p2, p3 = c.children[:3]
    assert p1.verdict == "Checked" and p2.verdict == "Checked"
    assert p3.verdict == "Conditional" and not p3.holds
    assert steps_of(c, "fixed point: ψ says of itself that it is Δ") <= 5


def test_tautological_audit():
    c = MT.tautological_audit()
    assert c.holds and c.assumptions() == {A.CON_PA}
    assert c.statement["premise1"] and c.statement["premise2"] and not c.statement["conclusion"]


def test_dual_audit():
    c = MT.dual_default()
    assert c.holds and c.verdict == "Conditional"
    assert c.assumptions() == {A.CON_PA, A.ADEQUACY, A.DERIVABILITY}


def test_dual_refuses_true_phi():
    with pytest.raises(MT.PreconditionError):
        MT.dual_scheme_counterexample(Q, parse("0 = 0"))


@pytest.mark.parametrize("name, kind", [
    ("provable", "SelfFulfilling"),
    ("unprovable", "SelfFulfilling"),
    ("decidable", "SelfFulfilling"),
    ("refutable", "SelfFalsifying"),
    ("consistent-with", "SelfFalsifying"),
    ("([]p0 -> []~p0)", "Neither"),
])
def test_modal_classification(name, kind):
    cl = MT.classify_predicate(Q, name)
    assert cl.kind == kind and cl.claim.check()
    assert cl.claim.assumptions() == {A.DERIVABILITY, A.GL_SOUNDNESS}


@pytest.mark.parametrize("bad", ["p0", "[]p1", "is-prime", parse_modal("(p0 & []p0)")])
def test_unsupported_predicates(bad):
    with pytest.raises(MT.UnsupportedPredicate):
        MT.classify_predicate(Q, bad)


def test_syntactic_classification_neither():
    cl = MT.classify_predicate(Q, "existential")
    assert cl.kind == "Neither"
    got = sorted(c.statement["shape"] for c in cl.claim.children)
    assert got == ["Exists", "ForAll"]
    assert [w.holds for c in cl.claim.children for w in c.children[1:]] in ([True, False], [False, True])


def test_theorem1_toy_is_checked():
    r = MT.theorem1_toy()
    assert r.not_all_true.verdict == "Checked"
    assert r.unsound.verdict == "Refuted"
    assert r.converse.assumptions() == {A.ADEQUACY}


def test_theorem1_needs_false_tau():
    with pytest.raises(MT.PreconditionError):
        MT.theorem1_false_goedelian(Q, parse("0 = 0"))


def test_goedelianize_false_sentence():
    r = MT.goedelianize(Q, parse("0 = S(0)"))
    assert r.goedelian.verdict == "Checked"
    assert r.false_goedelian is not None and r.false_goedelian.holds
    assert r.false_goedelian.assumptions() == {A.CON_PA, A.DERIVABILITY}
    assert r.extension.extends(Q)


def test_goedelianize_refuses_provable():
    with pytest.raises(MT.PreconditionError):
        MT.goedelianize(Q, parse("0 = 0"))


def test_pi3_falsifier():
    corpus = [parse("forall x0. ~S(x0) = 0"), parse("num(1) = num(2)"), parse("exists x0. x0 = 0")]
    q12 = Q.with_extra("Q+1=2", [parse("num(1) = num(2)")])
    rep = MT.pi3_audit(q12, corpus)
    assert len(rep.violations) == 1 and rep.violations[0].verdict == "Checked"
    assert len(rep.out_of_class) == 1
    assert not MT.pi3_audit(Q, corpus).violations


def test_redundancy_withheld_for_self_refuting_theory():
    with pytest.raises(MT.PreconditionError):
        MT.redundancy_of_5(TOY)


def test_consistency_leaf_registry():
    assert MT.consistency_leaf(pa_not_con()).name == A.CON_PA
    with pytest.raises(MT.PreconditionError):
        MT.consistency_leaf(TOY)
