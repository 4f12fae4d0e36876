import pytest

from mmw import coding as C
from mmw.hierarchy import DELTA0, Pi, Sigma, classify, is_delta0
from mmw.proofsys import PA, Q, check
from mmw.provability import (
    build_pr, get_theory, kreisel_K, not_proof_of_bot, omega_witness_search, open_extension_pr,
    oracle_provable, pa_k, pa_not_con, pr_macro,
)
from mmw.syntax import BOT, Iff, Not, Var, free_vars, parse, substitute


@pytest.fixture(scope="module")
def pp():
    return build_pr(PA)


def test_shapes(pp):
    assert is_delta0(pp.prf)
    assert free_vars(pp.prf) == {0, 1}
    assert classify(pp.pr.body) == Sigma(1)
    assert classify(pp.con) == Pi(1)


def test_cached_per_theory_content(pp):
    assert build_pr(PA) is pp
    assert build_pr(Q) is not pp
    assert build_pr(Q).prf != pp.prf


def test_macro_matches_builder(pp):
    f = parse("PR[PA](x0)", pr_macro)
    assert f == pp.pr_of(Var(0))


def test_get_theory_names():
    assert get_theory("PA") is PA
    assert get_theory("PA+~Con(PA)") is get_theory("PA+notConPA")
    with pytest.raises(KeyError):
        get_theory("ZFC")


def test_extension_theories(pp):
    t = pa_not_con()
    assert t.extends(PA) and t.is_axiom(Not(pp.con))
    assert pa_k().is_axiom(kreisel_K())
    assert classify(kreisel_K()) == Sigma(3)


def test_omega_witness_small():
    rep = omega_witness_search(pa_not_con(), not_proof_of_bot(PA), 4)
    assert rep.complete
    assert rep.existential.sentence.__class__.__name__ == "Exists"
    for n, ob in enumerate(rep.instances, 1):
        assert ob.certified and check(pa_not_con(), ob.proof).accepted
    js = rep.to_json()
    assert js["complete"] and len(js["instances"]) == 4


def test_omega_witness_fails_without_the_axiom():
    rep = omega_witness_search(PA, not_proof_of_bot(PA), 2, budget=100)
    assert not rep.existential.certified and not rep.complete


def test_oracle_provable():
    v = oracle_provable(Q, parse("~ S(num(9)) = 0"))
    assert v.value is True
    assert oracle_provable(Q, BOT, budget=50).value is None


def test_open_extension_specializes():
    c = Iff(parse("0 = 0"), Not(parse("x2 = x2")))
    t2 = PA.with_extra("PA+d", [], diagonal_axioms=[c])
    direct = build_pr(t2).pr.body
    opened = substitute(open_extension_pr(PA), 2, C.STANDARD.name_of(c))
    assert opened == direct


def test_describe(pp):
    d = pp.describe()
    assert d["theory"] == "PA" and d["class"] == "Σ1" and d["prf_tokens"] > 1000
    assert DELTA0.within(Sigma(1))
