"""Hand-built Q-proofs used by the checker and mutation tests."""

from mmw.proofsys import Q, ProofBuilder, search
from mmw.syntax import And, Eq, Exists, Imp, Var, Zero, numeral, parse


def arithmetic_facts():
    b = ProofBuilder()
    ax = b.axiom(parse("forall x0. ~ S(x0) = 0"))
    k1 = b.inst(ax, numeral(3))
    k2 = b.compute(parse("(num(2) + num(2)) = num(4)"))
    goal = And(b.formula(k1), b.formula(k2))
    b.chain([k1, k2], goal)
    return b.build(goal)


def addition_instance():
    b = ProofBuilder()
    ax = b.axiom(parse("forall x0. (x0 + 0) = x0"))
    k = b.inst(ax, numeral(5))
    eq = b.formula(k)
    refl = b.logic(Eq(numeral(5), numeral(5)), "REFL")
    goal = And(eq, b.formula(refl))
    b.chain([k, refl], goal)
    return b.build(goal)


def exists_weakening():
    b = ProofBuilder()
    a = And(Eq(Var(0), Zero()), Eq(Zero(), Zero()))
    c = Eq(Var(0), Zero())
    k = b.taut(Imp(a, c))
    b.exists_mono(0, k)
    return b.build(Imp(Exists(0, a), Exists(0, c)))


def generalized_identity():
    b = ProofBuilder()
    k = b.logic(Eq(Var(0), Var(0)), "REFL")
    g = b.gen(k, 0)
    s = b.inst(g, numeral(7))
    goal = b.formula(s)
    return b.build(goal)


def successor_injective():
    b = ProofBuilder()
    ax = b.axiom(parse("forall x0. forall x1. (S(x0) = S(x1) -> x0 = x1)"))
    k1 = b.inst(ax, numeral(2))
    k2 = b.inst(k1, numeral(4))
    return b.build(b.formula(k2))


def searched():
    out = []
    for text in ("(forall x0. (x0 + 0) = x0 & ~ S(0) = 0)", "~ S(num(9)) = 0",
                 "(num(3) * num(3)) = num(9)"):
        p = search(Q, parse(text), 2000, 0)
        assert p is not None, text
        out.append(p)
    return out


def all_golden():
    return [arithmetic_facts(), addition_instance(), exists_weakening(),
            generalized_identity(), successor_injective()] + searched()
