"""Provability predicates Prf_T, Pr_T, Con(T), ωCon(T) and the shallow oracle.

``Prf_T(x1, x0)`` is the Δ0 proof predicate of :mod:`mmw.arith` with the
theory's axiom recognizer and scheme clauses plugged in; ``Pr_T(x0)`` is
``exists x1. Prf_T(x1, x0)``.  Truth of ``Pr_T(#s)`` is never computed from
the formula: the oracle searches for a checker proof instead, and the step
from checker proof to arithmetized truth is the adequacy assumption.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from . import arith
from . import assumptions as A
from . import coding as C
from .hierarchy import classify, is_delta0, Sigma
from .proofsys import (
    DIAG_PARAM, PA, Q, TOY, ProofBuilder, ProofObject, SearchStats, Theory,
    TheoryError, check, compute_proof, search,
)
from .semantics import OracleProof, TruthVerdict
from .syntax import (
    And, BOT, Eq, Exists, ForAll, Formula, Imp, Not, Term, UnaryPredicate, Var,
    apply, free_vars, is_sentence, numeral, substitute, to_text,
)

VERSION = "prf-strings/1"

_P, _X = 1, 0
_E, _U, _N, _Y = 2, 3, 4, 5


class RecognizerShapeError(TheoryError):
    pass


@dataclass(eq=False)
class ProvabilityPredicate:
    theory: Theory
    prf: Formula            # free in x1 (proof) and x0 (formula code)
    pr: UnaryPredicate      # hole x0
    version: str = VERSION
    _omega: Optional[Formula] = field(default=None, repr=False)

    def pr_of(self, t: Term) -> Formula:
        """``Pr_T(t)``."""
        return apply(self.pr, t)

    def pr_name(self, s: Formula, numbering=C.STANDARD) -> Formula:
        return self.pr_of(numbering.name_of(s))

    def prf_of(self, p: Term, x: Term) -> Formula:
        return substitute(substitute(self.prf, _X, x), _P, p)

    @property
    def con(self) -> Formula:
        """``Con(T) := ~Pr_T(#bot)`` with ``bot`` the sentence ``0 = S(0)``."""
        return Not(self.pr_name(BOT))

    @property
    def omega_con(self) -> Formula:
        if self._omega is None:
            self._omega = _omega_con(self)
        return self._omega

    def describe(self) -> dict:
        return {"theory": self.theory.name, "version": self.version,
                "prf_tokens": len(C.tokens(self.prf)), "class": str(classify(self.pr.body))}


def _clauses(t: Theory, param: Optional[Term] = None):
    out = []
    if "induction" in t.schemes:
        out.append(arith.InductionClause())
    for c in t.diagonal_axioms:
        out.append(arith.DiagonalAxiomClause(C.STANDARD.name_of(c), DIAG_PARAM))
    if param is not None:
        out.append(arith.DiagonalAxiomClause(param, DIAG_PARAM))
    return out


_cache: Dict[str, ProvabilityPredicate] = {}
_lock = threading.Lock()


def build_pr(t: Theory) -> ProvabilityPredicate:
    """The provability predicate of ``t`` (cached per theory content)."""
    key = t.key()
    with _lock:
        hit = _cache.get(key)
    if hit is not None:
        return hit
    rec = t.axiom_recognizer
    if not is_delta0(rec.body) or rec.hole != _X:
        raise RecognizerShapeError("axiom recognizer must be a Δ0 predicate in x0")
    prf = arith.proof_predicate(rec, _clauses(t), p=_P, x=_X)
    pp = _finish(t, prf)
    with _lock:
        _cache.setdefault(key, pp)
    return _cache[key]


def _finish(t, prf) -> ProvabilityPredicate:
    pr = UnaryPredicate(Exists(_P, prf), _X)
    if classify(pr.body) != Sigma(1):
        raise RecognizerShapeError(f"Pr_{t.name} is not Σ1")
    return ProvabilityPredicate(t, prf, pr)


def open_extension_pr(t: Theory) -> Formula:
    """Pr body for ``t`` plus one diagonal axiom whose template code is the free variable x2.

    Free in x0 and x2; substituting ``num #c`` for x2 gives exactly
    ``build_pr(t + diagonal c).pr.body``.
    """
    prf = arith.proof_predicate(t.axiom_recognizer, _clauses(t, Var(DIAG_PARAM)), p=_P, x=_X)
    return Exists(_P, prf)


def _omega_con(pp: ProvabilityPredicate) -> Formula:
    """``forall e. (Fml(e) -> ~(Pr(#[exists x0. ~e]) & forall n. exists y. (Sub(e, n, y) & Pr(y))))``."""
    b = arith.Builder()
    E, U, N, Y = Var(_E), Var(_U), Var(_N), Var(_Y)
    prefixed = b.close(b.concat(U, [(C.EXISTS, C.VAR, C.END, C.NOT), E]), U)
    ex_proved = Exists(_U, And(prefixed, pp.pr_of(U)))
    all_inst = ForAll(_N, Exists(_Y, And(arith.subst_graph(_E, _N, _Y), pp.pr_of(Y))))
    return ForAll(_E, Imp(arith.formula_graph(_E), Not(And(ex_proved, all_inst))))


# --------------------------------------------------------------------------
# named theories

_theories: Dict[str, Theory] = {}


def pa_not_con() -> Theory:
    t = _theories.get("PA+notConPA")
    if t is None:
        t = PA.with_extra("PA+notConPA", [Not(build_pr(PA).con)],
                          note="PA plus the statement that PA is inconsistent")
        _theories["PA+notConPA"] = t
    return t


def kreisel_K() -> Formula:
    """K := ~ωCon(PA), the negated formalized ω-consistency of PA."""
    return Not(build_pr(PA).omega_con)


def pa_k() -> Theory:
    t = _theories.get("PA+K")
    if t is None:
        t = PA.with_extra("PA+K", [kreisel_K()], note="PA plus K, the negated ω-consistency of PA")
        _theories["PA+K"] = t
    return t


BUILTIN = {
    "Q": lambda: Q,
    "PA": lambda: PA,
    "toy": lambda: TOY,
    "PA+notConPA": pa_not_con,
    "PA+K": pa_k,
}
ALIASES = {"PA+~Con(PA)": "PA+notConPA", "PA+¬Con(PA)": "PA+notConPA", "PA+notCon(PA)": "PA+notConPA"}


def get_theory(name: str) -> Theory:
    name = ALIASES.get(name, name)
    try:
        return BUILTIN[name]()
    except KeyError:
        raise KeyError(f"unknown theory {name!r}; builtins are {', '.join(BUILTIN)}") from None


def pr_macro(name: str, arg: Term) -> Formula:
    """Resolver for the ``PR[T](t)`` grammar extension."""
    return build_pr(get_theory(name)).pr_of(arg)


# --------------------------------------------------------------------------
# the shallow oracle

def oracle_provable(t: Theory, s: Formula, budget: int = 2000, seed: int = 0) -> TruthVerdict:
    """True (with a checked proof) when search finds a ``t``-proof of ``s``, otherwise Unknown."""
    if not is_sentence(s):
        raise ValueError("oracle_provable needs a sentence")
    proof = search(t, s, budget, seed)
    if proof is None or not check(t, proof).accepted:
        return TruthVerdict(None, None, budget)
    return TruthVerdict(True, OracleProof(t, s, proof), budget)


@dataclass
class Obligation:
    name: str
    sentence: Formula
    proof: Optional[ProofObject]

    @property
    def certified(self) -> bool:
        return self.proof is not None

    def to_json(self) -> dict:
        return {"name": self.name, "certified": self.certified,
                "sentence": C.digest(self.sentence),
                "proof": self.proof.digest() if self.proof else None,
                "steps": len(self.proof.steps) if self.proof else 0}


@dataclass
class OmegaReport:
    theory: str
    xi: UnaryPredicate
    n_max: int
    existential: Obligation
    instances: List[Obligation]

    @property
    def complete(self) -> bool:
        return self.existential.certified and all(o.certified for o in self.instances) \
            and len(self.instances) == self.n_max

    def to_json(self) -> dict:
        return {"theory": self.theory, "n_max": self.n_max, "complete": self.complete,
                "existential": self.existential.to_json(),
                "instances": [o.to_json() for o in self.instances]}


def _existential_from_axiom(t: Theory, goal: Formula) -> Optional[ProofObject]:
    """``exists v. B`` from an axiom that tautologically gives ``exists v. A`` with ``A -> B`` a tautology."""
    from .proofsys import _atoms, _safe_taut
    if not (isinstance(goal, Exists) and goal.bound is None):
        return None
    v, B = goal.var, goal.body
    for ax in t.finite_axioms:
        atoms: dict = {}
        _atoms(ax, atoms)
        for a in atoms:
            if isinstance(a, Exists) and a.bound is None and a.var == v \
                    and _safe_taut(Imp(ax, a)) and _safe_taut(Imp(a.body, B)):
                pb = ProofBuilder()
                k_ax = pb.axiom(ax)
                k_a = pb.chain([k_ax], a)
                k_imp = pb.taut(Imp(a.body, B))
                k_mono = pb.exists_mono(v, k_imp)
                pb.mp(k_a, k_mono)
                return pb.build(goal)
    return None


def omega_witness_search(t: Theory, xi: UnaryPredicate, n_max: int, budget: int = 2000,
                         seed: int = 0) -> OmegaReport:
    """Try to certify ``t |- exists x. ~xi(x)`` and ``t |- xi(num n)`` for ``1 <= n <= n_max``."""
    ex = Exists(xi.hole, Not(xi.body))
    proof = search(t, ex, budget, seed) or _existential_from_axiom(t, ex)
    if proof is not None and not check(t, proof).accepted:
        proof = None
    existential = Obligation("exists x. ~xi(x)", ex, proof)
    instances = []
    for n in range(1, n_max + 1):
        s = apply(xi, numeral(n))
        p = None
        try:
            p = compute_proof(t, s) if is_delta0(s) else search(t, s, budget, seed)
        except (ValueError, TheoryError):
            p = search(t, s, budget, seed)
        if p is not None and not check(t, p).accepted:
            p = None
        instances.append(Obligation(f"xi({n})", s, p))
    return OmegaReport(t.name, xi, n_max, existential, instances)


def not_proof_of_bot(t: Theory) -> UnaryPredicate:
    """``xi(x1) := ~Prf_T(x1, #bot)``: "x1 is not a proof of 0 = S(0)"."""
    pp = build_pr(t)
    return UnaryPredicate(Not(substitute(pp.prf, _X, C.STANDARD.name_of(BOT))), _P)
