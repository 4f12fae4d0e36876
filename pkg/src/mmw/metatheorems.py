"""Scheme audits, counterexamples and the result gallery, as claim trees.

Every function here assembles :class:`~mmw.claims.Claim` objects from checked
evidence (proofs, GL derivations, evaluations) and registered assumption
leaves.  Verdicts and assumption sets are computed by :mod:`mmw.claims`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

from . import assumptions as A
from . import coding as C
from . import modal as M
from .claims import CertificateError, Claim, Evidence, Leaf, require_checked
from .diagonal import DiagonalResult, DirectIdentity, TextbookDiagonal, diagonalize, goedel_sentence
from .hierarchy import DELTA0, Pi, classify, is_delta0
from .proofsys import (
    PA, Q, ProofBuilder, ProofObject, Theory, check, compute_proof, diagonal_axiom, search,
)
from .provability import build_pr, kreisel_K, open_extension_pr, pa_k, pa_not_con
from .semantics import (
    Assumption, InvalidHint, OracleProof, Witness, eval_bounded, eval_with_hints, DEFAULT_BOUND,
)
from .syntax import (
    BOT, And, Eq, ForAll, Formula, Iff, Imp, Not, Num, Term, UnaryPredicate, Var, Zero,
    apply, is_sentence, numeral, substitute, to_text,
)


class PreconditionError(ValueError):
    """The inputs do not meet the operation's precondition; no claim is emitted."""


class MissingProvability(PreconditionError):
    pass


class MismatchError(ValueError):
    pass


class UnsupportedPredicate(ValueError):
    pass


# --------------------------------------------------------------------------
# small builders

_TEXT_NODES = 160


def _small_text(f) -> Optional[str]:
    """Printed form of ``f`` when it is small enough to be worth showing."""
    seen = 0
    stack = [f]
    while stack:
        n = stack.pop()
        seen += 1
        if seen > _TEXT_NODES:
            return None
        if isinstance(n, Num):
            if n.value.bit_length() > 64:
                return None
            continue
        if isinstance(n, (Zero, Var)):
            continue
        stack.extend(x for x in (getattr(n, s) for s in n._fields) if hasattr(x, "_fields"))
    return to_text(f)


def describe(f, with_class: bool = False) -> dict:
    d = {"digest": C.digest(f)}
    text = _small_text(f)
    if text is not None:
        d["text"] = text
    if with_class:
        d["class"] = str(classify(f))
    return d


def shift(hints: Iterable, prefix: tuple) -> list:
    return [(tuple(prefix) + tuple(p), c) for p, c in hints]


def proof_of(t: Theory, f: Formula, budget: int = 2000, seed: int = 0) -> Optional[ProofObject]:
    """A checked ``t``-proof of ``f`` if one is at hand: axiom, Δ0 computation or search."""
    if t.is_axiom(f):
        b = ProofBuilder()
        b.axiom(f)
        return b.build(f)
    if is_sentence(f) and is_delta0(f) and t.extends(Q):
        try:
            return compute_proof(t, f)
        except ValueError:
            return None
    p = search(t, f, budget, seed)
    return p if p is not None and check(t, p).accepted else None


def _lift(b: ProofBuilder, p: ProofObject) -> int:
    if len(p.steps) == 1 and p.steps[0].just.kind == "Axiom":
        return b.axiom(p.goal)
    return b.macro(p)


def proof_evidence(t: Theory, p: ProofObject, goal: Optional[Formula] = None) -> Evidence:
    return require_checked(Evidence("proof", {"theory": t, "proof": p, "goal": goal or p.goal}))


def provable(t: Theory, f: Formula, children: Sequence, label: str = "") -> Claim:
    st = {"theory": t.name, "formula": describe(f)}
    if label:
        st["label"] = label
    return Claim("Provable", st, True, tuple(children))


def truth(f: Formula, hints: Sequence = (), label: str = "", extra: Sequence = (),
          bound: int = DEFAULT_BOUND) -> Claim:
    """``TrueInN(f)`` decided by hinted evaluation; undecided is a precondition failure."""
    try:
        v = eval_with_hints(f, list(hints), bound)
    except InvalidHint as e:
        raise CertificateError(f"evaluation of {label or 'sentence'}: {e}") from None
    if v.value is None:
        raise PreconditionError(f"truth of {label or 'sentence'} is undecided at bound {bound}")
    leaves = tuple(Leaf(a) for a in sorted(v.assumptions()))
    args = {"sentence": f, "hints": [[list(p), c] for p, c in hints], "value": v.value}
    if bound != DEFAULT_BOUND:
        args["bound"] = bound
    ev = Evidence("eval", args, children=leaves)
    require_checked(ev)
    st = {"formula": describe(f)}
    if label:
        st["label"] = label
    return Claim("TrueInN", st, v.value, (ev,) + tuple(extra))


def schematic(text: str) -> Evidence:
    return Evidence("schematic", {"statement": text})


def consistency_leaf(t: Theory) -> Leaf:
    """The registered assumption from which ``Con(t)`` follows."""
    if PA.extends(t) or t == pa_not_con():
        return Leaf(A.CON_PA)
    if t == pa_k():
        return Leaf(A.PAK_OMEGA_CON)
    raise PreconditionError(f"no registered assumption gives the consistency of {t.name}")


def omega_consistency_leaf(t: Theory) -> Leaf:
    if PA.extends(t):
        return Leaf(A.K_FALSE)        # K false in ℕ is PA's ω-consistency
    if t == pa_k():
        return Leaf(A.PAK_OMEGA_CON)
    raise PreconditionError(f"no registered assumption gives the ω-consistency of {t.name}")


def refutes_itself(t: Theory) -> Optional[Formula]:
    """A finite axiom of ``t`` that is a false closed Δ0 sentence, if there is one."""
    for a in t.finite_axioms:
        if is_delta0(a) and eval_bounded(a).value is False:
            return a
    return None


# --------------------------------------------------------------------------
# the fixed-point scheme

def fixed_point_claim(t: Theory, d: DiagonalResult, budget: int = 2000, seed: int = 0) -> Claim:
    """The fixed-point premise ``t |- ψ <-> Δ(#ψ)``, from the diagonal certificate (plus ``t |- φ``)."""
    if not t.extends(d.provable_in):
        raise MismatchError(f"diagonal result is over {d.provable_in.name}, which {t.name} does not extend")
    psi = d.psi
    target = apply(d.delta, d.numbering.name_of(psi))
    goal = Iff(psi, target)
    kids: List = []
    cert = d.certificate
    if isinstance(cert, ProofObject):
        kids.append(proof_evidence(d.provable_in, cert, d.biconditional))
    elif isinstance(cert, DirectIdentity):
        kids.append(require_checked(Evidence("equal", {"left": psi, "right": d.biconditional.right},
                                             note="direct self-reference")))
    elif isinstance(cert, TextbookDiagonal):
        kids.append(Leaf(cert.assumption))
    if d.phi is not None:
        p_phi = proof_of(t, d.phi, budget, seed)
        if p_phi is None:
            raise MissingProvability(f"no {t.name}-proof of φ found")
        b = ProofBuilder()
        k = _lift(b, p_phi)
        b.chain([k], Imp(d.biconditional, goal))
        kids.append(proof_evidence(t, b.build()))
    return provable(t, goal, kids, "fixed point: ψ says of itself that it is Δ")


def audit_scheme(t: Theory, d: DiagonalResult, hints: Optional[Sequence] = None,
                 target_hints: Sequence = (), hypotheses: Sequence[Leaf] = (),
                 scheme: str = "fixed-point scheme", budget: int = 2000, seed: int = 0,
                 bound: int = DEFAULT_BOUND) -> Claim:
    """Evaluate the fixed-point premise, the truth premise and the conclusion for ``(t, ψ, Δ)``.

    The result claims ``SchemeInstanceInvalid``; it holds when both premises
    hold and the conclusion is false.  ``hypotheses`` are the assumption leaves
    that put ``t`` inside the scheme's range (for instance its ω-consistency).
    """
    p1 = fixed_point_claim(t, d, budget, seed)
    target = apply(d.delta, d.numbering.name_of(d.psi))
    p2 = truth(target, target_hints, "premise: Δ(#ψ)", bound=bound)
    p3 = truth(d.psi, d.hints if hints is None else hints, "conclusion: ψ", bound=bound)
    invalid = p1.holds and p2.holds and not p3.holds
    st = {"scheme": scheme, "theory": t.name, "psi": describe(d.psi), "delta": describe(d.delta.body),
          "premise1": p1.holds, "premise2": p2.holds, "conclusion": p3.holds}
    return Claim("SchemeInstanceInvalid", st, invalid, (p1, p2, p3) + tuple(hypotheses))


def audit_scheme_sound(t: Theory, d: DiagonalResult) -> Claim:
    """For Π1 ψ and Π1 Δ(#ψ) over an ω-consistent ``t``: the premises give the conclusion.

    If ψ were false, ¬ψ would be a true Σ1 sentence, hence provable; by the fixed point
    so is the Σ1 sentence ¬Δ(#ψ), which ω-consistency (indeed 1-consistency)
    makes true, against the truth premise.
    """
    p1 = fixed_point_claim(t, d)
    target = apply(d.delta, d.numbering.name_of(d.psi))
    kids: List = [p1]
    for f, label in ((d.psi, "ψ"), (target, "Δ(#ψ)")):
        cls = classify(f)
        if not cls.within(Pi(1)):
            raise PreconditionError(f"{label} is {cls}, not Π1; the validity condition does not apply")
        kids.append(require_checked(Evidence("classify", {"formula": f, "cls": str(cls)}, note=label)))
    kids.append(schematic("Q proves every true Σ1 sentence; a 1-consistent theory proves no false Σ1 sentence"))
    kids.append(omega_consistency_leaf(t))
    st = {"scheme": "fixed-point scheme", "theory": t.name, "psi": describe(d.psi),
          "statement": "the premises imply the conclusion for Π1 ψ and Π1 Δ(#ψ)"}
    return Claim("SchemeInstanceValid", st, True, tuple(kids))


def kreisel_diagonal() -> DiagonalResult:
    """ψ := K and Δ(x) := ``x = #K`` over T := PA+K, certified by a 5-step proof."""
    T = pa_k()
    K = kreisel_K()
    n = C.STANDARD.name_of(K)
    delta = UnaryPredicate(Eq(Var(0), n), 0)
    b = ProofBuilder()
    k_ax = b.axiom(K)
    k_eq = b.logic(Eq(n, n), "REFL")
    bic = Iff(K, Eq(n, n))
    b.chain([k_ax, k_eq], bic)
    proof = b.build(bic)
    return DiagonalResult(K, delta, None, C.STANDARD, bic, T, proof,
                          [((), Assumption(A.K_FALSE, False))])


def kreisel_audit() -> Claim:
    d = kreisel_diagonal()
    return audit_scheme(d.provable_in, d, hypotheses=(Leaf(A.PAK_OMEGA_CON),),
                        scheme="fixed-point scheme over ω-consistent theories")


def tautological_audit(t: Optional[Theory] = None) -> Claim:
    """Δ(x) := ``x = x`` with φ := ¬Con(PA) over PA+¬Con(PA)."""
    t = t or pa_not_con()
    phi = Not(build_pr(PA).con)
    d = diagonalize(C.STANDARD, UnaryPredicate(Eq(Var(0), Var(0)), 0), phi)
    # Con(PA) sits at φ's argument inside the reduction target φ <-> Δ(#ψ)
    hints = list(d.hints) + [(("R", 0, 0), Assumption(A.CON_PA, True))]
    return audit_scheme(t, d, hints)


# --------------------------------------------------------------------------
# the dual scheme

_U = 3


def neg_consistent_predicate(t: Theory) -> UnaryPredicate:
    """Δ(x0) := ``forall u. (Neg(x0, u) -> ~Pr_T(u))``: "¬x is consistent with T"."""
    from .arith import Builder
    b = Builder()
    U, X = Var(_U), Var(0)
    neg = b.close(b.concat(U, [(C.NOT,), X]), U)
    return UnaryPredicate(ForAll(_U, Imp(neg, Not(build_pr(t).pr_of(U)))), 0)


def dual_scheme_counterexample(t: Theory, phi: Formula, phi_hints: Sequence = (),
                               budget: int = 2000, seed: int = 0) -> Claim:
    """ψ := ¬φ and Δ(x) := ¬Pr_T(#¬x) for a false, ``t``-provable φ."""
    p_phi = proof_of(t, phi, budget, seed)
    if p_phi is None:
        raise MissingProvability(f"no {t.name}-proof of φ found")
    v = eval_with_hints(phi, list(phi_hints))
    if v.value is None:
        raise PreconditionError("the falsity of φ is undecided; supply hints")
    if v.value:
        raise PreconditionError("φ is true, so ψ := ¬φ is false and cannot witness the truth premise")
    psi = Not(phi)
    neg_psi = Not(psi)
    delta = neg_consistent_predicate(t)
    name_psi = C.STANDARD.name_of(psi)
    n = C.STANDARD.name_of(neg_psi)
    target = apply(delta, name_psi)
    neg_fact = substitute(target.body.left, _U, n)
    pr_neg = build_pr(t).pr_of(n)

    b = ProofBuilder()
    k_phi = _lift(b, p_phi)
    b.chain([k_phi], neg_psi)
    p_neg = b.build(neg_psi)
    ev_neg = proof_evidence(t, p_neg)

    code_ev = require_checked(Evidence("neg-code", {"sentence": psi}))
    neg_claim = provable(t, neg_fact, (code_ev, Leaf(A.ADEQUACY),
                                       schematic("Q proves every true closed Δ0 sentence")),
                         "Neg(#ψ, #¬ψ)")
    pr_claim = provable(t, pr_neg, (ev_neg, Leaf(A.DERIVABILITY)), "Pr_T(#¬ψ)")
    b = ProofBuilder()
    k_phi = _lift(b, p_phi)
    k_inst = b.logic(Imp(target, substitute(target.body, _U, n)), "INST", term=n)
    goal = Imp(neg_fact, Imp(pr_neg, Iff(psi, target)))
    b.chain([k_phi, k_inst], goal)
    link = proof_evidence(t, b.build(goal))
    p1 = provable(t, Iff(psi, target), (link, neg_claim, pr_claim), "fixed point: ψ says of itself that it is Δ")

    p2 = truth(psi, shift(phi_hints, (0,)), "premise: ψ")
    p3 = truth(target, [((), Witness(_U, C.STANDARD.encode(neg_psi), None)),
                        ((0, 0), Assumption(A.ADEQUACY, True)),
                        ((0, 1, 0), OracleProof(t, neg_psi, p_neg))],
               "conclusion: Δ(#ψ)", extra=(code_ev,))
    invalid = p1.holds and p2.holds and not p3.holds
    st = {"scheme": "dual scheme", "theory": t.name, "psi": describe(psi),
          "premise1": p1.holds, "premise2": p2.holds, "conclusion": p3.holds}
    return Claim("SchemeInstanceInvalid", st, invalid, (p1, p2, p3))


def dual_default(t: Optional[Theory] = None) -> Claim:
    """The dual counterexample over PA+¬Con(PA) with φ := ¬Con(PA)."""
    t = t or pa_not_con()
    phi = Not(build_pr(PA).con)
    return dual_scheme_counterexample(t, phi, [((0,), Assumption(A.CON_PA, True))])


# --------------------------------------------------------------------------
# Gödelian sentences

CONJUNCTION_SCHEMA = M.imp(M.conj(M.p(0), M.conj(M.box(M.p(0)), M.iff(M.p(1), M.neg(M.box(M.p(1)))))),
               M.iff(M.conj(M.p(0), M.p(1)), M.neg(M.box(M.conj(M.p(0), M.p(1))))))


def goedelian_biconditional(t: Theory, s: Formula) -> Formula:
    return Iff(s, Not(build_pr(t).pr_name(s)))


def goedelian_claim(t: Theory, gamma: DiagonalResult) -> Claim:
    """``Goedelian(t, γ)`` from γ's diagonal certificate."""
    bic = goedelian_biconditional(t, gamma.psi)
    if gamma.biconditional != bic:
        raise MismatchError("the diagonal result is not a Gödelian sentence of this theory")
    form = require_checked(Evidence("goedelian-form", {"theory": t, "sentence": gamma.psi,
                                                       "biconditional": gamma.biconditional}))
    cert = gamma.certificate
    if isinstance(cert, ProofObject):
        if not t.extends(gamma.provable_in):
            raise MismatchError(f"certificate is over {gamma.provable_in.name}")
        kids = (proof_evidence(gamma.provable_in, cert, bic), form)
    elif isinstance(cert, TextbookDiagonal):
        kids = (Leaf(cert.assumption), form)
    else:
        raise MismatchError("a direct identity is not a Gödelian certificate over the standard numbering")
    return Claim("Goedelian", {"theory": t.name, "sentence": describe(gamma.psi)}, True, kids)


def lemma1_conjunction(t: Theory, tau: Formula, tau_proof: ProofObject, gamma: DiagonalResult,
                       derivation: Optional[M.Derivation] = None) -> Claim:
    """``Goedelian(t, τ∧γ)`` from ``t |- τ`` and ``Goedelian(t, γ)``, through a realized GL theorem."""
    ev_tau = proof_evidence(t, tau_proof, tau)
    g_claim = goedelian_claim(t, gamma)
    r = M.Realization({0: tau, 1: gamma.psi}, t)
    m_claim = M.realize(CONJUNCTION_SCHEMA, r, "conjunction schema", derivation)
    m_star = r.translate(CONJUNCTION_SCHEMA)
    pp = build_pr(t)
    pr_tau = pp.pr_name(tau)
    pr_claim = provable(t, pr_tau, (ev_tau, Leaf(A.DERIVABILITY)), "Pr_T(#τ)")
    conj = And(tau, gamma.psi)
    goal = goedelian_biconditional(t, conj)
    b = ProofBuilder()
    k_tau = _lift(b, tau_proof)
    k_gam = b.macro(gamma.certificate) if isinstance(gamma.certificate, ProofObject) else None
    prem = [k_tau] + ([k_gam] if k_gam is not None else [])
    link_goal = Imp(m_star, Imp(pr_tau, goal))
    if k_gam is None:
        link_goal = Imp(gamma.biconditional, link_goal)
    b.chain(prem, link_goal)
    link = proof_evidence(t, b.build(link_goal))
    form = require_checked(Evidence("goedelian-form", {"theory": t, "sentence": conj, "biconditional": goal}))
    return Claim("Goedelian", {"theory": t.name, "sentence": describe(conj), "label": "τ∧γ"}, True,
                 (link, m_claim, pr_claim, g_claim, form))


def _ex_falso_goedelian(t: Theory, bad: Formula, s: Formula) -> Claim:
    """An inconsistent ``t`` proves every biconditional; checked by ex falso."""
    goal = goedelian_biconditional(t, s)
    b = ProofBuilder()
    k_bad = b.axiom(bad)
    k_neg = b.compute(Not(bad))
    b.chain([k_bad, k_neg], goal)
    return Claim("Goedelian", {"theory": t.name, "sentence": describe(s), "label": "τ∧γ"}, True,
                 (proof_evidence(t, b.build(goal)),))


@dataclass
class Theorem1Result:
    theory: Theory
    sentence: Formula
    goedelian: Claim
    false_in_n: Claim
    not_all_true: Claim
    unsound: Claim
    converse: Claim
    gamma: DiagonalResult = field(repr=False, default=None)

    def claims(self) -> List[Claim]:
        return [self.not_all_true, self.unsound, self.converse]


def theorem1_false_goedelian(t: Theory, tau: Formula, falsity_hints: Sequence = (),
                             tau_proof: Optional[ProofObject] = None,
                             gamma: Optional[DiagonalResult] = None,
                             budget: int = 2000, seed: int = 0) -> Theorem1Result:
    """A false Gödelian sentence τ∧γ of ``t`` from a false ``t``-theorem τ."""
    tau_proof = tau_proof or proof_of(t, tau, budget, seed)
    if tau_proof is None:
        raise MissingProvability(f"no {t.name}-proof of τ found")
    tau_false = truth(tau, falsity_hints, "τ")
    if tau_false.holds:
        raise PreconditionError("τ is true; a false Gödelian sentence needs a false theorem")
    gamma = gamma or goedel_sentence(t)
    conj = And(tau, gamma.psi)
    bad = refutes_itself(t)
    if bad is not None:
        g = _ex_falso_goedelian(t, bad, conj)
    else:
        g = lemma1_conjunction(t, tau, tau_proof, gamma)
    false_conj = truth(conj, shift(falsity_hints, (0,)), "τ∧γ")
    not_all = Claim("NotAllGoedelianTrue", {"theory": t.name, "witness": describe(conj)}, True,
                    (g, false_conj))
    ev_tau = proof_evidence(t, tau_proof, tau)
    unsound = Claim("Sound", {"theory": t.name}, False,
                    (provable(t, tau, (ev_tau,), "τ"), tau_false))
    g_claim = goedelian_claim(t, gamma)
    converse = Claim(
        "Implies",
        {"theory": t.name, "hypothesis": "Sound(T)", "conclusion": "every Gödelian sentence of T is true",
         "instance": describe(gamma.psi)}, True,
        (g_claim, schematic("if T is sound and T ⊢ G <-> ¬Pr(#G), a false G makes Pr(#G) true, "
                            "so T ⊢ G and G is true"), Leaf(A.ADEQUACY)))
    return Theorem1Result(t, conj, g, false_conj, not_all, unsound, converse, gamma)


def theorem1_default(t: Optional[Theory] = None) -> Theorem1Result:
    """τ := ¬Con(PA) over PA+¬Con(PA), false given Con(PA)."""
    t = t or pa_not_con()
    tau = Not(build_pr(PA).con)
    return theorem1_false_goedelian(t, tau, [((0,), Assumption(A.CON_PA, True))])


def theorem1_toy() -> Theorem1Result:
    from .proofsys import TOY
    return theorem1_false_goedelian(TOY, BOT)


def goedel_ii_truth_claim(t: Theory, gamma: DiagonalResult) -> Claim:
    """ℕ ⊨ γ iff Con(T), for a Gödelian γ whose hints reduce it to ¬Pr_T(#γ)."""
    g = goedelian_claim(t, gamma)
    st = {"theory": t.name, "left": "TrueInN(γ)", "right": "Con(T)", "sentence": describe(gamma.psi)}
    return Claim("Iff", st, True,
                 (g, schematic("Gödel I: a consistent T does not prove γ; an inconsistent T proves it"),
                  Leaf(A.ADEQUACY)))


# --------------------------------------------------------------------------
# self-fulfilling and self-falsifying predicates

@dataclass
class Classification:
    kind: str                    # SelfFulfilling, SelfFalsifying or Neither
    claim: Claim
    witnesses: Tuple = ()


MODAL_TEMPLATES = {
    "provable": M.box(M.p(0)),
    "unprovable": M.neg(M.box(M.p(0))),
    "decidable": M.disj(M.box(M.p(0)), M.box(M.neg(M.p(0)))),
    "refutable": M.box(M.neg(M.p(0))),
    "consistent-with": M.neg(M.box(M.neg(M.p(0)))),
}


def _leading_token_predicate(tok: int) -> UnaryPredicate:
    """``x0`` codes an expression whose first token is ``tok``."""
    from .arith import Builder
    from .syntax import Add, Mul
    b = Builder()
    X = Var(0)

    def pow32(q):
        # a power of two is a power of 32 exactly when it is 1 mod 31
        return And(b.pow2(q), b.ex_le(q, lambda s: Eq(q, Add(Mul(numeral(31), s), numeral(1)))))

    body = b.ex_le(X, lambda q: And(pow32(q), b.ex(q, lambda r: Eq(X, Add(Mul(numeral(tok), q), r)))))
    return UnaryPredicate(body, 0)


SYNTACTIC = {"universal": C.FORALL, "existential": C.EXISTS}
_SHAPE = {C.FORALL: "ForAll", C.EXISTS: "Exists"}


def syntactic_predicate(name: str) -> UnaryPredicate:
    if name not in SYNTACTIC:
        raise UnsupportedPredicate(f"unknown syntactic predicate {name!r}")
    return _leading_token_predicate(SYNTACTIC[name])


def classify_predicate(t: Theory, delta) -> Classification:
    """Classify Δ as self-fulfilling, self-falsifying or neither, with certificates.

    ``delta`` is a modal formula in ``p0`` (a □-template, ``p0`` standing for the
    sentence), a name from :data:`MODAL_TEMPLATES`, or ``"universal"`` /
    ``"existential"``.
    """
    if isinstance(delta, str) and delta in MODAL_TEMPLATES:
        delta = MODAL_TEMPLATES[delta]
    if isinstance(delta, str) and delta in SYNTACTIC:
        return _classify_syntactic(t, delta)
    if isinstance(delta, str):
        try:
            delta = M.parse_modal(delta)
        except M.ModalParseError as e:
            raise UnsupportedPredicate(f"not a modal template or known predicate: {e}") from None
    if not isinstance(delta, tuple):
        raise UnsupportedPredicate("expected a modal template or a syntactic predicate name")
    return _classify_modal(t, delta)


def _classify_modal(t: Theory, delta) -> Classification:
    if M.atoms(delta) - {0}:
        raise UnsupportedPredicate("a template may mention only p0")
    try:
        h = M.fixed_point(delta, 0)
    except M.NotModalized:
        raise UnsupportedPredicate("p0 must occur only under □") from None
    fp = require_checked(Evidence("fixed-point", {"delta": M.show(delta), "h": M.show(h), "hole": 0}))
    hyp = M.conj(M.box(M.iff(M.p(0), delta)), M.neg(M.box(M.BOT)))
    fulfil, falsify = M.imp(hyp, delta), M.imp(hyp, M.neg(delta))
    r1, r2 = M.gl_valid(fulfil), M.gl_valid(falsify)
    st = {"theory": t.name, "predicate": M.show(delta), "fixed_point": M.show(h), "for": "consistent T"}
    leaves = (Leaf(A.DERIVABILITY), Leaf(A.GL_SOUNDNESS))
    if isinstance(r1, M.Valid) or isinstance(r2, M.Valid):
        kind, f, r = ("SelfFulfilling", fulfil, r1) if isinstance(r1, M.Valid) else ("SelfFalsifying", falsify, r2)
        gl = require_checked(Evidence("gl", {"formula": M.show(f), "derivation": r.derivation}))
        return Classification(kind, Claim(kind, st, True, (fp, gl) + leaves))
    c1 = require_checked(Evidence("gl-countermodel", {"formula": M.show(fulfil), "model": r1.countermodel}))
    c2 = require_checked(Evidence("gl-countermodel", {"formula": M.show(falsify), "model": r2.countermodel}))
    return Classification("Neither", Claim("Neither", st, True, (fp, c1, c2) + leaves),
                          (r1.countermodel, r2.countermodel))


def _classify_syntactic(t: Theory, name: str) -> Classification:
    delta = syntactic_predicate(name)
    shape = _SHAPE[SYNTACTIC[name]]
    kids = []
    witnesses = []
    for form in ("universal", "existential"):
        d = diagonalize(C.STANDARD, delta, form=form)
        got = type(d.psi).__name__
        says = provable(Q, d.biconditional, (proof_evidence(Q, d.certificate, d.biconditional),),
                        f"{form} diagonal ψ says of itself that it is {name}")
        sh = require_checked(Evidence("shape", {"formula": d.psi, "shape": got}))
        holds = Claim("TrueInN", {"formula": describe(apply(delta, C.STANDARD.name_of(d.psi))),
                                  "label": f"Δ(#ψ) for the {form} diagonal"},
                      got == shape, (sh, Leaf(A.ADEQUACY)))
        kids.append(Claim("Witness", {"form": form, "psi": describe(d.psi), "shape": got},
                          True, (says, holds)))
        witnesses.append(d)
    st = {"theory": t.name, "predicate": f"is {name}", "witnesses": ["universal", "existential"]}
    return Classification("Neither", Claim("Neither", st, True, tuple(kids)), tuple(witnesses))


# --------------------------------------------------------------------------
# every unprovable sentence is Gödelian in a consistent extension

@dataclass
class GoedelianizeResult:
    extension: Theory
    axiom: Formula
    goedelian: Claim
    consistent: Claim
    false_goedelian: Optional[Claim]

    def claims(self) -> List[Claim]:
        return [c for c in (self.goedelian, self.consistent, self.false_goedelian) if c is not None]


def goedelianize(t: Theory, phi: Formula, unprovable_because: str = A.CON_PA,
                 falsity_hints: Optional[Sequence] = None,
                 budget: int = 2000, seed: int = 0) -> GoedelianizeResult:
    """T' := T + β with β := φ <-> ¬Pr_{T'}(#φ), β fixed by a diagonal axiom template.

    When φ is Δ0 (or ``falsity_hints`` decide it) and false, a ``FalseGoedelian``
    claim is added.
    """
    if not is_sentence(phi):
        raise PreconditionError("φ must be a sentence")
    A.require(unprovable_because)
    if proof_of(t, phi, budget, seed) is not None:
        raise PreconditionError(f"{t.name} proves φ; the construction needs an unprovable φ")
    c = Iff(phi, Not(substitute(open_extension_pr(t), 0, C.STANDARD.name_of(phi))))
    tag = C.digest(phi)[:8]
    t2 = t.with_extra(f"{t.name}+G[{tag}]", [], note="Gödelianizing extension",
                      diagonal_axioms=[c])
    beta = diagonal_axiom(c)
    bic = goedelian_biconditional(t2, phi)
    if beta != bic:
        raise CertificateError("diagonal axiom is not the Gödelian biconditional of the extension")
    b = ProofBuilder()
    b.axiom(beta)
    ev = proof_evidence(t2, b.build(beta))
    form = require_checked(Evidence("goedelian-form", {"theory": t2, "sentence": phi, "biconditional": beta}))
    g = Claim("Goedelian", {"theory": t2.name, "sentence": describe(phi)}, True, (ev, form))
    cons = Claim("Consistent", {"theory": t2.name, "base": t.name}, True,
                 (Leaf(unprovable_because), Leaf(A.DERIVABILITY),
                  schematic("if T + β is inconsistent, T proves the true Σ1 sentence Pr_T'(#⊥), "
                            "hence Pr_T'(#φ), hence φ by ¬β; so T ⊬ φ gives Con(T + β)")))
    false_g = None
    if falsity_hints is not None or is_delta0(phi):
        f = truth(phi, falsity_hints or (), "φ")
        if not f.holds:
            false_g = Claim("FalseGoedelian", {"theory": t2.name, "sentence": describe(phi)}, True,
                            (g, f, cons))
    return GoedelianizeResult(t2, beta, g, cons, false_g)


# --------------------------------------------------------------------------
# Π3 soundness falsifier and the redundancy of the truth premise

@dataclass
class Pi3Report:
    theory: str
    violations: List[Claim] = field(default_factory=list)
    out_of_class: List[dict] = field(default_factory=list)
    unproved: List[dict] = field(default_factory=list)
    no_violation: List[dict] = field(default_factory=list)

    @property
    def summary(self) -> str:
        if self.violations:
            return f"{len(self.violations)} violation(s): {self.theory} is not ω-consistent"
        return "no violation at budget"

    def to_json(self) -> dict:
        return {"theory": self.theory, "summary": self.summary,
                "violations": [v.statement for v in self.violations],
                "out_of_class": self.out_of_class, "unproved": self.unproved, "no_violation": self.no_violation}


def in_pi3_filter(cls) -> bool:
    """Δ0 or Πn with n <= 3; Σ-classes are reported as out of class."""
    return cls == DELTA0 or (cls.kind == "Pi" and cls.n <= 3)


def pi3_audit(t: Theory, corpus: Sequence[Formula], budget: int = 2000, seed: int = 0,
              bound: int = DEFAULT_BOUND) -> Pi3Report:
    """Falsifier for "every provable Π3 sentence of an ω-consistent T is true"."""
    rep = Pi3Report(t.name)
    for s in corpus:
        cls = classify(s)
        entry = {"sentence": describe(s), "class": str(cls)}
        if not in_pi3_filter(cls):
            rep.out_of_class.append(entry)
            continue
        p = proof_of(t, s, budget, seed)
        if p is None:
            rep.unproved.append(entry)
            continue
        v = eval_bounded(s, bound)
        entry["value"] = v.label()
        if v.value is False:
            rep.violations.append(Claim(
                "NotOmegaConsistent", {"theory": t.name, "sentence": describe(s), "class": str(cls)}, True,
                (provable(t, s, (proof_evidence(t, p, s),)), truth(s, (), "provable Π3 sentence", bound=bound))))
        else:
            rep.no_violation.append(entry)
    return rep


def redundancy_of_5(t: Theory) -> Claim:
    """For Δ = "is unprovable", Con(T) turns the fixed point into the truth premise (self-fulfilling)."""
    bad = refutes_itself(t)
    if bad is not None:
        raise PreconditionError(f"{t.name} refutes itself (axiom {to_text(bad)} is false); claim withheld")
    cl = classify_predicate(t, "unprovable")
    assert cl.kind == "SelfFulfilling"
    return Claim("Follows", {"theory": t.name, "premise": "G <-> ¬Pr(#G) and Con(T)", "conclusion": "ℕ ⊨ ¬Pr(#G)"}, True,
                 (cl.claim, consistency_leaf(t),
                  schematic("a self-fulfilling Δ makes the truth premise a consequence of the fixed point")))


def henkin_claim(t: Theory = PA) -> Claim:
    """ψ1 with ``t |- ψ1 <-> Pr(#ψ1)`` is provable (Löb)."""
    from .diagonal import henkin_sentence
    d = henkin_sentence(t)
    says = provable(t, d.biconditional, (proof_evidence(d.provable_in, d.certificate, d.biconditional),),
                    "ψ1 <-> Pr(#ψ1)")
    r = M.Realization({0: d.psi}, t)
    m = M.imp(M.box(M.iff(M.p(0), M.box(M.p(0)))), M.box(M.p(0)))
    real = M.realize(m, r, "Löb for the Henkin sentence")
    return Claim("Provable", {"theory": t.name, "formula": describe(d.psi), "label": "Henkin sentence"},
                 True, (says, real, Leaf(A.DERIVABILITY)))
