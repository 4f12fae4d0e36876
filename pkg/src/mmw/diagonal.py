"""The diagonal lemma as a sentence factory.

Standard numbering: with ``B(y)`` the matrix (``Δ(y)`` or ``φ <-> Δ(y)``) and
``D(x0, y)`` the Σ1 graph of the diagonal function,

    θ(x0) := forall y. (D(x0, y) -> B(y)),     ψ := θ(num #θ).

The certificate is a Q-proof of ``ψ <-> B(num #ψ)`` built from the
representation of D at ``#θ`` and about twenty logic steps.  Under a direct
numbering ψ is ``B(num c)`` for a reserved code ``c``, literally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

from . import assumptions as A
from . import coding as C
from .proofsys import (
    ProofBuilder, ProofObject, Q, Representation, Theory, check, diag_formula,
    representation_formula,
)
from .semantics import Certificate, Reduction
from .syntax import (
    And, Eq, Exists, ForAll, Formula, Iff, Imp, Not, Term, UnaryPredicate, Var, all_vars,
    apply, free_vars, is_sentence, substitute,
)


class HoleArityError(ValueError):
    pass


@dataclass(frozen=True)
class DirectIdentity:
    """Certificate that ``psi`` is literally ``matrix(num c)`` with ``c`` its reserved code."""

    code: int

    def to_json(self) -> dict:
        return {"kind": "direct-identity", "code_bits": self.code.bit_length()}


@dataclass(frozen=True)
class TextbookDiagonal:
    """No certificate: the biconditional rests on the textbook diagonal lemma."""

    assumption: str = A.TEXTBOOK_DIAGONAL

    def to_json(self) -> dict:
        return {"kind": "assumed", "assumption": self.assumption}


@dataclass(eq=False)
class DiagonalResult:
    psi: Formula
    delta: UnaryPredicate
    phi: Optional[Formula]
    numbering: C.Numbering
    biconditional: Formula
    provable_in: Theory
    certificate: Union[ProofObject, DirectIdentity, TextbookDiagonal]
    hints: List[Tuple[tuple, Certificate]] = field(default_factory=list)
    theta: Optional[Formula] = None

    @property
    def matrix(self) -> UnaryPredicate:
        return _matrix(self.delta, self.phi)

    @property
    def target(self) -> Formula:
        """``Δ(#ψ)`` (or ``φ <-> Δ(#ψ)``): the right side of the biconditional."""
        return self.biconditional.right

    @property
    def code(self) -> int:
        c = getattr(self, "_code", None)
        if c is None:
            c = self.numbering.encode(self.psi)
            self._code = c
        return c

    def assumptions(self) -> frozenset:
        if isinstance(self.certificate, TextbookDiagonal):
            return frozenset((self.certificate.assumption,))
        return frozenset()

    def verify(self) -> bool:
        """Re-check the result from its parts alone."""
        expected = Iff(self.psi, apply(self.matrix, self.numbering.name_of(self.psi)))
        if self.biconditional != expected:
            return False
        cert = self.certificate
        if isinstance(cert, DirectIdentity):
            return self.numbering.kind == "direct" and self.numbering.encode(self.psi) == cert.code \
                and self.psi == apply(self.matrix, self.numbering.name_of(self.psi))
        if isinstance(cert, TextbookDiagonal):
            return True
        return cert.goal == self.biconditional and check(self.provable_in, cert).accepted

    def summary(self) -> dict:
        from .hierarchy import classify
        return {
            "numbering": self.numbering.describe(),
            "psi_digest": C.digest(self.psi),
            "psi_class": str(classify(self.psi)),
            "code_bits": self.code.bit_length(),
            "provable_in": self.provable_in.name,
            "certificate": self.certificate.to_json() if not isinstance(self.certificate, ProofObject)
            else {"kind": "proof", "digest": self.certificate.digest(), "steps": len(self.certificate.steps)},
        }


def _matrix(delta: UnaryPredicate, phi: Optional[Formula]) -> UnaryPredicate:
    if phi is None:
        return delta
    return UnaryPredicate(Iff(phi, delta.body), delta.hole)


def _value_var(m: UnaryPredicate) -> int:
    used = all_vars(m.body) | {m.hole}
    for y in range(1, 8):
        if y not in used or (y == m.hole and y not in _bound_vars(m.body)):
            return y
    raise HoleArityError("predicate uses every variable x1..x7; rename it before diagonalizing")


def _bound_vars(f) -> set:
    return all_vars(f) - free_vars(f)


def diagonalize(n: C.Numbering, delta: UnaryPredicate, phi: Optional[Formula] = None,
                theory: Theory = Q, certify: bool = True, form: str = "universal") -> DiagonalResult:
    """ψ with ``theory |- ψ <-> Δ(#ψ)`` (or ``ψ <-> (φ <-> Δ(#ψ))`` when ``phi`` is given).

    ``form="existential"`` builds ``θ(x0) := exists y. (D(x0, y) & B(y))`` instead,
    so that ψ starts with an existential quantifier.
    """
    if form not in ("universal", "existential"):
        raise ValueError(f"unknown diagonal form {form!r}")
    if not isinstance(delta, UnaryPredicate):
        raise HoleArityError("delta must be a one-hole predicate")
    if free_vars(delta.body) - {delta.hole}:
        raise HoleArityError("delta has free variables besides its hole")
    if phi is not None and not is_sentence(phi):
        raise HoleArityError("phi must be a sentence")
    m = _matrix(delta, phi)
    if n.kind == "direct":
        code, psi = n.reserve_direct(m)
        bic = Iff(psi, psi)
        return DiagonalResult(psi, delta, phi, n, bic, theory, DirectIdentity(code), [])

    y = _value_var(m)
    B = apply(m, Var(y))
    if form == "universal":
        theta = ForAll(y, Imp(diag_formula(y), B))
    else:
        theta = Exists(y, And(diag_formula(y), B))
    name_theta = C.STANDARD.name_of(theta)
    psi = substitute(theta, 0, name_theta)
    target = apply(m, C.STANDARD.name_of(psi))
    bic = Iff(psi, target)
    if not certify:
        cert = TextbookDiagonal()
        hints = [((), Reduction(None, target, A.TEXTBOOK_DIAGONAL))]
        return DiagonalResult(psi, delta, phi, n, bic, theory, cert, hints, theta)
    proof = (diagonal_proof if form == "universal" else diagonal_proof_exists)(theta, psi, target, y)
    hints = [((), Reduction(proof, target))]
    return DiagonalResult(psi, delta, phi, n, bic, theory, proof, hints, theta)


def diagonal_proof(theta: Formula, psi: Formula, target: Formula, y: int) -> ProofObject:
    """Q-proof of ``psi <-> target`` from the representation of D at ``#theta``."""
    b = ProofBuilder()
    Y = Var(y)
    m = C.STANDARD.name_of(psi)
    R = b.add(representation_formula(theta, y, psi), Representation(theta, y))
    body = b.formula(R).body                       # D(n, y) <-> y = m
    d_y = body.left
    B_y = psi.body.right

    # psi -> target
    r_m = b.inst(R, m)
    refl_m = b.logic(Eq(m, m), "REFL")
    psi_m = b.logic(Imp(psi, substitute(psi.body, y, m)), "INST", term=m)
    fwd = b.chain([r_m, refl_m, psi_m], Imp(psi, target))

    # target -> psi
    r_y = b.inst(R, Y)
    z = max(all_vars(psi.body) | {y}) + 1
    sym = b.logic(Imp(Eq(Y, m), Imp(Eq(Y, Y), Eq(m, Y))), "EQSUB", var=z, formula=Eq(Var(z), Y))
    refl_y = b.logic(Eq(Y, Y), "REFL")
    eqs = b.logic(Imp(Eq(m, Y), Imp(target, B_y)), "EQSUB", var=y, formula=B_y)
    step = b.chain([r_y, sym, refl_y, eqs], Imp(target, Imp(d_y, B_y)))
    g = b.gen(step, y)
    dist = b.logic(Imp(b.formula(g), Imp(ForAll(y, target), psi)), "DIST")
    fa = b.mp(g, dist)
    vac = b.logic(Imp(target, ForAll(y, target)), "VAC")
    bwd = b.chain([fa, vac], Imp(target, psi))

    b.chain([fwd, bwd], Iff(psi, target))
    return b.build(Iff(psi, target))


def diagonal_proof_exists(theta: Formula, psi: Formula, target: Formula, y: int) -> ProofObject:
    """Q-proof of ``psi <-> target`` for the existential form of θ."""
    b = ProofBuilder()
    Y = Var(y)
    m = C.STANDARD.name_of(psi)
    R = b.add(representation_formula(theta, y, psi), Representation(theta, y))
    d_y = b.formula(R).body.left
    A_y = psi.body                                  # D(n, y) & B(y)
    B_y = A_y.right
    d_m = substitute(d_y, y, m)

    # psi -> target: (D(n,y) & B(y)) -> B(m), then eliminate the existential
    r_y = b.inst(R, Y)
    eqs = b.logic(Imp(Eq(Y, m), Imp(B_y, target)), "EQSUB", var=y, formula=B_y)
    a_c = b.chain([r_y, eqs], Imp(A_y, target))
    contra = b.chain([a_c], Imp(Not(target), Not(A_y)))
    g = b.gen(contra, y)
    dist = b.logic(Imp(b.formula(g), Imp(ForAll(y, Not(target)), ForAll(y, Not(A_y)))), "DIST")
    fa = b.mp(g, dist)
    vac = b.logic(Imp(Not(target), ForAll(y, Not(target))), "VAC")
    exdef = b.logic(Iff(psi, Not(ForAll(y, Not(A_y)))), "EXDEF")
    fwd = b.chain([fa, vac, exdef], Imp(psi, target))

    # target -> psi: D(n, m) holds, so (D(n,m) & B(m)) witnesses psi
    r_m = b.inst(R, m)
    refl_m = b.logic(Eq(m, m), "REFL")
    dm = b.chain([r_m, refl_m], d_m)
    inst = b.logic(Imp(ForAll(y, Not(A_y)), Not(substitute(A_y, y, m))), "INST", term=m)
    bwd = b.chain([dm, inst, exdef], Imp(target, psi))

    b.chain([fwd, bwd], Iff(psi, target))
    return b.build(Iff(psi, target))


def goedel_sentence(t: Theory, n: C.Numbering = C.STANDARD, certify: bool = True) -> DiagonalResult:
    """G with ``t |- G <-> ~Pr_t(#G)``."""
    from .provability import build_pr
    pp = build_pr(t)
    delta = UnaryPredicate(Not(pp.pr.body), pp.pr.hole)
    return diagonalize(n, delta, theory=t, certify=certify)


def henkin_sentence(t: Theory, n: C.Numbering = C.STANDARD, certify: bool = True) -> DiagonalResult:
    """ψ1 with ``t |- ψ1 <-> Pr_t(#ψ1)``."""
    from .provability import build_pr
    return diagonalize(n, build_pr(t).pr, theory=t, certify=certify)


def direct_fixed_point(n: C.Numbering, delta: UnaryPredicate, phi: Optional[Formula] = None) -> DiagonalResult:
    """Direct self-reference: ψ is literally ``Δ(num c)`` with ``c`` the reserved code of ψ."""
    if n.kind != "direct":
        raise ValueError("direct_fixed_point needs a direct numbering")
    return diagonalize(n, delta, phi)


def counterexample_triple(t: Theory, phi: Formula, delta: UnaryPredicate,
                          certify: bool = True) -> DiagonalResult:
    """ψ with ``Q |- ψ <-> (φ <-> Δ(#ψ))``: with T proving φ and φ false, T proves ψ <-> Δ(#ψ)
    while in ℕ ψ <-> ~Δ(#ψ)."""
    return diagonalize(C.STANDARD, delta, phi, theory=Q, certify=certify)
