"""Prenex normal form and syntactic arithmetical-hierarchy classes."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .syntax import (
    And, Exists, ForAll, Formula, Iff, Imp, Not, Or, Var, _Binary, _Quant,
    all_vars, free_vars, lt_formula, substitute,
)

__all__ = ["HierarchyClass", "DELTA0", "Sigma", "Pi", "prenex", "classify", "is_delta0"]


@dataclass(frozen=True)
class HierarchyClass:
    kind: str  # "Delta0", "Sigma" or "Pi"
    n: int = 0

    def __post_init__(self):
        if self.kind not in ("Delta0", "Sigma", "Pi"):
            raise ValueError(f"unknown class kind {self.kind!r}")
        if (self.kind == "Delta0") != (self.n == 0):
            raise ValueError("Delta0 has level 0; Sigma/Pi levels start at 1")

    def dual(self) -> "HierarchyClass":
        if self.kind == "Delta0":
            return self
        return HierarchyClass("Pi" if self.kind == "Sigma" else "Sigma", self.n)

    def within(self, other: "HierarchyClass") -> bool:
        """Syntactic inclusion: Δ0 ⊆ Σn, Πn ⊆ Σn+1, Πn+1."""
        if self.kind == "Delta0":
            return True
        if other.kind == "Delta0":
            return False
        if self.kind == other.kind:
            return self.n <= other.n
        return self.n < other.n

    def __str__(self):
        if self.kind == "Delta0":
            return "Δ0"
        return ("Σ" if self.kind == "Sigma" else "Π") + str(self.n)


DELTA0 = HierarchyClass("Delta0")


def Sigma(n: int) -> HierarchyClass:
    return HierarchyClass("Sigma", n)


def Pi(n: int) -> HierarchyClass:
    return HierarchyClass("Pi", n)


@lru_cache(maxsize=65536)
def is_delta0(f: Formula) -> bool:
    """No unbounded quantifier, and no bound mentions its own variable."""
    if isinstance(f, Not):
        return is_delta0(f.arg)
    if isinstance(f, _Binary):
        return is_delta0(f.left) and is_delta0(f.right)
    if isinstance(f, _Quant):
        if f.bound is None or f.var in free_vars(f.bound):
            return False
        return is_delta0(f.body)
    return True


class _Prenexer:
    def __init__(self, f: Formula):
        self.next = max(all_vars(f), default=-1) + 1

    def fresh(self) -> int:
        v = self.next
        self.next += 1
        return v

    def run(self, f: Formula):
        """Return (prefix, matrix); prefix is a list of (is_forall, var)."""
        if is_delta0(f):
            return [], f
        if isinstance(f, Not):
            pre, m = self.run(f.arg)
            return [(not q, v) for q, v in pre], Not(m)
        if isinstance(f, Iff):
            return self.run(And(Imp(f.left, f.right), Imp(f.right, f.left)))
        if isinstance(f, _Binary):
            pl, ml = self.run(f.left)
            pr, mr = self.run(f.right)
            if isinstance(f, Imp):
                pl = [(not q, v) for q, v in pl]
            return pl + pr, type(f)(ml, mr)
        if isinstance(f, _Quant):
            z = self.fresh()
            body = substitute(f.body, f.var, Var(z))
            if f.bound is not None:
                # a bound over a non-Δ0 body is spelled out as a guard
                guard = lt_formula(Var(z), f.bound, all_vars(body) | {z})
                body = Imp(guard, body) if isinstance(f, ForAll) else And(guard, body)
            pre, m = self.run(body)
            return [(isinstance(f, ForAll), z)] + pre, m
        raise TypeError(f"not a formula: {f!r}")


def _prefix(f: Formula):
    return _Prenexer(f).run(f)


def prenex(f: Formula) -> Formula:
    """Equivalent prenex form; Δ0 subformulas (bounded quantifiers included) stay in the matrix.

    Strategy: outside-in, left to right, each pulled binder renamed to a fresh variable.
    """
    pre, m = _prefix(f)
    for q, v in reversed(pre):
        m = (ForAll if q else Exists)(v, m)
    return m


def _class_of_prefix(pre) -> HierarchyClass:
    if not pre:
        return DELTA0
    blocks = 1
    for (a, _), (b, _) in zip(pre, pre[1:]):
        if a != b:
            blocks += 1
    return Pi(blocks) if pre[0][0] else Sigma(blocks)


@lru_cache(maxsize=4096)
def classify(f: Formula) -> HierarchyClass:
    return _class_of_prefix(_prefix(f)[0])
