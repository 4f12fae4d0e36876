"""Truth in the standard model.

Three entry points: exact evaluation of Δ0 formulas, bounded search over
unbounded quantifiers (three-valued), and evaluation guided by certificates
attached to subformulas.  Every True/False verdict carries a certificate that
:func:`replay` re-checks; Unknown carries none.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Optional, Sequence, Tuple

from . import assumptions as A
from .hierarchy import is_delta0
from .syntax import (
    Add, And, Eq, Exists, ForAll, Formula, Iff, Imp, Mul, Not, Num, Or, Succ,
    Term, Var, Zero, _Binary, _Quant, children, free_vars, is_sentence,
    substitute, numeral, to_text,
)

DEFAULT_BOUND = 10_000


class UnboundVariable(KeyError):
    pass


class NotDelta0(ValueError):
    pass


class InvalidHint(ValueError):
    pass


# --------------------------------------------------------------------------
# certificates

class Certificate:
    kind = "certificate"

    def assumptions(self) -> frozenset:
        out = set()
        for c in self.subcertificates():
            out |= c.assumptions()
        return frozenset(out)

    def subcertificates(self) -> Tuple["Certificate", ...]:
        return ()

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class BooleanTrace(Certificate):
    """Value obtained by direct evaluation, or by a connective over child certificates."""

    value: bool
    children: Tuple[Certificate, ...] = ()
    kind = "trace"

    def subcertificates(self):
        return self.children

    def to_json(self):
        return {"kind": self.kind, "value": self.value,
                "children": [c.to_json() for c in self.children]}


@dataclass(frozen=True)
class Witness(Certificate):
    var: int
    value: int
    sub: Certificate
    kind = "witness"

    def subcertificates(self):
        return (self.sub,)

    def to_json(self):
        return {"kind": self.kind, "var": self.var, "value": str(self.value), "sub": self.sub.to_json()}


@dataclass(frozen=True)
class Exhausted(Certificate):
    """A bounded quantifier checked over its whole range."""

    bound: int
    kind = "exhausted"

    def to_json(self):
        return {"kind": self.kind, "bound": str(self.bound)}


@dataclass(frozen=True)
class Assumption(Certificate):
    name: str
    value: bool = True
    kind = "assumption"

    def __post_init__(self):
        A.require(self.name)

    def assumptions(self):
        return frozenset((self.name,))

    def to_json(self):
        return {"kind": self.kind, "name": self.name, "value": self.value}


@dataclass(frozen=True, eq=False)
class OracleProof(Certificate):
    """``Pr_T(#s)`` is true because ``proof`` is a checked T-proof of ``s``.

    Passing from the checked proof to the arithmetized predicate is the
    adequacy assumption.
    """

    theory: object
    sentence: Formula
    proof: object
    kind = "oracle-proof"

    def assumptions(self):
        return frozenset((A.ADEQUACY,))

    def __eq__(self, other):
        return isinstance(other, OracleProof) and self.theory == other.theory \
            and self.sentence == other.sentence and self.proof == other.proof

    def __hash__(self):
        return hash(self.sentence)

    def to_json(self):
        return {"kind": self.kind, "theory": self.theory.name,
                "proof": self.proof.digest(), "steps": len(self.proof.steps)}


@dataclass(frozen=True, eq=False)
class Reduction(Certificate):
    """A checked Q-proof of ``f <-> target``; Q is sound, so ``f`` has the value of ``target``.

    With ``proof=None`` the biconditional is taken from the named assumption instead.
    """

    proof: object
    target: Formula
    assumption: Optional[str] = None
    kind = "reduction"

    def __post_init__(self):
        if self.proof is None:
            if self.assumption is None:
                raise ValueError("a reduction without proof must name its assumption")
            A.require(self.assumption)

    def assumptions(self):
        return frozenset((self.assumption,)) if self.proof is None else frozenset()

    def __eq__(self, other):
        return isinstance(other, Reduction) and self.target == other.target \
            and self.assumption == other.assumption and self.proof == other.proof

    def __hash__(self):
        return hash((self.target, self.assumption))

    def to_json(self):
        if self.proof is None:
            return {"kind": self.kind, "assumption": self.assumption}
        return {"kind": self.kind, "proof": self.proof.digest(), "steps": len(self.proof.steps)}


@dataclass(frozen=True)
class TruthVerdict:
    value: Optional[bool]
    certificate: Optional[Certificate] = None
    bound: Optional[int] = None

    def __post_init__(self):
        if (self.value is None) != (self.certificate is None):
            raise ValueError("True/False verdicts need a certificate; Unknown has none")

    @property
    def decided(self) -> bool:
        return self.value is not None

    def assumptions(self) -> frozenset:
        return self.certificate.assumptions() if self.certificate else frozenset()

    def label(self) -> str:
        return {True: "True", False: "False", None: "Unknown"}[self.value]

    def to_json(self) -> dict:
        return {"value": self.label(), "bound": self.bound,
                "certificate": self.certificate.to_json() if self.certificate else None}


UNKNOWN = TruthVerdict(None)


# --------------------------------------------------------------------------
# terms and Δ0 evaluation

def _compile_term(t: Term) -> Callable[[dict], int]:
    if isinstance(t, Zero):
        return lambda env: 0
    if isinstance(t, Num):
        v = t.value
        return lambda env: v
    if isinstance(t, Var):
        i = t.index

        def var(env):
            try:
                return env[i]
            except KeyError:
                raise UnboundVariable(f"x{i} has no value") from None
        return var
    if isinstance(t, Succ):
        f = _compile_term(t.arg)
        return lambda env: f(env) + 1
    if isinstance(t, Add):
        l, r = _compile_term(t.left), _compile_term(t.right)
        return lambda env: l(env) + r(env)
    if isinstance(t, Mul):
        l, r = _compile_term(t.left), _compile_term(t.right)
        return lambda env: l(env) * r(env)
    raise TypeError(f"not a term: {t!r}")


def eval_term(t: Term, env: Optional[dict] = None) -> int:
    return _compile_term(t)(env or {})


_MISSING = object()


def _compile(f: Formula) -> Callable[[dict], bool]:
    if isinstance(f, Eq):
        l, r = _compile_term(f.left), _compile_term(f.right)
        return lambda env: l(env) == r(env)
    if isinstance(f, Not):
        a = _compile(f.arg)
        return lambda env: not a(env)
    if isinstance(f, _Binary):
        l, r = _compile(f.left), _compile(f.right)
        if isinstance(f, And):
            return lambda env: l(env) and r(env)
        if isinstance(f, Or):
            return lambda env: l(env) or r(env)
        if isinstance(f, Imp):
            return lambda env: (not l(env)) or r(env)
        return lambda env: l(env) == r(env)
    if isinstance(f, _Quant):
        if f.bound is None:
            raise NotDelta0("unbounded quantifier in a Δ0 evaluation")
        bound, body, i = _compile_term(f.bound), _compile(f.body), f.var
        want = isinstance(f, Exists)

        def quant(env):
            n = bound(env)
            old = env.get(i, _MISSING)
            try:
                for v in range(n):
                    env[i] = v
                    if body(env) == want:
                        return want
                return not want
            finally:
                if old is _MISSING:
                    env.pop(i, None)
                else:
                    env[i] = old
        return quant
    raise TypeError(f"not a formula: {f!r}")


_compiled: Dict[Formula, Callable] = {}


def compiled(f: Formula) -> Callable[[dict], bool]:
    fn = _compiled.get(f)
    if fn is None:
        if len(_compiled) > 512:
            _compiled.clear()
        fn = _compiled[f] = _compile(f)
    return fn


def eval_delta0(f: Formula, env: Optional[dict] = None) -> bool:
    """Exact truth value of a Δ0 formula under ``env`` (variable index -> natural)."""
    if not is_delta0(f):
        raise NotDelta0("formula is not Δ0")
    env = dict(env or {})
    missing = free_vars(f) - set(env)
    if missing:
        raise UnboundVariable("unassigned variables: " + ", ".join(f"x{i}" for i in sorted(missing)))
    return compiled(f)(env)


def witness_in_range(f: _Quant, env: dict) -> Optional[int]:
    """For a bounded quantifier, the least value deciding it early (if any)."""
    n = eval_term(f.bound, env)
    body = compiled(f.body)
    want = isinstance(f, Exists)
    scope = dict(env)
    for v in range(n):
        scope[f.var] = v
        if body(scope) == want:
            return v
    return None


# --------------------------------------------------------------------------
# three-valued evaluation

_KLEENE_AND = {(True, True): True, (False, True): False, (True, False): False, (False, False): False,
               (None, False): False, (False, None): False}


def _combine(f, vl, vr):
    if isinstance(f, And):
        if vl is False or vr is False:
            return False
        return None if vl is None or vr is None else True
    if isinstance(f, Or):
        if vl is True or vr is True:
            return True
        return None if vl is None or vr is None else False
    if isinstance(f, Imp):
        if vl is False or vr is True:
            return True
        return None if vl is None or vr is None else False
    if vl is None or vr is None:
        return None
    return vl == vr


class _Evaluator:
    def __init__(self, bound: int, hints: Dict[tuple, Certificate]):
        self.bound = bound
        self.hints = hints
        self.used: set = set()

    def run(self, f: Formula, env: dict, path: tuple) -> Tuple[Optional[bool], Optional[Certificate]]:
        if path in self.hints:
            self.used.add(path)
            return self.hinted(f, env, path, self.hints[path])
        if is_delta0(f) and not self._hint_below(path):
            v = eval_delta0(f, env)
            return v, BooleanTrace(v)
        if isinstance(f, Not):
            v, c = self.run(f.arg, env, path + (0,))
            return (None, None) if v is None else (not v, BooleanTrace(not v, (c,)))
        if isinstance(f, _Binary):
            vl, cl = self.run(f.left, env, path + (0,))
            if vl is not None and ((isinstance(f, And) and vl is False) or (isinstance(f, Or) and vl is True)
                                   or (isinstance(f, Imp) and vl is False)):
                return self._short(f, vl, cl)
            vr, cr = self.run(f.right, env, path + (1,))
            v = _combine(f, vl, vr)
            if v is None:
                return None, None
            kids = tuple(c for c in (cl, cr) if c is not None)
            return v, BooleanTrace(v, kids)
        if isinstance(f, _Quant):
            return self.quantifier(f, env, path)
        if isinstance(f, Eq):
            v = eval_delta0(f, env)
            return v, BooleanTrace(v)
        raise TypeError(f"not a formula: {f!r}")

    def _short(self, f, vl, cl):
        v = False if isinstance(f, And) else True
        return v, BooleanTrace(v, (cl,))

    def _hint_below(self, path) -> bool:
        n = len(path)
        return any(len(p) > n and p[:n] == path for p in self.hints)

    def quantifier(self, f, env, path):
        want = isinstance(f, Exists)
        n = eval_term(f.bound, env) if f.bound is not None else self.bound
        unknown = False
        scope = dict(env)
        for v in range(n):
            scope[f.var] = v
            val, cert = self.run(f.body, scope, path + (0,))
            if val is want:
                return want, Witness(f.var, v, cert)
            if val is None:
                unknown = True
        if unknown or f.bound is None:
            return None, None
        return (not want), Exhausted(n)

    # -- hints
    def hinted(self, f, env, path, cert):
        if free_vars(f) - set(env):
            raise InvalidHint(f"hint at {path} targets a formula with unassigned variables")
        if isinstance(cert, Assumption):
            return cert.value, cert
        if isinstance(cert, OracleProof):
            g = f
            for v in sorted(free_vars(f)):
                g = substitute(g, v, numeral(env[v]))
            _check_oracle(g, cert, path)
            return True, cert
        if isinstance(cert, Reduction):
            target = _check_reduction(f, cert, path)
            v, c = self.run(target, env, path + ("R",))
            if v is None:
                return None, None
            return v, BooleanTrace(v, (cert, c))
        if isinstance(cert, BooleanTrace):
            if not is_delta0(f) or eval_delta0(f, env) != cert.value:
                raise InvalidHint(f"trace hint at {path} does not replay")
            return cert.value, cert
        if isinstance(cert, Witness):
            if not isinstance(f, _Quant) or f.var != cert.var:
                raise InvalidHint(f"witness hint at {path} does not match a quantifier")
            scope = dict(env)
            scope[f.var] = cert.value
            if f.bound is not None and not cert.value < eval_term(f.bound, env):
                raise InvalidHint(f"witness at {path} is outside the bound")
            v, c = self.run(f.body, scope, path + (0,))
            want = isinstance(f, Exists)
            if v is not want:
                raise InvalidHint(f"witness hint at {path} does not decide the quantifier")
            return want, Witness(f.var, cert.value, c)
        raise InvalidHint(f"unsupported hint {type(cert).__name__} at {path}")


def _check_oracle(f, cert: OracleProof, path):
    from .proofsys import check
    from .provability import build_pr
    from .coding import STANDARD

    pp = build_pr(cert.theory)
    expected = pp.pr(STANDARD.name_of(cert.sentence))
    if f != expected:
        raise InvalidHint(f"oracle hint at {path} is not Pr_T of the certified sentence")
    if cert.proof.goal != cert.sentence or not check(cert.theory, cert.proof).accepted:
        raise InvalidHint(f"oracle proof at {path} does not check")


def _check_reduction(f, cert: Reduction, path):
    from .proofsys import Q, check

    if cert.proof is None:
        return cert.target
    goal = cert.proof.goal
    if goal not in (Iff(f, cert.target), Iff(cert.target, f)):
        raise InvalidHint(f"reduction at {path} proves a different biconditional")
    if not check(Q, cert.proof).accepted:
        raise InvalidHint(f"reduction proof at {path} does not check in Q")
    return cert.target


def eval_bounded(f: Formula, bound: int = DEFAULT_BOUND) -> TruthVerdict:
    """Three-valued truth: unbounded quantifiers are searched below ``bound``."""
    if not is_sentence(f):
        raise UnboundVariable("eval_bounded needs a sentence")
    v, c = _Evaluator(bound, {}).run(f, {}, ())
    return TruthVerdict(v, c, bound) if v is not None else TruthVerdict(None, None, bound)


def eval_with_hints(f: Formula, hints: Iterable[Tuple[tuple, Certificate]],
                    bound: int = DEFAULT_BOUND) -> TruthVerdict:
    """Evaluate with certified values at the hinted paths.

    A path is a tuple of child indices (see :func:`syntax.children`); the
    marker ``"R"`` steps into the target of a :class:`Reduction`.  Every hint
    must be reached and must validate, otherwise :class:`InvalidHint` is raised.
    """
    table: Dict[tuple, Certificate] = {}
    for path, cert in hints:
        path = tuple(path)
        if path in table:
            raise InvalidHint(f"two hints for path {path}")
        if not isinstance(cert, Certificate):
            raise InvalidHint(f"hint at {path} is not a certificate")
        table[path] = cert
    if not is_sentence(f):
        raise UnboundVariable("eval_with_hints needs a sentence")
    ev = _Evaluator(bound, table)
    v, c = ev.run(f, {}, ())
    unused = set(table) - ev.used
    if unused and v is not None:
        # a hint that was never consulted did not contribute; a stale path is an error
        bad = [p for p in unused if not _reachable(f, p)]
        if bad:
            raise InvalidHint(f"hint path {sorted(bad, key=str)[0]} does not exist")
    return TruthVerdict(v, c, bound) if v is not None else TruthVerdict(None, None, bound)


def _reachable(f, path) -> bool:
    for i in path:
        if i == "R":
            return True
        kids = children(f)
        if not isinstance(i, int) or not 0 <= i < len(kids):
            return False
        f = kids[i]
    return True


def replay(f: Formula, verdict: TruthVerdict, hints: Iterable = (), bound: Optional[int] = None) -> bool:
    """Recompute ``verdict`` and compare value and certificate."""
    b = verdict.bound if bound is None else bound
    again = eval_with_hints(f, hints, b if b is not None else DEFAULT_BOUND)
    return again.value == verdict.value and again.certificate == verdict.certificate
