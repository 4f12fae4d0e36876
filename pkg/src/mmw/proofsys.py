"""Theories, proof objects, the proof checker and a small proof search.

The calculus is Hilbert style.  Core rules are the ones the arithmetized
proof predicate knows (axioms of the theory, the logic-axiom schemas listed in
:data:`LOGIC_SCHEMAS`, modus ponens, generalization).  On top of the core the
checker accepts a few derived rules, each re-verified by the checker itself:

* ``Compute``: a closed Δ0 sentence that is true (Q proves every such sentence);
* ``Taut``: a propositional tautology, atoms being equations and quantified formulas;
* ``Repr``: ``forall y. (D(num e, y) <-> y = num d)`` for the diagonal graph D,
  where ``d`` is the diagonal value of ``e``, recomputed by the checker;
* ``Macro``: an inlined sub-proof, checked recursively.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from . import coding as C
from .hierarchy import is_delta0
from .syntax import (
    Add, And, Eq, Exists, ForAll, Formula, Iff, Imp, Mul, Not, Num, Or, Succ,
    Term, UnaryPredicate, Var, Zero, _Binary, _Quant, big_or, free_vars,
    is_sentence, numeral, parse, parse_term, substitute, to_text,
)

# --------------------------------------------------------------------------
# theories

Q_AXIOM_TEXT = (
    "forall x0. ~ S(x0) = 0",
    "forall x0. forall x1. (S(x0) = S(x1) -> x0 = x1)",
    "forall x0. (x0 = 0 | exists x1. x0 = S(x1))",
    "forall x0. (x0 + 0) = x0",
    "forall x0. forall x1. (x0 + S(x1)) = S((x0 + x1))",
    "forall x0. (x0 * 0) = 0",
    "forall x0. forall x1. (x0 * S(x1)) = ((x0 * x1) + x0)",
)

SCHEMES = ("induction",)
DIAG_PARAM = 2


class TheoryError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Theory:
    """A named axiom basis: finite axioms, scheme tags and extra sentences."""

    name: str
    base: Tuple[Formula, ...]
    schemes: Tuple[str, ...] = ()
    extra: Tuple[Formula, ...] = ()
    note: str = ""
    # formulas c in x2 whose diagonal value c[x2 := num #c] is an axiom
    diagonal_axioms: Tuple[Formula, ...] = ()

    def __post_init__(self):
        for f in self.base + self.extra:
            if not is_sentence(f):
                raise TheoryError(f"axiom of {self.name} is not a sentence: {to_text(f)[:80]}")
        for c in self.diagonal_axioms:
            if free_vars(c) - {DIAG_PARAM}:
                raise TheoryError(f"diagonal axiom template of {self.name} has free variables besides x{DIAG_PARAM}")
        for s in self.schemes:
            if s not in SCHEMES:
                raise TheoryError(f"unknown scheme {s!r}")

    @property
    def finite_axioms(self) -> Tuple[Formula, ...]:
        return self.base + self.extra

    def _axiom_set(self):
        s = self.__dict__.get("_axset")
        if s is None:
            s = frozenset(self.finite_axioms + tuple(diagonal_axiom(c) for c in self.diagonal_axioms))
            object.__setattr__(self, "_axset", s)
        return s

    def is_axiom(self, f: Formula) -> bool:
        if f in self._axiom_set():
            return True
        return "induction" in self.schemes and induction_body(f) is not None

    def extends(self, other: "Theory") -> bool:
        mine = self._axiom_set()
        return all(a in mine for a in other.finite_axioms) and set(other.schemes) <= set(self.schemes)

    def with_extra(self, name: str, sentences: Iterable[Formula], note: str = "",
                   diagonal_axioms: Iterable[Formula] = ()) -> "Theory":
        return Theory(name, self.base, self.schemes, self.extra + tuple(sentences), note,
                      self.diagonal_axioms + tuple(diagonal_axioms))

    @property
    def axiom_recognizer(self) -> UnaryPredicate:
        """Δ0 predicate ``x0 = #A1 | ... | x0 = #An`` over the finite axioms."""
        r = self.__dict__.get("_recognizer")
        if r is None:
            r = UnaryPredicate(big_or([Eq(Var(0), C.STANDARD.name_of(a)) for a in self.finite_axioms]), 0)
            object.__setattr__(self, "_recognizer", r)
        return r

    def key(self) -> str:
        """Content digest; two theories with the same axioms share it."""
        k = self.__dict__.get("_key")
        if k is None:
            import hashlib
            h = hashlib.sha256(self.name.encode())
            for part, items in (("b", self.base), ("x", self.extra)):
                for a in items:
                    h.update(part.encode() + C.digest(a).encode())
            h.update(",".join(self.schemes).encode())
            for c in self.diagonal_axioms:
                h.update(b"d" + C.digest(c).encode())
            k = h.hexdigest()
            object.__setattr__(self, "_key", k)
        return k

    def __eq__(self, other):
        return isinstance(other, Theory) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Theory({self.name!r}, {len(self.base)} base, {self.schemes}, {len(self.extra)} extra)"

    # -- theory files
    def to_text(self) -> str:
        lines = [f"name: {self.name}"]
        lines += [f"base: {to_text(a)}" for a in self.base]
        lines += [f"scheme: {s}" for s in self.schemes]
        lines += [f"extra: {to_text(a)}" for a in self.extra]
        lines += [f"diagonal: {to_text(c)}" for c in self.diagonal_axioms]
        return "\n".join(lines) + "\n"


def parse_theory(text: str, macros=None) -> Theory:
    """Read a theory file: ``name:``, ``base:``, ``scheme:``, ``extra:`` and ``diagonal:`` lines.

    ``base: Q`` pulls in the axioms of Robinson arithmetic.
    """
    name, base, schemes, extra, diag = None, [], [], [], []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, val = line.partition(":")
        if not sep:
            raise TheoryError(f"line {n}: expected 'key: value'")
        key, val = key.strip(), val.strip()
        if key == "name":
            name = val
        elif key == "base" and val == "Q":
            base.extend(Q_AXIOMS)
        elif key in ("base", "extra"):
            (base if key == "base" else extra).append(parse(val, macros))
        elif key == "scheme":
            schemes.append(val)
        elif key == "diagonal":
            diag.append(parse(val, macros))
        else:
            raise TheoryError(f"line {n}: unknown key {key!r}")
    if not name:
        raise TheoryError("theory file has no name")
    return Theory(name, tuple(base), tuple(schemes), tuple(extra), diagonal_axioms=tuple(diag))


Q_AXIOMS = tuple(parse(t) for t in Q_AXIOM_TEXT)
Q = Theory("Q", Q_AXIOMS, note="Robinson arithmetic")
PA = Theory("PA", Q_AXIOMS, ("induction",), note="Q plus the (parameter-free) induction scheme")
TOY = Theory("toy", Q_AXIOMS, (), (parse("0 = S(0)"),), note="Q plus the false axiom 0 = S(0); inconsistent")


def diagonal_axiom(c: Formula) -> Formula:
    return substitute(c, DIAG_PARAM, C.STANDARD.name_of(c))


def induction_instance(a: Formula, v: int) -> Formula:
    """``(a[v:=0] & forall v. (a -> a[v:=S v])) -> forall v. a``."""
    return Imp(And(substitute(a, v, Zero()), ForAll(v, Imp(a, substitute(a, v, Succ(Var(v)))))),
               ForAll(v, a))


def induction_body(f: Formula) -> Optional[Tuple[Formula, int]]:
    """``(a, v)`` if ``f`` is a closed induction instance, else None."""
    if not (isinstance(f, Imp) and isinstance(f.right, ForAll) and f.right.bound is None):
        return None
    v, a = f.right.var, f.right.body
    if free_vars(a) - {v}:
        return None
    try:
        return (a, v) if induction_instance(a, v) == f else None
    except (ValueError, TypeError):
        return None


# --------------------------------------------------------------------------
# proof objects

@dataclass(frozen=True)
class Justification:
    kind: str
    refs: Tuple[int, ...] = ()
    schema: str = ""
    var: Optional[int] = None
    term: Optional[Term] = None
    formula: Optional[Formula] = None
    sub: Optional["ProofObject"] = None

    def to_text(self, names: Optional[dict] = None, aliases: Optional[dict] = None) -> str:
        k = self.kind
        if k == "MP":
            return f"MP {self.refs[0]} {self.refs[1]}"
        if k == "Gen":
            return f"Gen {self.refs[0]} x{self.var}"
        if k == "Logic":
            out = f"Logic {self.schema}"
            if self.var is not None:
                out += f" x{self.var}"
            if self.term is not None:
                out += f" t={to_text(self.term, names)}"
            if self.formula is not None:
                out += f" a={to_text(self.formula, names, aliases)}"
            return out
        if k == "Repr":
            return f"Repr x{self.var} e={to_text(self.formula, names, aliases)}"
        if k == "Macro":
            return f"Macro {len(self.sub.steps)}"
        return k


def Axiom() -> Justification:
    return Justification("Axiom")


def LogicAxiom(schema: str, var: Optional[int] = None, term: Optional[Term] = None,
               formula: Optional[Formula] = None) -> Justification:
    return Justification("Logic", schema=schema, var=var, term=term, formula=formula)


def ModusPonens(i: int, j: int) -> Justification:
    """Step ``i`` proves ``A`` and step ``j`` proves ``A -> B`` (1-based indices)."""
    return Justification("MP", (i, j))


def Generalization(i: int, var: int) -> Justification:
    return Justification("Gen", (i,), var=var)


def NumeralComputation() -> Justification:
    return Justification("Compute")


def Tautology() -> Justification:
    return Justification("Taut")


def Representation(e: Formula, y: int) -> Justification:
    return Justification("Repr", formula=e, var=y)


def MacroRef(sub: "ProofObject") -> Justification:
    return Justification("Macro", sub=sub)


@dataclass(frozen=True)
class Step:
    formula: Formula
    just: Justification


@dataclass(frozen=True, eq=False)
class ProofObject:
    goal: Formula
    steps: Tuple[Step, ...]

    def __len__(self):
        return len(self.steps)

    def digest(self) -> str:
        d = self.__dict__.get("_digest")
        if d is None:
            import hashlib
            h = hashlib.sha256(C.digest(self.goal).encode())
            for s in self.steps:
                h.update(C.digest(s.formula).encode())
                h.update(_just_digest(s.just).encode())
            d = h.hexdigest()
            object.__setattr__(self, "_digest", d)
        return d

    def __eq__(self, other):
        return isinstance(other, ProofObject) and self.digest() == other.digest()

    def __hash__(self):
        return hash(self.digest())

    def to_text(self, names: Optional[dict] = None, aliases: Optional[dict] = None) -> str:
        """Line format ``<i> <formula> [<justification>]``; see :func:`syntax.to_text` for the labels."""
        return "goal: " + to_text(self.goal, names, aliases) + "\n" + \
            "".join(_step_lines(self.steps, "", names, aliases))

    @classmethod
    def from_text(cls, text: str, macros=None, codes: Optional[dict] = None,
                  lets: Optional[dict] = None) -> "ProofObject":
        lines = text.splitlines()
        if not lines or not lines[0].startswith("goal: "):
            raise ValueError("proof text must start with 'goal: '")
        rd = _Reader(macros, codes, lets)
        goal = rd.formula(lines[0][6:])
        steps, pos = _read_steps(lines, 1, "", None, rd)
        if pos != len(lines):
            raise ValueError(f"unexpected text at line {pos + 1}")
        return cls(goal, tuple(steps))


def _just_digest(j: Justification) -> str:
    parts = [j.kind, j.schema, ",".join(map(str, j.refs)), "" if j.var is None else str(j.var)]
    if j.term is not None:
        parts.append(C.digest(j.term))
    if j.formula is not None:
        parts.append(C.digest(j.formula))
    if j.sub is not None:
        parts.append(j.sub.digest())
    return "|".join(parts)


def _step_lines(steps, indent, names=None, aliases=None):
    for i, s in enumerate(steps, 1):
        yield f"{indent}{i} {to_text(s.formula, names, aliases)} [{s.just.to_text(names, aliases)}]\n"
        if s.just.kind == "Macro":
            yield f"{indent}  goal: {to_text(s.just.sub.goal, names, aliases)}\n"
            yield from _step_lines(s.just.sub.steps, indent + "  ", names, aliases)


@dataclass(frozen=True)
class _Reader:
    macros: object = None
    codes: Optional[dict] = None
    lets: Optional[dict] = None

    def formula(self, text):
        return parse(text, self.macros, self.codes, self.lets)

    def term(self, text):
        return parse_term(text, self.codes)


def _read_steps(lines, pos, indent, count, rd):
    steps = []
    while pos < len(lines) and (count is None or len(steps) < count):
        line = lines[pos]
        if not line.startswith(indent) or line[len(indent):len(indent) + 1] == " ":
            break
        body = line[len(indent):]
        num, _, rest = body.partition(" ")
        if not num.isdigit() or int(num) != len(steps) + 1:
            raise ValueError(f"line {pos + 1}: expected step {len(steps) + 1}")
        cut = rest.rfind(" [")
        if cut < 0 or not rest.endswith("]"):
            raise ValueError(f"line {pos + 1}: missing [justification]")
        f = rd.formula(rest[:cut])
        jtext = rest[cut + 2:-1]
        pos += 1
        if jtext.startswith("Macro "):
            n = int(jtext.split()[1])
            sub_indent = indent + "  "
            if pos >= len(lines) or not lines[pos].startswith(sub_indent + "goal: "):
                raise ValueError(f"line {pos + 1}: macro without goal")
            sub_goal = rd.formula(lines[pos][len(sub_indent) + 6:])
            sub_steps, pos = _read_steps(lines, pos + 1, sub_indent, n, rd)
            just = MacroRef(ProofObject(sub_goal, tuple(sub_steps)))
        else:
            just = _parse_just(jtext, pos, rd)
        steps.append(Step(f, just))
    return steps, pos


def _parse_just(text: str, line: int, rd: _Reader) -> Justification:
    head, _, rest = text.partition(" ")
    try:
        if head in ("Axiom", "Compute", "Taut") and not rest:
            return Justification(head)
        if head == "MP":
            i, j = rest.split()
            return ModusPonens(int(i), int(j))
        if head == "Gen":
            i, v = rest.split()
            return Generalization(int(i), int(v[1:]))
        if head == "Repr":
            v, _, e = rest.partition(" e=")
            return Representation(rd.formula(e), int(v[1:]))
        if head == "Logic":
            schema, _, rest = rest.partition(" ")
            var = term = formula = None
            if rest.startswith("x"):
                v, _, rest = rest.partition(" ")
                var = int(v[1:])
            if rest.startswith("t="):
                # a term never contains " a=", so split there
                t, sep, rest = rest[2:].partition(" a=")
                term = rd.term(t)
                rest = "a=" + rest if sep else ""
            if rest.startswith("a="):
                formula = rd.formula(rest[2:])
                rest = ""
            if rest:
                raise ValueError(rest)
            return LogicAxiom(schema, var, term, formula)
    except (ValueError, IndexError) as e:
        raise ValueError(f"line {line}: bad justification {text!r} ({e})") from None
    raise ValueError(f"line {line}: unknown justification {text!r}")


# --------------------------------------------------------------------------
# the checker

@dataclass(frozen=True)
class CheckResult:
    accepted: bool
    step: Optional[int] = None
    reason: str = ""

    def __bool__(self):
        return self.accepted

    def __str__(self):
        return "Accepted" if self.accepted else f"Rejected(step {self.step}: {self.reason})"


ACCEPTED = CheckResult(True)


class _Reject(Exception):
    pass


def free_for(t: Term, v: int, a: Formula) -> bool:
    """No free occurrence of ``v`` in ``a`` sits under a binder of a variable of ``t``."""
    tv = free_vars(t)
    if not tv:
        return True

    def go(f, bound):
        if v not in free_vars(f):
            return True
        if isinstance(f, Eq):
            return not (bound & tv)
        if isinstance(f, Not):
            return go(f.arg, bound)
        if isinstance(f, _Binary):
            return go(f.left, bound) and go(f.right, bound)
        if isinstance(f, _Quant):
            if f.bound is not None and v in free_vars(f.bound) and bound & tv:
                return False
            return go(f.body, bound | {f.var})
        return True

    return go(a, frozenset())


# propositional schemas as (name, pattern); metavariables are strings
_I, _N, _A, _O, _E = Imp, Not, And, Or, Iff
PROP_SCHEMAS = {
    "P1": ("I", "a", ("I", "c", "a")),
    "P2": ("I", ("I", "a", ("I", "c", "d")), ("I", ("I", "a", "c"), ("I", "a", "d"))),
    "P3": ("I", ("I", ("N", "c"), ("N", "a")), ("I", "a", "c")),
    "P4": ("I", ("A", "a", "c"), "a"),
    "P5": ("I", ("A", "a", "c"), "c"),
    "P6": ("I", "a", ("I", "c", ("A", "a", "c"))),
    "P7": ("I", "a", ("O", "a", "c")),
    "P8": ("I", "c", ("O", "a", "c")),
    "P9": ("I", ("I", "a", "d"), ("I", ("I", "c", "d"), ("I", ("O", "a", "c"), "d"))),
    "P10": ("I", ("E", "a", "c"), ("I", "a", "c")),
    "P11": ("I", ("E", "a", "c"), ("I", "c", "a")),
    "P12": ("I", ("I", "a", "c"), ("I", ("I", "c", "a"), ("E", "a", "c"))),
}
_OPS = {"I": Imp, "N": Not, "A": And, "O": Or, "E": Iff}

LOGIC_SCHEMAS = tuple(PROP_SCHEMAS) + ("INST", "DIST", "VAC", "EXDEF", "BQDEF", "REFL", "EQSUB")


def _match(pat, f, env) -> bool:
    if isinstance(pat, str):
        seen = env.get(pat)
        if seen is None:
            env[pat] = f
            return True
        return seen == f
    op = _OPS[pat[0]]
    if type(f) is not op:
        return False
    if op is Not:
        return _match(pat[1], f.arg, env)
    return _match(pat[1], f.left, env) and _match(pat[2], f.right, env)


def check_logic_axiom(f: Formula, j: Justification) -> Optional[str]:
    """None when ``f`` is an instance of ``j.schema``, else the reason it is not."""
    s = j.schema
    if s in PROP_SCHEMAS:
        return None if _match(PROP_SCHEMAS[s], f, {}) else f"not an instance of {s}"
    if s == "REFL":
        return None if isinstance(f, Eq) and f.left == f.right else "not of the form t = t"
    if s == "INST":
        if not (isinstance(f, Imp) and isinstance(f.left, ForAll) and f.left.bound is None):
            return "INST needs (forall v. a) -> a[v:=t]"
        if j.term is None:
            return "INST needs the instantiating term"
        v, a = f.left.var, f.left.body
        if not free_for(j.term, v, a):
            return "term not free for the variable"
        return None if substitute(a, v, j.term) == f.right else "consequent is not the instance"
    if s == "DIST":
        try:
            (fa, (fa1, fa2)) = f.left, (f.right.left, f.right.right)
            ok = (isinstance(f, Imp) and isinstance(f.right, Imp)
                  and all(isinstance(q, ForAll) and q.bound is None for q in (fa, fa1, fa2))
                  and fa.var == fa1.var == fa2.var and isinstance(fa.body, Imp)
                  and fa.body.left == fa1.body and fa.body.right == fa2.body)
        except AttributeError:
            ok = False
        return None if ok else "not an instance of DIST"
    if s == "VAC":
        ok = (isinstance(f, Imp) and isinstance(f.right, ForAll) and f.right.bound is None
              and f.right.body == f.left and f.right.var not in free_vars(f.left))
        return None if ok else "not an instance of VAC"
    if s == "EXDEF":
        ok = (isinstance(f, Iff) and isinstance(f.left, Exists) and f.left.bound is None
              and f.right == Not(ForAll(f.left.var, Not(f.left.body))))
        return None if ok else "not an instance of EXDEF"
    if s == "BQDEF":
        if not (isinstance(f, Iff) and isinstance(f.left, _Quant) and f.left.bound is not None):
            return "BQDEF needs a bounded quantifier on the left"
        if j.var is None:
            return "BQDEF needs the guard variable"
        q, z = f.left, j.var
        v, t, a = q.var, q.bound, q.body
        if z == v or v in free_vars(t) or z in free_vars(t) or z in free_vars(a):
            return "guard variable clashes"
        guard = Exists(z, Eq(Add(Var(v), Succ(Var(z))), t))
        want = (ForAll(v, Imp(guard, a)) if isinstance(q, ForAll) else Exists(v, And(guard, a)))
        return None if f.right == want else "right side is not the guarded form"
    if s == "EQSUB":
        if j.var is None or j.formula is None:
            return "EQSUB needs the variable and the formula"
        if not (isinstance(f, Imp) and isinstance(f.left, Eq) and isinstance(f.right, Imp)):
            return "EQSUB needs s = t -> (a[v:=s] -> a[v:=t])"
        s_, t_ = f.left.left, f.left.right
        v, a = j.var, j.formula
        if not (free_for(s_, v, a) and free_for(t_, v, a)):
            return "term not free for the variable"
        ok = f.right.left == substitute(a, v, s_) and f.right.right == substitute(a, v, t_)
        return None if ok else "sides are not the substitution instances"
    return f"unknown schema {s!r}"


# -- propositional tautologies

def _atoms(f: Formula, out: dict) -> None:
    stack = [f]
    while stack:
        n = stack.pop()
        if isinstance(n, Not):
            stack.append(n.arg)
        elif isinstance(n, _Binary):
            stack.extend((n.right, n.left))
        elif n not in out:
            out[n] = len(out)


def _pvalue(f, val):
    if isinstance(f, Not):
        return not _pvalue(f.arg, val)
    if isinstance(f, _Binary):
        l = _pvalue(f.left, val)
        if isinstance(f, And):
            return l and _pvalue(f.right, val)
        if isinstance(f, Or):
            return l or _pvalue(f.right, val)
        if isinstance(f, Imp):
            return (not l) or _pvalue(f.right, val)
        return l == _pvalue(f.right, val)
    return val[f]


MAX_TAUT_ATOMS = 20


def is_tautology(f: Formula) -> bool:
    """Truth-table check; atoms are the maximal non-propositional subformulas."""
    atoms: dict = {}
    _atoms(f, atoms)
    if len(atoms) > MAX_TAUT_ATOMS:
        raise ValueError(f"{len(atoms)} propositional atoms exceed the tautology limit")
    order = list(atoms)
    for bits in itertools.product((False, True), repeat=len(order)):
        if not _pvalue(f, dict(zip(order, bits))):
            return False
    return True


# -- representation of the diagonal function

@lru_cache(maxsize=8)
def diag_formula(y: int):
    """``D(x0, y)`` from :func:`mmw.arith.diag_graph`; ``y`` must be one of x1..x7."""
    from .arith import diag_graph
    if not 1 <= y <= 7:
        raise ValueError("the value variable of D must be one of x1..x7")
    return diag_graph(0, y)


def diagonal_value(e: Formula) -> Formula:
    """``e[x0 := num(#e)]``: the sentence whose code the diagonal function returns."""
    return substitute(e, 0, C.STANDARD.name_of(e))


def representation_formula(e: Formula, y: int, psi: Optional[Formula] = None) -> Formula:
    """``forall y. (D(num #e, y) <-> y = num #psi)`` with ``psi = e[x0 := num #e]``."""
    if psi is None:
        psi = diagonal_value(e)
    d = substitute(diag_formula(y), 0, C.STANDARD.name_of(e))
    return ForAll(y, Iff(d, Eq(Var(y), C.STANDARD.name_of(psi))))


def _check_repr(f: Formula, j: Justification) -> Optional[str]:
    e = j.formula
    if e is None or free_vars(e) - {0}:
        return "Repr needs a formula in x0"
    if not (isinstance(f, ForAll) and f.bound is None and isinstance(f.body, Iff)
            and isinstance(f.body.right, Eq)):
        return "not a representation formula"
    if not 1 <= f.var <= 7 or f.var != j.var:
        return "value variable out of range or not the declared one"
    rhs = f.body.right.right
    if not isinstance(rhs, (Num, Zero)):
        return "diagonal value must be a numeral"
    # compare codes rather than decoding the (possibly huge) claimed value
    psi = diagonal_value(e)
    got = rhs.value if isinstance(rhs, Num) else 0
    if C.standard_code(psi) != got:
        return "claimed diagonal value is wrong"
    return None if f == representation_formula(e, f.var, psi) else "not the representation of D"


def _check_step(t: Theory, steps, k: int, cache: dict) -> None:
    s = steps[k]
    f, j = s.formula, s.just
    if not isinstance(f, Formula):
        raise _Reject("step is not a formula")
    kind = j.kind

    def ref(i):
        if not isinstance(i, int) or not 1 <= i <= k:
            raise _Reject(f"reference {i} is not an earlier step")
        return steps[i - 1].formula

    if kind == "Axiom":
        if not t.is_axiom(f):
            raise _Reject(f"not an axiom of {t.name}")
    elif kind == "Logic":
        why = check_logic_axiom(f, j)
        if why:
            raise _Reject(why)
    elif kind == "MP":
        if len(j.refs) != 2:
            raise _Reject("MP needs two references")
        a, imp = ref(j.refs[0]), ref(j.refs[1])
        if not (isinstance(imp, Imp) and imp.left == a and imp.right == f):
            raise _Reject("MP premises do not match")
    elif kind == "Gen":
        if len(j.refs) != 1:
            raise _Reject("Gen needs one reference")
        a = ref(j.refs[0])
        if not (isinstance(f, ForAll) and f.bound is None and f.var == j.var and f.body == a):
            raise _Reject("Gen conclusion is not forall v. premise")
    elif kind == "Compute":
        if not is_sentence(f) or not is_delta0(f):
            raise _Reject("Compute needs a closed Δ0 sentence")
        from .semantics import eval_delta0
        if not eval_delta0(f):
            raise _Reject("computed sentence is false")
    elif kind == "Taut":
        try:
            ok = is_tautology(f)
        except ValueError as e:
            raise _Reject(str(e)) from None
        if not ok:
            raise _Reject("not a tautology")
    elif kind == "Repr":
        why = _check_repr(f, j)
        if why:
            raise _Reject(why)
    elif kind == "Macro":
        sub = j.sub
        if not isinstance(sub, ProofObject) or sub.goal != f:
            raise _Reject("macro goal differs from the step")
        r = check(t, sub)
        if not r.accepted:
            raise _Reject(f"macro: {r}")
    else:
        raise _Reject(f"unknown justification {kind!r}")


def check(t: Theory, p: ProofObject) -> CheckResult:
    """Accepted iff every step is justified in ``t`` and the last step is the goal."""
    steps = p.steps
    if not steps:
        return CheckResult(False, 0, "empty proof")
    cache: dict = {}
    for k in range(len(steps)):
        try:
            _check_step(t, steps, k, cache)
        except _Reject as e:
            return CheckResult(False, k + 1, str(e))
        except RecursionError:
            return CheckResult(False, k + 1, "formula too deep to check")
    if steps[-1].formula != p.goal:
        return CheckResult(False, len(steps), "last step is not the goal")
    return ACCEPTED


# --------------------------------------------------------------------------
# building proofs

class ProofBuilder:
    """Accumulates steps; methods return 1-based step indices.

    Identical formulas are proved once and reused.
    """

    def __init__(self):
        self.steps: List[Step] = []
        self.index: Dict[Formula, int] = {}

    def add(self, f: Formula, j: Justification) -> int:
        k = self.index.get(f)
        if k is not None:
            return k
        self.steps.append(Step(f, j))
        k = len(self.steps)
        self.index[f] = k
        return k

    def formula(self, k: int) -> Formula:
        return self.steps[k - 1].formula

    def axiom(self, f):
        return self.add(f, Axiom())

    def logic(self, f, schema, **kw):
        return self.add(f, LogicAxiom(schema, **kw))

    def compute(self, f):
        return self.add(f, NumeralComputation())

    def taut(self, f):
        return self.add(f, Tautology())

    def mp(self, i: int, j: int) -> int:
        imp = self.formula(j)
        return self.add(imp.right, ModusPonens(i, j))

    def gen(self, i: int, v: int) -> int:
        return self.add(ForAll(v, self.formula(i)), Generalization(i, v))

    def inst(self, i: int, t: Term) -> int:
        """From ``forall v. a`` (step ``i``) derive ``a[v:=t]``."""
        fa = self.formula(i)
        ax = self.logic(Imp(fa, substitute(fa.body, fa.var, t)), "INST", term=t)
        return self.mp(i, ax)

    def macro(self, sub: "ProofObject") -> int:
        return self.add(sub.goal, MacroRef(sub))

    def chain(self, premises: Sequence[int], goal: Formula) -> int:
        """Derive ``goal`` when ``P1 -> (P2 -> ... -> goal)`` is a tautology."""
        f = goal
        for k in reversed(premises):
            f = Imp(self.formula(k), f)
        cur = self.taut(f)
        for k in premises:
            cur = self.mp(k, cur)
        return cur

    def exists_mono(self, v: int, imp_step: int) -> int:
        """From ``a -> c`` derive ``(exists v. a) -> (exists v. c)``."""
        a_c = self.formula(imp_step)
        a, c = a_c.left, a_c.right
        contra = self.chain([imp_step], Imp(Not(c), Not(a)))
        g = self.gen(contra, v)
        dist = self.logic(Imp(ForAll(v, Imp(Not(c), Not(a))),
                              Imp(ForAll(v, Not(c)), ForAll(v, Not(a)))), "DIST")
        fa = self.mp(g, dist)
        ea = self.logic(Iff(Exists(v, a), Not(ForAll(v, Not(a)))), "EXDEF")
        ec = self.logic(Iff(Exists(v, c), Not(ForAll(v, Not(c)))), "EXDEF")
        return self.chain([fa, ea, ec], Imp(Exists(v, a), Exists(v, c)))

    def build(self, goal: Optional[Formula] = None) -> ProofObject:
        if goal is None:
            goal = self.steps[-1].formula
        k = self.index.get(goal)
        if k is None:
            raise ValueError("goal was never derived")
        # steps only cite earlier ones, so the prefix up to the goal is a proof
        return ProofObject(goal, tuple(self.steps[:k]))


# --------------------------------------------------------------------------
# numeral facts and search

class FalseEquation(ValueError):
    pass


def compute_proof(t: Theory, f: Formula) -> ProofObject:
    """One-step proof of a closed true Δ0 sentence."""
    if not t.extends(Q):
        raise TheoryError(f"{t.name} does not extend Q")
    if not is_sentence(f) or not is_delta0(f):
        raise ValueError("expected a closed Δ0 sentence")
    from .semantics import eval_delta0
    if not eval_delta0(f):
        raise FalseEquation(f"false in ℕ: {to_text(f)[:120]}")
    return ProofObject(f, (Step(f, NumeralComputation()),))


def numeral_proof(t: Theory, eq: Formula) -> ProofObject:
    """Checked proof of a closed true equation between terms."""
    if not isinstance(eq, Eq):
        raise ValueError("numeral_proof expects an equation")
    return compute_proof(t, eq)


@dataclass
class SearchStats:
    candidates: int = 0
    pool: int = 0
    exhausted: bool = False


def _closed_terms(f: Formula, out: set) -> None:
    stack = [f]
    while stack:
        n = stack.pop()
        if isinstance(n, Term):
            if not free_vars(n):
                out.add(n)
            if isinstance(n, Succ):
                stack.append(n.arg)
            elif isinstance(n, (Add, Mul)):
                stack.extend((n.left, n.right))
        elif isinstance(n, Eq):
            stack.extend((n.left, n.right))
        elif isinstance(n, Not):
            stack.append(n.arg)
        elif isinstance(n, _Binary):
            stack.extend((n.left, n.right))
        elif isinstance(n, _Quant):
            stack.append(n.body)
            if n.bound is not None:
                stack.append(n.bound)


def search(t: Theory, goal: Formula, budget: int = 2000, seed: int = 0,
           stats: Optional[SearchStats] = None) -> Optional[ProofObject]:
    """Look for a short proof of ``goal``; None means nothing found within ``budget``.

    Tries, in order: axiom, Δ0 computation, tautology, then tautological
    consequence of up to three premises drawn from the finite axioms, their
    instances at closed terms of the goal, and computed Δ0 literals.
    """
    if not is_sentence(goal):
        raise ValueError("search needs a sentence")
    st = stats if stats is not None else SearchStats()
    b = ProofBuilder()
    if t.is_axiom(goal):
        b.axiom(goal)
        return b.build(goal)
    from .semantics import eval_delta0
    if is_delta0(goal) and t.extends(Q):
        st.candidates += 1
        if eval_delta0(goal):
            b.compute(goal)
            return b.build(goal)
    st.candidates += 1
    if _safe_taut(goal):
        b.taut(goal)
        return b.build(goal)

    # premise pool: (formula, how to prove it)
    pool: List[Tuple[Formula, tuple]] = []
    seen = set()

    def offer(f, how):
        if f not in seen:
            seen.add(f)
            pool.append((f, how))

    terms: set = set()
    _closed_terms(goal, terms)
    terms.add(Zero())
    terms = sorted(terms, key=lambda x: (len(to_text(x)), to_text(x)))[:6]
    for ax in t.finite_axioms:
        offer(ax, ("axiom",))
    for ax in t.finite_axioms:
        _instances(ax, terms, offer, depth=2)
    atoms: dict = {}
    _atoms(goal, atoms)
    for ax in t.finite_axioms:
        _atoms(ax, atoms)
    if t.extends(Q):
        for a in atoms:
            if is_sentence(a) and is_delta0(a):
                offer(a if eval_delta0(a) else Not(a), ("compute",))
    st.pool = len(pool)
    rng = random.Random(seed)
    order = list(range(len(pool)))
    rng.shuffle(order)
    how_of = dict(pool)
    for r in (1, 2, 3):
        for combo in itertools.combinations(order, r):
            if st.candidates >= budget:
                st.exhausted = True
                return None
            st.candidates += 1
            f = goal
            for i in reversed(combo):
                f = Imp(pool[i][0], f)
            if _safe_taut(f):
                ks = [_prove_premise(b, pool[i][0], how_of) for i in combo]
                b.chain(ks, goal)
                return b.build(goal)
    return None


def _safe_taut(f) -> bool:
    try:
        return is_tautology(f)
    except ValueError:
        return False


def _instances(ax, terms, offer, depth):
    if depth == 0 or not (isinstance(ax, ForAll) and ax.bound is None):
        return
    for tm in terms:
        inst = substitute(ax.body, ax.var, tm)
        offer(inst, ("inst", ax, tm))
        _instances(inst, terms, offer, depth - 1)


def _prove_premise(b: ProofBuilder, f, how_of) -> int:
    if f in b.index:
        return b.index[f]
    how = how_of[f]
    if how[0] == "axiom":
        return b.axiom(f)
    if how[0] == "compute":
        return b.compute(f)
    _, src, tm = how
    return b.inst(_prove_premise(b, src, how_of), tm)
