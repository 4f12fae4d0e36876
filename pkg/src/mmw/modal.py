"""Provability logic GL.

Two independent engines decide GL validity:

* :func:`gl_valid`: backward proof search in a sequent calculus with the
  Löb rule ``□Γ, Γ, □A => A  /  □Γ => □A``; a failed search yields a finite
  transitive irreflexive tree countermodel;
* :func:`model_valid`: closure over the *types* (subformula truth vectors)
  realizable at roots of finite transitive irreflexive trees.  This covers
  every finite tree without enumerating them one by one.

Formulas are nested tuples: ``("p", i)``, ``("bot",)``, ``("~", a)``,
``("&", a, b)``, ``("|", a, b)``, ``("->", a, b)``, ``("<->", a, b)``,
``("[]", a)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, FrozenSet, List, Optional, Tuple

BOT = ("bot",)
TOP = ("~", BOT)
_BIN = ("&", "|", "->", "<->")


def p(i: int):
    return ("p", i)


def box(a):
    return ("[]", a)


def neg(a):
    return ("~", a)


def imp(a, b):
    return ("->", a, b)


def conj(a, b):
    return ("&", a, b)


def disj(a, b):
    return ("|", a, b)


def iff(a, b):
    return ("<->", a, b)


# --------------------------------------------------------------------------
# text

class ModalParseError(ValueError):
    def __init__(self, message, pos):
        self.pos = pos
        super().__init__(f"{message} at position {pos}")


_TOK = re.compile(r"\s*(p\d+|bot|<->|->|\[\]|[~&|()])")


def parse_modal(text: str):
    toks, pos = [], 0
    while True:
        m = _TOK.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ModalParseError(f"unexpected {text[pos:].strip()[0]!r}", pos)
            break
        toks.append((m.group(1), m.start(1)))
        pos = m.end()
    i = 0

    def take():
        nonlocal i
        if i >= len(toks):
            raise ModalParseError("unexpected end of input", len(text))
        i += 1
        return toks[i - 1]

    def formula():
        tok, at = take()
        if tok.startswith("p"):
            return ("p", int(tok[1:]))
        if tok == "bot":
            return BOT
        if tok == "~":
            return ("~", formula())
        if tok == "[]":
            return ("[]", formula())
        if tok == "(":
            left = formula()
            op, at2 = take()
            if op not in _BIN:
                raise ModalParseError(f"expected a connective, found {op!r}", at2)
            right = formula()
            close, at3 = take()
            if close != ")":
                raise ModalParseError(f"expected ')', found {close!r}", at3)
            return (op, left, right)
        raise ModalParseError(f"unexpected {tok!r}", at)

    f = formula()
    if i < len(toks) and toks[i][0] in _BIN:
        # an unparenthesized top-level connective
        op, _ = take()
        f = (op, f, formula())
    if i != len(toks):
        raise ModalParseError("trailing input", toks[i][1])
    return f


def show(f) -> str:
    k = f[0]
    if k == "p":
        return f"p{f[1]}"
    if k == "bot":
        return "bot"
    if k == "~":
        return "~" + show(f[1])
    if k == "[]":
        return "[]" + show(f[1])
    return f"({show(f[1])} {k} {show(f[2])})"


def size(f) -> int:
    return 1 + sum(size(a) for a in f[1:] if isinstance(a, tuple))


def atoms(f) -> set:
    if f[0] == "p":
        return {f[1]}
    out = set()
    for a in f[1:]:
        if isinstance(a, tuple):
            out |= atoms(a)
    return out


def subformulas(f) -> list:
    """Distinct subformulas, children before parents."""
    seen: dict = {}

    def go(g):
        if g in seen:
            return
        for a in g[1:]:
            if isinstance(a, tuple):
                go(a)
        seen[g] = None

    go(f)
    return list(seen)


def substitute(f, i: int, g):
    if f[0] == "p":
        return g if f[1] == i else f
    if f[0] == "bot":
        return f
    return (f[0],) + tuple(substitute(a, i, g) for a in f[1:])


def modalized(f, i: int, under_box: bool = False) -> bool:
    """Every occurrence of ``p_i`` lies under a box."""
    if f[0] == "p":
        return f[1] != i or under_box
    if f[0] == "bot":
        return True
    inner = under_box or f[0] == "[]"
    return all(modalized(a, i, inner) for a in f[1:])


# --------------------------------------------------------------------------
# Kripke models

@dataclass(frozen=True)
class Model:
    """Finite model: ``succ[w]`` lists the worlds ``w`` sees; ``val[w]`` its true atoms."""

    succ: Tuple[Tuple[int, ...], ...]
    val: Tuple[FrozenSet[int], ...]
    root: int = 0

    def is_transitive_irreflexive(self) -> bool:
        for w, ss in enumerate(self.succ):
            if w in ss:
                return False
            for v in ss:
                if not set(self.succ[v]) <= set(ss):
                    return False
        return True

    def forces(self, w: int, f) -> bool:
        k = f[0]
        if k == "p":
            return f[1] in self.val[w]
        if k == "bot":
            return False
        if k == "~":
            return not self.forces(w, f[1])
        if k == "&":
            return self.forces(w, f[1]) and self.forces(w, f[2])
        if k == "|":
            return self.forces(w, f[1]) or self.forces(w, f[2])
        if k == "->":
            return (not self.forces(w, f[1])) or self.forces(w, f[2])
        if k == "<->":
            return self.forces(w, f[1]) == self.forces(w, f[2])
        if k == "[]":
            return all(self.forces(v, f[1]) for v in self.succ[w])
        raise ValueError(f"not a modal formula: {f!r}")

    def to_json(self) -> dict:
        return {"root": self.root, "succ": [list(s) for s in self.succ],
                "val": [sorted(v) for v in self.val]}

    @classmethod
    def from_json(cls, d: dict) -> "Model":
        return cls(tuple(tuple(s) for s in d["succ"]), tuple(frozenset(v) for v in d["val"]), d["root"])


# --------------------------------------------------------------------------
# sequent proof search

@dataclass(frozen=True)
class Derivation:
    """A node of a sequent derivation: ``rule`` applied to ``ante => succ``."""

    rule: str
    ante: FrozenSet
    succ: FrozenSet
    premises: Tuple["Derivation", ...] = ()
    principal: Optional[tuple] = None

    def size(self) -> int:
        return 1 + sum(d.size() for d in self.premises)

    def to_json(self) -> dict:
        return {"rule": self.rule, "ante": sorted(map(show, self.ante)),
                "succ": sorted(map(show, self.succ)),
                "principal": show(self.principal) if self.principal else None,
                "premises": [d.to_json() for d in self.premises]}

    @classmethod
    def from_json(cls, d: dict) -> "Derivation":
        return cls(d["rule"], frozenset(map(parse_modal, d["ante"])), frozenset(map(parse_modal, d["succ"])),
                   tuple(cls.from_json(x) for x in d["premises"]),
                   parse_modal(d["principal"]) if d["principal"] else None)


@dataclass(frozen=True)
class Valid:
    derivation: Derivation

    @property
    def valid(self):
        return True


@dataclass(frozen=True)
class Invalid:
    countermodel: Model

    @property
    def valid(self):
        return False


def _decompose(ante: FrozenSet, succ: FrozenSet):
    """First non-atomic, non-boxed formula on either side, as (side, formula)."""
    # ordered by text so derivations do not depend on hash seeds
    for side, fs in (("L", ante), ("R", succ)):
        f = min((g for g in fs if g[0] not in ("p", "[]", "bot")), key=show, default=None)
        if f is not None:
            return side, f
    return None


_memo: Dict[tuple, object] = {}


def _prove(ante: FrozenSet, succ: FrozenSet):
    """A Derivation, or a countermodel-builder result ``("cm", worlds)``."""
    key = (ante, succ)
    hit = _memo.get(key)
    if hit is not None:
        return hit
    res = _prove_uncached(ante, succ)
    if len(_memo) > 2_000_000:
        _memo.clear()
    _memo[key] = res
    return res


def _prove_uncached(ante, succ):
    if BOT in ante:
        return Derivation("botL", ante, succ, (), BOT)
    common = ante & succ
    if common:
        return Derivation("ax", ante, succ, (), next(iter(sorted(common, key=show))))
    d = _decompose(ante, succ)
    if d is not None:
        side, f = d
        k = f[0]
        if side == "L":
            rest = ante - {f}
            if k == "~":
                prem = [(rest, succ | {f[1]})]
            elif k == "&":
                prem = [(rest | {f[1], f[2]}, succ)]
            elif k == "|":
                prem = [(rest | {f[1]}, succ), (rest | {f[2]}, succ)]
            elif k == "->":
                prem = [(rest, succ | {f[1]}), (rest | {f[2]}, succ)]
            else:  # <->
                prem = [(rest | {f[1], f[2]}, succ), (rest, succ | {f[1], f[2]})]
        else:
            rest = succ - {f}
            if k == "~":
                prem = [(ante | {f[1]}, rest)]
            elif k == "&":
                prem = [(ante, rest | {f[1]}), (ante, rest | {f[2]})]
            elif k == "|":
                prem = [(ante, rest | {f[1], f[2]})]
            elif k == "->":
                prem = [(ante | {f[1]}, rest | {f[2]})]
            else:
                prem = [(ante | {f[1]}, rest | {f[2]}), (ante | {f[2]}, rest | {f[1]})]
        subs = []
        for a, s in prem:
            r = _prove(frozenset(a), frozenset(s))
            if not isinstance(r, Derivation):
                return r
            subs.append(r)
        return Derivation(k + side, ante, succ, tuple(subs), f)
    # saturated: atoms and boxes only; try the Löb rule on each boxed succedent
    boxed = frozenset(f for f in ante if f[0] == "[]")
    unboxed = frozenset(f[1] for f in boxed)
    children = []
    for f in sorted((g for g in succ if g[0] == "[]"), key=show):
        if f in ante:
            continue
        r = _prove(boxed | unboxed | {f}, frozenset({f[1]}))
        if isinstance(r, Derivation):
            return Derivation("GL", ante, succ, (r,), f)
        children.append(r)
    true_atoms = frozenset(f[1] for f in ante if f[0] == "p")
    return ("cm", true_atoms, tuple(children))


def _build_model(cm) -> Model:
    succ: List[list] = []
    val: List[frozenset] = []

    def place(node) -> List[int]:
        """Returns the worlds of the subtree, root first."""
        _, true_atoms, kids = node
        w = len(succ)
        succ.append([])
        val.append(true_atoms)
        below = []
        for k in kids:
            below.extend(place(k))
        succ[w] = sorted(below)
        return [w] + below

    place(cm)
    return Model(tuple(tuple(s) for s in succ), tuple(val), 0)


def gl_valid(m) -> "Valid | Invalid":
    """Decide GL validity with evidence (derivation or countermodel)."""
    r = _prove(frozenset(), frozenset({m}))
    if isinstance(r, Derivation):
        return Valid(r)
    model = _build_model(r)
    return Invalid(model)


def gl_proves(m) -> bool:
    return isinstance(_prove(frozenset(), frozenset({m})), Derivation)


# -- replay

def check_derivation(d: Derivation) -> bool:
    """Re-verify every rule application of a derivation."""
    stack = [d]
    while stack:
        n = stack.pop()
        if not _rule_ok(n):
            return False
        stack.extend(n.premises)
    return True


def _rule_ok(n: Derivation) -> bool:
    A, S, f, P = n.ante, n.succ, n.principal, n.premises
    if n.rule == "ax":
        return f in A and f in S and not P
    if n.rule == "botL":
        return BOT in A and not P
    if n.rule == "GL":
        if f not in S or f[0] != "[]" or len(P) != 1:
            return False
        boxed = frozenset(g for g in A if g[0] == "[]")
        want_a = boxed | frozenset(g[1] for g in boxed) | {f}
        # weakening allowed: premise antecedent within the allowed set
        return P[0].ante <= want_a and P[0].succ <= {f[1]}
    if f is None or len(n.rule) < 2:
        return False
    k, side = n.rule[:-1], n.rule[-1]
    if f[0] != k:
        return False
    if side == "L":
        if f not in A:
            return False
        rest = A - {f}
        a, b = f[1], f[-1]
        want = {
            "~": [(rest, S | {a})],
            "&": [(rest | {a, b}, S)],
            "|": [(rest | {a}, S), (rest | {b}, S)],
            "->": [(rest, S | {a}), (rest | {b}, S)],
            "<->": [(rest | {a, b}, S), (rest, S | {a, b})],
        }.get(k)
    else:
        if f not in S:
            return False
        rest = S - {f}
        a, b = f[1], f[-1]
        want = {
            "~": [(A | {a}, rest)],
            "&": [(A, rest | {a}), (A, rest | {b})],
            "|": [(A, rest | {a, b})],
            "->": [(A | {a}, rest | {b})],
            "<->": [(A | {a}, rest | {b}), (A | {b}, rest | {a})],
        }.get(k)
    if want is None or len(want) != len(P):
        return False
    return all(p.ante == frozenset(a) and p.succ == frozenset(s) for p, (a, s) in zip(P, want))


def verify(result, m) -> bool:
    """Replay a :func:`gl_valid` verdict for ``m``."""
    if isinstance(result, Valid):
        d = result.derivation
        return d.ante == frozenset() and d.succ == frozenset({m}) and check_derivation(d)
    cm = result.countermodel
    return cm.is_transitive_irreflexive() and not cm.forces(cm.root, m)


# --------------------------------------------------------------------------
# the model oracle

def model_valid(m) -> bool:
    """Validity over all finite transitive irreflexive trees, via realizable root types."""
    subs = subformulas(m)
    idx = {f: i for i, f in enumerate(subs)}
    boxes = [i for i, f in enumerate(subs) if f[0] == "[]"]
    at = sorted(atoms(m))

    def root_type(valuation, box_ok):
        # box_ok[j]: every proper descendant satisfies the body of boxes[j]
        vals = [False] * len(subs)
        bj = {b: j for j, b in enumerate(boxes)}
        for i, f in enumerate(subs):
            k = f[0]
            if k == "p":
                vals[i] = f[1] in valuation
            elif k == "bot":
                vals[i] = False
            elif k == "~":
                vals[i] = not vals[idx[f[1]]]
            elif k == "[]":
                vals[i] = box_ok[bj[i]]
            else:
                a, b = vals[idx[f[1]]], vals[idx[f[2]]]
                vals[i] = {"&": a and b, "|": a or b, "->": (not a) or b, "<->": a == b}[k]
        return tuple(vals)

    def contribution(t):
        # what a child of type t tells its parent about each box: body holds there and below
        return tuple(t[idx[subs[b][1]]] and t[b] for b in boxes)

    valuations = [frozenset(a for a, bit in zip(at, bits) if bit)
                  for bits in _bitvectors(len(at))]
    all_true = tuple(True for _ in boxes)
    types = {root_type(v, all_true) for v in valuations}
    while True:
        contribs = {contribution(t) for t in types}
        meets = set(contribs)
        frontier = set(contribs)
        while frontier:
            new = set()
            for a in frontier:
                for b in contribs:
                    c = tuple(x and y for x, y in zip(a, b))
                    if c not in meets:
                        new.add(c)
            meets |= new
            frontier = new
        meets.add(all_true)
        grown = types | {root_type(v, bv) for v in valuations for bv in meets}
        if grown == types:
            break
        types = grown
    top = idx[m]
    return all(t[top] for t in types)


def _bitvectors(n):
    for k in range(1 << n):
        yield tuple(bool(k >> i & 1) for i in range(n))


# --------------------------------------------------------------------------
# fixed points

class NotModalized(ValueError):
    pass


def simplify(f):
    """Constant folding with ⊤ = ~bot; keeps GL-equivalence."""
    k = f[0]
    if k in ("p", "bot"):
        return f
    args = [simplify(a) for a in f[1:]]
    if k == "~":
        a = args[0]
        if a[0] == "~":
            return a[1]
        return ("~", a)
    if k == "[]":
        return TOP if args[0] == TOP else ("[]", args[0])
    a, b = args
    if k == "&":
        if a == BOT or b == BOT:
            return BOT
        if a == TOP:
            return b
        if b == TOP:
            return a
    if k == "|":
        if a == TOP or b == TOP:
            return TOP
        if a == BOT:
            return b
        if b == BOT:
            return a
    if k == "->":
        if a == BOT or b == TOP:
            return TOP
        if a == TOP:
            return b
        if b == BOT:
            return simplify(("~", a))
    if k == "<->":
        if a == TOP:
            return b
        if b == TOP:
            return a
        if a == BOT:
            return simplify(("~", b))
        if b == BOT:
            return simplify(("~", a))
    return (k, a, b)


def _outer_boxes(f, i):
    """Outermost boxed subformulas containing ``p_i``."""
    if f[0] == "[]":
        return [f] if i in atoms(f) else []
    out = []
    for a in f[1:]:
        if isinstance(a, tuple):
            for b in _outer_boxes(a, i):
                if b not in out:
                    out.append(b)
    return out


def _replace(f, table):
    if f in table:
        return table[f]
    if f[0] in ("p", "bot"):
        return f
    return (f[0],) + tuple(_replace(a, table) for a in f[1:])


def _fixed_point(a, i):
    boxes = _outer_boxes(a, i)
    if not boxes:
        return a
    hs = []
    for j, bx in enumerate(boxes):
        a_j = _replace(a, {bx: TOP})
        hs.append(_fixed_point(a_j, i))
    table = {bx: ("[]", substitute(bx[1], i, h)) for bx, h in zip(boxes, hs)}
    return _replace(a, table)


def fixed_point(delta, i: int = 0):
    """p_i-free ``h`` with ``GL |- h <-> delta[p_i := h]`` (de Jongh–Sambin, Boolos's recursion)."""
    if not modalized(delta, i):
        raise NotModalized(f"p{i} is not modalized in {show(delta)}")
    h = simplify(_fixed_point(delta, i))
    if i in atoms(h) or not gl_proves(iff(h, substitute(delta, i, h))):
        raise AssertionError("fixed point failed verification")  # pragma: no cover
    return h


# --------------------------------------------------------------------------
# arithmetical realization

class RealizationError(ValueError):
    pass


@dataclass
class Realization:
    atoms: Dict[int, object]   # atom index -> arithmetic Sentence
    theory: object

    def translate(self, f):
        from .provability import build_pr
        from .coding import STANDARD
        from .syntax import And, BOT as ABOT, Iff, Imp, Not, Or
        pp = build_pr(self.theory)
        memo: dict = {}

        def go(g):
            hit = memo.get(g)
            if hit is not None:
                return hit
            k = g[0]
            if k == "p":
                if g[1] not in self.atoms:
                    raise RealizationError(f"no sentence for p{g[1]}")
                r = self.atoms[g[1]]
            elif k == "bot":
                r = ABOT
            elif k == "~":
                r = Not(go(g[1]))
            elif k == "[]":
                r = pp.pr_of(STANDARD.name_of(go(g[1])))
            else:
                cls = {"&": And, "|": Or, "->": Imp, "<->": Iff}[k]
                r = cls(go(g[1]), go(g[2]))
            memo[g] = r
            return r

        return go(f)


def realize(m, r: Realization, label: str = "", derivation: Optional[Derivation] = None):
    """Claim ``T |- m*`` for a GL theorem ``m``; rests on the derivability conditions and GL soundness.

    A supplied ``derivation`` must check; otherwise one is searched for.
    """
    from . import assumptions as A
    from .claims import Claim, Evidence, Leaf, require_checked
    from .coding import digest

    missing = atoms(m) - set(r.atoms)
    if missing:
        raise RealizationError("realization is not total: " + ", ".join(f"p{i}" for i in sorted(missing)))
    if derivation is None:
        res = gl_valid(m)
        if not isinstance(res, Valid):
            raise ValueError(f"{show(m)} is not a GL theorem")
        derivation = res.derivation
    sentence = r.translate(m)
    gl = require_checked(Evidence("gl", {"formula": show(m), "derivation": derivation}))
    real = require_checked(Evidence("realization", {"theory": r.theory, "modal": show(m),
                                                    "atoms": {str(k): v for k, v in r.atoms.items()},
                                                    "sentence": sentence}))
    return Claim("Provable", {"theory": r.theory.name, "modal": show(m), "label": label,
                              "formula": digest(sentence)}, True,
                 (gl, real, Leaf(A.DERIVABILITY), Leaf(A.GL_SOUNDNESS)))
