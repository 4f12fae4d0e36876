"""Terms and formulas of first-order arithmetic over {0, S, +, *, =}.

Nodes are immutable and compared structurally. Canonical numerals are
binary-structured (``num(2k) = (S(S(0)) * num(k))``, ``num(2k+1) = S(num(2k))``)
and are stored compactly as :class:`Num` nodes; the constructors of
:class:`Succ` and :class:`Mul` fold any subtree that spells out a canonical
numeral into a ``Num``, so structural equality of the compact form coincides
with structural equality of the fully expanded trees.
"""

from __future__ import annotations

import re
from typing import Callable, Iterable, Iterator, Optional, Union

__all__ = [
    "Term", "Zero", "Succ", "Add", "Mul", "Var", "Num",
    "Formula", "Eq", "Not", "And", "Or", "Imp", "Iff", "ForAll", "Exists",
    "UnaryPredicate", "ParseError", "SyntaxError_",
    "numeral", "parse", "parse_term", "to_text", "substitute", "free_vars",
    "all_vars", "is_sentence", "apply", "size", "unfold", "lt_formula",
    "unsugar", "conj", "disj", "big_and", "big_or", "iff", "imp",
    "TOP", "BOT",
]


class Node:
    __slots__ = ("_hash", "_fv")
    _fields: tuple = ()

    def __init__(self, *args):
        for name, value in zip(self._fields, args):
            object.__setattr__(self, name, value)
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_fv", None)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other):
            return False
        return all(getattr(self, f) == getattr(other, f) for f in self._fields)

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((type(self).__name__,) + tuple(getattr(self, f) for f in self._fields))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        args = ", ".join(repr(getattr(self, f)) for f in self._fields)
        return f"{type(self).__name__}({args})"

    def __reduce__(self):
        return (type(self), tuple(getattr(self, f) for f in self._fields))

    def __str__(self):
        return to_text(self)


# --------------------------------------------------------------------------
# terms

class Term(Node):
    __slots__ = ()


class Zero(Term):
    __slots__ = ()


class Var(Term):
    __slots__ = ("index",)
    _fields = ("index",)

    def __init__(self, index: int):
        if not isinstance(index, int) or index < 0:
            raise ValueError(f"variable index must be a natural number, got {index!r}")
        super().__init__(index)


class Num(Term):
    """Canonical numeral for ``value >= 1`` (``num(0)`` is :class:`Zero`)."""

    __slots__ = ("value",)
    _fields = ("value",)

    def __init__(self, value: int):
        if value < 1:
            raise ValueError("Num holds values >= 1; use Zero() for 0")
        super().__init__(value)


class Succ(Term):
    __slots__ = ("arg",)
    _fields = ("arg",)

    def __new__(cls, arg):
        if isinstance(arg, Zero):
            return Num(1)
        if isinstance(arg, Num):
            v = arg.value
            if v == 1 or v % 2 == 0:
                return Num(v + 1)
        return object.__new__(cls)

    def __init__(self, arg: Term):
        super().__init__(arg)


class Add(Term):
    __slots__ = ("left", "right")
    _fields = ("left", "right")

    def __init__(self, left: Term, right: Term):
        super().__init__(left, right)


class Mul(Term):
    __slots__ = ("left", "right")
    _fields = ("left", "right")

    def __new__(cls, left, right):
        if isinstance(left, Num) and left.value == 2 and isinstance(right, Num) and right.value >= 2:
            return Num(2 * right.value)
        return object.__new__(cls)

    def __init__(self, left: Term, right: Term):
        super().__init__(left, right)


def numeral(n: int) -> Term:
    """The canonical (efficient) numeral for ``n``."""
    if n < 0:
        raise ValueError("numerals denote natural numbers")
    return Zero() if n == 0 else Num(n)


def unfold(t: Term) -> Term:
    """One level of a :class:`Num`'s expansion, returned as a view.

    The view's children are themselves canonical, so walking views level by
    level visits exactly the nodes of the expanded tree.
    """
    if not isinstance(t, Num):
        return t
    v = t.value
    if v == 1:
        return _View(Succ, (Zero(),))
    if v == 2 or v % 2 == 1:
        return _View(Succ, (numeral(v - 1),))
    return _View(Mul, (Num(2), Num(v // 2)))


class _View:
    """Non-canonical stand-in for an unfolded numeral node."""

    __slots__ = ("kind", "children")

    def __init__(self, kind, children):
        self.kind = kind
        self.children = children


def term_kind(t) -> type:
    return t.kind if isinstance(t, _View) else type(t)


def term_children(t) -> tuple:
    if isinstance(t, _View):
        return t.children
    if isinstance(t, Succ):
        return (t.arg,)
    if isinstance(t, (Add, Mul)):
        return (t.left, t.right)
    return ()


def _num_size(n: int) -> int:
    # node count of the expanded numeral tree; equals its token count
    from .coding import numeral_length
    return numeral_length(n)


# --------------------------------------------------------------------------
# formulas

class Formula(Node):
    __slots__ = ()


class Eq(Formula):
    __slots__ = ("left", "right")
    _fields = ("left", "right")

    def __init__(self, left: Term, right: Term):
        super().__init__(left, right)


class Not(Formula):
    __slots__ = ("arg",)
    _fields = ("arg",)

    def __init__(self, arg: Formula):
        super().__init__(arg)


class _Binary(Formula):
    __slots__ = ("left", "right")
    _fields = ("left", "right")

    def __init__(self, left: Formula, right: Formula):
        super().__init__(left, right)


class And(_Binary):
    __slots__ = ()


class Or(_Binary):
    __slots__ = ()


class Imp(_Binary):
    __slots__ = ()


class Iff(_Binary):
    __slots__ = ()


class _Quant(Formula):
    """Quantifier node; a non-None ``bound`` marks the bounded form ``Q x < bound``."""

    __slots__ = ("var", "body", "bound")
    _fields = ("var", "body", "bound")

    def __init__(self, var: int, body: Formula, bound: Optional[Term] = None):
        if not isinstance(var, int) or var < 0:
            raise ValueError(f"bad quantified variable {var!r}")
        super().__init__(var, body, bound)


class ForAll(_Quant):
    __slots__ = ()


class Exists(_Quant):
    __slots__ = ()


BINARY_OPS = {And: "&", Or: "|", Imp: "->", Iff: "<->"}

BOT = Eq(Zero(), Num(1))
TOP = Eq(Zero(), Zero())


def conj(a, b):
    return And(a, b)


def disj(a, b):
    return Or(a, b)


def imp(a, b):
    return Imp(a, b)


def iff(a, b):
    return Iff(a, b)


def _balanced(op, items):
    items = list(items)
    if not items:
        raise ValueError("empty connective chain")
    while len(items) > 1:
        nxt = [op(items[i], items[i + 1]) for i in range(0, len(items) - 1, 2)]
        if len(items) % 2:
            nxt.append(items[-1])
        items = nxt
    return items[0]


def big_and(items: Iterable[Formula]) -> Formula:
    """Balanced conjunction (keeps nesting depth logarithmic)."""
    return _balanced(And, items)


def big_or(items: Iterable[Formula]) -> Formula:
    return _balanced(Or, items)


class UnaryPredicate:
    """A formula with one designated hole variable."""

    __slots__ = ("body", "hole")

    def __init__(self, body: Formula, hole: int = 0):
        extra = free_vars(body) - {hole}
        if extra:
            raise ValueError(f"predicate has free variables besides x{hole}: "
                             + ", ".join(f"x{v}" for v in sorted(extra)))
        self.body = body
        self.hole = hole

    def __call__(self, t: Term) -> Formula:
        return apply(self, t)

    def __eq__(self, other):
        return isinstance(other, UnaryPredicate) and self.hole == other.hole and self.body == other.body

    def __hash__(self):
        return hash((self.hole, self.body))

    def __repr__(self):
        return f"UnaryPredicate({to_text(self.body)!r}, hole={self.hole})"


def apply(p: UnaryPredicate, t: Term) -> Formula:
    return substitute(p.body, p.hole, t)


# --------------------------------------------------------------------------
# variables and substitution

def free_vars(x) -> frozenset:
    fv = x._fv
    if fv is not None:
        return fv
    if isinstance(x, Var):
        fv = frozenset((x.index,))
    elif isinstance(x, (Zero, Num)):
        fv = frozenset()
    elif isinstance(x, Succ):
        fv = free_vars(x.arg)
    elif isinstance(x, (Add, Mul, Eq, _Binary)):
        fv = free_vars(x.left) | free_vars(x.right)
    elif isinstance(x, Not):
        fv = free_vars(x.arg)
    elif isinstance(x, _Quant):
        fv = free_vars(x.body) - {x.var}
        if x.bound is not None:
            fv = fv | free_vars(x.bound)
    else:
        raise TypeError(f"not a term or formula: {x!r}")
    object.__setattr__(x, "_fv", fv)
    return fv


def all_vars(x) -> set:
    """Every variable index occurring in ``x``, free or bound."""
    out: set = set()
    stack = [x]
    while stack:
        n = stack.pop()
        if isinstance(n, Var):
            out.add(n.index)
        elif isinstance(n, Succ):
            stack.append(n.arg)
        elif isinstance(n, (Add, Mul, Eq, _Binary)):
            stack.extend((n.left, n.right))
        elif isinstance(n, Not):
            stack.append(n.arg)
        elif isinstance(n, _Quant):
            out.add(n.var)
            stack.append(n.body)
            if n.bound is not None:
                stack.append(n.bound)
    return out


def is_sentence(f: Formula) -> bool:
    return isinstance(f, Formula) and not free_vars(f)


def _subst_term(t: Term, v: int, s: Term) -> Term:
    if v not in free_vars(t):
        return t
    if isinstance(t, Var):
        return s
    if isinstance(t, Succ):
        return Succ(_subst_term(t.arg, v, s))
    if isinstance(t, Add):
        return Add(_subst_term(t.left, v, s), _subst_term(t.right, v, s))
    if isinstance(t, Mul):
        return Mul(_subst_term(t.left, v, s), _subst_term(t.right, v, s))
    raise TypeError(f"not a term: {t!r}")


def fresh_var(avoid: Iterable[int]) -> int:
    avoid = set(avoid)
    i = 0
    while i in avoid:
        i += 1
    return i


def substitute(f, v: int, t: Term):
    """Capture-avoiding substitution of ``t`` for the free occurrences of ``x{v}``."""
    if v not in free_vars(f):
        return f
    if isinstance(f, Term):
        return _subst_term(f, v, t)
    if isinstance(f, Eq):
        return Eq(_subst_term(f.left, v, t), _subst_term(f.right, v, t))
    if isinstance(f, Not):
        return Not(substitute(f.arg, v, t))
    if isinstance(f, _Binary):
        return type(f)(substitute(f.left, v, t), substitute(f.right, v, t))
    if isinstance(f, _Quant):
        bound = None if f.bound is None else _subst_term(f.bound, v, t)
        body, y = f.body, f.var
        if y != v and v in free_vars(body):
            tv = free_vars(t)
            if y in tv:
                z = fresh_var(tv | free_vars(body) | {v})
                body = substitute(body, y, Var(z))
                y = z
            body = substitute(body, v, t)
        return type(f)(y, body, bound)
    raise TypeError(f"not a formula: {f!r}")


def size(x) -> int:
    """Node count of the fully expanded tree (numerals expanded)."""
    total = 0
    stack = [x]
    while stack:
        n = stack.pop()
        if isinstance(n, Num):
            total += _num_size(n.value)
            continue
        total += 1
        if isinstance(n, Succ) or isinstance(n, Not):
            stack.append(n.arg)
        elif isinstance(n, (Add, Mul, Eq, _Binary)):
            stack.extend((n.left, n.right))
        elif isinstance(n, _Quant):
            stack.append(n.body)
            if n.bound is not None:
                stack.append(n.bound)
    return total


def lt_formula(a: Term, b: Term, avoid: Iterable[int] = ()) -> Formula:
    """``a < b`` spelled out as ``exists z. (a + S(z)) = b`` with ``z`` fresh."""
    z = fresh_var(set(avoid) | free_vars(a) | free_vars(b))
    return Exists(z, Eq(Add(a, Succ(Var(z))), b))


def unsugar(f: Formula) -> Formula:
    """Expand bounded quantifiers into guarded unbounded ones."""
    if isinstance(f, Eq):
        return f
    if isinstance(f, Not):
        return Not(unsugar(f.arg))
    if isinstance(f, _Binary):
        return type(f)(unsugar(f.left), unsugar(f.right))
    if isinstance(f, _Quant):
        body = unsugar(f.body)
        if f.bound is None:
            return type(f)(f.var, body)
        guard = lt_formula(Var(f.var), f.bound, all_vars(body) | {f.var})
        if isinstance(f, ForAll):
            return ForAll(f.var, Imp(guard, body))
        return Exists(f.var, And(guard, body))
    raise TypeError(f"not a formula: {f!r}")


# --------------------------------------------------------------------------
# printing

# decimal conversion is quadratic in CPython; giant codes print in hex
_HEX_ABOVE_BITS = 4096


def _num_text(v: int) -> str:
    return f"num({v:#x})" if v.bit_length() > _HEX_ABOVE_BITS else f"num({v})"


def _term_text(t: Term, out: list, names: Optional[dict] = None) -> None:
    stack: list = [t]
    while stack:
        n = stack.pop()
        if isinstance(n, str):
            out.append(n)
        elif isinstance(n, Zero):
            out.append("0")
        elif isinstance(n, Num):
            label = names.get(n.value) if names else None
            out.append(f"num(#{label})" if label is not None else _num_text(n.value))
        elif isinstance(n, Var):
            out.append(f"x{n.index}")
        elif isinstance(n, Succ):
            out.append("S(")
            stack.append(")")
            stack.append(n.arg)
        else:
            op = " + " if isinstance(n, Add) else " * "
            out.append("(")
            stack.extend((")", n.right, op, n.left))


def _formula_text(f: Formula, out: list, names: Optional[dict] = None,
                  aliases: Optional[dict] = None) -> None:
    stack: list = [f]
    root = True
    while stack:
        n = stack.pop()
        if isinstance(n, str):
            out.append(n)
        elif aliases and not root and id(n) in aliases:
            out.append("@" + aliases[id(n)])
        elif isinstance(n, Eq):
            _term_text(n.left, out, names)
            out.append(" = ")
            _term_text(n.right, out, names)
        elif isinstance(n, Not):
            out.append("~")
            stack.append(n.arg)
        elif isinstance(n, _Binary):
            out.append("(")
            stack.extend((")", n.right, f" {BINARY_OPS[type(n)]} ", n.left))
        elif isinstance(n, _Quant):
            q = "forall" if isinstance(n, ForAll) else "exists"
            out.append(f"{q} x{n.var}")
            if n.bound is not None:
                out.append(" < ")
                _term_text(n.bound, out, names)
            out.append(". ")
            stack.append(n.body)
        else:
            raise TypeError(f"not a formula: {n!r}")
        root = False


def to_text(x, names: Optional[dict] = None, aliases: Optional[dict] = None) -> str:
    """Print in the ASCII grammar.

    ``names`` maps numeral values to labels printed as ``num(#label)``;
    ``aliases`` maps ``id()`` of proper subformulas to labels printed as ``@label``.
    """
    out: list = []
    if isinstance(x, Term):
        _term_text(x, out, names)
    else:
        _formula_text(x, out, names, aliases)
    return "".join(out)


# --------------------------------------------------------------------------
# parsing

class ParseError(ValueError):
    """Syntax error carrying the character offset where parsing failed."""

    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


SyntaxError_ = ParseError

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>0x[0-9a-fA-F]+|\d+|#[A-Za-z_][A-Za-z0-9_]*)|(?P<var>x\d+)|(?P<ref>@[A-Za-z_][A-Za-z0-9_]*)|(?P<word>forall|exists|num|PR)"
    r"|(?P<sym><->|->|[=~&|().+*<\[\]S0]))"
)
_NAME_RE = re.compile(r"\s*([A-Za-z][A-Za-z0-9_+\-]*)")

Macro = Callable[[str, Term], Formula]


class _Parser:
    def __init__(self, text: str, macros: Optional[Macro] = None, codes: Optional[dict] = None,
                 lets: Optional[dict] = None):
        self.text = text
        self.pos = 0
        self.macros = macros
        self.codes = codes or {}
        self.lets = lets or {}
        self._term_memo: dict = {}

    # -- lexing
    def _peek(self):
        m = _TOKEN_RE.match(self.text, self.pos)
        if not m or m.end() == m.start():
            rest = self.text[self.pos:].strip()
            if not rest:
                return None, self.pos, self.pos
            start = len(self.text) - len(self.text[self.pos:].lstrip())
            raise ParseError(f"unexpected character {rest[0]!r}", start, self.text)
        kind = m.lastgroup
        val = m.group(kind)
        start = m.start(kind)
        # keep identifiers like "S0" or "x1y" from being split silently
        end = m.end()
        if kind in ("word", "var") or val == "S":
            if end < len(self.text) and (self.text[end].isalnum() or self.text[end] == "_"):
                tail = re.match(r"[A-Za-z0-9_]+", self.text[start:])
                raise ParseError(f"unbound name {tail.group(0)!r}", start, self.text)
        return val, start, end

    def peek(self):
        return self._peek()[0]

    def next(self):
        val, start, end = self._peek()
        if val is None:
            raise ParseError("unexpected end of input", len(self.text), self.text)
        self.pos = end
        return val, start

    def expect(self, want: str):
        val, start = self.next()
        if val != want:
            raise ParseError(f"expected {want!r}, found {val!r}", start, self.text)

    def at_end(self) -> bool:
        return self.peek() is None

    def _error_here(self, msg):
        _, start, _ = self._peek()
        return ParseError(msg, start, self.text)

    # -- grammar
    def term(self) -> Term:
        key = self.pos
        hit = self._term_memo.get(key)
        if hit is not None:
            if isinstance(hit[0], ParseError):
                raise hit[0]
            self.pos = hit[1]
            return hit[0]
        try:
            t = self._term()
        except ParseError as e:
            self._term_memo[key] = (e, None)
            raise
        self._term_memo[key] = (t, self.pos)
        return t

    def _term(self) -> Term:
        val, start = self.next()
        if val == "0":
            return Zero()
        if val == "S":
            self.expect("(")
            t = self.term()
            self.expect(")")
            return Succ(t)
        if val == "num":
            self.expect("(")
            v, s = self.next()
            if v.startswith("0x") and len(v) > 2:
                n = int(v, 16)
            elif v.isdigit():
                n = int(v)
            elif v.startswith("#") and v[1:] in self.codes:
                n = self.codes[v[1:]]
            else:
                raise ParseError(f"expected a natural number, found {v!r}", s, self.text)
            self.expect(")")
            return numeral(n)
        if val.startswith("x") and val[1:].isdigit():
            return Var(int(val[1:]))
        if val == "(":
            left = self.term()
            op, s = self.next()
            if op not in ("+", "*"):
                raise ParseError(f"expected '+' or '*', found {op!r}", s, self.text)
            right = self.term()
            self.expect(")")
            return Add(left, right) if op == "+" else Mul(left, right)
        if val.isdigit():
            raise ParseError(f"bare number {val!r}; write num({val})", start, self.text)
        raise ParseError(f"expected a term, found {val!r}", start, self.text)

    def _var(self) -> int:
        val, start = self.next()
        if not (val.startswith("x") and val[1:].isdigit()):
            raise ParseError(f"expected a variable, found {val!r}", start, self.text)
        return int(val[1:])

    def formula(self) -> Formula:
        val, start, _ = self._peek()
        if val is None:
            raise ParseError("unexpected end of input", len(self.text), self.text)
        if val == "~":
            self.next()
            return Not(self.formula())
        if val in ("forall", "exists"):
            self.next()
            v = self._var()
            bound = None
            if self.peek() == "<":
                self.next()
                bound = self.term()
            self.expect(".")
            body = self.formula()
            cls = ForAll if val == "forall" else Exists
            return cls(v, body, bound)
        if val == "PR":
            return self._macro()
        if val.startswith("@"):
            self.next()
            if val[1:] not in self.lets:
                raise ParseError(f"unbound name {val!r}", start, self.text)
            return self.lets[val[1:]]
        if val == "(":
            save = self.pos
            try:
                left_t = self.term()
            except ParseError:
                left_t = None
            if left_t is not None and self.peek() == "=":
                self.next()
                return Eq(left_t, self.term())
            self.pos = save
            self.next()
            left = self.formula()
            op, s = self.next()
            cls = {"&": And, "|": Or, "->": Imp, "<->": Iff}.get(op)
            if cls is None:
                raise ParseError(f"expected a connective, found {op!r}", s, self.text)
            right = self.formula()
            self.expect(")")
            return cls(left, right)
        left_t = self.term()
        self.expect("=")
        return Eq(left_t, self.term())

    def _macro(self) -> Formula:
        _, start = self.next()
        self.expect("[")
        m = _NAME_RE.match(self.text, self.pos)
        if not m:
            raise self._error_here("expected a theory name")
        name = m.group(1)
        self.pos = m.end()
        self.expect("]")
        self.expect("(")
        arg = self.term()
        self.expect(")")
        if self.macros is None:
            raise ParseError(f"unbound name 'PR[{name}]'", start, self.text)
        try:
            return self.macros(name, arg)
        except KeyError:
            raise ParseError(f"unbound name 'PR[{name}]'", start, self.text) from None


def parse(text: str, macros: Optional[Macro] = None, codes: Optional[dict] = None,
          lets: Optional[dict] = None) -> Formula:
    """Parse a formula in the ASCII grammar.

    ``macros`` resolves ``PR[T](t)`` occurrences; it receives the theory name
    and the argument term and raises ``KeyError`` for unknown names.  ``codes``
    resolves labelled numerals ``num(#label)`` and ``lets`` formula references ``@label``.
    """
    p = _Parser(text, macros, codes, lets)
    f = p.formula()
    if not p.at_end():
        raise p._error_here("trailing input")
    return f


def parse_term(text: str, codes: Optional[dict] = None) -> Term:
    p = _Parser(text, None, codes)
    t = p.term()
    if not p.at_end():
        raise p._error_here("trailing input")
    return t


def subformulas(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        n = stack.pop()
        yield n
        if isinstance(n, Not):
            stack.append(n.arg)
        elif isinstance(n, _Binary):
            stack.extend((n.right, n.left))
        elif isinstance(n, _Quant):
            stack.append(n.body)


def children(f: Formula) -> tuple:
    if isinstance(f, Not):
        return (f.arg,)
    if isinstance(f, _Binary):
        return (f.left, f.right)
    if isinstance(f, _Quant):
        return (f.body,)
    return ()


def at_path(f: Formula, path) -> Formula:
    for i in path:
        kids = children(f)
        if not isinstance(i, int) or not 0 <= i < len(kids):
            raise IndexError(f"no child {i!r} under {type(f).__name__}")
        f = kids[i]
    return f
