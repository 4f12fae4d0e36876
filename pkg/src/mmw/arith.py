"""Arithmetization: Δ₀ string primitives, computation strings and proof strings.

Codes are token strings read as base-``K`` numbers (``K = 32``) whose digits
are all non-zero, so concatenation is ``a ++ b = a * K^len(b) + b``.  A
*computation string* is ``SEP L1 SEP L2 ... SEP Ln SEP`` where every line
``Li`` starts with a tag and is justified by lines before it:

``TT t``            ``t`` is a term
``TF f``            ``f`` is a formula
``NUM b s``         ``b`` spells ``n`` in binary with BIT0/BIT1 digits, ``s`` is ``num(n)``
``SUB v t a z``     ``z`` is ``a`` with ``t`` substituted for variable ``v``
``TP f``            ``f`` is proved (axiom, logic axiom, MP or generalization)

Everything is expressed with quantifiers bounded by the string under
inspection, so the proof predicate is Δ₀ and ``Pr(x) := exists p. Prf(p, x)``
is Σ₁.  The diagonal function and formalized substitution are Σ₁ through a
computation-string witness.
"""

from __future__ import annotations

from contextlib import contextmanager
from typing import Callable, Iterable, Sequence, Union

from . import coding as C
from .syntax import (
    Add, And, Eq, Exists, ForAll, Formula, Iff, Imp, Mul, Not, Num, Or, Succ,
    Term, UnaryPredicate, Var, Zero, apply, big_and, big_or, numeral,
    substitute,
)

SEP = 19
TAG_TT, TAG_TF, TAG_TP, TAG_NUM, TAG_SUB = 20, 21, 22, 23, 24
TAG_NAMES = {TAG_TT: "TT", TAG_TF: "TF", TAG_TP: "TP", TAG_NUM: "NUM", TAG_SUB: "SUB"}

# x0..x7 are parameters, x8 is the ambient power W of the base and x9 the base
# itself; builders hand out x10, x11, ... and reuse indices once a scope closes
W_VAR, K_VAR = 8, 9
FIRST_FRESH = 10

Part = Union[int, tuple, Term]


def _lit_value(tokens: Sequence[int], base: int) -> int:
    v = 0
    for t in tokens:
        v = v * base + t
    return v


class Builder:
    """Emits Δ₀ formulas about base-``K`` strings.

    Formulas built here mention ``k`` (the base) and ``W`` (a power of the base
    exceeding every string under inspection) as free variables; :meth:`close`
    binds both.  Every string variable introduced with :meth:`strs` carries its
    length power, so concatenations need no further quantifiers.
    """

    def __init__(self, base: int = C.BASE, start: int = FIRST_FRESH):
        m = base.bit_length() - 1
        if base < 4 or base != 1 << m:
            raise ValueError("base must be a power of two, at least 4")
        self.K = base
        self.m = m
        self.next_var = start
        self.k = Var(K_VAR)
        self.W = Var(W_VAR)
        self.lengths: dict = {}

    # -- variables and quantifiers
    def fresh(self) -> Var:
        v = Var(self.next_var)
        self.next_var += 1
        return v

    @contextmanager
    def scope(self):
        saved = self.next_var
        try:
            yield
        finally:
            self.next_var = saved
            for i in [i for i in self.lengths if i >= saved]:
                del self.lengths[i]

    def ex(self, bound: Term, fn: Callable[[Var], Formula]) -> Formula:
        with self.scope():
            v = self.fresh()
            return Exists(v.index, fn(v), bound)

    def fa(self, bound: Term, fn: Callable[[Var], Formula]) -> Formula:
        with self.scope():
            v = self.fresh()
            return ForAll(v.index, fn(v), bound)

    def ex_le(self, t: Term, fn) -> Formula:
        return self.ex(Succ(t), fn)

    def fa_le(self, t: Term, fn) -> Formula:
        return self.fa(Succ(t), fn)

    def strs(self, bound: Term, n: int, fn, quant=Exists) -> Formula:
        """``n`` string variables ``<= bound``, each with its length power."""
        with self.scope():
            pairs = [(self.fresh(), self.fresh()) for _ in range(n)]
            for s, q in pairs:
                self.lengths[s.index] = q
            body = fn(*[s for s, _ in pairs])
            conds = [self.lh(s, q) for s, q in pairs]
            if quant is Exists:
                f = big_and(conds + [body])
            else:
                f = Imp(big_and(conds), body)
            for s, q in reversed(pairs):
                f = quant(q.index, f, Succ(self.W))
                f = quant(s.index, f, Succ(bound))
            return f

    def close(self, body: Formula, top: Term) -> Formula:
        """Bind ``k`` to the base and ``W`` to a power of it above ``top``."""
        k, W = self.k, self.W
        inner = big_and([self.pow2(W), self.ex_le(W, lambda s: Eq(Add(W, s), Add(Mul(k, s), numeral(1)))),
                         self.lt(top, W), body])
        inner = Exists(W_VAR, inner, Add(Mul(k, top), numeral(2)))
        return Exists(K_VAR, And(Eq(k, numeral(self.K)), inner), numeral(self.K + 1))

    # -- arithmetic
    def lt(self, a: Term, b: Term) -> Formula:
        return self.ex(b, lambda z: Eq(Add(a, Succ(z)), b))

    def le(self, a: Term, b: Term) -> Formula:
        return self.ex_le(b, lambda z: Eq(Add(a, z), b))

    def divides(self, d: Term, q: Term) -> Formula:
        return self.ex_le(q, lambda e: Eq(Mul(d, e), q))

    def even(self, d: Term) -> Formula:
        return self.ex_le(d, lambda s: Eq(Add(s, s), d))

    def pow2(self, q: Term) -> Formula:
        # every divisor other than 1 is even
        return And(Not(Eq(q, Zero())),
                   self.fa_le(q, lambda d: Imp(self.divides(d, q),
                                               Or(Eq(d, numeral(1)), self.even(d)))))

    def powk(self, q: Term) -> Formula:
        # divisors of W are powers of two, and 2^j = K^i exactly when 2^j = 1 (mod K - 1)
        k = self.k
        return And(self.divides(q, self.W),
                   self.ex_le(q, lambda s: Eq(Add(q, s), Add(Mul(k, s), numeral(1)))))

    def lh(self, x: Term, q: Term) -> Formula:
        """``q = K^len(x)``."""
        return big_and([self.powk(q), self.lt(x, q),
                        Or(Eq(q, numeral(1)), self.le(q, Mul(self.k, x)))])

    def concat(self, w: Term, parts: Sequence[Part]) -> Formula:
        """``w`` is the concatenation of ``parts``.

        A part is a token (int), a token tuple, a ``("digit", t)`` pair for a
        one-token variable, or a string term.
        """
        conds = []
        acc: Term = None
        fresh_q = []
        k = self.k
        for part in parts:
            if isinstance(part, int):
                part = (part,)
            if isinstance(part, tuple) and part and part[0] == "digit":
                acc = part[1] if acc is None else Add(Mul(acc, k), part[1])
            elif isinstance(part, tuple):
                for tok in part:
                    acc = numeral(tok) if acc is None else Add(Mul(acc, k), numeral(tok))
            elif acc is None:
                acc = part
            else:
                q = self.lengths.get(part.index) if isinstance(part, Var) else None
                if q is None:
                    q = self.fresh()
                    fresh_q.append(q)
                    conds.append(self.lh(part, q))
                acc = Add(Mul(acc, q), part)
        if acc is None:
            acc = Zero()
        body = big_and(conds + [Eq(w, acc)])
        for q in reversed(fresh_q):
            body = Exists(q.index, body, Succ(self.W))
        self.next_var -= len(fresh_q)
        return body

    def digit(self, b: Term, q: Term, e: int) -> Formula:
        """The digit of ``b`` at place value ``q`` is ``e``."""
        k = self.k
        return self.ex_le(b, lambda a: self.ex(q, lambda r: And(
            Eq(b, Add(Mul(a, q), r)),
            self.ex_le(a, lambda s: Eq(a, Add(Mul(k, s), numeral(e)))))))

    def digits_in(self, x: Term, allowed: Iterable[int]) -> Formula:
        allowed = tuple(allowed)
        return self.fa_le(x, lambda q: Imp(
            And(self.powk(q), self.le(q, x)),
            big_or([self.digit(x, q, e) for e in allowed])))

    def no_digit(self, x: Term, e: int) -> Formula:
        return self.fa_le(x, lambda q: Imp(And(self.powk(q), self.le(q, x)), Not(self.digit(x, q, e))))

    def is_str(self, x: Term) -> Formula:
        return self.no_digit(x, 0)

    def occurs(self, a: Term, s: Term) -> Formula:
        return self.ex_le(s, lambda u: self.strs(s, 1, lambda v: self.concat(s, [u, a, v])))

    def one_of(self, d: Term, values: Iterable[int]) -> Formula:
        return big_or([Eq(d, numeral(v)) for v in values])

    # -- syntax classes
    def is_var(self, v: Term) -> Formula:
        return self.strs(v, 1, lambda w: big_and([
            self.concat(v, [C.VAR, w, C.END]),
            self.digits_in(w, (C.BIT0, C.BIT1)),
            Or(Eq(w, Zero()), self.ex_le(w, lambda u: self.concat(w, [C.BIT1, u]))),
        ]))

    def bitstr(self, b: Term) -> Formula:
        return self.digits_in(b, (C.BIT0, C.BIT1))

    def bit_set(self, n: Term, q: Term) -> Formula:
        return self.ex_le(n, lambda a: self.ex(q, lambda r: And(
            Eq(n, Add(Mul(a, q), r)), Not(self.even(a)))))

    def binary(self, n: Term, b: Term) -> Formula:
        """``b`` is the BIT0/BIT1 spelling of ``n`` (most significant digit first)."""

        def lift(q):
            # 2^j -> K^j, i.e. q^m by square-and-multiply
            out, sq, e = None, q, self.m
            while e:
                if e & 1:
                    out = sq if out is None else Mul(out, sq)
                e >>= 1
                if e:
                    sq = Mul(sq, sq)
            return out

        top = self.ex_le(n, lambda q: big_and([
            self.pow2(q), self.le(q, n), self.lt(n, Add(q, q)),
            self.le(lift(q), b), self.lt(b, Mul(self.k, lift(q))),
        ]))
        per_bit = self.fa_le(n, lambda q: Imp(
            self.pow2(q),
            Iff(self.bit_set(n, q), self.digit(b, lift(q), C.BIT1))))
        return big_and([
            self.bitstr(b),
            Or(And(Eq(n, Zero()), Eq(b, Zero())), top),
            per_bit,
        ])


# --------------------------------------------------------------------------
# computation strings

_UNARY = (C.SUCC, C.NOT)
_BINARY_TERM = (C.ADD, C.MUL)
_BINARY = (C.ADD, C.MUL, C.EQ, C.AND, C.OR, C.IMP, C.IFF)
_CONNECTIVES = (C.AND, C.OR, C.IMP, C.IFF)
_QUANT = (C.FORALL, C.EXISTS)
_BQUANT = (C.BFORALL, C.BEXISTS)


class Lines:
    """Rules for the tagged lines of computation and proof strings.

    Rule methods take the prefix ``w`` (all earlier lines, ending with SEP) and
    the line body ``y`` (the line without its tag).
    """

    def __init__(self, b: Builder):
        self.b = b

    def earlier(self, w: Term, tag: int, parts: Sequence[Part]) -> Formula:
        b = self.b
        return b.ex_le(w, lambda a: b.strs(w, 1, lambda c: b.concat(w, [a, (SEP, tag), *parts, SEP, c])))

    def op_case(self, y, n_args, ops, fn):
        """``y = op ++ a1 ++ ... ++ an`` for a token ``op`` among ``ops``."""
        b = self.b
        return b.ex(b.k, lambda op: b.strs(y, n_args, lambda *args: big_and([
            b.one_of(op, ops), b.concat(y, [("digit", op), *args]), fn(op, *args)])))

    def rule_tt(self, w: Term, y: Term) -> Formula:
        b = self.b
        tt = lambda t: self.earlier(w, TAG_TT, [t])
        return big_or([
            Eq(y, numeral(C.ZERO)),
            b.is_var(y),
            self.op_case(y, 1, (C.SUCC,), lambda op, a: tt(a)),
            self.op_case(y, 2, _BINARY_TERM, lambda op, a, c: And(tt(a), tt(c))),
        ])

    def rule_tf(self, w: Term, y: Term) -> Formula:
        b = self.b
        tt = lambda t: self.earlier(w, TAG_TT, [t])
        tf = lambda f: self.earlier(w, TAG_TF, [f])
        return big_or([
            self.op_case(y, 2, (C.EQ,), lambda op, a, c: And(tt(a), tt(c))),
            self.op_case(y, 1, (C.NOT,), lambda op, a: tf(a)),
            self.op_case(y, 2, _CONNECTIVES, lambda op, a, c: And(tf(a), tf(c))),
            self.op_case(y, 2, _QUANT, lambda op, v, a: And(b.is_var(v), tf(a))),
            self.op_case(y, 3, _BQUANT, lambda op, v, t, a: big_and([b.is_var(v), tt(t), tf(a)])),
        ])

    def rule_num(self, w: Term, y: Term) -> Formula:
        # num(0) = 0, num(1) = S0, num(2) = SS0, num(2k+1) = S num(2k), num(2k) = (SS0 * num(k))
        b = self.b
        S, Z, M = C.SUCC, C.ZERO, C.MUL
        B0, B1 = C.BIT0, C.BIT1
        fixed = [(Z,), (B1, S, Z), (B1, B0, S, S, Z), (B1, B1, S, S, S, Z)]
        cases = [Eq(y, numeral(_lit_value(f, b.K))) for f in fixed]
        cases.append(b.strs(y, 2, lambda bb, s: big_and([
            b.concat(y, [bb, (B0, M, S, S, Z), s]),
            b.le(b.k, bb), b.bitstr(bb),
            self.earlier(w, TAG_NUM, [bb, s]),
        ])))
        cases.append(b.strs(y, 2, lambda bb, s: big_and([
            b.concat(y, [bb, (B1, S), s]),
            b.le(b.k, bb), b.bitstr(bb),
            self.earlier(w, TAG_NUM, [bb, B0, s]),
        ])))
        return big_or(cases)

    def rule_sub(self, w: Term, y: Term) -> Formula:
        b = self.b

        def sub(v, t, a, z):
            return self.earlier(w, TAG_SUB, [v, t, a, z])

        def unchanged_binder(v, u, a1):
            return Or(Eq(u, v), Not(b.occurs(v, a1)))

        def step(v, t, a, z):
            def pushed(op, *prefix_and_body):
                # z = op ++ prefix ++ z1 with z1 = body[v := t]
                *prefix, body = prefix_and_body
                return b.strs(y, 1, lambda z1: And(
                    b.concat(z, [("digit", op), *prefix, z1]), sub(v, t, body, z1)))

            return big_or([
                And(Eq(a, numeral(C.ZERO)), Eq(z, a)),
                big_and([b.is_var(a), Eq(a, v), Eq(z, t)]),
                big_and([b.is_var(a), Not(Eq(a, v)), Eq(z, a)]),
                self.op_case(a, 1, _UNARY, lambda op, a1: pushed(op, a1)),
                self.op_case(a, 2, _BINARY, lambda op, a1, a2: b.strs(y, 2, lambda z1, z2: big_and([
                    b.concat(z, [("digit", op), z1, z2]), sub(v, t, a1, z1), sub(v, t, a2, z2)]))),
                self.op_case(a, 2, _QUANT, lambda op, u, a1: And(b.is_var(u), Or(
                    And(unchanged_binder(v, u, a1), And(Eq(z, a), self.earlier(w, TAG_TF, [a]))),
                    big_and([Not(Eq(u, v)), Not(b.occurs(u, t)), pushed(op, u, a1)])))),
                self.op_case(a, 3, _BQUANT, lambda op, u, bd, a1: big_and([
                    b.is_var(u),
                    b.strs(y, 1, lambda bd1: And(sub(v, t, bd, bd1), Or(
                        big_and([Eq(u, v), b.concat(z, [("digit", op), u, bd1, a1]),
                                 self.earlier(w, TAG_TF, [a1])]),
                        big_and([Not(Eq(u, v)), Not(b.occurs(u, t)), pushed(op, u, bd1, a1)])))),
                ])),
            ])

        return b.strs(y, 4, lambda v, t, a, z: big_and([
            b.concat(y, [v, t, a, z]), b.is_var(v),
            self.earlier(w, TAG_TT, [t]), step(v, t, a, z)]))

    def well_formed(self, w: Term, rules: dict) -> Formula:
        """Every line of ``w`` carries a known tag and obeys its rule."""
        b = self.b

        def justified(prefix, line):
            return b.ex(b.k, lambda tag: b.strs(line, 1, lambda y: And(
                b.concat(line, [("digit", tag), y]),
                big_or([And(Eq(tag, numeral(t)), rule(prefix, y)) for t, rule in sorted(rules.items())]))))

        every = b.ex_le(w, lambda u: b.strs(w, 2, lambda line, v: Imp(
            big_and([b.concat(w, [u, SEP, line, SEP, v]), b.no_digit(line, SEP), Not(Eq(line, Zero()))]),
            justified(Add(Mul(u, b.k), numeral(SEP)), line)), quant=ForAll))
        # the outer quantifier on u must be universal too
        every = ForAll(every.var, every.body, every.bound)
        return big_and([
            b.is_str(w),
            b.strs(w, 1, lambda r: b.concat(w, [SEP, r])),
            b.ex_le(w, lambda r: b.concat(w, [r, SEP])),
            every,
        ])

    def computation_rules(self) -> dict:
        return {TAG_TT: self.rule_tt, TAG_TF: self.rule_tf,
                TAG_NUM: self.rule_num, TAG_SUB: self.rule_sub}


# --------------------------------------------------------------------------
# Σ₁ relations through computation strings

def substitution_matrix(b: Builder, w: Term, e: Term, n: Term, y: Term) -> Formula:
    """Δ₀ in ``k, W``: ``w`` witnesses ``y = e[x0 := num(n)]``."""
    L = Lines(b)
    return And(
        L.well_formed(w, L.computation_rules()),
        b.ex_le(w, lambda bits: b.strs(w, 1, lambda s: big_and([
            L.earlier(w, TAG_NUM, [bits, s]),
            b.binary(n, bits),
            L.earlier(w, TAG_SUB, [(C.VAR, C.END), s, e, y]),
        ]))))


def diag_graph(x: int = 0, y: int = 1, base: int = C.BASE) -> Formula:
    """Σ₁ formula ``D(x, y)``: ``y`` is the code of ``e[x0 := num(e)]`` for ``e = x``.

    The witness ``w`` is least, and at it ``y`` is least; this minimization is
    what makes the graph provably functional.  ``x`` occurs exactly once, so
    substituting a huge numeral for it costs one copy.
    """
    b = Builder(base)
    with b.scope():
        xc, w = b.fresh(), b.fresh()
        Y = Var(y)

        def matrix(v, ww):
            return b.close(substitution_matrix(b, ww, xc, xc, v), ww)

        least = b.fa_le(w, lambda w2: b.fa_le(w2, lambda y2: Imp(
            matrix(y2, w2), And(Eq(w2, w), b.le(Y, y2)))))
        body = Exists(w.index, And(matrix(Y, w), least))
        return Exists(xc.index, And(Eq(xc, Var(x)), body))


def subst_graph(e: int, n: int, y: int, base: int = C.BASE) -> Formula:
    """Σ₁ formula: ``y`` is the code of ``e[x0 := num(n)]``."""
    b = Builder(base)
    with b.scope():
        w = b.fresh()
        return Exists(w.index, b.close(substitution_matrix(b, w, Var(e), Var(n), Var(y)), w))


def formula_graph(e: int, base: int = C.BASE) -> Formula:
    """Σ₁ formula: ``e`` is the code of a formula."""
    b = Builder(base)
    L = Lines(b)
    with b.scope():
        w = b.fresh()
        return Exists(w.index, b.close(And(L.well_formed(w, L.computation_rules()),
                                           L.earlier(w, TAG_TF, [Var(e)])), w))


# --------------------------------------------------------------------------
# the proof predicate

class Clause:
    """An extra axiom clause evaluated against the proof prefix (scheme instances)."""

    name = "clause"

    def formula(self, L: Lines, w: Term, y: Term) -> Formula:
        raise NotImplementedError

    def describe(self) -> str:
        return self.name


class InductionClause(Clause):
    name = "induction"

    def formula(self, L, w, y):
        b = L.b
        sub = lambda v, t, a, z: L.earlier(w, TAG_SUB, [v, t, a, z])
        # (A(0) & forall v. (A -> A(S v))) -> forall v. A
        return b.strs(y, 4, lambda v, a, a0, a1: big_and([
            b.concat(y, [(C.IMP, C.AND), a0, C.FORALL, v, C.IMP, a, a1, C.FORALL, v, a]),
            b.is_var(v),
            L.earlier(w, TAG_TF, [a]),
            sub(v, C.ZERO, a, a0),
            b.strs(y, 1, lambda sv: And(b.concat(sv, [C.SUCC, v]), sub(v, sv, a, a1))),
        ]))


class DiagonalAxiomClause(Clause):
    """Accepts ``y`` when ``y = c[x_v := num(c)]`` for the parameter term ``c``.

    ``c`` is normally a numeral; building the clause with a variable instead
    and substituting the numeral later gives the same formula.
    """

    name = "diagonal-axiom"

    def __init__(self, c: Union[int, Term], var: int = 2):
        self.c = numeral(c) if isinstance(c, int) else c
        self.var = var

    def formula(self, L, w, y):
        b = L.b
        c = self.c
        v = tuple(C.var_tokens(self.var))
        return b.ex_le(w, lambda bits: b.strs(w, 1, lambda s: big_and([
            L.earlier(w, TAG_NUM, [bits, s]),
            b.binary(c, bits),
            L.earlier(w, TAG_SUB, [v, s, c, y]),
        ])))

    def describe(self) -> str:
        c = self.c
        size = c.value.bit_length() if isinstance(c, Num) else 0
        return f"{self.name}(x{self.var}, {size} bits)"


_PROP_AXIOMS = (
    lambda I, N, A, O, E, a, c, d: [I, a, I, c, a],
    lambda I, N, A, O, E, a, c, d: [I, I, a, I, c, d, I, I, a, c, I, a, d],
    lambda I, N, A, O, E, a, c, d: [I, I, N, c, N, a, I, a, c],
    lambda I, N, A, O, E, a, c, d: [I, A, a, c, a],
    lambda I, N, A, O, E, a, c, d: [I, A, a, c, c],
    lambda I, N, A, O, E, a, c, d: [I, a, I, c, A, a, c],
    lambda I, N, A, O, E, a, c, d: [I, a, O, a, c],
    lambda I, N, A, O, E, a, c, d: [I, c, O, a, c],
    lambda I, N, A, O, E, a, c, d: [I, I, a, d, I, I, c, d, I, O, a, c, d],
    lambda I, N, A, O, E, a, c, d: [I, E, a, c, I, a, c],
    lambda I, N, A, O, E, a, c, d: [I, E, a, c, I, c, a],
    lambda I, N, A, O, E, a, c, d: [I, I, a, c, I, I, c, a, E, a, c],
)


def _logic_axioms(L: Lines, w: Term, y: Term) -> Formula:
    b = L.b
    I, N, A, O, E = C.IMP, C.NOT, C.AND, C.OR, C.IFF
    tf = lambda f: L.earlier(w, TAG_TF, [f])
    tt = lambda t: L.earlier(w, TAG_TT, [t])
    sub = lambda v, t, a, z: L.earlier(w, TAG_SUB, [v, t, a, z])
    props = b.strs(y, 3, lambda a, c, d: And(
        big_or([b.concat(y, p(I, N, A, O, E, a, c, d)) for p in _PROP_AXIOMS]),
        big_and([tf(a), tf(c), tf(d)])))
    cases = [props]
    # forall v. a -> a[v := t]
    cases.append(b.strs(y, 4, lambda v, t, a, z: big_and([
        b.concat(y, [(I, C.FORALL), v, a, z]), b.is_var(v), tt(t), sub(v, t, a, z)])))
    # forall v. (a -> c) -> (forall v. a -> forall v. c)
    cases.append(b.strs(y, 3, lambda v, a, c: big_and([
        b.concat(y, [(I, C.FORALL), v, I, a, c, (I, C.FORALL), v, a, C.FORALL, v, c]),
        b.is_var(v), tf(a), tf(c)])))
    # a -> forall v. a, v not free in a
    cases.append(b.strs(y, 2, lambda v, a: big_and([
        b.concat(y, [I, a, C.FORALL, v, a]), b.is_var(v), sub(v, C.ZERO, a, a)])))
    # exists v. a <-> ~forall v. ~a
    cases.append(b.strs(y, 2, lambda v, a: big_and([
        b.concat(y, [(E, C.EXISTS), v, a, (N, C.FORALL), v, N, a]), b.is_var(v), tf(a)])))
    # bounded quantifiers as guarded ones, v < t being exists z. (v + S z) = t
    cases.append(b.ex(b.k, lambda bq: b.ex(b.k, lambda q: b.ex(b.k, lambda g: b.strs(
        y, 4, lambda v, t, a, z: big_and([
            Or(big_and([Eq(bq, numeral(C.BFORALL)), Eq(q, numeral(C.FORALL)), Eq(g, numeral(I))]),
               big_and([Eq(bq, numeral(C.BEXISTS)), Eq(q, numeral(C.EXISTS)), Eq(g, numeral(A))])),
            b.concat(y, [E, ("digit", bq), v, t, a, ("digit", q), v, ("digit", g),
                         C.EXISTS, z, (C.EQ, C.ADD), v, C.SUCC, z, t, a]),
            b.is_var(v), b.is_var(z), Not(Eq(v, z)), tt(t), tf(a),
            Not(b.occurs(v, t)), Not(b.occurs(z, t)), Not(b.occurs(z, a))]))))))
    # t = t
    cases.append(b.strs(y, 1, lambda t: And(b.concat(y, [C.EQ, t, t]), tt(t))))
    # s = t -> (a[v := s] -> a[v := t])
    cases.append(b.strs(y, 6, lambda v, s, t, a, z1, z2: big_and([
        b.concat(y, [(I, C.EQ), s, t, I, z1, z2]), b.is_var(v),
        sub(v, s, a, z1), sub(v, t, a, z2)])))
    return big_or(cases)


def proof_predicate(recognizer: UnaryPredicate, clauses: Sequence[Clause] = (),
                    p: int = 1, x: int = 0, base: int = C.BASE) -> Formula:
    """Δ₀ formula ``Prf(p, x)``: ``p`` is a proof string whose last line proves ``x``.

    The first conjunct ``x <= p`` is a cheap guard that settles most small instances.
    """
    b = Builder(base)
    L = Lines(b)
    P, X = Var(p), Var(x)

    def rule_tp(w, y):
        tp = lambda f: L.earlier(w, TAG_TP, [f])
        cases = [apply(recognizer, y)]
        cases += [cl.formula(L, w, y) for cl in clauses]
        cases.append(_logic_axioms(L, w, y))
        cases.append(b.strs(w, 2, lambda a, i: big_and([
            b.concat(i, [C.IMP, a, y]), tp(a), tp(i)])))
        cases.append(b.strs(y, 2, lambda v, a: big_and([
            b.concat(y, [C.FORALL, v, a]), b.is_var(v), tp(a)])))
        return big_or(cases)

    rules = dict(L.computation_rules())
    rules[TAG_TP] = rule_tp
    body = big_and([
        L.well_formed(P, rules),
        b.ex_le(P, lambda u: b.concat(P, [u, (SEP, TAG_TP), X, SEP])),
    ])
    return And(b.le(X, P), b.close(body, P))
