"""Gödel numbering: prefix token strings read as base-32 numbers.

Every node contributes one token followed by its children in prefix order, so
the code of a node is the concatenation ``tag ++ code(child_1) ++ ...`` of
token strings; variables are ``VAR``, the binary digits of the index (most
significant first) and ``END``.  All tokens are non-zero base-32 digits, so a
code is decoded by reading its digits back.  Base 32 keeps codes (and hence
the numerals naming them) about 37% shorter than a byte-per-token scheme.

Version ``prefix32/1`` is pinned by golden vectors in the test-suite.
"""

from __future__ import annotations

import hashlib
import threading
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Union

from .syntax import (
    Add, And, Eq, Exists, ForAll, Formula, Iff, Imp, Mul, Not, Num, Or, Succ,
    Term, UnaryPredicate, Var, Zero, apply, numeral,
)

VERSION = "prefix32/1"
BASE = 32

ZERO, SUCC, ADD, MUL, VAR, BIT0, BIT1, END = range(1, 9)
EQ, NOT, AND, OR, IMP, IFF, FORALL, EXISTS, BFORALL, BEXISTS = range(9, 19)

TOKEN_NAMES = {
    ZERO: "0", SUCC: "S", ADD: "+", MUL: "*", VAR: "VAR", BIT0: "BIT0", BIT1: "BIT1",
    END: "END", EQ: "=", NOT: "~", AND: "&", OR: "|", IMP: "->", IFF: "<->",
    FORALL: "forall", EXISTS: "exists", BFORALL: "forall<", BEXISTS: "exists<",
}
_BIN_TOKEN = {And: AND, Or: OR, Imp: IMP, Iff: IFF}
_TOKEN_BIN = {v: k for k, v in _BIN_TOKEN.items()}

# reserved (direct) codes start with this byte, which no standard code contains
DIRECT_MARK = 31


class CodingError(ValueError):
    pass


class ReservationCollision(CodingError):
    pass


def var_tokens(i: int) -> bytes:
    bits = bin(i)[2:] if i else ""
    return bytes([VAR]) + bytes(BIT1 if b == "1" else BIT0 for b in bits) + bytes([END])


_BASE_TOKENS = {0: b"\x01", 1: b"\x02\x01", 2: b"\x02\x02\x01"}
# num(2k) = (SS0 * num(k)) and num(2k+1) = S(num(2k)); each low bit below the
# top two contributes one doubling, preceded by a successor when the bit is set
_BIT_CHUNK = str.maketrans({"0": "\x04\x02\x02\x01", "1": "\x02\x04\x02\x02\x01"})


def numeral_tokens(n: int) -> bytes:
    """Token string of the canonical numeral ``num(n)``."""
    if n <= 2:
        return _BASE_TOKENS[n]
    bits = bin(n)[2:]
    head = "\x02" if bits[1] == "1" else ""
    body = bits[:1:-1].translate(_BIT_CHUNK)
    return (body + head).encode("latin-1") + _BASE_TOKENS[2]


def numeral_length(n: int) -> int:
    if n <= 2:
        return n + 1
    bits = bin(n)[2:]
    return 4 * (len(bits) - 2) + bits.count("1", 1) + 3


def tokens(x: Union[Term, Formula]) -> bytes:
    out = bytearray()
    stack = [x]
    while stack:
        n = stack.pop()
        if isinstance(n, Zero):
            out.append(ZERO)
        elif isinstance(n, Num):
            out += numeral_tokens(n.value)
        elif isinstance(n, Var):
            out += var_tokens(n.index)
        elif isinstance(n, Succ):
            out.append(SUCC)
            stack.append(n.arg)
        elif isinstance(n, (Add, Mul)):
            out.append(ADD if isinstance(n, Add) else MUL)
            stack.extend((n.right, n.left))
        elif isinstance(n, Eq):
            out.append(EQ)
            stack.extend((n.right, n.left))
        elif isinstance(n, Not):
            out.append(NOT)
            stack.append(n.arg)
        elif type(n) in _BIN_TOKEN:
            out.append(_BIN_TOKEN[type(n)])
            stack.extend((n.right, n.left))
        elif isinstance(n, (ForAll, Exists)):
            if n.bound is None:
                out.append(FORALL if isinstance(n, ForAll) else EXISTS)
                out += var_tokens(n.var)
                stack.append(n.body)
            else:
                out.append(BFORALL if isinstance(n, ForAll) else BEXISTS)
                out += var_tokens(n.var)
                stack.extend((n.body, n.bound))
        else:
            raise TypeError(f"cannot encode {n!r}")
    return bytes(out)


def from_tokens(data: bytes) -> Union[Term, Formula]:
    """Rebuild the node spelled by a prefix token string (inverse of :func:`tokens`)."""
    # group variable tokens first, then evaluate the prefix string right to left
    symbols = []
    i, n = 0, len(data)
    while i < n:
        t = data[i]
        if t == VAR:
            j = i + 1
            idx = 0
            while j < n and data[j] in (BIT0, BIT1):
                idx = 2 * idx + (data[j] == BIT1)
                j += 1
            if j >= n or data[j] != END:
                raise CodingError(f"unterminated variable at token {i}")
            if j > i + 1 and data[i + 1] == BIT0:
                raise CodingError(f"variable index with leading zero at token {i}")
            symbols.append((VAR, idx))
            i = j + 1
        elif 1 <= t <= BEXISTS and t not in (BIT0, BIT1, END):
            symbols.append((t, None))
            i += 1
        else:
            raise CodingError(f"invalid token {t} at position {i}")
    stack: list = []

    def settle(v):
        if isinstance(v, _Pending):
            return v.materialize()
        return v

    def pop(kind):
        if not stack:
            raise CodingError("token string ends early")
        v = settle(stack.pop())
        if not isinstance(v, kind):
            raise CodingError(f"expected {kind.__name__}, found {type(v).__name__}")
        return v

    for t, arg in reversed(symbols):
        if t == ZERO:
            stack.append(_Pending())
        elif t == VAR:
            stack.append(Var(arg))
        elif t == SUCC:
            top = stack[-1] if stack else None
            if isinstance(top, _Pending) and top.succ():
                continue
            stack.append(Succ(pop(Term)))
        elif t in (ADD, MUL):
            if t == MUL and len(stack) >= 2 and isinstance(stack[-1], _Pending) \
                    and isinstance(stack[-2], _Pending) and stack[-1].is_two() and stack[-2].double():
                stack.pop()
                continue
            a = pop(Term)
            b = pop(Term)
            stack.append(Add(a, b) if t == ADD else Mul(a, b))
        elif t == EQ:
            a = pop(Term)
            b = pop(Term)
            stack.append(Eq(a, b))
        elif t == NOT:
            stack.append(Not(pop(Formula)))
        elif t in _TOKEN_BIN:
            a = pop(Formula)
            b = pop(Formula)
            stack.append(_TOKEN_BIN[t](a, b))
        elif t in (FORALL, EXISTS):
            v = pop(Term)
            if not isinstance(v, Var):
                raise CodingError("quantifier must bind a variable")
            body = pop(Formula)
            stack.append((ForAll if t == FORALL else Exists)(v.index, body))
        elif t in (BFORALL, BEXISTS):
            v = pop(Term)
            if not isinstance(v, Var):
                raise CodingError("quantifier must bind a variable")
            bound = pop(Term)
            body = pop(Formula)
            stack.append((ForAll if t == BFORALL else Exists)(v.index, body, bound))
    stack = [settle(v) for v in stack]
    if len(stack) != 1:
        raise CodingError("token string does not spell a single expression")
    return stack[0]


class _Pending:
    """A canonical numeral under construction, kept as binary digits (MSB first)."""

    __slots__ = ("bits",)

    def __init__(self):
        self.bits = bytearray()

    def succ(self) -> bool:
        b = self.bits
        if not b:
            b.append(49)
        elif len(b) == 1:
            b.append(48)
        elif b[-1] == 48:
            b[-1] = 49
        else:
            return False
        return True

    def is_two(self) -> bool:
        return self.bits == b"10"

    def double(self) -> bool:
        if len(self.bits) < 2:
            return False
        self.bits.append(48)
        return True

    def materialize(self) -> Term:
        return numeral(int(self.bits, 2)) if self.bits else Zero()


_DIGIT_CHARS = "0123456789abcdefghijklmnopqrstuv"
_TO_DIGIT_CHARS = bytes.maketrans(bytes(range(32)), _DIGIT_CHARS.encode())


def tokens_to_int(data: bytes) -> int:
    """Read a token string as a base-32 number (linear time)."""
    if not data:
        return 0
    return int(data.translate(_TO_DIGIT_CHARS), 32)


def int_to_tokens(code: int) -> bytes:
    bits = bin(code)[2:]
    bits = "0" * (-len(bits) % 5) + bits
    return bytes(int(bits[i:i + 5], 2) for i in range(0, len(bits), 5))


def standard_code(x: Union[Term, Formula]) -> int:
    return tokens_to_int(tokens(x))


def standard_decode(code: int) -> Union[Term, Formula]:
    if code <= 0:
        raise CodingError("codes of expressions are positive")
    return from_tokens(int_to_tokens(code))


def reserved_code(j: int) -> int:
    """The ``j``-th reserved code: DIRECT_MARK followed by the base-32 digits of ``j``."""
    return tokens_to_int(bytes([DIRECT_MARK]) + (int_to_tokens(j) if j else b"\x00"))


# giant numerals that came from name_of, so serializers can print them by reference
NAMED_ABOVE_BITS = 4096
_NAMED: dict = {}
_recent: "OrderedDict[int, tuple]" = OrderedDict()


def _cached_code(x) -> int:
    hit = _recent.get(id(x))
    if hit is not None and hit[0] is x:
        _recent.move_to_end(id(x))
        return hit[1]
    c = standard_code(x)
    _recent[id(x)] = (x, c)
    if len(_recent) > 64:
        _recent.popitem(last=False)
    return c


def named_expression(code: int):
    """The expression whose numeral ``num(code)`` was produced by :meth:`Numbering.name_of`, if any."""
    return _NAMED.get(code)


@dataclass
class Numbering:
    """A decodable Gödel numbering.

    ``kind`` is ``"standard"`` or ``"direct"``.  A direct numbering agrees with
    the standard one except on codes it has reserved with
    :meth:`reserve_direct`; reservations are single-writer (guarded by a lock).
    """

    kind: str = "standard"
    version: str = VERSION
    reserved: dict = field(default_factory=dict)
    _by_formula: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in ("standard", "direct"):
            raise ValueError(f"unknown numbering kind {self.kind!r}")

    def encode(self, x) -> int:
        if self.kind == "direct":
            c = self._by_formula.get(x)
            if c is not None:
                return c
        return _cached_code(x)

    def decode(self, code: int):
        if self.kind == "direct" and code in self.reserved:
            return self.reserved[code]
        return standard_decode(code)

    def name_of(self, x) -> Term:
        code = self.encode(x)
        if code.bit_length() > NAMED_ABOVE_BITS:
            _NAMED.setdefault(code, x)
        return numeral(code)

    def reserve_direct(self, p: UnaryPredicate):
        """Allocate a code ``c`` and register ``p(num(c))`` as its sentence."""
        if self.kind != "direct":
            raise CodingError("reserve_direct needs a direct numbering")
        with self._lock:
            j = len(self.reserved)
            c = reserved_code(j)
            # the reserved block is unbounded, so allocation cannot run dry
            assert c not in self.reserved
            psi = apply(p, numeral(c))
            if psi in self._by_formula:
                raise ReservationCollision("sentence already carries a reserved code")
            self.reserved[c] = psi
            self._by_formula[psi] = c
        return c, psi

    def describe(self) -> dict:
        return {"kind": self.kind, "version": self.version, "reserved": len(self.reserved)}


STANDARD = Numbering("standard")


def encode(n: Numbering, x) -> int:
    return n.encode(x)


def decode(n: Numbering, code: int):
    return n.decode(code)


def name_of(n: Numbering, x) -> Term:
    return n.name_of(x)


def reserve_direct(n: Numbering, p: UnaryPredicate):
    return n.reserve_direct(p)


def digest(x) -> str:
    """Structural SHA-256 of a term or formula (Merkle-style, shared subtrees hashed once).

    Independent of the printer, so giant numerals never go through decimal.
    """
    memo: dict = {}
    stack = [(x, False)]
    keep = []
    while stack:
        n, ready = stack.pop()
        key = id(n)
        if key in memo:
            continue
        if isinstance(n, (Zero, Num, Var)):
            if isinstance(n, Num):
                v = n.value
                payload = b"N" + v.to_bytes((v.bit_length() + 7) // 8, "big")
            elif isinstance(n, Var):
                payload = b"V" + str(n.index).encode()
            else:
                payload = b"Z"
            memo[key] = hashlib.sha256(payload).digest()
            keep.append(n)
            continue
        kids = _digest_children(n)
        if not ready:
            stack.append((n, True))
            stack.extend((k, False) for k in kids)
            continue
        h = hashlib.sha256(type(n).__name__.encode())
        if isinstance(n, (ForAll, Exists)):
            h.update(b"v" + str(n.var).encode() + (b"b" if n.bound is not None else b"u"))
        for k in kids:
            h.update(memo[id(k)])
        memo[key] = h.digest()
        keep.append(n)
    return memo[id(x)].hex()


def _digest_children(n) -> tuple:
    if isinstance(n, (Succ, Not)):
        return (n.arg,)
    if isinstance(n, (Add, Mul, Eq, And, Or, Imp, Iff)):
        return (n.left, n.right)
    if isinstance(n, (ForAll, Exists)):
        return (n.body,) if n.bound is None else (n.bound, n.body)
    raise TypeError(f"cannot digest {n!r}")
