"""Compact, replayable text for giant expressions.

Codes of diagonal sentences run to hundreds of millions of bits, and the
same provability predicate recurs in every line of a proof.  A document is
a ``let`` table plus body text:

* ``aK`` lets hold an expression; ``num(#aK)`` in later text is the numeral
  of its standard code (recomputed on reading);
* ``fK`` lets hold a formula that occurs more than once; ``@fK`` stands for it.

Lets may mention earlier lets.  Reading shares the let objects, so repeated
subformulas come back as one object.
"""

from __future__ import annotations

import hashlib
from typing import Dict, List, Tuple

from . import coding as C
from .syntax import Formula, Num, Term, Var, Zero, parse, parse_term, to_text

MIN_SHARED = 64   # node count below which repeats are printed in place


def _kids(n):
    return () if isinstance(n, (Zero, Num, Var)) else C._digest_children(n)


def _proof_parts(p):
    yield p.goal
    for s in p.steps:
        yield s.formula
        j = s.just
        if j.term is not None:
            yield j.term
        if j.formula is not None:
            yield j.formula
        if j.sub is not None:
            yield from _proof_parts(j.sub)


class Writer:
    """Plan the let table for ``parts`` (expressions and proof objects), then print."""

    def __init__(self, parts):
        from .proofsys import ProofObject
        roots: list = []
        for x in parts:
            roots.extend(_proof_parts(x) if isinstance(x, ProofObject) else [x])
        self._digest: Dict[int, bytes] = {}
        self._size: Dict[int, int] = {}
        self._keep: list = []
        refs: Dict[bytes, int] = {}
        self._counted: set = set()
        named: Dict[int, object] = {}
        todo = list(roots)
        while todo:
            for r in todo:
                self._measure(r, refs)
                refs[self._digest[id(r)]] = refs.get(self._digest[id(r)], 0) + 1
            found = []
            for r in todo:
                self._named_in(r, named, found)
            todo = found
        self.aliases: Dict[int, str] = {}
        labels: Dict[bytes, str] = {}
        shared = [n for n in self._keep
                  if isinstance(n, Formula) and self._size[id(n)] >= MIN_SHARED
                  and refs.get(self._digest[id(n)], 0) >= 2]
        for n in shared:
            d = self._digest[id(n)]
            if d not in labels:
                labels[d] = f"f{len(labels)}"
            self.aliases[id(n)] = labels[d]
        self._labels = labels
        self.names: Dict[int, str] = {}
        self._named = named
        self.lets: List[Tuple[str, str]] = []
        self._emitted: set = set()
        self._visited: set = set()

    # -- planning
    def _measure(self, root, refs) -> None:
        stack = [(root, False)]
        while stack:
            n, ready = stack.pop()
            if id(n) in self._digest:
                continue
            kids = _kids(n)
            if not ready and kids:
                stack.append((n, True))
                stack.extend((k, False) for k in kids if id(k) not in self._digest)
                continue
            h = hashlib.sha256(type(n).__name__.encode())
            if isinstance(n, Num):
                h.update(n.value.to_bytes((n.value.bit_length() + 7) // 8, "big"))
            elif isinstance(n, Var):
                h.update(str(n.index).encode())
            elif hasattr(n, "var"):
                h.update(b"v%d%s" % (n.var, b"b" if n.bound is not None else b"u"))
            size = 1
            for k in kids:
                h.update(self._digest[id(k)])
                size += self._size[id(k)]
            d = h.digest()
            # count child uses once per distinct parent, so the plan depends on
            # the tree and not on which equal subtrees happen to be one object
            if d not in self._counted:
                self._counted.add(d)
                for k in kids:
                    dk = self._digest[id(k)]
                    refs[dk] = refs.get(dk, 0) + 1
            self._digest[id(n)] = d
            self._size[id(n)] = size
            self._keep.append(n)

    def _named_in(self, root, named, found) -> None:
        seen: set = set()
        stack = [root]
        while stack:
            n = stack.pop()
            if id(n) in seen:
                continue
            seen.add(id(n))
            if isinstance(n, Num):
                v = n.value
                if v.bit_length() > C.NAMED_ABOVE_BITS and v not in named:
                    src = C.named_expression(v)
                    if src is not None:
                        named[v] = src
                        found.append(src)
            else:
                stack.extend(_kids(n))

    # -- printing
    def _ensure(self, root) -> None:
        """Emit every let that the text of ``root`` will mention."""
        stack = [(root, True)]
        while stack:
            n, top = stack.pop()
            if not top and id(n) in self.aliases:
                self._emit_alias(n)
                continue
            if id(n) in self._visited:
                continue
            self._visited.add(id(n))
            if isinstance(n, Num):
                self._emit_numeral(n.value)
            else:
                stack.extend((k, False) for k in _kids(n))

    def _emit_alias(self, n) -> None:
        label = self.aliases[id(n)]
        if label in self._emitted:
            return
        self._ensure(n)
        self._emitted.add(label)
        self.lets.append((label, to_text(n, self.names, self.aliases)))

    def _emit_numeral(self, v: int) -> None:
        if v in self.names or v not in self._named:
            return
        src = self._named[v]
        if isinstance(src, Formula) and id(src) in self.aliases:
            self._emit_alias(src)
            text = "@" + self.aliases[id(src)]
        else:
            self._ensure(src)
            text = to_text(src, self.names, self.aliases)
        if v not in self.names:
            label = f"a{len(self.names)}"
            self.lets.append((label, text))
            self.names[v] = label

    def expr(self, x) -> str:
        if isinstance(x, Formula) and id(x) in self.aliases:
            self._emit_alias(x)
            return "@" + self.aliases[id(x)]
        self._ensure(x)
        return to_text(x, self.names, self.aliases)

    def proof(self, p) -> str:
        for part in _proof_parts(p):
            self._ensure(part)
        return p.to_text(self.names, self.aliases)

    def header(self) -> list:
        return [list(kv) for kv in self.lets]


class Reader:
    def __init__(self, lets, macros=None):
        self.codes: Dict[str, int] = {}
        self.lets: Dict[str, Formula] = {}
        self.macros = macros
        for label, text in lets:
            if label.startswith("f"):
                self.lets[label] = self.formula(text)
            else:
                self.codes[label] = C.STANDARD.encode(self._expr(text))

    def _expr(self, text):
        try:
            return self.formula(text)
        except ValueError:
            return self.term(text)

    def formula(self, text: str) -> Formula:
        if text.startswith("@") and text[1:] in self.lets:
            return self.lets[text[1:]]
        return parse(text, self.macros, self.codes, self.lets)

    def term(self, text: str) -> Term:
        return parse_term(text, self.codes)

    def proof(self, text: str):
        from .proofsys import ProofObject
        return ProofObject.from_text(text, self.macros, self.codes, self.lets)
