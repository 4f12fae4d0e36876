"""Claim ledger: statements, certificate trees, computed assumption sets, bundles.

A claim's tree mixes three kinds of node:

* :class:`Leaf`: a registered assumption;
* :class:`Evidence`: something a machine re-checks (a proof, a GL derivation,
  an evaluation, a structural identity);
* :class:`Claim`: a sub-claim.

Verdicts are never declared.  A claim with no assumption leaf below it is
``Checked`` (or ``Refuted`` when the statement is shown false); otherwise it is
``Conditional`` on exactly the leaves found.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from . import assumptions as A
from .semantics import (
    Assumption, Certificate, OracleProof, Reduction, TruthVerdict, Witness, eval_with_hints,
)

FORMAT = "mmw-ledger/1"


class CertificateError(ValueError):
    """A certificate failed its check while a claim was being assembled."""


class ReplayError(ValueError):
    pass


# --------------------------------------------------------------------------
# nodes

@dataclass(frozen=True)
class Leaf:
    name: str

    def __post_init__(self):
        A.require(self.name)

    def assumptions(self) -> frozenset:
        return frozenset((self.name,))


@dataclass(eq=False)
class Evidence:
    """A re-checkable fact.

    ``op`` names a checker in :data:`CHECKERS`; ``args`` are its inputs (formulas,
    proofs, theories, plain values).  ``children`` hold the leaves the fact rests on.
    """

    op: str
    args: dict
    children: Tuple = ()
    note: str = ""

    def __post_init__(self):
        if self.op not in CHECKERS:
            raise ValueError(f"unknown evidence op {self.op!r}")

    def assumptions(self) -> frozenset:
        out: set = set()
        for c in self.children:
            out |= c.assumptions()
        return frozenset(out)

    def check(self) -> bool:
        try:
            return bool(CHECKERS[self.op](**self.args))
        except (ValueError, TypeError, KeyError, AttributeError, IndexError) as e:
            self._error = str(e)
            return False


@dataclass(eq=False)
class Claim:
    kind: str
    statement: dict
    holds: bool
    children: Tuple = ()

    def assumptions(self) -> frozenset:
        out: set = set()
        for c in self.children:
            out |= c.assumptions()
        return frozenset(out)

    @property
    def verdict(self) -> str:
        if self.assumptions():
            return "Conditional"
        return "Checked" if self.holds else "Refuted"

    def label(self) -> str:
        a = sorted(self.assumptions())
        pol = "holds" if self.holds else "fails"
        return self.verdict if not a else f"Conditional({', '.join(a)}) [{pol}]"

    def walk(self):
        """Pre-order over the whole tree."""
        stack = [self]
        while stack:
            n = stack.pop()
            yield n
            if isinstance(n, (Claim, Evidence)):
                stack.extend(reversed(n.children))

    def evidence(self) -> List[Evidence]:
        return [n for n in self.walk() if isinstance(n, Evidence)]

    def check(self) -> bool:
        """Re-run every piece of evidence in the tree."""
        return all(e.check() for e in self.evidence())

    def find(self, kind: str) -> Optional["Claim"]:
        for n in self.walk():
            if isinstance(n, Claim) and n.kind == kind:
                return n
        return None


def require_checked(e: Evidence) -> Evidence:
    if not e.check():
        raise CertificateError(f"{e.op} evidence does not check: {getattr(e, '_error', e.note)}")
    return e


# --------------------------------------------------------------------------
# checkers: each re-derives a fact from its inputs

def _c_proof(theory, proof, goal):
    from .proofsys import check
    return proof.goal == goal and check(theory, proof).accepted


def _c_eval(sentence, hints, value, bound=None):
    if bound is None:
        return eval_with_hints(sentence, hints).value == value
    return eval_with_hints(sentence, hints, bound).value == value


def _c_gl(formula, derivation):
    from .modal import Valid, parse_modal, verify
    return verify(Valid(derivation), parse_modal(formula))


def _c_gl_countermodel(formula, model):
    from .modal import Invalid, parse_modal, verify
    return verify(Invalid(model), parse_modal(formula))


def _c_equal(left, right):
    return left == right


def _c_taut(formula):
    from .proofsys import is_tautology
    return is_tautology(formula)


def _c_classify(formula, cls):
    from .hierarchy import classify
    return str(classify(formula)) == cls


def _c_goedelian_form(theory, sentence, biconditional):
    from .provability import build_pr
    from .syntax import Iff, Not
    return biconditional == Iff(sentence, Not(build_pr(theory).pr_name(sentence)))


def _c_realization(theory, modal, atoms, sentence):
    from .modal import Realization, parse_modal
    r = Realization({int(k): v for k, v in atoms.items()}, theory)
    return r.translate(parse_modal(modal)) == sentence


def _c_code(expr, value):
    from .coding import STANDARD
    return STANDARD.encode(expr) == value


def _c_neg_code(sentence):
    from .coding import NOT, STANDARD, tokens
    c = STANDARD.encode(sentence)
    return STANDARD.encode(_not(sentence)) == NOT * 32 ** len(tokens(sentence)) + c


def _not(f):
    from .syntax import Not
    return Not(f)


def _c_fixed_point(delta, h, hole):
    from .modal import atoms, gl_proves, iff, parse_modal, substitute
    d, f = parse_modal(delta), parse_modal(h)
    return hole not in atoms(f) and gl_proves(iff(f, substitute(d, hole, f)))


def _c_shape(formula, shape):
    return type(formula).__name__ == shape


def _c_schematic(statement):
    # a textbook metatheorem used as an inference rule; nothing to re-run
    return bool(statement)


def _c_extends(theory, base):
    return theory.extends(base)


def _c_omega(theory, xi, n_max, proofs, existential):
    from .proofsys import check
    from .syntax import Exists, Not, apply, numeral
    if existential.goal != Exists(xi.hole, Not(xi.body)) or not check(theory, existential).accepted:
        return False
    if len(proofs) != n_max:
        return False
    return all(p.goal == apply(xi, numeral(n)) and check(theory, p).accepted
               for n, p in enumerate(proofs, 1))


CHECKERS: Dict[str, Callable[..., bool]] = {
    "proof": _c_proof,
    "eval": _c_eval,
    "gl": _c_gl,
    "gl-countermodel": _c_gl_countermodel,
    "equal": _c_equal,
    "taut": _c_taut,
    "classify": _c_classify,
    "goedelian-form": _c_goedelian_form,
    "realization": _c_realization,
    "code": _c_code,
    "neg-code": _c_neg_code,
    "fixed-point": _c_fixed_point,
    "shape": _c_shape,
    "schematic": _c_schematic,
    "extends": _c_extends,
    "omega": _c_omega,
}


# --------------------------------------------------------------------------
# serialization of evidence arguments

def _dump_arg(v, w, theories):
    from .modal import Derivation, Model
    from .proofsys import ProofObject, Theory
    from .syntax import Formula, Term, UnaryPredicate
    if isinstance(v, Theory):
        theories[v.key()] = v
        return {"theory": v.key()}
    if isinstance(v, ProofObject):
        return {"proof": w.proof(v)}
    if isinstance(v, UnaryPredicate):
        return {"predicate": w.expr(v.body), "hole": v.hole}
    if isinstance(v, Formula):
        return {"formula": w.expr(v)}
    if isinstance(v, Term):
        return {"term": w.expr(v)}
    if isinstance(v, Derivation):
        return {"derivation": v.to_json()}
    if isinstance(v, Model):
        return {"model": v.to_json()}
    if isinstance(v, Certificate):
        return {"hint": _dump_hint(v, w, theories)}
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, int):
        return {"int": hex(v)}
    if isinstance(v, (list, tuple)):
        return [_dump_arg(x, w, theories) for x in v]
    if isinstance(v, dict):
        return {"map": {str(k): _dump_arg(x, w, theories) for k, x in sorted(v.items())}}
    raise TypeError(f"cannot serialize {type(v).__name__}")


def _dump_hint(c, w, theories):
    if isinstance(c, Assumption):
        return {"kind": "assumption", "name": c.name, "value": c.value}
    if isinstance(c, Reduction):
        return {"kind": "reduction", "target": w.expr(c.target), "assumption": c.assumption,
                "proof": w.proof(c.proof) if c.proof is not None else None}
    if isinstance(c, OracleProof):
        theories[c.theory.key()] = c.theory
        return {"kind": "oracle", "theory": c.theory.key(), "sentence": w.expr(c.sentence),
                "proof": w.proof(c.proof)}
    if isinstance(c, Witness):
        return {"kind": "witness", "var": c.var, "value": hex(c.value)}
    raise TypeError(f"cannot serialize hint {type(c).__name__}")


def _parts_of(v):
    from .proofsys import ProofObject
    from .syntax import Formula, Term, UnaryPredicate
    if isinstance(v, (ProofObject, Formula, Term)):
        yield v
    elif isinstance(v, UnaryPredicate):
        yield v.body
    elif isinstance(v, Reduction):
        yield v.target
        if v.proof is not None:
            yield v.proof
    elif isinstance(v, OracleProof):
        yield v.sentence
        yield v.proof
    elif isinstance(v, (list, tuple)):
        for x in v:
            yield from _parts_of(x)
    elif isinstance(v, dict):
        for x in v.values():
            yield from _parts_of(x)


class _Loader:
    def __init__(self, reader, theories):
        self.r = reader
        self.theories = theories

    def arg(self, v):
        from .modal import Derivation, Model
        from .syntax import UnaryPredicate
        if isinstance(v, list):
            return [self.arg(x) for x in v]
        if not isinstance(v, dict):
            return v
        (k, x), = v.items() if len(v) == 1 else ((None, None),)
        if "predicate" in v:
            return UnaryPredicate(self.r.formula(v["predicate"]), v["hole"])
        if k == "theory":
            return self.theories[x]
        if k == "proof":
            return self.r.proof(x)
        if k == "formula":
            return self.r.formula(x)
        if k == "term":
            return self.r.term(x)
        if k == "derivation":
            return Derivation.from_json(x)
        if k == "model":
            return Model.from_json(x)
        if k == "hint":
            return self.hint(x)
        if k == "int":
            return int(x, 16)
        if k == "map":
            return {kk: self.arg(xx) for kk, xx in x.items()}
        raise ReplayError(f"unknown argument encoding {sorted(v)}")

    def hint(self, h):
        k = h["kind"]
        if k == "assumption":
            return Assumption(h["name"], h["value"])
        if k == "reduction":
            p = self.r.proof(h["proof"]) if h["proof"] is not None else None
            return Reduction(p, self.r.formula(h["target"]), h["assumption"])
        if k == "oracle":
            return OracleProof(self.theories[h["theory"]], self.r.formula(h["sentence"]),
                               self.r.proof(h["proof"]))
        if k == "witness":
            return Witness(h["var"], int(h["value"], 16), None)
        raise ReplayError(f"unknown hint kind {k!r}")


# --------------------------------------------------------------------------
# bundles

def _canon(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode()


def _sha(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _atomic_write(path: str, data: bytes) -> None:
    d = os.path.dirname(path)
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    with os.fdopen(fd, "wb") as fh:
        fh.write(data)
    os.chmod(tmp, 0o644)
    os.replace(tmp, path)


def _evidence_doc(e: Evidence, theories: dict) -> dict:
    from .serial import Writer
    w = Writer(list(_parts_of(list(e.args.values()))))
    args = {k: _dump_arg(v, w, theories) for k, v in sorted(e.args.items())}
    return {"format": FORMAT, "op": e.op, "note": e.note, "lets": w.header(), "args": args}


@dataclass
class Ledger:
    """Claims plus the run configuration that produced them."""

    claims: List[Claim] = field(default_factory=list)
    run: dict = field(default_factory=dict)

    def add(self, c: Claim) -> Claim:
        self.claims.append(c)
        return c

    def audit(self) -> None:
        """Structural invariants: Checked/Refuted trees carry no leaves; every verdict is computed."""
        for root in self.claims:
            for n in root.walk():
                if isinstance(n, Claim) and n.verdict in ("Checked", "Refuted"):
                    assert not any(isinstance(m, Leaf) for m in n.walk()), n.kind

    def write(self, out_dir: str) -> str:
        """Write the bundle; returns the ledger hash (hash of ``claims.json``)."""
        self.audit()
        theories: dict = {}
        files: Dict[str, bytes] = {}
        node_ids: Dict[int, str] = {}
        records: Dict[str, dict] = {}

        def visit(n) -> str:
            if id(n) in node_ids:
                return node_ids[id(n)]
            if isinstance(n, Leaf):
                ref = "leaf:" + n.name
            elif isinstance(n, Evidence):
                doc = _canon(_evidence_doc(n, theories))
                h = _sha(doc)
                files[f"certificates/{h}.json"] = doc
                kids = [visit(c) for c in n.children]
                rec = {"type": "evidence", "op": n.op, "file": h, "children": kids,
                       "assumptions": sorted(n.assumptions())}
                ref = "e:" + _sha(_canon(rec))
                records[ref] = rec
            else:
                kids = [visit(c) for c in n.children]
                rec = {"type": "claim", "kind": n.kind, "statement": n.statement, "holds": n.holds,
                       "verdict": n.verdict, "assumptions": sorted(n.assumptions()), "children": kids}
                ref = "c:" + _sha(_canon(rec))
                records[ref] = rec
            node_ids[id(n)] = ref
            return ref

        roots = [visit(c) for c in self.claims]
        for key, t in theories.items():
            files[f"theories/{key}.txt"] = _theory_text(t).encode()
        index = {"format": FORMAT, "run": self.run, "roots": roots, "nodes": records,
                 "files": {name: _sha(data) for name, data in sorted(files.items())}}
        top = _canon(index)
        for name, data in sorted(files.items()):
            _atomic_write(os.path.join(out_dir, name), data)
        _atomic_write(os.path.join(out_dir, "claims.json"), top)
        return _sha(top)

    def table(self) -> List[Tuple[str, str]]:
        return [(c.kind, c.label()) for c in self.claims]


def _theory_text(t) -> str:
    from .serial import Writer
    w = Writer(list(t.base) + list(t.extra) + list(t.diagonal_axioms))
    body = {"name": t.name, "note": t.note, "schemes": list(t.schemes),
            "base": [w.expr(a) for a in t.base], "extra": [w.expr(a) for a in t.extra],
            "diagonal": [w.expr(c) for c in t.diagonal_axioms]}
    return json.dumps({"format": FORMAT, "lets": w.header(), "theory": body}, sort_keys=True, indent=0)


def _load_theory(data: bytes):
    from .proofsys import Theory
    from .serial import Reader
    doc = json.loads(data)
    r = Reader(doc["lets"])
    b = doc["theory"]
    return Theory(b["name"], tuple(r.formula(x) for x in b["base"]), tuple(b["schemes"]),
                  tuple(r.formula(x) for x in b["extra"]), b["note"],
                  tuple(r.formula(x) for x in b["diagonal"]))


@dataclass
class ReplayReport:
    ok: bool
    ledger_hash: str
    verdicts: Dict[str, str]
    problems: List[str]


def replay_bundle(out_dir: str) -> ReplayReport:
    """Re-check every certificate file and recompute every verdict."""
    from .serial import Reader
    with open(os.path.join(out_dir, "claims.json"), "rb") as fh:
        top = fh.read()
    index = json.loads(top)
    problems: List[str] = []
    if index.get("format") != FORMAT:
        problems.append(f"unsupported format {index.get('format')!r}")
        return ReplayReport(False, _sha(top), {}, problems)
    blobs: Dict[str, bytes] = {}
    for name, h in index["files"].items():
        try:
            with open(os.path.join(out_dir, name), "rb") as fh:
                data = fh.read()
        except OSError as e:
            problems.append(f"{name}: {e.strerror}")
            continue
        if _sha(data) != h:
            problems.append(f"{name}: content hash mismatch")
            continue
        blobs[name] = data
    theories = {}
    for name, data in blobs.items():
        if name.startswith("theories/"):
            t = _load_theory(data)
            key = name[len("theories/"):-len(".txt")]
            if t.key() != key:
                problems.append(f"{name}: theory digest mismatch")
            theories[key] = t
    nodes = index["nodes"]
    evidence_ok: Dict[str, bool] = {}
    for ref, rec in sorted(nodes.items()):
        if rec["type"] != "evidence":
            continue
        data = blobs.get(f"certificates/{rec['file']}.json")
        if data is None:
            evidence_ok[ref] = False
            continue
        doc = json.loads(data)
        try:
            ld = _Loader(Reader(doc["lets"]), theories)
            args = {k: ld.arg(v) for k, v in doc["args"].items()}
            ok = bool(CHECKERS[doc["op"]](**args))
        except Exception as e:  # noqa: BLE001 - any failure of a replayed certificate is a finding
            problems.append(f"evidence {rec['file'][:12]} ({doc.get('op')}): {type(e).__name__}: {e}")
            ok = False
        if not ok:
            problems.append(f"evidence {rec['file'][:12]} ({doc.get('op')}) does not check")
        evidence_ok[ref] = ok

    memo: Dict[str, frozenset] = {}

    def leaves(ref) -> frozenset:
        if ref.startswith("leaf:"):
            return frozenset((ref[5:],))
        if ref not in memo:
            out: set = set()
            for c in nodes[ref]["children"]:
                out |= leaves(c)
            memo[ref] = frozenset(out)
        return memo[ref]

    verdicts = {}
    for ref, rec in sorted(nodes.items()):
        got = sorted(leaves(ref))
        if got != rec["assumptions"]:
            problems.append(f"{ref[:14]}: assumption set differs from its leaves")
        if rec["type"] == "claim":
            v = "Conditional" if got else ("Checked" if rec["holds"] else "Refuted")
            if v != rec["verdict"]:
                problems.append(f"{ref[:14]}: verdict {rec['verdict']} does not recompute ({v})")
            verdicts[ref] = v
    return ReplayReport(not problems, _sha(top), verdicts, problems)
