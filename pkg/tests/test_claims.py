import json
import os

import pytest

from mmw import assumptions as A
from mmw.claims import (
    CertificateError, Claim, Evidence, Leaf, Ledger, _canon, _sha, replay_bundle, require_checked,
)
from mmw.metatheorems import kreisel_audit, theorem1_toy, truth
from mmw.syntax import parse


def small_ledger():
    led = Ledger(run={"command": "test"})
    led.add(truth(parse("(num(2) * num(3)) = num(6)"), label="six"))
    led.add(kreisel_audit())
    for c in theorem1_toy().claims():
        led.add(c)
    return led


@pytest.fixture(scope="module")
def bundle(tmp_path_factory):
    out = tmp_path_factory.mktemp("bundle")
    h = small_ledger().write(str(out))
    return out, h


def copy_bundle(src, dst):
    for root, _, files in os.walk(src):
        for name in files:
            p = os.path.join(root, name)
            q = os.path.join(dst, os.path.relpath(p, src))
            os.makedirs(os.path.dirname(q), exist_ok=True)
            with open(p, "rb") as a, open(q, "wb") as b:
                b.write(a.read())
    return dst


def load(out):
    with open(os.path.join(out, "claims.json")) as fh:
        return json.load(fh)


def save(out, index):
    with open(os.path.join(out, "claims.json"), "wb") as fh:
        fh.write(_canon(index))


def test_verdicts_are_computed():
    ev = require_checked(Evidence("equal", {"left": 1, "right": 1}))
    assert Claim("X", {}, True, (ev,)).verdict == "Checked"
    assert Claim("X", {}, False, (ev,)).verdict == "Refuted"
    c = Claim("X", {}, False, (ev, Claim("Y", {}, True, (Leaf(A.CON_PA),))))
    assert c.verdict == "Conditional" and c.assumptions() == {A.CON_PA}
    assert c.label() == "Conditional(Con(PA)) [fails]"


def test_registry_is_closed():
    with pytest.raises(A.UnknownAssumption):
        Leaf("the moon is cheese")
    with pytest.raises(ValueError):
        Evidence("vibes", {})


def test_failing_evidence_is_refused():
    with pytest.raises(CertificateError):
        require_checked(Evidence("equal", {"left": 1, "right": 2}))


def test_write_is_deterministic(bundle, tmp_path):
    out, h = bundle
    assert small_ledger().write(str(tmp_path)) == h


def test_replay_clean(bundle):
    out, h = bundle
    rep = replay_bundle(str(out))
    assert rep.ok, rep.problems
    assert rep.ledger_hash == h
    assert set(rep.verdicts.values()) >= {"Checked", "Refuted", "Conditional"}


def test_replay_detects_changed_bytes(bundle, tmp_path):
    out = copy_bundle(bundle[0], tmp_path)
    cert = sorted(os.listdir(os.path.join(out, "certificates")))[0]
    with open(os.path.join(out, "certificates", cert), "ab") as fh:
        fh.write(b" ")
    rep = replay_bundle(str(out))
    assert not rep.ok and any("hash mismatch" in p for p in rep.problems)


def test_replay_reruns_certificates(bundle, tmp_path):
    out = copy_bundle(bundle[0], tmp_path)
    index = load(out)
    # flip the value of one evaluation certificate and re-seal its hash
    for name in index["files"]:
        if not name.startswith("certificates/"):
            continue
        path = os.path.join(out, name)
        with open(path) as fh:
            doc = json.load(fh)
        if doc["op"] == "eval":
            doc["args"]["value"] = not doc["args"]["value"]
            data = _canon(doc)
            with open(path, "wb") as fh:
                fh.write(data)
            index["files"][name] = _sha(data)
            break
    save(out, index)
    rep = replay_bundle(str(out))
    assert not rep.ok and any("(eval) does not check" in p for p in rep.problems)


def test_replay_recomputes_verdicts(bundle, tmp_path):
    out = copy_bundle(bundle[0], tmp_path)
    index = load(out)
    ref, rec = next((r, n) for r, n in sorted(index["nodes"].items()) if n.get("verdict") == "Conditional")
    rec["verdict"] = "Checked"
    save(out, index)
    assert any("does not recompute" in p for p in replay_bundle(str(out)).problems)


def test_replay_recomputes_assumptions(bundle, tmp_path):
    out = copy_bundle(bundle[0], tmp_path)
    index = load(out)
    for rec in index["nodes"].values():
        if rec["type"] == "claim":
            kept = [c for c in rec["children"] if not c.startswith("leaf:")]
            if kept != rec["children"]:
                rec["children"] = kept
                break
    save(out, index)
    assert any("assumption set differs" in p for p in replay_bundle(str(out)).problems)


def test_missing_file_reported(bundle, tmp_path):
    out = copy_bundle(bundle[0], tmp_path)
    theories = os.listdir(os.path.join(out, "theories"))
    os.remove(os.path.join(out, "theories", theories[0]))
    assert not replay_bundle(str(out)).ok
