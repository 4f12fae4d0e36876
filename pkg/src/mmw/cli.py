"""Command-line front end.

Exit codes:

* 0  success
* 2  parse error (bad formula or modal grammar, bad flag)
* 3  precondition failure (unknown theory or gallery name, wrong hole arity,
     a construction whose hypotheses do not hold)
* 4  replay failure (a bundle that does not re-check)
"""

from __future__ import annotations

import functools
import json
import os
import sys
from dataclasses import asdict, dataclass
from typing import Callable, Dict, List, Optional

import click

from . import __version__
from . import assumptions as A
from . import coding as C
from . import metatheorems as MT
from .claims import CertificateError, Claim, Evidence, Leaf, Ledger, ReplayError, _atomic_write, \
    replay_bundle, require_checked
from .diagonal import HoleArityError, diagonalize, goedel_sentence
from .hierarchy import classify
from .modal import ModalParseError
from .proofsys import Theory, TheoryError, parse_theory
from .provability import build_pr, get_theory, not_proof_of_bot, omega_witness_search, pa_not_con
from .semantics import DEFAULT_BOUND
from .syntax import Formula, Not, ParseError, UnaryPredicate, apply, parse

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_REPLAY = 0, 2, 3, 4


class Precondition(click.ClickException):
    exit_code = EXIT_PRECONDITION


class ReplayFailure(click.ClickException):
    exit_code = EXIT_REPLAY


class BadGrammar(click.ClickException):
    exit_code = EXIT_PARSE


# --------------------------------------------------------------------------
# run configuration

@dataclass(frozen=True)
class RunConfig:
    theory: Optional[str] = None
    numbering: str = "standard"
    budget_proof: int = 2000
    eval_bound: int = DEFAULT_BOUND
    nmax: int = 32
    out: str = "mmw-out"
    seed: int = 0

    def __post_init__(self):
        for name in ("budget_proof", "eval_bound", "nmax"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.numbering not in ("standard", "direct"):
            raise ValueError(f"unknown numbering {self.numbering!r}")

    def run_record(self, command: str, **extra) -> dict:
        """What goes into the ledger: everything but the output directory."""
        d = asdict(self)
        d.pop("out")
        d.update(extra, command=command, version=__version__)
        return d


def load_theory(spec: str) -> Theory:
    """A builtin name, or a theory file (see :func:`proofsys.parse_theory`)."""
    if not os.path.isfile(spec):
        try:
            return get_theory(spec)
        except KeyError as e:
            raise Precondition(str(e.args[0])) from None
    with open(spec, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return parse_theory(text, _macros(None))
    except ParseError as e:
        raise BadGrammar(f"{spec}: {e}") from None
    except TheoryError as e:
        raise Precondition(f"{spec}: {e}") from None


def _macros(theory: Optional[Theory]) -> Callable:
    def resolve(name: str, arg):
        if name == "T":
            if theory is None:
                raise ValueError("PR[T] needs --theory")
            return build_pr(theory).pr_of(arg)
        return build_pr(load_theory(name)).pr_of(arg)
    return resolve


def _parse(text: str, theory: Optional[Theory], what: str) -> Formula:
    try:
        return parse(text, _macros(theory))
    except ParseError as e:
        pointer = " " * min(e.pos, 60) + "^"
        raise BadGrammar(f"{what}: {e}\n  {text[:80]}\n  {pointer}") from None


# --------------------------------------------------------------------------
# output

def _emit(cfg: RunConfig, claims: List[Claim], run: dict, extra_files: Optional[Dict[str, object]] = None) -> str:
    ledger = Ledger(list(claims), run)
    h = ledger.write(cfg.out)
    for name, obj in (extra_files or {}).items():
        _atomic_write(os.path.join(cfg.out, name), (json.dumps(obj, sort_keys=True, indent=1) + "\n").encode())
    _print_table(claims)
    click.echo(f"bundle: {cfg.out}")
    click.echo(f"ledger hash: {h}")
    return h


def _print_table(claims: List[Claim]) -> None:
    width = max([len(c.kind) for c in claims] + [5])
    click.echo(f"{'claim':<{width}}  {'verdict':<11}  holds  assumptions")
    for c in claims:
        a = "; ".join(sorted(c.assumptions())) or "-"
        click.echo(f"{c.kind:<{width}}  {c.verdict:<11}  {str(c.holds):<5}  {a}")


def _short(f: Formula) -> str:
    d = MT.describe(f)
    return d.get("text") or f"<{d['digest']}>"


def _guard(fn):
    """Map the library's expected errors onto documented exit codes."""
    @functools.wraps(fn)
    def wrapper(*a, **kw):
        try:
            return fn(*a, **kw)
        except ModalParseError as e:
            raise BadGrammar(f"modal formula: {e}") from None
        except ParseError as e:
            raise BadGrammar(str(e)) from None
        except (MT.PreconditionError, MT.MismatchError, MT.UnsupportedPredicate, HoleArityError,
                TheoryError, CertificateError, A.UnknownAssumption) as e:
            raise Precondition(str(e)) from None
        except ValueError as e:
            raise Precondition(str(e)) from None
        except OSError as e:
            raise Precondition(f"cannot write output: {e}") from None
    return wrapper


def common_options(fn):
    @click.option("--theory", default=None, help="Builtin theory (Q, PA, toy, PA+notConPA, PA+K) or a theory file.")
    @click.option("--numbering", type=click.Choice(["standard", "direct"]), default="standard", show_default=True)
    @click.option("--budget-proof", type=int, default=2000, show_default=True, help="Proof-search node budget.")
    @click.option("--eval-bound", type=int, default=DEFAULT_BOUND, show_default=True,
                  help="Search bound for unbounded quantifiers.")
    @click.option("--nmax", type=int, default=32, show_default=True, help="Cut for ω-witness instances.")
    @click.option("--out", envvar="MMW_OUT", default="mmw-out", show_default=True, help="Output directory.")
    @click.option("--seed", type=int, default=0, show_default=True)
    @functools.wraps(fn)
    def wrapper(theory, numbering, budget_proof, eval_bound, nmax, out, seed, **kw):
        try:
            cfg = RunConfig(theory, numbering, budget_proof, eval_bound, nmax, out, seed)
        except ValueError as e:
            raise click.BadParameter(str(e)) from None
        return fn(cfg, **kw)
    return wrapper


def _theory(cfg: RunConfig, default: Optional[str]) -> Optional[Theory]:
    name = cfg.theory or default
    return load_theory(name) if name else None


def _numbering(cfg: RunConfig) -> C.Numbering:
    return C.STANDARD if cfg.numbering == "standard" else C.Numbering("direct")


# --------------------------------------------------------------------------
# commands

@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="mmw")
def main():
    """Build self-referential sentences, audit schemes and replay claim ledgers."""


@main.command("diagonalize")
@click.option("--delta", required=True, help="One-hole predicate in x0, e.g. '~PR[T](x0)'.")
@click.option("--phi", default=None, help="Optional sentence folded into the matrix.")
@click.option("--form", type=click.Choice(["universal", "existential"]), default="universal", show_default=True)
@common_options
@_guard
def cmd_diagonalize(cfg: RunConfig, delta: str, phi: Optional[str], form: str):
    """Build ψ with Q ⊢ ψ <-> Δ(#ψ) (or ψ <-> (φ <-> Δ(#ψ)))."""
    t = _theory(cfg, "Q")
    body = _parse(delta, t, "--delta")
    try:
        pred = UnaryPredicate(body, 0)
    except ValueError as e:
        raise Precondition(f"--delta: {e}") from None
    phi_f = _parse(phi, t, "--phi") if phi is not None else None
    n = _numbering(cfg)
    d = diagonalize(n, pred, phi_f, form=form)
    claims = [_diagonal_claim(d)]
    verdicts = {}
    for label, f, hints in (("psi", d.psi, d.hints),
                            ("delta_at_psi", apply(d.delta, n.name_of(d.psi)), ())):
        try:
            c = MT.truth(f, hints, label, bound=cfg.eval_bound)
        except MT.PreconditionError:
            verdicts[label] = "Unknown"
            continue
        claims.append(c)
        verdicts[label] = c.label()
    summary = d.summary()
    summary["psi_text"] = MT.describe(d.psi).get("text")
    click.echo(f"ψ      = {_short(d.psi)}")
    click.echo(f"#ψ     = {d.code.bit_length()}-bit code")
    click.echo(f"class  = {classify(d.psi)}")
    click.echo(f"ℕ ⊨ ψ : {verdicts['psi']}")
    click.echo(f"ℕ ⊨ Δ(#ψ) : {verdicts['delta_at_psi']}")
    run = cfg.run_record("diagonalize", delta=delta, phi=phi, form=form)
    _emit(cfg, claims, run, {"diagonal.json": summary})


def _diagonal_claim(d) -> Claim:
    from .diagonal import DirectIdentity, TextbookDiagonal
    cert = d.certificate
    if isinstance(cert, DirectIdentity):
        kids = (require_checked(Evidence("equal", {"left": d.psi, "right": d.biconditional.right},
                                         note="direct self-reference")),)
    elif isinstance(cert, TextbookDiagonal):
        kids = (Leaf(cert.assumption),)
    else:
        kids = (MT.proof_evidence(d.provable_in, cert, d.biconditional),)
    return MT.provable(d.provable_in, d.biconditional, kids, "diagonal biconditional")


@main.group("audit")
def cmd_audit():
    """Scheme audits and ledger replay."""


@cmd_audit.command("scheme")
@click.option("--instance", type=click.Choice(["kreisel", "tautological", "sound"]), required=True)
@common_options
@_guard
def audit_scheme(cfg: RunConfig, instance: str):
    """Audit the fixed-point scheme on a builtin instance."""
    if instance == "kreisel":
        claims = [MT.kreisel_audit()]
    elif instance == "tautological":
        claims = [MT.tautological_audit(_theory(cfg, None))]
    else:
        t = _theory(cfg, "PA")
        claims = [MT.audit_scheme_sound(t, goedel_sentence(t))]
    _emit(cfg, claims, cfg.run_record("audit scheme", instance=instance))


@cmd_audit.command("dual")
@common_options
@_guard
def audit_dual(cfg: RunConfig):
    """The dual-scheme counterexample (default theory PA+notConPA)."""
    t = _theory(cfg, "PA+notConPA")
    _emit(cfg, [MT.dual_default(t)], cfg.run_record("audit dual"))


@cmd_audit.command("replay")
@click.argument("bundle", type=click.Path(file_okay=False))
def audit_replay(bundle: str):
    """Re-check every certificate in BUNDLE and recompute its verdicts."""
    try:
        rep = replay_bundle(bundle)
    except (OSError, ValueError, KeyError, TypeError, ReplayError) as e:
        raise ReplayFailure(f"cannot replay {bundle}: {e}") from None
    for ref, v in rep.verdicts.items():
        click.echo(f"{v:<11}  {ref}")
    for p in rep.problems:
        click.echo(f"problem: {p}", err=True)
    click.echo(f"ledger hash: {rep.ledger_hash}")
    if not rep.ok:
        raise ReplayFailure(f"{len(rep.problems)} problem(s) found")
    click.echo("replay: ok")


# --------------------------------------------------------------------------
# gallery

def _g_goedel(cfg):
    t = _theory(cfg, "PA")
    d = goedel_sentence(t, _numbering(cfg))
    cls = classify(d.psi)
    shape = Claim("ClassIs", {"formula": MT.describe(d.psi), "class": str(cls)}, True,
                  (require_checked(Evidence("classify", {"formula": d.psi, "cls": str(cls)})),))
    if d.numbering.kind == "direct":
        return [_diagonal_claim(d), shape]
    return [MT.goedelian_claim(t, d), shape, MT.goedel_ii_truth_claim(t, d)]


def _g_theorem1(cfg):
    t = _theory(cfg, "PA+notConPA")
    r = MT.theorem1_toy() if t.name == "toy" else MT.theorem1_default(t)
    return r.claims()


def _g_lemma1(cfg):
    r = MT.theorem1_default(_theory(cfg, "PA+notConPA"))
    return [r.goedelian, r.false_in_n]


def _g_omega(cfg):
    t = _theory(cfg, "PA+notConPA")
    xi = not_proof_of_bot(load_theory("PA"))
    rep = omega_witness_search(t, xi, cfg.nmax, cfg.budget_proof, cfg.seed)
    st = {"theory": t.name, "n_max": cfg.nmax, "xi": "~Prf_PA(x, #bot)"}
    if rep.complete:
        ev = require_checked(Evidence("omega", {
            "theory": t, "xi": xi, "n_max": cfg.nmax, "existential": rep.existential.proof,
            "proofs": [o.proof for o in rep.instances]}))
        claims = [Claim("OmegaWitnessCut", st, True, (ev,))]
    else:
        claims = []
    missing = [o.name for o in [rep.existential] + rep.instances if not o.certified]
    click.echo(f"existential certified: {rep.existential.certified}; "
               f"instances certified: {sum(o.certified for o in rep.instances)}/{cfg.nmax}")
    if missing:
        click.echo("uncertified: " + ", ".join(missing))
    return claims, {"omega_report.json": rep.to_json()}


def _g_classify(cfg):
    t = _theory(cfg, "PA")
    out = []
    for name in list(MT.MODAL_TEMPLATES) + list(MT.SYNTACTIC):
        c = MT.classify_predicate(t, name)
        click.echo(f"{name:<16} {c.kind}")
        out.append(c.claim)
    return out


def _g_goedelianize(cfg):
    t = _theory(cfg, "PA")
    phi = parse("0 = S(0)")
    return MT.goedelianize(t, phi, budget=cfg.budget_proof, seed=cfg.seed).claims()


def _g_pi3(cfg):
    from .provability import Q
    toy12 = Q.with_extra("Q+1=2", [parse("num(1) = num(2)")], note="a false Δ0 axiom")
    pp = build_pr(load_theory("PA"))
    corpus = [parse("forall x0. ~S(x0) = 0"), parse("forall x0. (x0 + 0) = x0"),
              parse("num(1) = num(2)"), Not(pp.con)]
    reports = {}
    claims: List[Claim] = []
    for t in (Q, toy12, pa_not_con()):
        rep = MT.pi3_audit(t, corpus, cfg.budget_proof, cfg.seed, cfg.eval_bound)
        click.echo(f"{t.name:<14} {rep.summary}")
        reports[t.name] = rep.to_json()
        claims.extend(rep.violations)
    return claims, {"pi3_report.json": reports}


def _g_goedel_ii(cfg):
    t = _theory(cfg, "PA")
    return [MT.goedel_ii_truth_claim(t, goedel_sentence(t))]


GALLERY: Dict[str, tuple] = {
    "goedel": ("Gödel sentence G with its Gödelian claim, class and truth condition", _g_goedel),
    "henkin": ("Henkin sentence, provable via Löb", lambda cfg: [MT.henkin_claim(_theory(cfg, "PA"))]),
    "lemma1": ("τ∧γ is Gödelian in PA+notConPA", _g_lemma1),
    "theorem1": ("a false Gödelian sentence of an unsound theory", _g_theorem1),
    "theorem1-toy": ("false Gödelian sentence over the inconsistent toy theory", lambda cfg: MT.theorem1_toy().claims()),
    "omega-witness": ("ω-inconsistency witness for PA+notConPA up to --nmax", _g_omega),
    "kreisel": ("Kreisel instance of the fixed-point scheme", lambda cfg: [MT.kreisel_audit()]),
    "tautological": ("tautological instance of the scheme", lambda cfg: [MT.tautological_audit(_theory(cfg, None))]),
    "dual": ("dual-scheme counterexample", lambda cfg: [MT.dual_default(_theory(cfg, "PA+notConPA"))]),
    "classify": ("self-fulfilling and self-falsifying predicates", _g_classify),
    "goedelianize": ("0 = S(0) made Gödelian in a consistent extension", _g_goedelianize),
    "pi3": ("Π3 soundness falsifier over Q, Q+1=2 and PA+notConPA", _g_pi3),
    "redundancy": ("the truth premise follows from the fixed point and Con(T)",
                   lambda cfg: [MT.redundancy_of_5(_theory(cfg, "PA"))]),
    "goedel-ii": ("ℕ ⊨ γ iff Con(T)", _g_goedel_ii),
}


@main.command("gallery")
@click.argument("name")
@common_options
@_guard
def cmd_gallery(cfg: RunConfig, name: str):
    """Run a named construction end to end (``gallery list`` shows them)."""
    if name == "list":
        for key, (doc, _) in GALLERY.items():
            click.echo(f"{key:<14} {doc}")
        return
    if name not in GALLERY:
        raise Precondition(f"unknown gallery entry {name!r}; try 'gallery list'")
    got = GALLERY[name][1](cfg)
    claims, files = got if isinstance(got, tuple) else (got, None)
    if not claims and not files:
        raise Precondition("the construction produced no claims")
    _emit(cfg, claims, cfg.run_record("gallery", name=name), files)


def run(argv=None) -> int:
    """Invoke the CLI without exiting; returns the exit code."""
    try:
        main.main(args=argv, prog_name="mmw", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.Abort:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
