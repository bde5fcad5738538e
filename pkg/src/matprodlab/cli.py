"""Command-line entry point: every module as a subcommand with JSON, CSV and DOT artifacts."""

from __future__ import annotations

import os

_threads = os.environ.get("MATPRODLAB_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(_var, _threads)

import argparse
import csv
import dataclasses
import enum
import json
import math
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Iterable

from . import __version__, betaconv, condc, gallery, kamae, langw, repmeasure, verify
from .exactmat import ExactMatrix, SupportPattern, format_rational, parse_rational
from .hclass import profile
from .projective import delta_coeff, proj_distance, tau

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def worker_count() -> int:
    """Worker cap from MATPRODLAB_THREADS (default 1; the CLI itself runs sequentially)."""
    try:
        return max(1, int(os.environ.get("MATPRODLAB_THREADS", "1")))
    except ValueError:
        return 1


# serialization -------------------------------------------------------------------


def plain(obj: Any) -> Any:
    """JSON-ready copy: rationals as "p/q", matrices via their own JSON, sets sorted."""
    if hasattr(obj, "to_json") and not isinstance(obj, type):
        return plain(obj.to_json())
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, SupportPattern):
        return str(obj)
    if isinstance(obj, enum.Enum):
        return obj.name
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (frozenset, set)):
        return sorted(plain(v) for v in obj)
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if dataclasses.is_dataclass(obj):
        return {f.name: plain(getattr(obj, f.name)) for f in dataclasses.fields(obj) if not f.name.startswith("_")}
    if hasattr(obj, "tolist"):
        return plain(obj.tolist())
    return str(obj)


def _float_text(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def dumps(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """Deterministic JSON with sorted keys and floats at 17 significant digits."""
    pad, inner = " " * (indent * _level), " " * (indent * (_level + 1))
    if isinstance(obj, float):
        return _float_text(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {dumps(v, indent, _level + 1)}" for k, v in sorted(obj.items())]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + dumps(v, indent, _level + 1) for v in obj) + "\n" + pad + "]"
    return json.dumps(obj)


def _g(x: float) -> str:
    return format(x, ".17g")


def _cell(x: Any) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    if isinstance(x, Fraction):
        return format_rational(x)
    return "" if x is None else str(x)


def write_csv(path: str, rows: Iterable[Iterable[Any]]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for row in rows:
            w.writerow([_cell(x) for x in row])


# run manifest --------------------------------------------------------------------


@dataclasses.dataclass
class RunManifest:
    subcommand: str
    argv: list[str]
    parameters: dict
    outputs: dict
    seed: int | None
    version: str = __version__

    def to_json(self) -> dict:
        return dataclasses.asdict(self)


@dataclasses.dataclass
class Outcome:
    """What a subcommand produced: JSON payload, verdict (None when not a check), CSV rows, DOT text."""

    payload: Any
    ok: bool | None = None
    summary: str = ""
    csv_rows: list | None = None
    dot: str | None = None


class UsageError(Exception):
    pass


# input parsing -----------------------------------------------------------------------


def _vector(text: str) -> list[Fraction]:
    try:
        return [parse_rational(t.strip()) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad vector {text!r}: {exc}") from exc


def _matrix_arg(args) -> ExactMatrix:
    if getattr(args, "matrix", None):
        obj = json.loads(Path(args.matrix).read_text())
        return ExactMatrix.from_json(obj) if isinstance(obj, dict) else ExactMatrix.from_rows(obj)
    if getattr(args, "rows", None):
        return ExactMatrix.from_rows([_vector(r) for r in args.rows.split(";")])
    if getattr(args, "word", None) and getattr(args, "family", "digits") == "digits":
        return langw.word_matrix(args.word)
    raise UsageError("give --matrix FILE, --rows 'a,b;c,d' or --word")


def _sequence_arg(path: str) -> list[ExactMatrix]:
    obj = json.loads(Path(path).read_text())
    if isinstance(obj, dict) and "word" in obj:
        return [langw.GENERATORS[int(c)] for c in obj["word"]]
    return [ExactMatrix.from_json(m) if isinstance(m, dict) else ExactMatrix.from_rows(m) for m in obj]


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"bad integer list {text!r}") from exc


# subcommands ---------------------------------------------------------------------------


def cmd_classify(args) -> Outcome:
    m = _matrix_arg(args)
    prof = profile(m)
    return Outcome(prof.to_json(), summary=f"H1={prof.in_H1} lambda={format_rational(prof.lambda_min)} Lambda={format_rational(prof.Lambda_min)}")


def cmd_projdist(args) -> Outcome:
    if args.x and args.y:
        d = proj_distance(_vector(args.x), _vector(args.y))
        out = {"delta": d.to_json(), "log": d.value}
        return Outcome(out, summary=f"delta = {_g(d.value)}")
    m = _matrix_arg(args)
    d = delta_coeff(m)
    out = {"delta": d.to_json(), "log": d.value, "tau": tau(m)}
    return Outcome(out, summary=f"delta = {_g(d.value)} tau = {_g(tau(m))}")


DOMINANCE_HEADER = ("n", "k", "h", "column", "gap", "norm_ratio", "sigma_ratio")


def cmd_condc(args) -> Outcome:
    if args.action == "example6":
        rep = gallery.example6_run(args.n)
        dom = rep.dominance
        rows = [DOMINANCE_HEADER] + list(dom.csv_rows())
        return Outcome(dom.to_json(), ok=rep.partition_ok, summary=f"H = {dom.H}", csv_rows=rows)
    if not args.seq or not args.cuts:
        raise UsageError("condc check/diagnostics need --seq FILE and --cuts")
    seq = _sequence_arg(args.seq)
    cuts = condc.CutSequence(tuple(_ints(args.cuts)))
    horizon = args.horizon or min(len(seq), cuts.last - 1)
    if args.lam is None or args.Lam is None:
        lam, Lam, h1 = condc.observed_witness(seq, cuts, horizon)
    else:
        lam, Lam = parse_rational(args.lam), parse_rational(args.Lam)
    res = condc.check_condition_c(seq, cuts, lam, Lam, horizon)
    if isinstance(res, condc.ConditionCViolation):
        return Outcome(res.to_json(), ok=False, summary=f"violation at n = {res.n}: {res.failed}")
    if args.action == "check":
        return Outcome(res.to_json(), ok=True, summary=f"condition (C) holds to n = {horizon}")
    dom = condc.dominance_diagnostics(seq, res, horizon, reinforce=not args.no_reinforce)
    rows = [DOMINANCE_HEADER] + list(dom.csv_rows())
    return Outcome(dom.to_json(), ok=True, summary=f"H = {dom.H}", csv_rows=rows)


def cmd_measure(args) -> Outcome:
    if args.action == "cylinder":
        if args.family == "kamae":
            val = kamae.kamae_measure(args.word)
        elif args.family == "beta":
            val = betaconv.mu_cylinder(args.word)
        else:
            raise UsageError("cylinder needs --family kamae|beta")
        return Outcome({"word": args.word, "family": args.family, "measure": format_rational(val)}, summary=format_rational(val))
    if args.action == "power":
        m = langw.GENERATORS[int(args.letter)] if args.letter is not None else _matrix_arg(args)
        lim = repmeasure.power_limit(m)
        return Outcome(lim.to_json(), ok=lim.converged, summary=lim.status)
    if args.action == "pi":
        fam = langw.GENERATORS if args.family == "digits" else kamae.FAMILY
        R = _vector(args.R) if args.R else [1] * fam[0].rows
        vec = repmeasure.pi_n(fam, args.word, R)
        return Outcome({"word": args.word, "pi": [format_rational(x) for x in vec]})
    raise UsageError(f"unknown measure action {args.action!r}")


def cmd_kamae(args) -> Outcome:
    if args.action == "potential":
        rows = kamae.potential_table(args.amax)
        conv = kamae.potential_convergence(n=args.n, amax=args.amax, seed=args.seed)
        table = [{"a": a, "case": c, "phi": v} for a, c, v in rows]
        csv_rows = [("a", "case", "phi")] + [(a, c, v) for a, c, v in rows]
        return Outcome({"table": table, "convergence": conv.to_json()}, ok=conv.ok(1e-8),
                       summary=f"max error {_g(max(conv.errors.values()))} at length {args.n}", csv_rows=csv_rows)
    if args.action == "normalization":
        rep = kamae.normalization_report(args.depth)
        return Outcome(rep.to_json(), ok=rep.renormalized_additive, summary=f"||A(0)|| = {rep.norm_A0}")
    if args.action == "dichotomy":
        rep = kamae.dichotomy_check(args.kmax or 14)
        return Outcome(rep.to_json(), ok=rep.ok, summary=f"max lambda {rep.max_lambda}")
    if args.action == "uniformity":
        rep = kamae.uniformity_check(tuple(range(2, args.depth + 1, 2)))
        return Outcome(rep.to_json(), ok=rep.ok, summary="gaps " + " ".join(_g(g) for g in rep.gaps))
    if args.action == "figure":
        pts = kamae.figure_samples(args.count, args.depth)
        return Outcome({"points": len(pts)}, csv_rows=[("y", "phi")] + pts)
    raise UsageError(f"unknown kamae action {args.action!r}")


def cmd_beta(args) -> Outcome:
    if args.action == "verify":
        rep = betaconv.verify_beta(args.depth)
        return Outcome(rep.to_json(), ok=rep.ok, summary="all exact identities hold" if rep.ok else "identity failure")
    if args.action == "gibbs":
        rep = betaconv.psi_and_weak_gibbs(args.n, args.depth)
        rows = [("n", "max_log_ratio", "per_n", "nu_mu_root")] + list(zip(rep.levels, rep.max_log_ratio, rep.per_n, rep.root_ratio))
        return Outcome(rep.to_json(), ok=rep.ok(0.2), summary=f"final {_g(rep.final)} decreasing={rep.decreasing}", csv_rows=rows)
    if args.action == "value":
        lo, hi = betaconv.beta_value(args.precision)
        return Outcome({"low": lo, "high": hi}, summary=f"[{_g(lo)}, {_g(hi)}]")
    if args.action == "ratio":
        rep = betaconv.ratio_diagnostics(args.word, args.depth)
        return Outcome(rep, ok=getattr(rep, "ok", None))
    if args.action in ("mu", "nu"):
        if set(args.word) - set("012"):
            raise UsageError("--word must be a ternary digit string")
        J = betaconv.BetaIntervalWord(args.word)
        val = (betaconv.mu_cylinder if args.action == "mu" else betaconv.nu_cylinder)(args.word)
        payload = {"word": args.word, args.action: val, "float": float(val), "binary": J.binary,
                   "interval": [J.left.decimal(20), J.right.decimal(20)]}
        return Outcome(payload, summary=f"{args.action}({args.word}) = {val}")
    if args.action == "closure":
        cl = betaconv.vertex_closure()
        verts = [{"value": v.to_json(), "path": cl.path_to(j)} for j, v in enumerate(cl.vertices)]
        return Outcome({"vertices": verts, "edges": cl.edges}, ok=betaconv.check_incidence())
    raise UsageError(f"unknown beta action {args.action!r}")


LEMMA_CHECKS = ("appendix", "family", "key", "contraction", "doubling", "sync", "rows", "t2", "certificate")


def cmd_langw(args) -> Outcome:
    if args.action == "decompose":
        dec = langw.w_decompose(args.word)
        return Outcome(dec)
    which = args.lemma
    if which == "appendix":
        tables = json.loads(Path(args.tables).read_text()) if args.tables else None
        rep = langw.verify_appendix(tables)
        summary = f"{rep.checked} tables" + ("" if rep.ok else ": mismatch " + ", ".join(rep.mismatches + [w for w, _ in rep.property_failures]))
        return Outcome(rep.to_json(), ok=rep.ok, summary=summary)
    if which == "family":
        rep = langw.verify_family_table(args.kmax or 64)
        return Outcome(rep.to_json(), ok=rep.ok)
    if which == "key":
        if not args.word:
            raise UsageError("--lemma key needs --word")
        props = langw.verify_key_lemma(args.word)
        return Outcome(props, ok=props.ok)
    if which == "contraction":
        rep = langw.verify_contraction(samples=args.samples, seed=args.seed)
        return Outcome(rep.to_json(), ok=rep.ok, summary=f"worst lambda {rep.worst}")
    if which == "doubling":
        ex = langw.doubling_exhaustion(args.kmax or 16)
        return Outcome(ex.to_json(), ok=ex.long_paths_double(11) and ex.extremal_are_longest,
                       summary=f"longest offender {ex.longest_offender} blocks")
    if which == "sync":
        rep = langw.synchronization_check()
        return Outcome(rep, ok=rep.ok)
    if which == "rows":
        ok, depth = langw.row_nonvanishing_check()
        return Outcome({"ok": ok, "depth": depth}, ok=ok)
    if which == "t2":
        ok, count = langw.verify_t2_column_propagation()
        return Outcome({"ok": ok, "semigroup": count}, ok=ok)
    if which == "certificate":
        word = args.word or langw.random_regular_word(random.Random(args.seed), 2 * langw.BLOCK_WORDS + 2)
        cert = langw.condition_c_certificate(word)
        return Outcome({"length": len(word), "cuts": cert.cuts.to_json(), "Lambda_digits": len(str(cert.Lam.numerator)),
                        "result": cert.result.to_json() if isinstance(cert.result, condc.ConditionCViolation) else "witness"},
                       ok=cert.ok)
    raise UsageError(f"unknown check {which!r}")


def cmd_examples(args) -> Outcome:
    ex = str(args.id)
    n = args.n or 40
    if ex == "6":
        rep = gallery.example6_run(n)
        return Outcome(rep.to_json(), ok=rep.ok, summary=f"closed form {'matches' if rep.closed_form_match else 'differs'}; partition ok={rep.partition_ok}",
                       csv_rows=list(rep.csv_rows()))
    if ex == "5":
        pts = [(x, gallery.lyap_direction_rademacher(format(x, "016b"), args.beta).series) for x in range(0, 1 << 16, 1 << 8)]
        cfg = gallery.ExampleConfig("5", n, {"beta": args.beta})
        return Outcome(gallery.run_example(cfg), csv_rows=[("x", "p")] + [(x / (1 << 16), p) for x, p in pts])
    if ex == "5.2":
        rep = gallery.rotating_rank_one(args.kmax or 5, stride=args.stride)
        rows = [("n", "sigma_ratio")] + rep.sigma_ratios
        return Outcome(rep.to_json(), csv_rows=rows)
    cfg = gallery.ExampleConfig(ex, n)
    out = gallery.run_example(cfg)
    ok = out.get("ok") if isinstance(out, dict) else None
    if ex == "3":
        ok = out["match"]
    if ex == "2":
        ok = out["exact_match"]
    return Outcome(out, ok=ok)


def cmd_graphs(args) -> Outcome:
    g = langw.build_gamma1() if args.which == "gamma1" else langw.build_gamma2()
    dot = g.to_dot()
    return Outcome({"graph": args.which, "vertices": len(g.vertices), "edges": len(g.edges)}, dot=dot)


def cmd_verify_all(args) -> Outcome:
    only = _ints(args.only) if args.only else None
    results = verify.verify_all(args.profile, only)
    lines = "\n".join(r.line() for r in results)
    return Outcome({"profile": args.profile, "criteria": [r.to_json() for r in results]},
                   ok=all(r.passed for r in results), summary=lines)


# parser -------------------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", metavar="PATH", help="write the JSON report here (stdout when omitted)")
    p.add_argument("--csv", metavar="PATH", help="write tabular output here")
    p.add_argument("--dot", metavar="PATH", help="write a Graphviz file here")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--manifest", metavar="PATH", help="write a replayable run manifest here")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="matprodlab", description="Exact analysis of products of nonnegative matrices.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(func=fn)
        return p

    def matrix_inputs(p):
        p.add_argument("--matrix", help="JSON matrix file")
        p.add_argument("--rows", help="inline rows 'a,b;c,d'")
        p.add_argument("--word", help="digit word over the three generators")

    p = add("classify", cmd_classify, "H-class profile of a matrix")
    matrix_inputs(p)
    p = add("projdist", cmd_projdist, "projective distance of two vectors or the diameter of a matrix")
    matrix_inputs(p)
    p.add_argument("--x")
    p.add_argument("--y")
    p = add("condc", cmd_condc, "condition (C) checks and dominance diagnostics")
    p.add_argument("action", choices=("check", "diagnostics", "example6"))
    p.add_argument("--seq", help="JSON list of matrices or {\"word\": digits}")
    p.add_argument("--cuts")
    p.add_argument("--lam")
    p.add_argument("--Lam")
    p.add_argument("--horizon", type=int)
    p.add_argument("--n", type=int, default=40)
    p.add_argument("--no-reinforce", action="store_true")
    p = add("measure", cmd_measure, "cylinder measures, normalized products and power limits")
    p.add_argument("action", choices=("cylinder", "power", "pi"))
    matrix_inputs(p)
    p.add_argument("--family", default="digits", choices=("digits", "kamae", "beta"))
    p.add_argument("--letter", choices=("0", "1", "2"))
    p.add_argument("--R")
    p = add("kamae", cmd_kamae, "binary-digit measure checks")
    p.add_argument("action", choices=("potential", "normalization", "dichotomy", "uniformity", "figure"))
    p.add_argument("--amax", type=int, default=10)
    p.add_argument("--n", type=int, default=40, help="prefix length for potential convergence")
    p.add_argument("--count", type=int, default=512)
    p = add("beta", cmd_beta, "Bernoulli convolution machinery")
    p.add_argument("action", choices=("verify", "gibbs", "value", "ratio", "closure", "mu", "nu"))
    p.add_argument("--n", type=int, default=14)
    p.add_argument("--precision", type=float, default=1e-12)
    p.add_argument("--word", default="0")
    p = add("langw", cmd_langw, "digit-family language checks")
    p.add_argument("action", choices=("verify", "decompose"))
    p.add_argument("--lemma", choices=LEMMA_CHECKS, default="appendix")
    p.add_argument("--word")
    p.add_argument("--tables", help="JSON {word: rows} replacing the stored tables")
    p.add_argument("--samples", type=int, default=1000)
    p = add("examples", cmd_examples, "worked examples")
    p.add_argument("action", choices=("run",))
    p.add_argument("--id", required=True, choices=("1", "2", "3", "4", "5", "6", "5.2"))
    p.add_argument("--n", type=int)
    p.add_argument("--beta", type=float, default=(1 + 5 ** 0.5) / 2)
    p.add_argument("--stride", type=int, default=0)
    p = add("graphs", cmd_graphs, "support graphs as DOT")
    p.add_argument("--which", choices=("gamma1", "gamma2"), default="gamma1")
    p = add("verify-all", cmd_verify_all, "run the acceptance suite")
    p.add_argument("--profile", choices=tuple(verify.PROFILES), default="quick")
    p.add_argument("--only", help="comma-separated criterion numbers")
    p = sub.add_parser("replay", help="rerun a saved manifest")
    p.add_argument("path")
    p.set_defaults(func=None)
    return parser


def _emit(args, argv: list[str], outcome: Outcome) -> None:
    outputs = {}
    text = dumps(plain(outcome.payload)) + "\n"
    if args.json:
        Path(args.json).write_text(text)
        outputs["json"] = args.json
    if args.csv:
        if outcome.csv_rows is None:
            raise UsageError(f"{args.command} has no tabular output")
        write_csv(args.csv, outcome.csv_rows)
        outputs["csv"] = args.csv
    if args.dot:
        if outcome.dot is None:
            raise UsageError(f"{args.command} has no graph output")
        Path(args.dot).write_text(outcome.dot)
        outputs["dot"] = args.dot
    if args.manifest:
        params = {k: v for k, v in vars(args).items() if k not in ("func", "json", "csv", "dot", "manifest")}
        man = RunManifest(args.command, argv, plain(params), outputs, args.seed)
        Path(args.manifest).write_text(dumps(plain(man)) + "\n")
    if not args.json:
        sys.stdout.write(text)
    if outcome.summary:
        print(outcome.summary, file=sys.stderr if not args.json else sys.stdout)
    if outcome.ok is not None:
        verdict = "PASS" if outcome.ok else "FAIL"
        print(verdict, file=sys.stderr if not args.json else sys.stdout)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if args.command == "replay":
        try:
            man = json.loads(Path(args.path).read_text())
        except (OSError, ValueError) as exc:
            print(f"cannot read manifest: {exc}", file=sys.stderr)
            return EXIT_USAGE
        return main(man["argv"])
    try:
        outcome = args.func(args)
        _emit(args, argv, outcome)
    except (UsageError, OSError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if outcome.ok is False:
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
