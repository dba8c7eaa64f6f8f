"""Command-line front end.

Subcommands: stats, spectrum, bohr, structure, example, verify.  Exit
codes: 0 success, 1 a checked inequality or certificate failed, 2 bad
configuration or input, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import fileio, harness
from .bohr import RegularRadiusError, find_regular_radius, make_bohr_spec, materialize, regularity_test
from .groups import GroupMismatchError, SizeLimitError, format_group_text, parse_group_text
from .harmonic import dft, table_from_values, wht_int
from .report import CheckFailure
from .setstat import profile
from .structure import (
    DensityGuaranteeFailed,
    HypothesisFailure,
    InclusionFailed,
    NoJump,
)

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_CONFIG = 2
EXIT_RESOURCE = 3


def _parse_fractions(text: str) -> list[Fraction]:
    return [Fraction(part) for part in text.split(",") if part.strip()]


def _parse_ints(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part.strip()]


def _emit(report: harness.RunReport, out: str | None, summary: bool) -> int:
    if out:
        harness.write_report(report, out)
    if summary or not out:
        sys.stdout.write(report.summary_text())
    return EXIT_OK if report.ok else EXIT_CHECK


def _cmd_stats(args) -> int:
    A = fileio.read_set(args.setfile)
    prof = profile(A, energy_orders=_parse_ints(args.k))
    payload = {
        "group": format_group_text(A.group),
        "size": prof.size,
        "density": harness._frac_str(prof.density),
        "diff_size": prof.diff_size,
        "doubling": harness._frac_str(prof.doubling),
        "peak_sq": harness._frac_str(prof.peak_sq),
        "peak_char": prof.peak_char,
        "energy": str(prof.energy),
        "higher": {str(k): str(v) for k, v in prof.higher.items()},
        "sum_size": prof.sum_size,
        "sum_doubling": harness._frac_str(prof.sum_doubling) if prof.sum_doubling is not None else None,
        "checks": [r.to_dict() for r in prof.checks],
        "diagnostics": [r.to_dict() for r in prof.diagnostics],
    }
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if all(r.ok for r in prof.checks) else EXIT_CHECK


def _cmd_spectrum(args) -> int:
    text = open(args.file, "r", encoding="ascii").read()
    head = text.lstrip().splitlines()[0] if text.strip() else ""
    if head.startswith("group="):
        f = fileio.parse_function(text, path=args.file)
    else:
        A = fileio.parse_set(text, path=args.file)
        f = table_from_values(A.group, A.indicator(), kind="int")
    g = f.group
    if g.is_boolean_space and f.kind == "int":
        spectrum = wht_int(g, f.values)
        out_table = table_from_values(g, spectrum, kind="int")
    else:
        out_table = dft(f)
    if args.out:
        fileio.write_function(args.out, out_table)
    else:
        sys.stdout.write(fileio.dump_function(out_table))
    return EXIT_OK


def _cmd_bohr(args) -> int:
    g = parse_group_text(args.group)
    gamma = _parse_ints(args.gamma)
    eps = _parse_fractions(args.eps)
    if args.regularize:
        spec = find_regular_radius(g, gamma, eps)
    else:
        spec = make_bohr_spec(g, gamma, eps)
    b = materialize(g, spec)
    verdict = regularity_test(b)
    payload = {
        "group": args.group,
        "gamma": list(spec.gamma),
        "radii": [harness._frac_str(e) for e in spec.eps],
        "size": len(b),
        "density": harness._frac_str(b.density),
        "regular": verdict.regular,
        "worst_margin": verdict.worst_margin,
        "note": verdict.note,
    }
    sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if verdict.regular or not args.regularize else EXIT_CHECK


def _cmd_structure(args) -> int:
    params = {}
    if args.params:
        with open(args.params, "r", encoding="utf-8") as fh:
            params = json.load(fh)
    sets = [{"kind": "file", "path": args.setfile}]
    if args.b:
        sets.append({"kind": "file", "path": args.b})
    cfg = harness.config_from_dict(
        {
            "kind": "structure",
            "name": args.setfile,
            "sets": sets,
            "pipeline": args.mode,
            "params": params,
            "seed": args.seed,
        }
    )
    return _emit(harness.run_structure(cfg), args.out, args.summary)


def _cmd_example(args) -> int:
    if args.family == "h-lambda":
        source = {"kind": "h-lambda", "n": args.n, "k": args.k, "lambda": getattr(args, "lambda")}
    else:
        source = {"kind": "katz", "p": args.p, "d": args.d}
    cfg = harness.config_from_dict(
        {"kind": "example", "name": args.family, "sets": [source], "seed": args.seed}
    )
    report = harness.run_example(cfg)
    if args.set_out:
        with open(args.set_out, "w", encoding="ascii") as fh:
            fh.write(report.results[0]["set_text"])
    return _emit(report, args.out, args.summary)


def _cmd_verify(args) -> int:
    if args.config:
        configs = harness.load_configs(args.config)
    else:
        d: dict = {"kind": "verify", "name": "verify", "seed": args.seed}
        if args.suites is not None:
            d["suites"] = [s for s in args.suites.split(",") if s]
        if args.instances is not None:
            d["instances"] = args.instances
        if args.group:
            d["group"] = args.group
        configs = [harness.config_from_dict(d)]
    reports = harness.run_all(configs)
    worst = EXIT_OK
    for cfg, report in zip(configs, reports):
        out = cfg.output or args.out
        if out:
            harness.write_report(report, out)
        if args.summary or not out:
            sys.stdout.write(report.summary_text())
        if not report.ok:
            worst = EXIT_CHECK
    return worst


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="addcomb",
        description="Exact additive-structure statistics and extraction pipelines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="profile a set file")
    p.add_argument("setfile")
    p.add_argument("--k", default="2,3,4", help="energy orders, comma separated")
    p.add_argument("--out", default=None, help="write the JSON report here")
    p.set_defaults(fn=_cmd_stats)

    p = sub.add_parser("spectrum", help="transform a set or function file")
    p.add_argument("file")
    p.add_argument("--out", default=None, help="write the transform as a function file")
    p.set_defaults(fn=_cmd_spectrum)

    p = sub.add_parser("bohr", help="materialize a Bohr set and test regularity")
    p.add_argument("--group", required=True)
    p.add_argument("--gamma", required=True, help="frequencies, comma separated indices")
    p.add_argument("--eps", required=True, help="radii, comma separated fractions")
    p.add_argument("--regularize", action="store_true", help="search for a regular radius first")
    p.set_defaults(fn=_cmd_bohr)

    p = sub.add_parser("structure", help="run an extraction pipeline on a set file")
    p.add_argument("setfile")
    p.add_argument("--b", default=None, help="subset file (defaults to the set itself)")
    p.add_argument("--mode", default="auto", choices=["auto", "subspace", "bohr", "dichotomy"])
    p.add_argument("--params", default=None, help="JSON file of parameter overrides")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--summary", action="store_true")
    p.set_defaults(fn=_cmd_structure)

    p = sub.add_parser("example", help="generate and verify a worked example family")
    ex_sub = p.add_subparsers(dest="family", required=True)
    ph = ex_sub.add_parser("h-lambda")
    ph.add_argument("--n", type=int, required=True)
    ph.add_argument("--k", type=int, required=True)
    ph.add_argument("--lambda", dest="lambda", type=int, required=True)
    pk = ex_sub.add_parser("katz")
    pk.add_argument("--p", type=int, required=True)
    pk.add_argument("--d", type=int, required=True)
    for q in (ph, pk):
        q.add_argument("--seed", type=int, default=None)
        q.add_argument("--set-out", default=None, help="write the generated set file here")
        q.add_argument("--out", default=None)
        q.add_argument("--summary", action="store_true")
        q.set_defaults(fn=_cmd_example)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--config", default=None, help="JSON config of experiments")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--suites", default=None, help="comma separated suite names")
    p.add_argument("--instances", type=int, default=None)
    p.add_argument("--group", default=None, help="restrict suites to one group")
    p.add_argument("--out", default=None)
    p.add_argument("--summary", action="store_true")
    p.set_defaults(fn=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (CheckFailure, AssertionError, NoJump, DensityGuaranteeFailed, InclusionFailed, HypothesisFailure) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except (RegularRadiusError,) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except SizeLimitError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (harness.ConfigError, fileio.FileFormatError, GroupMismatchError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
