"""Command line front end.

Subcommands
    norms        quasi-norm table over the built-in catalog
    verify       pass/fail suites: pp, projection, conformal, envelope,
                 growth, qenvelope
    sweep        spectrum-narrowing ratio sweep
    equivalence  decomposition norm against the integral norm
    report       the suites the config selects (default all), one report each

Shared flags: --config (TOML or JSON file of ExperimentConfig fields),
--out (report directory, JSON + CSV per suite), --seed, --tol (quadrature
rel_tolerance override).  Exit status is nonzero exactly when some check
that is not report-only fails.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

from .catalog import default_catalog
from .errors import DivergesError, PwenvError
from .harness import ExperimentConfig, run_all
from .norms import ep_norm

_VERIFY_SUITES = ("pp", "projection", "conformal", "envelope", "growth", "qenvelope")


def _read_config(path: str) -> dict:
    with open(path, "rb") as fh:
        blob = fh.read()
    if path.endswith(".toml"):
        import tomli

        return tomli.loads(blob.decode("utf-8"))
    if path.endswith(".json"):
        return json.loads(blob)
    try:
        return json.loads(blob)
    except json.JSONDecodeError:
        import tomli

        return tomli.loads(blob.decode("utf-8"))


def _build_config(args) -> ExperimentConfig:
    raw = _read_config(args.config) if args.config else {}
    config = ExperimentConfig.from_dict(raw)
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    if args.out is not None:
        config = replace(config, out_dir=args.out)
    if args.tol is not None:
        overrides = dict(config.quad_overrides)
        overrides["rel_tolerance"] = args.tol
        config = replace(config, quad_overrides=overrides)
    return config


def _print_report(report) -> int:
    s = report.summary
    print(f"{report.suite:<12} pass={s['pass']:<4} fail={s['fail']:<3} "
          f"low-confidence={s['low-confidence']:<3} report-only={s['report-only']}")
    for row in report.failures():
        print(f"    FAIL {row.check} {json.dumps(row.inputs, sort_keys=True)} "
              f"margin={row.margin:.6g} budget={row.budget:.6g}")
    return s["fail"]


def _run_suites(config: ExperimentConfig, names) -> int:
    failures = 0
    for name in names:
        for report in run_all(replace(config, suite=name)).values():
            failures += _print_report(report)
    if config.out_dir:
        print(f"reports written to {config.out_dir}")
    return 1 if failures else 0


def _cmd_norms(config: ExperimentConfig) -> int:
    quad = config.quadrature()
    rows = []
    for entry in default_catalog():
        f = entry.function()
        for p in config.pp_p_grid:
            try:
                rep = ep_norm(f, p, quad)
            except DivergesError as exc:
                rows.append({"function": entry.name, "p": p, "diverges": str(exc)})
                print(f"{entry.name:<26} p={p:<5g} diverges")
                continue
            rows.append({"function": entry.name, "p": p, "report": rep.to_json_dict()})
            print(f"{entry.name:<26} p={p:<5g} value={rep.value:.10g} "
                  f"err={rep.quadrature_error_estimate:.3g} {' '.join(rep.flags)}".rstrip())
    if config.out_dir:
        os.makedirs(config.out_dir, exist_ok=True)
        path = os.path.join(config.out_dir, "norms.json")
        tmp = path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump({"config": config.to_json_dict(), "norms": rows},
                      fh, indent=2, sort_keys=True)
            fh.write("\n")
        os.replace(tmp, path)
        print(f"wrote {path}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pwenv",
        description="verification suites and norm tables for band-limited function spaces",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("norms", "quasi-norm table over the built-in catalog"),
        ("verify", "run the pass/fail verification suites"),
        ("sweep", "spectrum-narrowing ratio sweep"),
        ("equivalence", "decomposition norm vs integral norm study"),
        ("report", "run the suites the config selects (default: all)"),
    ):
        sp = sub.add_parser(name, help=text)
        sp.add_argument("--config", metavar="PATH",
                        help="TOML or JSON file of ExperimentConfig fields")
        sp.add_argument("--out", metavar="DIR",
                        help="directory for JSON and CSV reports")
        sp.add_argument("--seed", type=int, metavar="U64",
                        help="seed for the randomized pair selection")
        sp.add_argument("--tol", type=float, metavar="REL",
                        help="override the quadrature relative tolerance")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _build_config(args)
        if args.command == "norms":
            return _cmd_norms(config)
        if args.command == "verify":
            return _run_suites(config, _VERIFY_SUITES)
        if args.command == "sweep":
            return _run_suites(config, ("sweep",))
        if args.command == "equivalence":
            return _run_suites(config, ("equivalence",))
        # report honors the config's suite selection; the default is "all"
        return _run_suites(config, (config.suite,))
    except PwenvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
