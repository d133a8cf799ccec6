"""Command-line entry point: ``descartes-lab <experiment> [--config FILE] [overrides]``.

Exit status: 0 success, 1 invariant failure, 2 configuration error.
"""
from __future__ import annotations

import argparse
import sys

from .xp_harness import EXPERIMENTS, ConfigError, config_from_mapping, load_config, run, write_result


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="descartes-lab", description=__doc__.splitlines()[0])
    ap.add_argument("experiment", choices=EXPERIMENTS)
    ap.add_argument("--config", help="JSON object or flat key = value file")
    ap.add_argument("--n", dest="n_list", help="comma-separated ascending degrees / sizes")
    ap.add_argument("--trials", type=int)
    ap.add_argument("--dist", help="rademacher | gaussian | uniform | cauchy | atom0{p0} | multiset{v,...}")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--workers", type=int)
    ap.add_argument("--out")
    ap.add_argument("--format", choices=("csv", "json"))
    ap.add_argument("--no-plots", action="store_true", help="skip the gnuplot script and PNG")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, which matches the config-error code
        return int(exc.code or 0)
    overrides = {k: getattr(args, k) for k in ("n_list", "trials", "dist", "seed", "workers", "out", "format")}
    try:
        if args.config:
            cfg = load_config(args.config, experiment=args.experiment, **overrides)
        else:
            cfg = config_from_mapping({"experiment": args.experiment}, **overrides)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        result = run(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    paths = write_result(result, plots=not args.no_plots)
    for p in paths:
        print(p)
    if not result.ok:
        for f in result.failures:
            print(f"FAIL {f}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
