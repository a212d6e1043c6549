"""Command line entry point.

    modloc-lab <experiment> [--config PATH] [--out DIR] [--strict] [--parallel N]
    modloc-lab verify-all   [--out DIR] [--strict] [--parallel N] [--only ...]
    modloc-lab emit-plots <run-dir> [--out DIR]

Exit codes: 0 all checks pass (or unverified-by-design), 1 check failure,
2 configuration error, 3 numeric error.  MODLOC_OUT overrides --out.
"""

import argparse
import os
import sys

from ..errors import ConfigurationError, ModlocError
from .config import EXPERIMENTS, load_config
from .manifest import FAIL
from .plots import emit_plots
from .suites import run_experiment, verify_all


def _out_dir(args):
    return os.environ.get("MODLOC_OUT") or args.out


def _report(manifest):
    for r in manifest.records:
        mark = {"pass": "ok  ", "fail": "FAIL", "unverified-by-design": "----"}
        meas = "" if r.measured is None else f" measured={r.measured:.6e}"
        tol = "" if r.tolerance is None else f" tol {r.comparator} {r.tolerance:g}"
        print(f"[{mark[r.verdict]}] {r.name}{meas}{tol}")
    n_fail = sum(1 for v in manifest.verdicts if v == FAIL)
    print(f"{manifest.experiment}: {len(manifest.records)} records, "
          f"{n_fail} failures")
    return 0 if manifest.passed else 1


def build_parser():
    p = argparse.ArgumentParser(prog="modloc-lab",
                                description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)
    for name in EXPERIMENTS:
        sp = sub.add_parser(name, help=f"run the {name} suite")
        sp.add_argument("--config", default=None)
        sp.add_argument("--out", default="runs")
        sp.add_argument("--strict", action="store_true")
        sp.add_argument("--parallel", type=int, default=1)
    va = sub.add_parser("verify-all", help="run every suite at desk scale")
    va.add_argument("--config", default=None)
    va.add_argument("--out", default="runs")
    va.add_argument("--strict", action="store_true")
    va.add_argument("--parallel", type=int, default=1)
    va.add_argument("--only", nargs="*", default=None,
                    help="restrict to these suites")
    ep = sub.add_parser("emit-plots", help="write plot-ready .dat files")
    ep.add_argument("run_dir")
    ep.add_argument("--out", default=None)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "emit-plots":
            written = emit_plots(args.run_dir, args.out)
            for path in written:
                print(path)
            return 0
        if args.command == "verify-all":
            if args.only:
                bad = set(args.only) - set(EXPERIMENTS)
                if bad:
                    raise ConfigurationError(f"unknown suites: {sorted(bad)}")
            manifest = verify_all(_out_dir(args), strict=args.strict,
                                  parallel=args.parallel, only=args.only)
            return _report(manifest)
        cfg = load_config(args.command, args.config, strict=args.strict)
        manifest = run_experiment(cfg, _out_dir(args))
        return _report(manifest)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except ModlocError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
