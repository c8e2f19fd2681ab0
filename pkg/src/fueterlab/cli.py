"""Command line entry point: ``fueterlab verify <suite> [options]``.

Exit codes: 0 all checks pass, 1 at least one check fails, 2 configuration
error.  ``FUETERLAB_JOBS`` provides the default for ``--jobs``.
"""
from __future__ import annotations

import argparse
import os
import sys

from .errors import ConfigError
from .harness import SUITES, config_from_mapping, parse_config_file, run_suite
from .reports import emit_report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fueterlab",
                                     description="perturbed fractional Fueter "
                                                 "operator identity verifier")
    sub = parser.add_subparsers(dest="command", required=True)
    verify = sub.add_parser("verify", help="run an identity suite")
    verify.add_argument("suite", choices=SUITES)
    verify.add_argument("--config", help="flat key=value configuration file")
    verify.add_argument("--nodes", help="refinement ladder, e.g. 8,12,16")
    verify.add_argument("--alpha", help="four comma-separated complex orders (or one)")
    verify.add_argument("--beta", help="second order vector for compositions")
    verify.add_argument("--u", help="left perturbation parameter, four components")
    verify.add_argument("--v", help="right perturbation parameter, four components")
    verify.add_argument("--seed", type=int, help="seed for anchors and sampled data")
    verify.add_argument("--jobs", type=int,
                        default=int(os.environ.get("FUETERLAB_JOBS", "1")),
                        help="suite-level parallelism cap")
    verify.add_argument("--corpus", help="comma-separated corpus field names")
    verify.add_argument("--report", help="write the report to this path")
    verify.add_argument("--format", choices=("json", "csv", "text"), default="text")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        values = {}
        if args.config:
            values.update(parse_config_file(args.config))
        values["suite"] = args.suite
        for key in ("nodes", "alpha", "beta", "u", "v", "corpus"):
            flag = getattr(args, key)
            if flag is not None:
                values[key] = flag
        if args.seed is not None:
            values["seed"] = str(args.seed)
        values["jobs"] = str(args.jobs)
        cfg = config_from_mapping(values)
    except (ConfigError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2

    report = run_suite(cfg)
    text = emit_report(report, fmt=args.format, path=args.report)
    if args.report:
        print(f"report written to {args.report}")
        if args.format != "text":
            print(emit_report(report, fmt="text"))
    else:
        print(text)
    return 0 if report.overall_pass else 1


if __name__ == "__main__":
    sys.exit(main())
