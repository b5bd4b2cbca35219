"""Command line entry point: ``fwbesov <experiment> --config cfg.json --out dir``.

Exit codes: 0 all checks pass, 1 a check failed, 2 bad configuration,
3 a required solve blew up.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys

from .errors import ConfigError
from .experiments import (
    ExperimentConfig,
    run_appendix_bounds,
    run_error_decay,
    run_nonuniform,
    run_properties,
    write_report,
)

EXPERIMENTS = {
    "nonuniform": run_nonuniform,
    "error-decay": run_error_decay,
    "appendix-bounds": run_appendix_bounds,
    "properties": run_properties,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fwbesov", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON file with ExperimentConfig fields")
        p.add_argument("--out", help="output directory (overrides config 'output')")
        p.add_argument("--seed", type=int, help="random seed (overrides config 'seed')")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def resolve_config(args) -> ExperimentConfig:
    config = ExperimentConfig.from_json(args.config) if args.config else ExperimentConfig()
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.out is not None:
        overrides["output"] = args.out
    return dataclasses.replace(config, **overrides) if overrides else config


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = resolve_config(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    report = EXPERIMENTS[args.command](config)
    csv_path, json_path = write_report(report, config.output)
    for line in report.summary_lines():
        print(line)
    print(f"wrote {csv_path} and {json_path}")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
