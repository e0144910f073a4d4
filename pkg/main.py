#!/usr/bin/env python3
"""
foliation-verify - command-line entry point
Builds foliated models and checks the identity catalog on sampled points
"""

import argparse
import logging
import sys
from typing import List, Optional

from config.settings import CLI_DEFAULTS, LOGGING_CONFIG
from src.cli.commands import EXIT_CONFIG, cmd_list, cmd_verify, load_run_config, parse_params
from src.errors import ConfigError
from src.utils.text_processing import parse_id_list


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="foliation-verify",
        description="Verify foliation identities numerically on explicit models.",
    )
    parser.add_argument("--log-level", default=LOGGING_CONFIG["level"], help="logging level (stderr)")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run identities on one model")
    verify.add_argument("--model", help=f"model name (default {CLI_DEFAULTS['model']})")
    verify.add_argument("--param", action="append", metavar="K=V", help="model parameter, repeatable")
    verify.add_argument("--ids", help="comma separated identity ids, or 'all'")
    verify.add_argument("--points", type=int, help="number of sample points")
    verify.add_argument("--seed", type=int, help="base random seed")
    verify.add_argument("--tol", dest="tolerance", type=float, help="absolute residual tolerance")
    verify.add_argument("--format", choices=CLI_DEFAULTS["formats"], help="report format")
    verify.add_argument(
        "--out", help="write the report to this file, or to a generated file name inside this directory"
    )
    verify.add_argument("--quadrature-resolution", type=int, help="grid size per axis for the integral check")
    verify.add_argument("--config", help="YAML file with run settings; flags win on conflict")

    sub.add_parser("list", help="list models and identities")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main application entry point"""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
        format=LOGGING_CONFIG["format"],
        stream=sys.stderr,
    )

    if args.command == "list":
        return cmd_list()

    try:
        overrides = {
            "model": args.model,
            "params": parse_params(args.param),
            "ids": parse_id_list(args.ids) if args.ids is not None else None,
            "points": args.points,
            "seed": args.seed,
            "tolerance": args.tolerance,
            "format": args.format,
            "out": args.out,
            "quadrature_resolution": args.quadrature_resolution,
        }
        config = load_run_config(overrides, args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return cmd_verify(config)


if __name__ == "__main__":
    sys.exit(main())
