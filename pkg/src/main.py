"""
Command-line entry point for ensemble-control.

Subcommands: steer, train, verify, approx. Global flags may be given before
or after the subcommand.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from .cli.commands import BASES, cmd_approx, cmd_steer, cmd_train, cmd_verify
from .cli.verify import suite_names
from .core.config import get_settings
from .core.logging_config import configure_logging
from .utils.error_handler import EXIT_USAGE

logger = logging.getLogger(__name__)


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    default = argparse.SUPPRESS if suppress else None
    flags = argparse.ArgumentParser(add_help=False)
    flags.add_argument("--config", type=Path, default=default, help="Scenario file (JSON or TOML)")
    flags.add_argument("--out", type=Path, default=default, help="Artifact directory")
    flags.add_argument("--seed", type=int, default=default, help="Override the scenario seed")
    flags.add_argument("--threads", type=int, default=default, help="Worker threads")
    flags.add_argument("--log-level", default=default, help="Log level (default from settings)")
    flags.add_argument(
        "--log-format", choices=["json", "console"], default=default, help="Log rendering"
    )
    return flags


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ensemble-control",
        description="Steer and train ensembles with control-affine flows",
        parents=[_global_flags(suppress=False)],
    )
    sub = parser.add_subparsers(dest="command", required=True)
    child = [_global_flags(suppress=True)]

    sub.add_parser("steer", parents=child, help="Optimize an ensemble-steering scenario")
    sub.add_parser("train", parents=child, help="Train a product-system classifier")

    verify = sub.add_parser("verify", parents=child, help="Run a property suite")
    verify.add_argument("suite", help=f"One of: {', '.join(suite_names())}")

    approx = sub.add_parser("approx", parents=child, help="Run truncation ladders")
    approx.add_argument(
        "--basis",
        action="append",
        choices=list(BASES),
        help="Basis to run (repeatable, default all)",
    )
    approx.add_argument("--orders", type=int, nargs="+", help="Truncation orders")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one command and return its exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    configure_logging(args.log_level, args.log_format)
    settings = get_settings()
    if args.threads is not None:
        if args.threads < 1:
            parser.error("--threads must be positive")
        settings.threads = args.threads
    out_dir = args.out or Path(settings.output_dir)
    logger.info(f"{settings.app_name} {settings.app_version}: {args.command}")

    if args.command in ("steer", "train"):
        if args.config is None:
            logger.error(f"{args.command} needs --config")
            return EXIT_USAGE
        run = cmd_steer if args.command == "steer" else cmd_train
        return run(args.config, out_dir, seed=args.seed, threads=args.threads)
    if args.command == "verify":
        return cmd_verify(args.suite, out_dir)
    return cmd_approx(out_dir, bases=args.basis or BASES, orders=args.orders)


if __name__ == "__main__":
    sys.exit(main())
