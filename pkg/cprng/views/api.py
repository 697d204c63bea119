"""
Main command parser that includes all command modules.
"""
import argparse

from cprng.views import experiments, generate


def build_parser() -> argparse.ArgumentParser:
    """Top-level parser with one subcommand per operation."""
    parser = argparse.ArgumentParser(
        prog="cprng",
        description="Chaotic pseudo-random numbers from weakly coupled tent maps.",
    )
    parser.add_argument(
        "--log-level",
        type=str.upper,
        choices=["TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"],
        default=None,
        help="override CPRNG_LOG_LEVEL for this run",
    )

    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    generate.register(subparsers)
    experiments.register(subparsers)
    return parser
