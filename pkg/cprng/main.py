"""
Main application entry point for the cprng command line.
"""
import sys
from typing import List, Optional

from cprng.middlewares.error_middleware import ErrorHandler
from cprng.utils.logger import setup_logging
from cprng.views.api import build_parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse the command line, run the chosen command and return its exit code.

    Usage errors from argparse exit with code 2 before anything runs.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    # Setup logging
    setup_logging(args.log_level)

    return ErrorHandler().run(lambda: args.handler(args))


if __name__ == "__main__":
    sys.exit(main())
