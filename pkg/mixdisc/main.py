"""
Command-line front end for mixdisc

    mixdisc gen|exact|scale|estimate|experiment ...

Exit codes: 0 success, 1 other failure, 2 parse error, 3 no convergence,
4 property violation.
"""

import argparse
import logging
import sys
from typing import List, Optional

from mixdisc import __version__
from mixdisc.commands import estimate, exact, experiment, gen, scale
from mixdisc.config import configure_logging, get_config
from mixdisc.exceptions import MixdiscError
from mixdisc.models.suite import ExitCodeEnum

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mixdisc",
        description="Exact values, doubly stochastic scaling and certified bounds for mixed discriminants.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", dest="log_level", default=None,
                        help="override MIXDISC_LOG_LEVEL (DEBUG, INFO, WARNING, ERROR)")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in (gen, exact, scale, estimate, experiment):
        command.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    logger.debug(f"Configuration: {get_config()}")
    try:
        return int(args.func(args))
    except MixdiscError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return int(e.exit_code)
    except ValueError as e:
        logger.error(f"Invalid argument: {e}")
        return int(ExitCodeEnum.PARSE_ERROR)


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
