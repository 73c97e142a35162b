import argparse
import logging
import sys

from mixdisc.commands._common import add_solver_flags, solver_config
from mixdisc.exceptions import PropertyViolation
from mixdisc.experiments.coordinator import ExperimentCoordinator, parse_suite, summarize, write_csv
from mixdisc.models.suite import ExitCodeEnum, SuiteEnum
from mixdisc.schemas import CSV_COLUMNS

logger = logging.getLogger(__name__)

CSV_HELP = (
    "CSV columns, in this order: " + ", ".join(CSV_COLUMNS) + ". "
    "Bounds are natural logs; a row passes when log_lower <= log_exact <= log_upper "
    "within the suite's tolerance. Suite 'weak' is informational and never fails the run."
)


def cmd_experiment(args: argparse.Namespace) -> int:
    suite = parse_suite(args.suite)
    coordinator = ExperimentCoordinator(suite, args.reps, args.seed, n=args.n, cfg=solver_config(args))
    records = coordinator.run()
    if args.out:
        with open(args.out, "w", newline="") as stream:
            write_csv(records, stream)
    else:
        write_csv(records, sys.stdout)
    summarize(suite, records)
    if not coordinator.all_passed(records):
        failed = [record.index for record in records if not record.passed]
        raise PropertyViolation(f"{len(failed)} rows of {suite.value} failed: {failed[:10]}")
    return ExitCodeEnum.SUCCESS


def register(subparsers) -> None:
    parser = subparsers.add_parser("experiment", help="run a randomized property suite", epilog=CSV_HELP)
    parser.add_argument("--suite", required=True,
                        help="one of: " + ", ".join(suite.value for suite in SuiteEnum))
    parser.add_argument("--reps", type=int, default=50, help="repetitions (default: 50)")
    parser.add_argument("--seed", type=int, default=0, help="base seed; row i uses seed + i (default: 0)")
    parser.add_argument("--n", type=int, default=None, help="fix n instead of drawing it per row")
    parser.add_argument("--out", help="CSV output file; stdout when omitted")
    add_solver_flags(parser)
    parser.set_defaults(func=cmd_experiment)
