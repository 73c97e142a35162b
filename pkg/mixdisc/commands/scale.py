import argparse
import logging

from mixdisc import storage
from mixdisc.commands._common import add_solver_flags, solver_config
from mixdisc.core.scaling import scale_to_doubly_stochastic
from mixdisc.exceptions import NoConvergence
from mixdisc.models.suite import ExitCodeEnum

logger = logging.getLogger(__name__)


def cmd_scale(args: argparse.Namespace) -> int:
    t, tuple_file = storage.load_tuple(args.input)
    try:
        result = scale_to_doubly_stochastic(t, solver_config(args))
    except NoConvergence as e:
        if e.result is not None:
            print(e.result.diagnostics().model_dump_json(indent=2))
        raise
    print(result.diagnostics().model_dump_json(indent=2))
    if args.out:
        metadata = dict(tuple_file.metadata)
        metadata["description"] = f"doubly stochastic scaling of {args.input}"
        storage.save_tuple(result.scaled, args.out, metadata)
    return ExitCodeEnum.SUCCESS


def register(subparsers) -> None:
    parser = subparsers.add_parser("scale", help="scale a tuple file to doubly stochastic form")
    parser.add_argument("input", help="tuple file")
    add_solver_flags(parser)
    parser.add_argument("--out", help="write the scaled tuple to this file")
    parser.set_defaults(func=cmd_scale)
