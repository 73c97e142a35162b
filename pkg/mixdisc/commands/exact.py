import argparse
import json

from mixdisc import storage
from mixdisc.commands._common import finite_or_none
from mixdisc.core.exact import mixed_discriminant
from mixdisc.models.suite import ExitCodeEnum


def cmd_exact(args: argparse.Namespace) -> int:
    t, _ = storage.load_tuple(args.input)
    result = mixed_discriminant(t)
    payload = {"log_abs": finite_or_none(result.log_abs), "sign": result.sign, "value": finite_or_none(result.value)}
    print(json.dumps(payload, allow_nan=False))
    return ExitCodeEnum.SUCCESS


def register(subparsers) -> None:
    parser = subparsers.add_parser("exact", help="exact mixed discriminant of a tuple file (n <= 20)")
    parser.add_argument("input", help="tuple file")
    parser.set_defaults(func=cmd_exact)
