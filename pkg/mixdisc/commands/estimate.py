import argparse
import json
import logging

from mixdisc import storage
from mixdisc.commands._common import add_solver_flags, finite_or_none, solver_config
from mixdisc.core.estimator import estimate, spread_bound
from mixdisc.core.exact import MIXED_DISCRIMINANT_CAP, mixed_discriminant
from mixdisc.exceptions import DimensionTooLarge, NoConvergence, PropertyViolation
from mixdisc.models.suite import ExitCodeEnum

logger = logging.getLogger(__name__)

# Slack on the log-scale interval when checking against the exact value
CHECK_SLACK = 1e-8


def cmd_estimate(args: argparse.Namespace) -> int:
    t, _ = storage.load_tuple(args.input)
    try:
        bounds = estimate(t, solver_config(args))
    except NoConvergence as e:
        if e.result is not None:
            print(e.result.diagnostics().model_dump_json(indent=2))
        raise
    payload = bounds.model_dump()
    payload["spread"] = spread_bound(t.n, bounds.alpha_input)
    if args.check_exact:
        if t.n > MIXED_DISCRIMINANT_CAP:
            raise DimensionTooLarge(t.n, MIXED_DISCRIMINANT_CAP)
        exact = mixed_discriminant(t)
        holds = exact.sign > 0 and bounds.log_lower - CHECK_SLACK <= exact.log_abs <= bounds.log_upper + CHECK_SLACK
        payload["log_exact"] = finite_or_none(exact.log_abs)
        payload["sandwich_holds"] = holds
        print(json.dumps(payload, indent=2))
        if not holds:
            raise PropertyViolation(
                f"ln D = {exact.log_abs!r} outside [{bounds.log_lower!r}, {bounds.log_upper!r}]"
            )
        return ExitCodeEnum.SUCCESS
    print(json.dumps(payload, indent=2))
    return ExitCodeEnum.SUCCESS


def register(subparsers) -> None:
    parser = subparsers.add_parser("estimate", help="certified log-scale bounds on the mixed discriminant")
    parser.add_argument("input", help="tuple file")
    add_solver_flags(parser)
    parser.add_argument("--check-exact", action="store_true", dest="check_exact",
                        help="also compute the exact value and check it lies in the interval")
    parser.set_defaults(func=cmd_estimate)
