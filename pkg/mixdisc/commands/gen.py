import argparse
import sys

from mixdisc import storage
from mixdisc.core.tuples import random_tuple
from mixdisc.models.suite import ExitCodeEnum


def cmd_gen(args: argparse.Namespace) -> int:
    if args.n < 1:
        raise ValueError(f"--n must be positive, got {args.n}")
    if args.alpha < 1:
        raise ValueError(f"--alpha must be >= 1, got {args.alpha}")
    t = random_tuple(args.n, args.alpha, args.seed)
    metadata = {
        "seed": args.seed,
        "alpha_target": args.alpha,
        "description": f"random {args.n}-tuple, eigenvalues uniform on [1, {args.alpha:g}]",
    }
    if args.out:
        storage.save_tuple(t, args.out, metadata)
    else:
        sys.stdout.write(storage.dumps(t, metadata))
    return ExitCodeEnum.SUCCESS


def register(subparsers) -> None:
    parser = subparsers.add_parser("gen", help="generate a random positive definite tuple")
    parser.add_argument("--n", type=int, required=True, help="tuple length and matrix dimension")
    parser.add_argument("--alpha", type=float, default=2.0, help="conditioning target, >= 1 (default: 2)")
    parser.add_argument("--seed", type=int, default=0, help="generator seed (default: 0)")
    parser.add_argument("--out", help="output file; stdout when omitted")
    parser.set_defaults(func=cmd_gen)
