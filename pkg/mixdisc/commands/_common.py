import argparse
import math
from typing import Optional

from mixdisc.config import get_config
from mixdisc.schemas import SolverConfig


def add_solver_flags(parser: argparse.ArgumentParser) -> None:
    config = get_config()
    parser.add_argument("--tol", type=float, default=config["trace_tol"],
                        help=f"trace tolerance for the scaling solver (default: {config['trace_tol']:g})")
    parser.add_argument("--max-iter", type=int, default=config["max_iterations"], dest="max_iter",
                        help=f"iteration cap for the scaling solver (default: {config['max_iterations']})")


def solver_config(args: argparse.Namespace) -> SolverConfig:
    return SolverConfig(trace_tol=args.tol, max_iterations=args.max_iter)


def finite_or_none(value: float) -> Optional[float]:
    """JSON has no infinities; zero or overflowing values are written as null."""
    return value if math.isfinite(value) else None
