"""
mixdisc: mixed discriminants of tuples of symmetric matrices

Exact values at small n, scaling of positive definite tuples to doubly
stochastic form, and certified log-scale bounds built on that scaling.
"""

__version__ = "0.1.0"

from mixdisc.core.estimator import (  # noqa: E402
    bapat_lower,
    bregman_minc_upper,
    conditioned_upper,
    estimate,
    permanent_sandwich,
)
from mixdisc.core.exact import mixed_discriminant, permanent_naive, permanent_ryser  # noqa: E402
from mixdisc.core.linalg import SymMatrix  # noqa: E402
from mixdisc.core.scaling import scale_to_doubly_stochastic  # noqa: E402
from mixdisc.core.tuples import MatrixTuple, alpha_of, check_doubly_stochastic, from_matrix_rows, random_tuple  # noqa: E402
from mixdisc.schemas import SolverConfig  # noqa: E402

__all__ = [
    "MatrixTuple",
    "SolverConfig",
    "SymMatrix",
    "alpha_of",
    "bapat_lower",
    "bregman_minc_upper",
    "check_doubly_stochastic",
    "conditioned_upper",
    "estimate",
    "from_matrix_rows",
    "mixed_discriminant",
    "permanent_naive",
    "permanent_ryser",
    "permanent_sandwich",
    "random_tuple",
    "scale_to_doubly_stochastic",
]
