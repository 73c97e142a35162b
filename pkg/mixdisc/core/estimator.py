"""
Certified bounds on mixed discriminants and permanents

For a positive definite tuple Q, scale to a doubly stochastic B with
B_i = tau_i T^T Q_i T. Then

    ln D(Q) = ln D(B) + log_correction,  log_correction = -2 ln|det T| - sum ln tau_i,

and ln D(B) is squeezed between ln(n!/n^n) below and
min(0, alpha^4 ln n - (n - 1)) above. All arithmetic is in the log domain.
"""

import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np

from mixdisc.core.scaling import scale_to_doubly_stochastic, sinkhorn_scale
from mixdisc.core.tuples import MatrixTuple, alpha_of
from mixdisc.exceptions import HypothesisViolated, NotPositiveDefinite
from mixdisc.schemas import DiscriminantEstimate, SolverConfig

logger = logging.getLogger(__name__)

ROW_SUM_TOLERANCE = 1e-10
ENTRY_TOLERANCE = 1e-12


def bapat_lower(n: int) -> float:
    """ln(n!/n^n), the lower bound on D of a doubly stochastic n-tuple."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return math.lgamma(n + 1) - n * math.log(n)


def conditioned_upper(n: int, alpha: float) -> float:
    """min(0, alpha^4 ln n - (n - 1)): upper bound on ln D of an alpha-conditioned
    doubly stochastic n-tuple, capped by D <= 1."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    return min(0.0, alpha ** 4 * math.log(n) - (n - 1))


def spread_bound(n: int, alpha: float) -> float:
    """n ln alpha: how far ln D of an alpha-conditioned tuple can move under
    rescalings that keep it alpha-conditioned."""
    return n * math.log(alpha)


def estimate(t: MatrixTuple, cfg: Optional[SolverConfig] = None) -> DiscriminantEstimate:
    """Log-scale interval certified to contain ln D(t).

    The upper bound uses the smaller of the input alpha (bound on the scaled
    tuple by way of the scaling) and the measured alpha of the scaled tuple;
    both exponents give valid bounds.
    """
    report = alpha_of(t)
    if not report.positive_definite:
        raise NotPositiveDefinite(f"tuple is not positive definite (min eigenvalue {min(report.per_matrix_min):.3e})")
    result = scale_to_doubly_stochastic(t, cfg)
    alpha_scaled = alpha_of(result.scaled).alpha
    if alpha_scaled is None:
        # roundoff on a nearly singular scaled tuple; only the input alpha bound applies
        alpha_scaled = math.inf
    log_correction = -2.0 * result.log_det_T - float(np.sum(result.xi))
    exponent_alpha = min(report.alpha, alpha_scaled)
    estimate_ = DiscriminantEstimate(
        n=t.n,
        log_lower=log_correction + bapat_lower(t.n),
        log_upper=log_correction + conditioned_upper(t.n, exponent_alpha),
        log_correction=log_correction,
        alpha_input=report.alpha,
        alpha_scaled=alpha_scaled,
        iterations=result.iterations,
        residual=result.residual,
    )
    logger.info(
        f"Estimate for n={t.n}: ln D in [{estimate_.log_lower:.6g}, {estimate_.log_upper:.6g}] "
        f"(alpha {report.alpha:.4g} -> {alpha_scaled:.4g})"
    )
    return estimate_


def _check_stochastic_rows(b: np.ndarray) -> None:
    for row, total in enumerate(b.sum(axis=1)):
        if abs(total - 1.0) > ROW_SUM_TOLERANCE:
            raise HypothesisViolated(f"row {row} sums to {total!r}, expected 1", row=row)


def bregman_minc_upper(b, r: Sequence[int]) -> float:
    """ln prod_i (r_i!)^{1/r_i} / r_i, an upper bound on ln per(b) for a
    stochastic b with 0 <= b_ij <= 1/r_i."""
    b = np.asarray(b, dtype=float)
    r = [int(value) for value in r]
    if b.ndim != 2 or b.shape[0] != b.shape[1] or len(r) != b.shape[0]:
        raise ValueError(f"need a square matrix and one r per row, got {b.shape} and {len(r)}")
    _check_stochastic_rows(b)
    for row, (values, ri) in enumerate(zip(b, r)):
        if ri < 1:
            raise HypothesisViolated(f"r_{row} = {ri} is not a positive integer", row=row)
        if np.any(values < -ENTRY_TOLERANCE) or np.any(values > 1.0 / ri + ENTRY_TOLERANCE):
            raise HypothesisViolated(f"row {row} has an entry outside [0, 1/{ri}]", row=row)
    return math.fsum(math.lgamma(ri + 1) / ri - math.log(ri) for ri in r)


def bregman_minc_01(a) -> float:
    """ln prod_i (r_i!)^{1/r_i} for a 0-1 matrix with row sums r_i."""
    a = np.asarray(a, dtype=float)
    if not np.all((a == 0) | (a == 1)):
        raise HypothesisViolated("matrix entries must be 0 or 1")
    sums = a.sum(axis=1).astype(int)
    if np.any(sums == 0):
        return -math.inf
    return math.fsum(math.lgamma(ri + 1) / ri for ri in sums)


def permanent_sandwich(b, alpha: float) -> Tuple[float, float]:
    """(ln n!/n^n, Bregman-Minc bound with r_i = floor(n/alpha)) for a doubly
    stochastic b with entries at most alpha/n."""
    b = np.asarray(b, dtype=float)
    n = b.shape[0]
    _check_stochastic_rows(b)
    for column, total in enumerate(b.sum(axis=0)):
        if abs(total - 1.0) > ROW_SUM_TOLERANCE:
            raise HypothesisViolated(f"column {column} sums to {total!r}, expected 1")
    for row, values in enumerate(b):
        if np.any(values > alpha / n + ENTRY_TOLERANCE):
            raise HypothesisViolated(f"row {row} has an entry above alpha/n = {alpha / n!r}", row=row)
    r = max(1, math.floor(n / alpha * (1.0 + 1e-12)))
    return bapat_lower(n), bregman_minc_upper(b, [r] * n)


def estimate_permanent(a, tol: float = 1e-12) -> Tuple[float, float]:
    """Log-scale interval containing ln per(a) for a positive matrix a.

    Sinkhorn-scales a to B = diag(r) a diag(c), bounds per B, and undoes the
    scaling: per a = per B / (prod r_i prod c_j).
    """
    result = sinkhorn_scale(a, tol=tol)
    b = result.scaled
    n = b.shape[0]
    alpha = max(1.0, n * float(np.max(b)))
    lower, upper = permanent_sandwich(b, alpha)
    correction = -float(np.sum(np.log(result.row_scaling)) + np.sum(np.log(result.col_scaling)))
    return correction + lower, correction + upper
