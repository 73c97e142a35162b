"""
Experiment suites

Each suite draws one random instance per repetition from a generator seeded
with seed + index, checks one inequality or identity, and returns an
ExperimentRecord. Bounds are reported on the log scale in
log_lower <= log_exact <= log_upper form.
"""

import logging
import math
import time
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from mixdisc.core.estimator import bapat_lower, conditioned_upper, estimate, estimate_permanent
from mixdisc.core.exact import mixed_discriminant, permanent_ryser
from mixdisc.core.scaling import (
    scale_to_doubly_stochastic,
    sinkhorn_scale,
    verify_lemma_2_2,
    verify_lemma_2_4,
    verify_lemma_2_5,
    verify_lemma_2_6,
)
from mixdisc.core.linalg import SymMatrix
from mixdisc.core.tuples import (
    alpha_of,
    normalize_trace,
    random_orthogonal,
    random_spectrum,
    random_tuple,
    random_unit_vector,
    weak_alpha,
)
from mixdisc.exceptions import NotPositiveDefinite, PropertyViolation
from mixdisc.models.suite import SuiteEnum
from mixdisc.schemas import ExperimentRecord, SolverConfig

logger = logging.getLogger(__name__)

# Slack on log-scale bounds
LOG_SLACK = 1e-8

# Default n ranges: exact-oracle suites stay small (2^n determinants)
N_RANGES: Dict[SuiteEnum, Tuple[int, int]] = {
    SuiteEnum.LEMMA22: (3, 7),
    SuiteEnum.LEMMA24: (3, 10),
    SuiteEnum.LEMMA25: (3, 7),
    SuiteEnum.LEMMA26: (3, 50),
    SuiteEnum.THM14: (3, 9),
    SuiteEnum.SANDWICH: (3, 9),
    SuiteEnum.PERMANENT: (3, 9),
    SuiteEnum.WEAK: (3, 8),
}

LEMMA24_ALPHAS = (1.0, 1.5, 2.0, 3.0)


def _log(value: float) -> float:
    return math.log(value) if value > 0 else -math.inf


def _draw_n(rng: np.random.Generator, suite: SuiteEnum, n: Optional[int]) -> int:
    if n is not None:
        return n
    low, high = N_RANGES[suite]
    return int(rng.integers(low, high + 1))


def run_lemma22(index: int, rng: np.random.Generator, n: Optional[int], cfg: SolverConfig) -> ExperimentRecord:
    n = _draw_n(rng, SuiteEnum.LEMMA22, n)
    alpha = float(rng.uniform(1.0, 3.0))
    t, _ = normalize_trace(random_tuple(n, alpha, seed=0, rng=rng))
    try:
        before, after = verify_lemma_2_2(t, cfg)
        passed = after.value <= 1.0 + LOG_SLACK
    except PropertyViolation as e:
        before, after = e.values
        passed = False
    return ExperimentRecord(
        index=index, suite=SuiteEnum.LEMMA22.value, n=n, alpha_input=alpha,
        log_exact=after.log_abs, log_lower=before.log_abs, log_upper=0.0, passed=passed,
    )


def run_lemma24(index: int, rng: np.random.Generator, n: Optional[int], cfg: SolverConfig) -> ExperimentRecord:
    n = _draw_n(rng, SuiteEnum.LEMMA24, n)
    alpha = float(rng.choice(LEMMA24_ALPHAS))
    t = random_tuple(n, alpha, seed=0, rng=rng)
    try:
        alpha_in, alpha_out = verify_lemma_2_4(t, cfg)
        passed = True
    except PropertyViolation as e:
        alpha_in, alpha_out = e.values
        passed = False
    return ExperimentRecord(
        index=index, suite=SuiteEnum.LEMMA24.value, n=n, alpha_input=alpha_in, alpha_scaled=alpha_out,
        log_exact=_log(alpha_out), log_lower=0.0, log_upper=4.0 * math.log(alpha_in), passed=passed,
    )


def run_lemma25(index: int, rng: np.random.Generator, n: Optional[int], cfg: SolverConfig) -> ExperimentRecord:
    n = _draw_n(rng, SuiteEnum.LEMMA25, n)
    alpha = float(rng.uniform(1.0, 3.0))
    t = random_tuple(n, alpha, seed=0, rng=rng)
    u = random_unit_vector(n, rng)
    try:
        full, restricted = verify_lemma_2_5(t, u)
        passed = True
    except PropertyViolation as e:
        full, restricted = e.values
        passed = False
    return ExperimentRecord(
        index=index, suite=SuiteEnum.LEMMA25.value, n=n, alpha_input=alpha,
        log_exact=full.log_abs, log_lower=restricted.log_abs, log_upper=restricted.log_abs, passed=passed,
    )


def run_lemma26(index: int, rng: np.random.Generator, n: Optional[int], cfg: SolverConfig) -> ExperimentRecord:
    n = _draw_n(rng, SuiteEnum.LEMMA26, n)
    # alpha < n keeps the lower bound 1 - alpha/n positive
    alpha_target = float(rng.uniform(1.0, min(3.0, n - 0.5)))
    frame = random_orthogonal(n, rng)
    spectrum = random_spectrum(n, alpha_target, rng)
    spectrum = spectrum / np.sum(spectrum)
    alpha = float(np.max(spectrum) / np.min(spectrum))
    q = SymMatrix((frame * spectrum) @ frame.T)
    u = random_unit_vector(n, rng)
    try:
        lower, trace, upper = verify_lemma_2_6(q, u, alpha=alpha)
        passed = True
    except PropertyViolation as e:
        lower, trace, upper = e.values
        passed = False
    return ExperimentRecord(
        index=index, suite=SuiteEnum.LEMMA26.value, n=n, alpha_input=alpha,
        log_exact=_log(trace), log_lower=_log(lower), log_upper=_log(upper), passed=passed,
    )


def run_thm14(index: int, rng: np.random.Generator, n: Optional[int], cfg: SolverConfig) -> ExperimentRecord:
    n = _draw_n(rng, SuiteEnum.THM14, n)
    alpha = float(rng.uniform(1.0, 2.0))
    result = scale_to_doubly_stochastic(random_tuple(n, alpha, seed=0, rng=rng), cfg)
    alpha_scaled = alpha_of(result.scaled).alpha
    if alpha_scaled is None:
        raise NotPositiveDefinite(f"scaled tuple of row {index} is not positive definite")
    log_exact = _log(mixed_discriminant(result.scaled).value)
    lower, upper = bapat_lower(n), conditioned_upper(n, alpha_scaled)
    return ExperimentRecord(
        index=index, suite=SuiteEnum.THM14.value, n=n, alpha_input=alpha, alpha_scaled=alpha_scaled,
        log_exact=log_exact, log_lower=lower, log_upper=upper,
        iterations=result.iterations, residual=result.residual,
        passed=lower - LOG_SLACK <= log_exact <= upper + LOG_SLACK,
    )


def run_sandwich(index: int, rng: np.random.Generator, n: Optional[int], cfg: SolverConfig) -> ExperimentRecord:
    n = _draw_n(rng, SuiteEnum.SANDWICH, n)
    t = random_tuple(n, float(rng.uniform(1.0, 2.0)), seed=0, rng=rng)
    bounds = estimate(t, cfg)
    log_exact = _log(mixed_discriminant(t).value)
    return ExperimentRecord(
        index=index, suite=SuiteEnum.SANDWICH.value, n=n,
        alpha_input=bounds.alpha_input, alpha_scaled=bounds.alpha_scaled,
        log_exact=log_exact, log_lower=bounds.log_lower, log_upper=bounds.log_upper,
        iterations=bounds.iterations, residual=bounds.residual,
        passed=bounds.log_lower - LOG_SLACK <= log_exact <= bounds.log_upper + LOG_SLACK,
    )


def run_permanent(index: int, rng: np.random.Generator, n: Optional[int], cfg: SolverConfig) -> ExperimentRecord:
    n = _draw_n(rng, SuiteEnum.PERMANENT, n)
    a = rng.uniform(0.1, 1.0, size=(n, n))
    scaling = sinkhorn_scale(a)
    lower, upper = estimate_permanent(a)
    log_exact = _log(permanent_ryser(a))
    return ExperimentRecord(
        index=index, suite=SuiteEnum.PERMANENT.value, n=n,
        alpha_input=max(1.0, n * float(np.max(scaling.scaled))),
        log_exact=log_exact, log_lower=lower, log_upper=upper,
        iterations=scaling.iterations, residual=scaling.residual,
        passed=lower - LOG_SLACK <= log_exact <= upper + LOG_SLACK,
    )


def run_weak(index: int, rng: np.random.Generator, n: Optional[int], cfg: SolverConfig) -> ExperimentRecord:
    """Doubly stochastic tuples measured only by lambda_max <= alpha/n. The
    conditioned upper bound is recorded without any claim that it must hold."""
    n = _draw_n(rng, SuiteEnum.WEAK, n)
    result = scale_to_doubly_stochastic(random_tuple(n, float(rng.uniform(1.0, 4.0)), seed=0, rng=rng), cfg)
    alpha_weak = max(1.0, weak_alpha(result.scaled))
    log_exact = _log(mixed_discriminant(result.scaled).value)
    upper = alpha_weak ** 4 * math.log(n) - (n - 1)
    passed = log_exact <= upper + LOG_SLACK
    if not passed:
        logger.warning(f"Weak-hypothesis row {index}: ln D={log_exact:.6g} above {upper:.6g} (alpha {alpha_weak:.4g})")
    return ExperimentRecord(
        index=index, suite=SuiteEnum.WEAK.value, n=n, alpha_input=alpha_weak,
        log_exact=log_exact, log_lower=bapat_lower(n), log_upper=upper,
        iterations=result.iterations, residual=result.residual, passed=passed,
    )


SuiteRunner = Callable[[int, np.random.Generator, Optional[int], SolverConfig], ExperimentRecord]

SUITES: Dict[SuiteEnum, SuiteRunner] = {
    SuiteEnum.LEMMA22: run_lemma22,
    SuiteEnum.LEMMA24: run_lemma24,
    SuiteEnum.LEMMA25: run_lemma25,
    SuiteEnum.LEMMA26: run_lemma26,
    SuiteEnum.THM14: run_thm14,
    SuiteEnum.SANDWICH: run_sandwich,
    SuiteEnum.PERMANENT: run_permanent,
    SuiteEnum.WEAK: run_weak,
}


def run_row(suite: SuiteEnum, index: int, seed: int, n: Optional[int] = None,
            cfg: Optional[SolverConfig] = None) -> ExperimentRecord:
    """One repetition with its own generator seeded by seed + index, timed."""
    rng = np.random.default_rng(seed + index)
    started = time.perf_counter()
    record = SUITES[suite](index, rng, n, cfg or SolverConfig())
    return record.model_copy(update={"wall_time_ms": (time.perf_counter() - started) * 1000.0})
