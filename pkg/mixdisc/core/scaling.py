"""
Scaling to doubly stochastic form

Minimizes f(x) = ln det(sum e^{x_i} Q_i) over the hyperplane sum x_i = 0 by
projected Newton with Armijo backtracking, then builds tau_i = e^{xi_i},
T = S^{-1} with S^T S = sum e^{xi_i} Q_i, and B_i = tau_i T^T Q_i T.

With L the lower Cholesky factor of M(x) = sum e^{x_i} Q_i and
C_i = L^{-1} Q_i L^{-T}, the candidate doubly stochastic tuple at x is
B_i(x) = e^{x_i} C_i, its traces are the gradient of f, and
H_ij = delta_ij tr B_i - <B_i, B_j> is the Hessian.

Also houses the inequality checks the upper bound rests on and the
Sinkhorn scaling of positive matrices.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from mixdisc.core.exact import mixed_discriminant
from mixdisc.core.linalg import (
    SymMatrix,
    cholesky,
    eigen_extremes,
    inverse_lower,
    restrict_form,
    orthogonal_complement,
    solve_spd,
)
from mixdisc.core.tuples import MatrixTuple, alpha_of, restrict_to_subspace, restrict_tuple
from mixdisc.exceptions import (
    HypothesisViolated,
    NoConvergence,
    NotPositiveDefinite,
    PropertyViolation,
)
from mixdisc.schemas import ExactValue, ScalingDiagnostics, SolverConfig

logger = logging.getLogger(__name__)

MAX_BACKTRACKS = 60
# Below this predicted decrease f cannot resolve the Armijo test; take the full step
DECREASE_FLOOR = 1e-14


@dataclass(frozen=True, eq=False)
class ScalingResult:
    xi: np.ndarray
    tau: np.ndarray
    transform: np.ndarray
    log_det_T: float
    scaled: MatrixTuple
    residual: float
    iterations: int
    objective: float
    converged: bool = True
    history: List[float] = field(default_factory=list)

    def diagnostics(self) -> ScalingDiagnostics:
        return ScalingDiagnostics(
            n=self.scaled.n,
            xi=self.xi.tolist(),
            tau=self.tau.tolist(),
            log_det_T=self.log_det_T,
            objective=self.objective,
            residual=self.residual,
            iterations=self.iterations,
            converged=self.converged,
        )


@dataclass(frozen=True, eq=False)
class SinkhornResult:
    row_scaling: np.ndarray
    col_scaling: np.ndarray
    scaled: np.ndarray
    residual: float
    iterations: int


def _weighted_sum(stack: np.ndarray, x: np.ndarray) -> np.ndarray:
    return np.tensordot(np.exp(x), stack, axes=1)


def _scaled_forms(stack: np.ndarray, x: np.ndarray) -> Tuple[np.ndarray, float, np.ndarray]:
    """Return (B(x) stack, f(x), L^{-1})."""
    lower = cholesky(_weighted_sum(stack, x)).lower
    linv = inverse_lower(lower)
    forms = np.exp(x)[:, None, None] * (linv @ stack @ linv.T)
    forms = 0.5 * (forms + np.swapaxes(forms, 1, 2))
    return forms, float(2.0 * np.sum(np.log(np.diag(lower)))), linv


def _check_input(t: MatrixTuple, x=None) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    if x is None:
        return t.stack(), None
    x = np.asarray(x, dtype=float)
    if x.shape != (t.n,) or not np.all(np.isfinite(x)):
        raise ValueError(f"x must be a finite vector of length {t.n}")
    return t.stack(), x


def objective_f(t: MatrixTuple, x) -> float:
    """f(x) = ln det(sum e^{x_i} Q_i)."""
    stack, x = _check_input(t, x)
    lower = cholesky(_weighted_sum(stack, x)).lower
    return float(2.0 * np.sum(np.log(np.diag(lower))))


def gradient_f(t: MatrixTuple, x) -> np.ndarray:
    """d_i f = e^{x_i} tr(M^{-1} Q_i); the components sum to n."""
    stack, x = _check_input(t, x)
    forms, _, _ = _scaled_forms(stack, x)
    return np.trace(forms, axis1=1, axis2=2)


def hessian_f(t: MatrixTuple, x) -> np.ndarray:
    stack, x = _check_input(t, x)
    forms, _, _ = _scaled_forms(stack, x)
    return _hessian(forms)


def _hessian(forms: np.ndarray) -> np.ndarray:
    traces = np.trace(forms, axis1=1, axis2=2)
    gram = np.einsum("iab,jab->ij", forms, forms)
    return np.diag(traces) - gram


def _newton_direction(forms: np.ndarray, projected_gradient: np.ndarray) -> Tuple[np.ndarray, bool]:
    """Solve the Newton system on the sum-zero subspace.

    H annihilates the all-ones vector, so (H + 11^T/n) is positive definite
    on all of R^n exactly when H is on the hyperplane, and its solution for a
    sum-zero right-hand side is itself sum-zero.
    """
    n = forms.shape[0]
    hessian = _hessian(forms) + np.full((n, n), 1.0 / n)
    try:
        direction = -solve_spd(SymMatrix(hessian), projected_gradient)
    except NotPositiveDefinite:
        return -projected_gradient, False
    direction -= np.mean(direction)
    if not projected_gradient @ direction < 0:
        return -projected_gradient, False
    return direction, True


def _assemble(t: MatrixTuple, x: np.ndarray, iterations: int, history: List[float], converged: bool) -> ScalingResult:
    forms, objective, linv = _scaled_forms(t.stack(), x)
    residual = float(np.max(np.abs(np.trace(forms, axis1=1, axis2=2) - 1.0)))
    return ScalingResult(
        xi=x.copy(),
        tau=np.exp(x),
        transform=linv.T,
        log_det_T=-0.5 * objective,
        scaled=MatrixTuple(tuple(SymMatrix(b) for b in forms)),
        residual=residual,
        iterations=iterations,
        objective=objective,
        converged=converged,
        history=list(history),
    )


def initial_point(t: MatrixTuple) -> np.ndarray:
    """x_i = -ln tr Q_i, shifted onto the hyperplane."""
    x = -np.log(t.traces())
    return x - np.mean(x)


def scale_to_doubly_stochastic(t: MatrixTuple, cfg: Optional[SolverConfig] = None) -> ScalingResult:
    """Scale a positive definite tuple to a doubly stochastic one.

    Converged when max_i |tr B_i(x) - 1| <= cfg.trace_tol. Raises
    NotPositiveDefinite for singular or indefinite input and NoConvergence,
    carrying the best iterate, when the iteration cap is hit.
    """
    cfg = cfg or SolverConfig()
    for index, m in enumerate(t):
        try:
            cholesky(m)
        except NotPositiveDefinite as e:
            raise NotPositiveDefinite(f"matrix {index} is not positive definite: {e}", pivot_index=e.pivot_index)

    stack = t.stack()
    n = t.n
    x = initial_point(t)
    history: List[float] = []
    best_x, best_residual = x.copy(), math.inf
    fallbacks = 0

    for iteration in range(cfg.max_iterations + 1):
        forms, value, _ = _scaled_forms(stack, x)
        gradient = np.trace(forms, axis1=1, axis2=2)
        residual = float(np.max(np.abs(gradient - 1.0)))
        history.append(value)
        if residual < best_residual:
            best_x, best_residual = x.copy(), residual
        logger.debug(f"iteration {iteration}: f={value:.15g} residual={residual:.3e}")
        if residual <= cfg.trace_tol:
            logger.info(f"Scaling converged for n={n} in {iteration} iterations (residual {residual:.3e})")
            return _assemble(t, x, iteration, history, converged=True)
        if iteration == cfg.max_iterations:
            break

        projected = gradient - np.mean(gradient)
        direction, is_newton = _newton_direction(forms, projected)
        if not is_newton:
            fallbacks += 1
            logger.warning(f"Projected Hessian singular at iteration {iteration}; taking a gradient step")
        slope = float(projected @ direction)

        step = 1.0
        if -slope > DECREASE_FLOOR * max(1.0, abs(value)):
            for _ in range(MAX_BACKTRACKS):
                candidate = x + step * direction
                try:
                    if objective_f(t, candidate) <= value + cfg.armijo_constant * step * slope:
                        break
                except NotPositiveDefinite:
                    pass
                step *= cfg.line_search_shrink
        x = x + step * direction
        x = x - np.mean(x)

    best = _assemble(t, best_x, cfg.max_iterations, history, converged=False)
    raise NoConvergence(
        f"Scaling did not reach trace tolerance {cfg.trace_tol:.1e} in {cfg.max_iterations} iterations "
        f"(best residual {best.residual:.3e}, {fallbacks} gradient fallbacks)",
        result=best,
        residual=best.residual,
    )


def verify_lemma_2_2(t: MatrixTuple, cfg: Optional[SolverConfig] = None) -> Tuple[ExactValue, ExactValue]:
    """Scaling a tuple whose traces sum to n cannot decrease D.

    Returns (D before, D after); raises PropertyViolation when
    D(B) < D(Q) * (1 - 1e-8).
    """
    total = float(np.sum(t.traces()))
    if abs(total - t.n) > 1e-9 * t.n:
        raise HypothesisViolated(f"traces sum to {total!r}, expected {t.n}")
    result = scale_to_doubly_stochastic(t, cfg)
    before = mixed_discriminant(t)
    after = mixed_discriminant(result.scaled)
    if after.value < before.value * (1.0 - 1e-8):
        raise PropertyViolation(
            f"D after scaling {after.value!r} is below D before {before.value!r}", values=(before, after)
        )
    return before, after


def verify_lemma_2_4(t: MatrixTuple, cfg: Optional[SolverConfig] = None, basis=None) -> Tuple[float, float]:
    """The doubly stochastic tuple scaled from an alpha-conditioned one is alpha^4-conditioned.

    With ``basis`` (orthonormal n x m columns) the first m forms are restricted
    onto its span before scaling. Returns (alpha_in, alpha_out).
    """
    report = alpha_of(t)
    if not report.positive_definite:
        raise NotPositiveDefinite("input tuple is not positive definite")
    alpha_in = report.alpha
    source = t if basis is None else restrict_to_subspace(t, basis)
    result = scale_to_doubly_stochastic(source, cfg)
    alpha_out = alpha_of(result.scaled).alpha
    if alpha_out is None or alpha_out > alpha_in ** 4 * (1.0 + 1e-6):
        raise PropertyViolation(
            f"scaled tuple is {alpha_out}-conditioned, above alpha^4 = {alpha_in ** 4!r}",
            values=(alpha_in, alpha_out),
        )
    return alpha_in, alpha_out


def verify_lemma_2_5(t: MatrixTuple, u) -> Tuple[ExactValue, ExactValue]:
    """D(q_1, ..., q_{n-1}, <u,x>^2) equals D of the restrictions onto u-perp.

    Returns (D of the full tuple, D of the restricted tuple).
    """
    u = np.asarray(u, dtype=float)
    full = mixed_discriminant(t.replace(t.n - 1, np.outer(u, u)))
    restricted = mixed_discriminant(restrict_tuple(t, u))
    scale = max(abs(full.value), abs(restricted.value))
    if abs(full.value - restricted.value) > 1e-8 * scale:
        raise PropertyViolation(
            f"D(full)={full.value!r} differs from D(restricted)={restricted.value!r}",
            values=(full, restricted),
        )
    return full, restricted


def verify_lemma_2_6(q, u, alpha: Optional[float] = None, slack: float = 1e-10) -> Tuple[float, float, float]:
    """Trace of a trace-one alpha-conditioned form restricted to the hyperplane u-perp
    lies in [1 - alpha/n, 1 - 1/(alpha n)].

    ``alpha`` defaults to the measured lambda_max / lambda_min of q.
    Returns (lower, trace, upper).
    """
    q = q if isinstance(q, SymMatrix) else SymMatrix(q)
    n = q.dim
    if abs(q.trace() - 1.0) > 1e-9:
        raise HypothesisViolated(f"form has trace {q.trace()!r}, expected 1")
    if alpha is None:
        low, high = eigen_extremes(q)
        if low <= 0:
            raise NotPositiveDefinite("form is not positive definite")
        alpha = high / low
    restricted = restrict_form(q, orthogonal_complement(u))
    trace = restricted.trace()
    lower, upper = 1.0 - alpha / n, 1.0 - 1.0 / (alpha * n)
    if not lower - slack <= trace <= upper + slack:
        raise PropertyViolation(
            f"restricted trace {trace!r} outside [{lower!r}, {upper!r}]", values=(lower, trace, upper)
        )
    return lower, trace, upper


def sinkhorn_scale(a, tol: float = 1e-12, max_iterations: int = 10000) -> SinkhornResult:
    """Alternate row and column normalization of a positive matrix.

    Returns row scaling r, column scaling c and diag(r) A diag(c), doubly
    stochastic within ``tol``.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    bad = np.argwhere(~(a > 0))
    if bad.size:
        raise HypothesisViolated(f"matrix entry {tuple(bad[0])} is not positive", row=int(bad[0][0]))
    n = a.shape[0]
    rows = np.ones(n)
    cols = np.ones(n)
    residual = math.inf
    for iteration in range(max_iterations + 1):
        scaled = rows[:, None] * a * cols[None, :]
        residual = max(
            float(np.max(np.abs(scaled.sum(axis=1) - 1.0))),
            float(np.max(np.abs(scaled.sum(axis=0) - 1.0))),
        )
        if residual <= tol:
            return SinkhornResult(rows, cols, scaled, residual, iteration)
        if iteration == max_iterations:
            break
        rows = 1.0 / (a @ cols)
        cols = 1.0 / (a.T @ rows)
    raise NoConvergence(f"Sinkhorn scaling stalled at residual {residual:.3e}", residual=residual)
