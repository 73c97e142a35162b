"""
Matrix tuples

The MatrixTuple type, its structural predicates (doubly stochastic,
alpha-conditioned), the diagonal embedding of a square matrix, restriction
of a tuple onto a hyperplane and seeded random instance generators.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from mixdisc.core.linalg import (
    UNIT_TOLERANCE,
    MatrixLike,
    SymMatrix,
    as_array,
    eigen_extremes,
    orthogonal_complement,
    restrict_form,
)
from mixdisc.exceptions import NotUnitVector
from mixdisc.schemas import ConditionReport, StochasticityReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MatrixTuple:
    """Ordered n-tuple of n x n symmetric matrices."""

    matrices: Tuple[SymMatrix, ...]

    def __post_init__(self):
        matrices = tuple(m if isinstance(m, SymMatrix) else SymMatrix(m) for m in self.matrices)
        n = len(matrices)
        if n < 1:
            raise ValueError("a matrix tuple needs at least one matrix")
        for index, m in enumerate(matrices):
            if m.dim != n:
                raise ValueError(f"matrix {index} has dimension {m.dim}, tuple length is {n}")
        object.__setattr__(self, "matrices", matrices)

    @classmethod
    def from_arrays(cls, arrays: Sequence[MatrixLike]) -> "MatrixTuple":
        return cls(tuple(SymMatrix(as_array(a)) for a in arrays))

    @property
    def n(self) -> int:
        return len(self.matrices)

    def stack(self) -> np.ndarray:
        """(n, n, n) array, first axis indexing the matrices."""
        return np.stack([m.entries for m in self.matrices])

    def traces(self) -> np.ndarray:
        return np.array([m.trace() for m in self.matrices])

    def total(self) -> np.ndarray:
        """Entrywise sum of the matrices, each entry exactly rounded."""
        return np.apply_along_axis(math.fsum, 0, self.stack())

    def replace(self, index: int, matrix: MatrixLike) -> "MatrixTuple":
        matrices = list(self.matrices)
        matrices[index] = SymMatrix(as_array(matrix))
        return MatrixTuple(tuple(matrices))

    def permuted(self, order: Sequence[int]) -> "MatrixTuple":
        return MatrixTuple(tuple(self.matrices[i] for i in order))

    def __len__(self):
        return self.n

    def __iter__(self) -> Iterator[SymMatrix]:
        return iter(self.matrices)

    def __getitem__(self, index: int) -> SymMatrix:
        return self.matrices[index]

    def __repr__(self):
        return f"MatrixTuple(n={self.n})"


def alpha_of(t: MatrixTuple) -> ConditionReport:
    """Eigenvalue extremes per matrix and the smallest alpha with
    lambda_max(Q_i) <= alpha * lambda_min(Q_j) for all i, j."""
    extremes = [eigen_extremes(m) for m in t]
    mins = [low for low, _ in extremes]
    maxs = [high for _, high in extremes]
    if min(mins) <= 0.0:
        return ConditionReport(per_matrix_min=mins, per_matrix_max=maxs, alpha=None, positive_definite=False)
    return ConditionReport(per_matrix_min=mins, per_matrix_max=maxs, alpha=max(maxs) / min(mins))


def check_doubly_stochastic(t: MatrixTuple, tol: float) -> StochasticityReport:
    if tol < 0:
        raise ValueError(f"tolerance must be non-negative, got {tol}")
    sum_deviation = float(np.max(np.abs(t.total() - np.eye(t.n))))
    trace_deviations = [abs(trace - 1.0) for trace in t.traces()]
    min_eigenvalue = min(eigen_extremes(m)[0] for m in t)
    passes = sum_deviation <= tol and all(d <= tol for d in trace_deviations) and min_eigenvalue >= -tol
    return StochasticityReport(
        sum_deviation=sum_deviation,
        trace_deviations=trace_deviations,
        min_eigenvalue=min_eigenvalue,
        tol=tol,
        passes=passes,
    )


def from_matrix_rows(a) -> MatrixTuple:
    """Q_i = diag(i-th row of a); D of the result is per(a)."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return MatrixTuple(tuple(SymMatrix.diagonal(row) for row in a))


def restrict_tuple(t: MatrixTuple, u) -> MatrixTuple:
    """Restrictions of Q_1..Q_{n-1} onto the hyperplane orthogonal to u.

    The n-th slot is taken to be the form <u, x>^2 and is dropped.
    """
    if t.n < 2:
        raise ValueError("restriction needs n >= 2")
    u = np.asarray(u, dtype=float)
    if u.shape != (t.n,):
        raise NotUnitVector(f"vector has shape {u.shape}, expected ({t.n},)")
    if abs(float(np.linalg.norm(u)) - 1.0) > UNIT_TOLERANCE:
        raise NotUnitVector(f"vector norm is {np.linalg.norm(u)!r}, expected 1")
    basis = orthogonal_complement(u)
    return MatrixTuple(tuple(restrict_form(m, basis) for m in t.matrices[: t.n - 1]))


def restrict_to_subspace(t: MatrixTuple, basis) -> MatrixTuple:
    """Restrictions of the first m matrices onto the m-dimensional span(basis)."""
    basis = np.asarray(basis, dtype=float)
    m = basis.shape[1]
    return MatrixTuple(tuple(restrict_form(q, basis) for q in t.matrices[:m]))


def conjugate(t: MatrixTuple, transform, tau) -> MatrixTuple:
    """P_i = tau_i * T^T Q_i T."""
    transform = np.asarray(transform, dtype=float)
    tau = np.asarray(tau, dtype=float)
    return MatrixTuple(tuple(SymMatrix(w * (transform.T @ m.entries @ transform)) for w, m in zip(tau, t)))


def normalize_trace(t: MatrixTuple) -> Tuple[MatrixTuple, float]:
    """Rescale globally so the traces sum to n; returns the tuple and the factor used."""
    factor = t.n / float(np.sum(t.traces()))
    return MatrixTuple(tuple(SymMatrix(factor * m.entries) for m in t)), factor


def weak_alpha(t: MatrixTuple) -> float:
    """Smallest alpha with lambda_max(Q_i) <= alpha / n for every i."""
    return t.n * max(eigen_extremes(m)[1] for m in t)


def satisfies_weak_hypothesis(t: MatrixTuple, alpha: float, tol: float = 1e-12) -> bool:
    """lambda_max(Q_i) <= alpha / n for every i."""
    return weak_alpha(t) <= alpha + t.n * tol


def random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed orthogonal matrix (QR of a Gaussian matrix with sign fix)."""
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


def random_unit_vector(n: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal(n)
    return g / np.linalg.norm(g)


def random_spectrum(n: int, alpha_target: float, rng: np.random.Generator) -> np.ndarray:
    """Eigenvalues uniform on [1, alpha_target], pulled in slightly so that
    roundoff in U diag U^T cannot push the measured alpha over the target."""
    margin = 1e-9 * (alpha_target - 1.0)
    return rng.uniform(1.0 + margin, alpha_target - margin, size=n)


def random_tuple(n: int, alpha_target: float, seed: int, rng: Optional[np.random.Generator] = None) -> MatrixTuple:
    """Seeded positive definite tuple with alpha_of(result).alpha <= alpha_target.

    Each matrix gets its own Haar frame and eigenvalues uniform on [1, alpha_target].
    alpha_target == 1 yields the identity n times.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if alpha_target < 1:
        raise ValueError(f"alpha_target must be >= 1, got {alpha_target}")
    if alpha_target == 1.0:
        return MatrixTuple(tuple(SymMatrix.identity(n) for _ in range(n)))
    rng = rng if rng is not None else np.random.default_rng(seed)
    matrices = []
    for _ in range(n):
        frame = random_orthogonal(n, rng)
        spectrum = random_spectrum(n, alpha_target, rng)
        matrices.append(SymMatrix((frame * spectrum) @ frame.T))
    return MatrixTuple(tuple(matrices))
