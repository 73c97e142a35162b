"""
Dense symmetric linear algebra

Eigendecomposition by cyclic Jacobi rotations, Cholesky factorization with a
strict pivot tolerance, log-determinants, SPD solves and restriction of
quadratic forms onto subspaces. Every function is pure.
"""

import logging
import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from mixdisc.exceptions import BasisNotOrthonormal, NotPositiveDefinite, NotUnitVector, NumericalFailure

logger = logging.getLogger(__name__)

JACOBI_TOLERANCE = 1e-13
JACOBI_MAX_SWEEPS = 100
PIVOT_TOLERANCE = 1e-13
ORTHONORMAL_TOLERANCE = 1e-10
UNIT_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class SymMatrix:
    """Real symmetric matrix, symmetrized once at construction by averaging."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ValueError(f"SymMatrix needs a non-empty square array, got shape {a.shape}")
        a = 0.5 * (a + a.T)
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def identity(cls, n: int) -> "SymMatrix":
        return cls(np.eye(n))

    @classmethod
    def diagonal(cls, values) -> "SymMatrix":
        return cls(np.diag(np.asarray(values, dtype=float)))

    def trace(self) -> float:
        return math.fsum(np.diag(self.entries))

    def __repr__(self):
        return f"SymMatrix(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.T


@dataclass(frozen=True, eq=False)
class CholeskyFactor:
    lower: np.ndarray

    @property
    def upper(self) -> np.ndarray:
        """S with S^T S equal to the factored matrix."""
        return self.lower.T


MatrixLike = Union[SymMatrix, np.ndarray]


def as_array(m: MatrixLike) -> np.ndarray:
    if isinstance(m, SymMatrix):
        return m.entries
    return np.asarray(m, dtype=float)


def _off_diagonal_norm(a: np.ndarray) -> float:
    return float(np.sqrt(2.0 * np.sum(np.tril(a, -1) ** 2)))


def eigen_decompose(m: MatrixLike) -> EigenDecomposition:
    """Cyclic Jacobi eigendecomposition, eigenvalues ascending.

    Raises NumericalFailure (with the off-diagonal residual) if the
    off-diagonal mass has not dropped below 1e-13 of the initial Frobenius
    norm after JACOBI_MAX_SWEEPS sweeps.
    """
    a = np.array(as_array(m), dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    threshold = JACOBI_TOLERANCE * float(np.linalg.norm(a))

    off = _off_diagonal_norm(a)
    sweeps = 0
    while off > threshold:
        if sweeps >= JACOBI_MAX_SWEEPS:
            raise NumericalFailure(
                f"Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps", residual=off
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rotation = np.array([[c, s], [-s, c]])
                pq = [p, q]
                a[:, pq] = a[:, pq] @ rotation
                a[pq, :] = rotation.T @ a[pq, :]
                a[p, q] = a[q, p] = 0.0
                v[:, pq] = v[:, pq] @ rotation
        sweeps += 1
        off = _off_diagonal_norm(a)

    eigenvalues = np.diag(a).copy()
    order = np.argsort(eigenvalues, kind="stable")
    logger.debug(f"Jacobi converged in {sweeps} sweeps for n={n}")
    return EigenDecomposition(eigenvalues=eigenvalues[order], eigenvectors=v[:, order])


def eigen_extremes(m: MatrixLike) -> Tuple[float, float]:
    """Return (lambda_min, lambda_max)."""
    eigenvalues = eigen_decompose(m).eigenvalues
    return float(eigenvalues[0]), float(eigenvalues[-1])


def cholesky(m: MatrixLike) -> CholeskyFactor:
    """Lower Cholesky factor; a pivot at or below 1e-13 * max diagonal is a failure."""
    a = as_array(m)
    n = a.shape[0]
    tol = PIVOT_TOLERANCE * max(float(np.max(np.diag(a))), 0.0)
    lower = np.zeros((n, n))
    for j in range(n):
        pivot = a[j, j] - lower[j, :j] @ lower[j, :j]
        if not pivot > tol:
            raise NotPositiveDefinite(f"Cholesky pivot {j} is {pivot:.3e}", pivot_index=j)
        lower[j, j] = np.sqrt(pivot)
        if j + 1 < n:
            lower[j + 1:, j] = (a[j + 1:, j] - lower[j + 1:, :j] @ lower[j, :j]) / lower[j, j]
    return CholeskyFactor(lower=lower)


def log_det(m: MatrixLike) -> float:
    lower = cholesky(m).lower
    return float(2.0 * np.sum(np.log(np.diag(lower))))


def solve_lower(lower: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Forward substitution for lower @ y = rhs."""
    rhs = np.asarray(rhs, dtype=float)
    y = np.zeros_like(rhs)
    for i in range(lower.shape[0]):
        y[i] = (rhs[i] - lower[i, :i] @ y[:i]) / lower[i, i]
    return y


def solve_upper_transposed(lower: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Back substitution for lower.T @ x = rhs."""
    rhs = np.asarray(rhs, dtype=float)
    x = np.zeros_like(rhs)
    for i in reversed(range(lower.shape[0])):
        x[i] = (rhs[i] - lower[i + 1:, i] @ x[i + 1:]) / lower[i, i]
    return x


def solve_spd(m: MatrixLike, rhs) -> np.ndarray:
    lower = cholesky(m).lower
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape[0] != lower.shape[0]:
        raise ValueError(f"right-hand side has {rhs.shape[0]} rows, matrix has dimension {lower.shape[0]}")
    return solve_upper_transposed(lower, solve_lower(lower, rhs))


def inverse_lower(lower: np.ndarray) -> np.ndarray:
    return solve_lower(lower, np.eye(lower.shape[0]))


def det_lu(m: MatrixLike):
    """(sign, log|det|) by LU with partial pivoting; no definiteness assumed.

    A stack of matrices (shape (k, n, n)) gives two length-k arrays.
    """
    entries = as_array(m)
    sign, log_abs = np.linalg.slogdet(entries)
    if entries.ndim == 2:
        return float(sign), float(log_abs)
    return sign, log_abs


def check_orthonormal(basis: np.ndarray) -> None:
    basis = np.asarray(basis, dtype=float)
    if basis.ndim != 2:
        raise BasisNotOrthonormal(f"basis must be a matrix, got shape {basis.shape}")
    gram = basis.T @ basis
    deviation = float(np.max(np.abs(gram - np.eye(basis.shape[1])))) if basis.shape[1] else 0.0
    if deviation > ORTHONORMAL_TOLERANCE:
        raise BasisNotOrthonormal(f"basis columns deviate from orthonormal by {deviation:.3e}")


def restrict_form(m: MatrixLike, basis) -> SymMatrix:
    """Matrix of the quadratic form x -> <Mx, x> restricted to span(basis)."""
    a = as_array(m)
    basis = np.asarray(basis, dtype=float)
    if basis.ndim != 2 or basis.shape[0] != a.shape[0]:
        raise BasisNotOrthonormal(f"basis of shape {basis.shape} does not live in dimension {a.shape[0]}")
    if not 1 <= basis.shape[1] <= a.shape[0]:
        raise BasisNotOrthonormal(f"basis spans {basis.shape[1]} columns, need 1..{a.shape[0]}")
    check_orthonormal(basis)
    return SymMatrix(basis.T @ a @ basis)


def orthogonal_complement(u) -> np.ndarray:
    """Orthonormal n x (n-1) basis of the hyperplane orthogonal to the unit vector u.

    Householder reflection exchanging e_n with +-u; its first n-1 columns span u-perp.
    """
    u = np.asarray(u, dtype=float)
    n = u.shape[0]
    norm = float(np.linalg.norm(u))
    if abs(norm - 1.0) > UNIT_TOLERANCE:
        raise NotUnitVector(f"vector norm is {norm!r}, expected 1")
    w = u.copy()
    w[-1] += 1.0 if u[-1] >= 0 else -1.0
    reflection = np.eye(n) - 2.0 * np.outer(w, w) / (w @ w)
    return reflection[:, : n - 1]
