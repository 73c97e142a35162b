"""
Exact mixed discriminants and permanents

The mixed discriminant D(Q_1, ..., Q_n), the coefficient of t_1...t_n in
det(t_1 Q_1 + ... + t_n Q_n), is extracted by an n-fold finite difference of
that polynomial. The difference is taken on the centred lattice {-1/2, 1/2}^n
rather than {0, 1}^n: both give the same coefficient (every monomial of degree
at most n other than t_1...t_n is annihilated), but the centred one cancels far
less, and the symmetry eps -> -eps halves the work to 2^(n-1) determinants.
"""

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Iterator, List, Optional, Tuple

import numpy as np

from mixdisc.config import EXACT_CHUNKS
from mixdisc.core.linalg import det_lu
from mixdisc.core.tuples import MatrixTuple
from mixdisc.exceptions import DimensionTooLarge, NumericalFailure
from mixdisc.schemas import ExactValue

logger = logging.getLogger(__name__)

MIXED_DISCRIMINANT_CAP = 20
RYSER_CAP = 28
NAIVE_CAP = 10
LOG_OVERFLOW = math.log(1e280)
BATCH_SIZE = 2048


def _sign_patterns(n: int) -> Iterator[Tuple[int, ...]]:
    """Subsets of the first n-1 slots carrying a minus sign, by popcount then
    lexicographically. Slot n is always +."""
    for k in range(n):
        yield from itertools.combinations(range(n - 1), k)


def _batched(items: Iterable, size: int) -> Iterator[list]:
    iterator = iter(items)
    while True:
        batch = list(itertools.islice(iterator, size))
        if not batch:
            return
        yield batch


def _chunk_sum(flat: np.ndarray, n: int, start: int, stop: int) -> Tuple[float, bool]:
    """Exactly rounded sum of the signed determinants for patterns [start, stop)."""
    terms: List[float] = []
    overflow = False
    patterns = itertools.islice(_sign_patterns(n), start, stop)
    for batch in _batched(patterns, BATCH_SIZE):
        signs = np.ones((len(batch), n))
        for row, minus in enumerate(batch):
            signs[row, list(minus)] = -1.0
        sums = (signs @ flat).reshape(len(batch), n, n)
        det_signs, log_abs = det_lu(sums)
        if np.any(log_abs > LOG_OVERFLOW):
            overflow = True
        parity = np.array([-1.0 if len(minus) % 2 else 1.0 for minus in batch])
        terms.extend((parity * det_signs * np.exp(log_abs)).tolist())
    return math.fsum(terms), overflow


def _chunk_bounds(total: int, chunks: int) -> List[Tuple[int, int]]:
    chunks = max(1, min(chunks, total))
    edges = [total * i // chunks for i in range(chunks + 1)]
    return list(zip(edges[:-1], edges[1:]))


def _exact_value(value: float, overflow: bool = False) -> ExactValue:
    if value == 0.0 or not math.isfinite(value):
        sign = 0 if value == 0.0 else (1 if value > 0 else -1)
        log_abs = -math.inf if value == 0.0 else math.inf
        return ExactValue(value=value, log_abs=log_abs, sign=sign, overflow_warning=overflow)
    return ExactValue(
        value=value,
        log_abs=math.log(abs(value)),
        sign=1 if value > 0 else -1,
        overflow_warning=overflow,
    )


def mixed_discriminant(t: MatrixTuple, chunks: Optional[int] = None) -> ExactValue:
    """Exact D(Q_1, ..., Q_n) for n up to MIXED_DISCRIMINANT_CAP.

    D = 2^(1-n) * sum over eps in {+-1}^n with eps_n = +1 of
        (prod eps_i) * det(sum eps_i Q_i),
    which equals sum_S (-1)^(n-|S|) det(sum_{i in S} Q_i). Determinants of
    the (generally indefinite) signed sums use LU with partial pivoting.
    The patterns are cut into contiguous chunks whose sums are reduced in
    chunk order, so the result depends only on the chunk count.
    """
    n = t.n
    if n > MIXED_DISCRIMINANT_CAP:
        raise DimensionTooLarge(n, MIXED_DISCRIMINANT_CAP)
    chunks = EXACT_CHUNKS if chunks is None else max(1, chunks)
    flat = t.stack().reshape(n, n * n)
    bounds = _chunk_bounds(2 ** (n - 1), chunks)

    if len(bounds) == 1:
        partials = [_chunk_sum(flat, n, *bounds[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(bounds)) as pool:
            partials = list(pool.map(lambda b: _chunk_sum(flat, n, *b), bounds))

    overflow = any(flag for _, flag in partials)
    if overflow:
        logger.warning(f"Intermediate determinant above 1e280 while computing D for n={n}")
    value = math.ldexp(math.fsum(part for part, _ in partials), 1 - n)
    return _exact_value(value, overflow)


def log_mixed_discriminant(t: MatrixTuple) -> float:
    """ln D for tuples whose mixed discriminant is positive."""
    result = mixed_discriminant(t)
    if result.sign <= 0:
        raise NumericalFailure(f"mixed discriminant is not positive: {result.value!r}")
    return result.log_abs


def _square(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def permanent_ryser(a) -> float:
    """Ryser's inclusion-exclusion over column subsets, visited in Gray-code order.

    per A = (-1)^n sum_S (-1)^|S| prod_i sum_{j in S} a_ij
    """
    a = _square(a)
    n = a.shape[0]
    if n > RYSER_CAP:
        raise DimensionTooLarge(n, RYSER_CAP)
    if n == 0:
        return 1.0
    row_sums = np.zeros(n)
    partials: List[float] = []
    terms: List[float] = []
    size = 0
    previous = 0
    for k in range(1, 2 ** n):
        gray = k ^ (k >> 1)
        flipped = gray ^ previous
        column = flipped.bit_length() - 1
        if gray & flipped:
            row_sums += a[:, column]
            size += 1
        else:
            row_sums -= a[:, column]
            size -= 1
        previous = gray
        product = float(np.prod(row_sums))
        terms.append(-product if size % 2 else product)
        if len(terms) >= 65536:
            partials.append(math.fsum(terms))
            terms = []
    partials.append(math.fsum(terms))
    total = math.fsum(partials)
    return -total if n % 2 else total


def permanent_naive(a) -> float:
    """Direct sum over all n! permutations."""
    a = _square(a)
    n = a.shape[0]
    if n > NAIVE_CAP:
        raise DimensionTooLarge(n, NAIVE_CAP)
    rows = range(n)
    return math.fsum(
        math.prod(a[i, sigma[i]] for i in rows) for sigma in itertools.permutations(range(n))
    )
