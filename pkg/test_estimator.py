import math

import numpy as np
import pytest

from mixdisc.core.estimator import (
    bapat_lower,
    bregman_minc_01,
    bregman_minc_upper,
    conditioned_upper,
    estimate,
    estimate_permanent,
    permanent_sandwich,
    spread_bound,
)
from mixdisc.core.exact import mixed_discriminant, permanent_ryser
from mixdisc.core.scaling import scale_to_doubly_stochastic
from mixdisc.core.tuples import MatrixTuple, alpha_of, from_matrix_rows, random_tuple
from mixdisc.exceptions import HypothesisViolated, NotPositiveDefinite
from mixdisc.schemas import DiscriminantEstimate


def identity_over_n(n):
    return MatrixTuple.from_arrays([np.eye(n) / n] * n)


def test_bapat_lower_examples():
    assert bapat_lower(1) == 0.0
    assert bapat_lower(2) == pytest.approx(math.log(0.5), abs=1e-15)
    assert bapat_lower(3) == pytest.approx(math.log(2 / 9), abs=1e-15)
    with pytest.raises(ValueError):
        bapat_lower(0)


def test_conditioned_upper_examples():
    assert conditioned_upper(1, 5.0) == 0.0
    assert conditioned_upper(3, 1.0) == pytest.approx(math.log(3) - 2, abs=1e-15)
    assert conditioned_upper(10, 2.0) == 0.0
    with pytest.raises(ValueError):
        conditioned_upper(3, 0.5)


def test_spread_bound():
    assert spread_bound(4, 1.0) == 0.0
    assert spread_bound(4, math.e) == pytest.approx(4.0)


def test_estimate_equality_case():
    bounds = estimate(identity_over_n(3))
    assert bounds.log_correction == pytest.approx(0.0, abs=1e-12)
    assert bounds.log_lower == pytest.approx(math.log(2 / 9), abs=1e-12)
    assert bounds.log_upper == pytest.approx(math.log(3) - 2, abs=1e-12)
    exact = mixed_discriminant(identity_over_n(3))
    assert exact.log_abs == pytest.approx(bounds.log_lower, abs=1e-12)


def test_estimate_doubly_stochastic_input_has_no_correction():
    result = scale_to_doubly_stochastic(random_tuple(5, 2.0, seed=17))
    assert abs(estimate(result.scaled).log_correction) <= 1e-9


def test_estimate_diagonal_embedding_contains_permanent():
    a = np.array([[2.0, 1.0], [1.0, 2.0]])
    bounds = estimate(from_matrix_rows(a))
    assert bounds.log_lower - 1e-8 <= math.log(permanent_ryser(a)) <= bounds.log_upper + 1e-8


def test_estimate_random_tuple_contains_exact_value():
    t = random_tuple(7, 2.0, seed=77)
    bounds = estimate(t)
    exact = mixed_discriminant(t).log_abs
    assert bounds.log_lower - 1e-8 <= exact <= bounds.log_upper + 1e-8


@pytest.mark.parametrize("seed", range(100))
def test_estimate_sandwich_and_width(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 10))
    t = random_tuple(n, float(rng.uniform(1.0, 2.0)), seed=0, rng=rng)
    bounds = estimate(t)
    exact = mixed_discriminant(t).log_abs
    assert bounds.log_lower - 1e-8 <= exact <= bounds.log_upper + 1e-8
    width = bounds.log_upper - bounds.log_lower
    alpha = bounds.alpha_input
    assert width <= alpha ** 4 * math.log(n) - (n - 1) - bapat_lower(n) + 1e-9
    assert width == pytest.approx(conditioned_upper(n, min(alpha, bounds.alpha_scaled)) - bapat_lower(n), abs=1e-12)


@pytest.mark.parametrize("seed", range(200))
def test_scaled_tuples_respect_both_bounds(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 10))
    scaled = scale_to_doubly_stochastic(random_tuple(n, float(rng.uniform(1.0, 1.3)), seed=0, rng=rng)).scaled
    alpha = alpha_of(scaled).alpha
    exact = mixed_discriminant(scaled).value
    assert exact >= math.factorial(n) / n ** n * (1 - 1e-8)
    if alpha <= 3.0:
        assert math.log(exact) <= conditioned_upper(n, alpha) + 1e-8


def test_estimate_rejects_singular_tuple():
    with pytest.raises(NotPositiveDefinite):
        estimate(MatrixTuple.from_arrays([np.eye(2), np.diag([1.0, 0.0])]))


def test_estimate_schema_enforces_order():
    with pytest.raises(ValueError):
        DiscriminantEstimate(n=2, log_lower=1.0, log_upper=0.0, log_correction=0.0, alpha_input=1.0, alpha_scaled=1.0)


def test_bregman_minc_examples():
    assert bregman_minc_upper(np.eye(4)[[2, 0, 3, 1]], [1] * 4) == pytest.approx(0.0, abs=1e-15)
    assert bregman_minc_upper(np.full((3, 3), 1 / 3), [3] * 3) == pytest.approx(math.log(2 / 9), abs=1e-12)


def test_bregman_minc_01_recovers_zero_one_bound():
    a = np.array([[1, 1, 0], [1, 1, 1], [0, 1, 1]], dtype=float)
    rows = a.sum(axis=1)
    b = a / rows[:, None]
    # multiplying the rows back by r_i turns the stochastic bound into the 0-1 bound
    assert bregman_minc_upper(b, rows) + float(np.sum(np.log(rows))) == pytest.approx(bregman_minc_01(a), abs=1e-12)
    assert math.log(permanent_ryser(a)) <= bregman_minc_01(a) + 1e-12
    assert bregman_minc_01(np.ones((3, 3))) == pytest.approx(math.log(6), abs=1e-12)
    assert bregman_minc_01(np.zeros((2, 2))) == -math.inf
    with pytest.raises(HypothesisViolated):
        bregman_minc_01([[0.5, 1.0], [1.0, 1.0]])


def test_bregman_minc_rejects_entries_above_one_over_r():
    with pytest.raises(HypothesisViolated) as info:
        bregman_minc_upper([[0.5, 0.5], [0.9, 0.1]], [2, 2])
    assert info.value.row == 1
    with pytest.raises(HypothesisViolated):
        bregman_minc_upper([[0.5, 0.6], [0.5, 0.5]], [2, 2])


def _bounded_stochastic(n, r, rng):
    rows = []
    for ri in r:
        support = np.zeros(n)
        support[rng.choice(n, size=ri, replace=False)] = 1.0 / ri
        mix = rng.uniform(0.0, 1.0)
        rows.append((1 - mix) * np.full(n, 1.0 / n) + mix * support)
    return np.array(rows)


@pytest.mark.parametrize("seed", range(100))
def test_bregman_minc_bounds_ryser_permanent(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, 10))
    r = rng.integers(2, 5, size=n).tolist()
    b = _bounded_stochastic(n, r, rng)
    assert permanent_ryser(b) <= math.exp(bregman_minc_upper(b, r)) * (1 + 1e-10)


def test_permanent_sandwich_examples():
    lower, upper = permanent_sandwich(np.full((4, 4), 0.25), 1.0)
    assert lower == pytest.approx(upper, abs=1e-12)
    assert lower == pytest.approx(bapat_lower(4), abs=1e-15)

    lower, upper = permanent_sandwich([[2 / 3, 1 / 3], [1 / 3, 2 / 3]], 4 / 3)
    assert lower <= math.log(5 / 9) <= upper


def test_permanent_sandwich_on_latin_mixture():
    rng = np.random.default_rng(88)
    n = 8
    sigma = rng.permutation(n)
    b = np.zeros((n, n))
    for shift in range(4):
        for i in range(n):
            b[i, sigma[(i + shift) % n]] += 0.25
    b = 0.5 * b + 0.5 * np.full((n, n), 1.0 / n)
    lower, upper = permanent_sandwich(b, 2.0)
    assert lower - 1e-10 <= math.log(permanent_ryser(b)) <= upper + 1e-10


def test_permanent_sandwich_rejects_entries_above_alpha_over_n():
    with pytest.raises(HypothesisViolated):
        permanent_sandwich(np.eye(3), 1.0)


@pytest.mark.parametrize("seed", range(10))
def test_estimate_permanent_contains_ryser_value(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 9))
    a = rng.uniform(0.1, 2.0, size=(n, n))
    lower, upper = estimate_permanent(a)
    assert lower - 1e-8 <= math.log(permanent_ryser(a)) <= upper + 1e-8
