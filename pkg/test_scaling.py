import math

import numpy as np
import pytest

from mixdisc.core.exact import mixed_discriminant, permanent_ryser
from mixdisc.core.linalg import SymMatrix, orthogonal_complement
from mixdisc.core.scaling import (
    gradient_f,
    hessian_f,
    initial_point,
    objective_f,
    scale_to_doubly_stochastic,
    sinkhorn_scale,
    verify_lemma_2_2,
    verify_lemma_2_4,
    verify_lemma_2_5,
    verify_lemma_2_6,
)
from mixdisc.core.tuples import (
    MatrixTuple,
    check_doubly_stochastic,
    conjugate,
    from_matrix_rows,
    normalize_trace,
    random_orthogonal,
    random_spectrum,
    random_tuple,
    random_unit_vector,
)
from mixdisc.exceptions import HypothesisViolated, NoConvergence, NotPositiveDefinite
from mixdisc.schemas import SolverConfig


def identity_over_n(n):
    return MatrixTuple.from_arrays([np.eye(n) / n] * n)


def test_objective_examples():
    assert objective_f(identity_over_n(4), np.zeros(4)) == pytest.approx(0.0, abs=1e-15)
    t = random_tuple(4, 2.0, seed=1)
    assert objective_f(t, np.zeros(4)) == pytest.approx(math.log(np.linalg.det(t.total())), rel=1e-12)


def test_objective_shift_adds_n_times_c():
    t = random_tuple(5, 3.0, seed=2)
    x = np.random.default_rng(2).standard_normal(5)
    assert objective_f(t, x + 0.7) == pytest.approx(objective_f(t, x) + 5 * 0.7, rel=1e-12)


def test_objective_rejects_bad_point():
    with pytest.raises(ValueError):
        objective_f(identity_over_n(3), np.zeros(2))
    with pytest.raises(ValueError):
        objective_f(identity_over_n(3), np.array([0.0, np.nan, 0.0]))


def test_gradient_at_identity_over_n():
    np.testing.assert_allclose(gradient_f(identity_over_n(3), np.zeros(3)), np.ones(3), rtol=1e-14)


@pytest.mark.parametrize("seed", range(50))
def test_gradient_matches_central_differences(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    t = random_tuple(n, float(rng.uniform(1.0, 3.0)), seed=0, rng=rng)
    x = rng.uniform(-1.0, 1.0, size=n)
    gradient = gradient_f(t, x)
    assert np.sum(gradient) == pytest.approx(n, abs=1e-9)
    step = 1e-5
    for i in range(n):
        e = np.zeros(n)
        e[i] = step
        difference = (objective_f(t, x + e) - objective_f(t, x - e)) / (2 * step)
        assert abs(difference - gradient[i]) <= 1e-6


def test_hessian_annihilates_ones_and_matches_gradient_differences():
    rng = np.random.default_rng(4)
    t = random_tuple(5, 2.0, seed=4)
    x = rng.uniform(-0.5, 0.5, size=5)
    hessian = hessian_f(t, x)
    np.testing.assert_allclose(hessian, hessian.T, atol=1e-14)
    np.testing.assert_allclose(hessian @ np.ones(5), np.zeros(5), atol=1e-12)
    step = 1e-6
    for i in range(5):
        e = np.zeros(5)
        e[i] = step
        column = (gradient_f(t, x + e) - gradient_f(t, x - e)) / (2 * step)
        np.testing.assert_allclose(column, hessian[:, i], atol=1e-6)


def test_initial_point_is_centred():
    t = random_tuple(6, 3.0, seed=5)
    assert np.sum(initial_point(t)) == pytest.approx(0.0, abs=1e-13)


def test_scaling_doubly_stochastic_input_is_fixed_point():
    t = identity_over_n(4)
    result = scale_to_doubly_stochastic(t)
    assert result.converged
    assert result.iterations == 0
    np.testing.assert_allclose(result.xi, np.zeros(4), atol=1e-12)
    np.testing.assert_allclose(result.transform, np.eye(4), atol=1e-12)
    for scaled, original in zip(result.scaled, t):
        np.testing.assert_allclose(scaled.entries, original.entries, atol=1e-10)


def test_scaling_diagonal_embedding_matches_matrix_scaling():
    result = scale_to_doubly_stochastic(from_matrix_rows([[2.0, 1.0], [1.0, 2.0]]))
    expected = np.array([[2 / 3, 1 / 3], [1 / 3, 2 / 3]])
    for row, scaled in zip(expected, result.scaled):
        np.testing.assert_allclose(scaled.entries, np.diag(row), atol=1e-9)
    assert mixed_discriminant(result.scaled).value == pytest.approx(5 / 9, rel=1e-8)


def test_scaling_random_tuple_converges():
    result = scale_to_doubly_stochastic(random_tuple(8, 3.0, seed=8), SolverConfig(trace_tol=1e-10, max_iterations=500))
    assert result.converged
    assert result.residual <= 1e-10
    assert result.iterations <= 500
    assert check_doubly_stochastic(result.scaled, 1e-8).passes


@pytest.mark.parametrize("n", [5, 10, 20, 40])
@pytest.mark.parametrize("seed", range(25))
def test_scaling_output_contract(n, seed):
    rng = np.random.default_rng(1000 * n + seed)
    t = random_tuple(n, float(rng.uniform(1.0, 4.0)), seed=0, rng=rng)
    result = scale_to_doubly_stochastic(t, SolverConfig(trace_tol=1e-10, max_iterations=500))
    assert result.residual <= 1e-10
    assert np.max(np.abs(result.scaled.total() - np.eye(n))) <= 1e-8
    assert abs(float(np.prod(result.tau)) - 1.0) <= 1e-12
    assert result.log_det_T == pytest.approx(math.log(abs(np.linalg.det(result.transform))), abs=1e-9)
    # B_i = tau_i T^T Q_i T
    rebuilt = conjugate(t, result.transform, result.tau)
    for scaled, expected in zip(result.scaled, rebuilt):
        np.testing.assert_allclose(scaled.entries, expected.entries, atol=1e-10)


def test_objective_history_never_increases():
    result = scale_to_doubly_stochastic(random_tuple(6, 4.0, seed=6))
    history = np.array(result.history)
    assert np.all(np.diff(history) <= 1e-12 * np.maximum(1.0, np.abs(history[:-1])))


def test_scaling_reports_no_convergence_with_best_iterate():
    with pytest.raises(NoConvergence) as info:
        scale_to_doubly_stochastic(random_tuple(6, 3.0, seed=3), SolverConfig(trace_tol=1e-14, max_iterations=1))
    best = info.value.result
    assert best is not None
    assert not best.converged
    assert info.value.residual == best.residual
    assert best.diagnostics().converged is False


def test_scaling_rejects_singular_input():
    t = MatrixTuple.from_arrays([np.eye(2), np.diag([1.0, 0.0])])
    with pytest.raises(NotPositiveDefinite) as info:
        scale_to_doubly_stochastic(t)
    assert info.value.pivot_index == 1


@pytest.mark.parametrize("seed", range(50))
def test_scaling_identity_for_conjugated_tuples(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    t = random_tuple(n, 2.0, seed=0, rng=rng)
    transform = rng.standard_normal((n, n)) + n * np.eye(n)
    tau = rng.uniform(0.2, 3.0, size=n)
    lhs = mixed_discriminant(conjugate(t, transform, tau)).value
    rhs = np.linalg.det(transform) ** 2 * float(np.prod(tau)) * mixed_discriminant(t).value
    assert lhs == pytest.approx(rhs, rel=1e-8)


def test_discriminant_check_at_fixed_point():
    before, after = verify_lemma_2_2(identity_over_n(4))
    assert after.value == pytest.approx(before.value, rel=1e-10)


@pytest.mark.parametrize("seed", range(100))
def test_scaling_does_not_decrease_discriminant(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 8))
    t, _ = normalize_trace(random_tuple(n, float(rng.uniform(1.0, 3.0)), seed=0, rng=rng))
    before, after = verify_lemma_2_2(t)
    assert after.value >= before.value * (1 - 1e-8)


def test_discriminant_check_on_diagonal_embedding_compares_permanents():
    a = np.random.default_rng(12).uniform(0.1, 1.0, size=(5, 5))
    a = a * (5.0 / np.sum(a))
    before, after = verify_lemma_2_2(from_matrix_rows(a))
    assert before.value == pytest.approx(permanent_ryser(a), rel=1e-10)
    b = np.array([np.diag(m.entries) for m in scale_to_doubly_stochastic(from_matrix_rows(a)).scaled])
    assert after.value == pytest.approx(permanent_ryser(b), rel=1e-8)


def test_discriminant_check_requires_trace_normalization():
    with pytest.raises(HypothesisViolated):
        verify_lemma_2_2(MatrixTuple.from_arrays([np.eye(3)] * 3))


def test_conditioning_check_examples():
    alpha_in, alpha_out = verify_lemma_2_4(MatrixTuple.from_arrays([2.0 * np.eye(4)] * 4))
    assert alpha_in == pytest.approx(1.0)
    assert alpha_out == pytest.approx(1.0, abs=1e-9)
    assert verify_lemma_2_4(random_tuple(6, 2.0, seed=6))[1] <= 16.0
    assert verify_lemma_2_4(random_tuple(8, 3.0, seed=8))[1] <= 81.0


@pytest.mark.parametrize("seed", range(100))
def test_scaled_tuple_is_alpha_to_the_fourth_conditioned(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 11))
    alpha = float(rng.choice([1.0, 1.5, 2.0, 3.0]))
    alpha_in, alpha_out = verify_lemma_2_4(random_tuple(n, alpha, seed=0, rng=rng))
    assert alpha_out <= alpha_in ** 4 * (1 + 1e-6)


def test_conditioning_check_on_hyperplane():
    t = random_tuple(5, 2.0, seed=15)
    basis = orthogonal_complement(random_unit_vector(5, np.random.default_rng(15)))
    alpha_in, alpha_out = verify_lemma_2_4(t, basis=basis)
    assert alpha_out <= alpha_in ** 4 * (1 + 1e-6)


@pytest.mark.parametrize("seed", range(100))
def test_restriction_preserves_discriminant(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 8))
    t = random_tuple(n, float(rng.uniform(1.0, 3.0)), seed=0, rng=rng)
    full, restricted = verify_lemma_2_5(t, random_unit_vector(n, rng))
    assert full.value == pytest.approx(restricted.value, rel=1e-8)


@pytest.mark.parametrize("seed", range(500))
def test_restricted_trace_bounds(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 51))
    spectrum = random_spectrum(n, float(rng.uniform(1.0, 3.0)), rng)
    spectrum = spectrum / np.sum(spectrum)
    frame = random_orthogonal(n, rng)
    q = SymMatrix((frame * spectrum) @ frame.T)
    alpha = float(np.max(spectrum) / np.min(spectrum))
    lower, trace, upper = verify_lemma_2_6(q, random_unit_vector(n, rng), alpha=alpha)
    assert lower - 1e-10 <= trace <= upper + 1e-10


def test_restricted_trace_requires_trace_one():
    with pytest.raises(HypothesisViolated):
        verify_lemma_2_6(np.eye(3), np.array([1.0, 0.0, 0.0]))


def test_restricted_trace_measures_alpha_when_omitted():
    lower, trace, upper = verify_lemma_2_6(np.eye(4) / 4, np.array([0.0, 1.0, 0.0, 0.0]))
    assert lower == pytest.approx(0.75)
    assert trace == pytest.approx(0.75)
    assert upper == pytest.approx(0.75)


def test_sinkhorn_scale_symmetric_example():
    result = sinkhorn_scale([[2.0, 1.0], [1.0, 2.0]])
    np.testing.assert_allclose(result.scaled, [[2 / 3, 1 / 3], [1 / 3, 2 / 3]], atol=1e-11)
    assert result.residual <= 1e-12


def test_sinkhorn_scale_reconstructs_scaled_matrix():
    a = np.random.default_rng(7).uniform(0.1, 2.0, size=(6, 6))
    result = sinkhorn_scale(a)
    np.testing.assert_allclose(result.scaled, result.row_scaling[:, None] * a * result.col_scaling[None, :])
    np.testing.assert_allclose(result.scaled.sum(axis=0), np.ones(6), atol=1e-12)
    np.testing.assert_allclose(result.scaled.sum(axis=1), np.ones(6), atol=1e-12)


def test_sinkhorn_scale_rejects_non_positive_entries():
    with pytest.raises(HypothesisViolated) as info:
        sinkhorn_scale([[1.0, 1.0], [0.0, 1.0]])
    assert info.value.row == 1


@pytest.mark.parametrize("seed", range(20))
def test_objective_is_convex_on_the_hyperplane(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    t = random_tuple(n, 3.0, seed=0, rng=rng)
    x, y = rng.uniform(-2.0, 2.0, size=(2, n))
    x, y = x - np.mean(x), y - np.mean(y)
    weight = float(rng.uniform(0.0, 1.0))
    mixed = objective_f(t, weight * x + (1 - weight) * y)
    assert mixed <= weight * objective_f(t, x) + (1 - weight) * objective_f(t, y) + 1e-9


def test_converged_solution_links_transform_and_objective():
    t = random_tuple(6, 2.5, seed=31)
    result = scale_to_doubly_stochastic(t)
    assert 2.0 * result.log_det_T == pytest.approx(-objective_f(t, result.xi), abs=1e-9)
    gradient = gradient_f(t, result.xi)
    np.testing.assert_allclose(result.scaled.traces(), gradient, atol=1e-9)
    assert np.max(np.abs(gradient - np.mean(gradient))) <= 2 * result.residual + 1e-12
