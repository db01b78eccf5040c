import math

import numpy as np
import pytest
from scipy import integrate, stats

from mebart import LatentState, NodeAssignment, Tree, log_full_conditional_x, update_latent_x
from .conftest import make_hp


def _flat_hp(scale=0.1):
    return make_hp(m=1, sigma_e=0.1, proposal_scale=(scale,))


def test_flat_function_reduces_to_two_gaussians():
    hp = _flat_hp()
    trees = [Tree.single_leaf(0.4)]
    x_star = np.array([0.2])
    a = log_full_conditional_x(np.array([0.1]), 0.4, x_star, trees, 0.01, hp)
    b = log_full_conditional_x(np.array([-0.3]), 0.4, x_star, trees, 0.01, hp)
    expected = (stats.norm.logpdf(0.2, 0.1, 0.1) + stats.norm.logpdf(0.1, 0, 0.3)
                - stats.norm.logpdf(0.2, -0.3, 0.1) - stats.norm.logpdf(-0.3, 0, 0.3))
    assert a - b == pytest.approx(expected)


def test_flat_function_mode():
    hp = _flat_hp()
    trees = [Tree.single_leaf()]
    grid = np.linspace(0.0, 0.4, 4001)
    values = [log_full_conditional_x(np.array([g]), 0.0, np.array([0.2]), trees, 1.0, hp) for g in grid]
    assert grid[int(np.argmax(values))] == pytest.approx(0.18, abs=1e-4)


def test_conditional_within_a_leaf_matches_quadrature(stump):
    hp = make_hp(m=1, sigma_e=0.1)
    x_star = np.array([0.05])
    sigma2 = 0.25

    def density(x):
        return math.exp(log_full_conditional_x(np.array([x]), 0.8, x_star, [stump], sigma2, hp))

    total = integrate.quad(density, -3, 0, limit=200)[0] + integrate.quad(density, 0, 3, limit=200)[0]
    right = integrate.quad(density, 0, 3, limit=200)[0] / total

    # f is constant on each side of the split, so each side is a truncated product Gaussian
    precision = 1 / 0.01 + 1 / 0.09
    mean, sd = (0.05 / 0.01) / precision, math.sqrt(1 / precision)
    left_mass = stats.norm.cdf(0, mean, sd) * stats.norm.pdf(0.8, -1.0, 0.5)
    right_mass = stats.norm.sf(0, mean, sd) * stats.norm.pdf(0.8, 1.0, 0.5)
    assert right == pytest.approx(right_mass / (left_mass + right_mass), rel=1e-6)


def test_zero_proposal_scale_never_moves(rng):
    hp = make_hp(m=1, proposal_scale=(0.0,))
    x_star = rng.normal(size=(20, 1))
    state = LatentState.from_observed(x_star)
    for _ in range(20):
        update_latent_x(state, x_star, np.zeros(20), [Tree.single_leaf()], 1.0, hp, rng)
    assert np.array_equal(state.x, x_star)


def test_exact_predictors_skip_the_step_without_random_numbers():
    hp = make_hp(m=1, sigma_e=0.0)
    x_star = np.linspace(-1, 1, 10)[:, None]
    state = LatentState.from_observed(x_star)
    rng = np.random.default_rng(0)
    update_latent_x(state, x_star, np.zeros(10), [Tree.single_leaf()], 1.0, hp, rng)
    assert np.array_equal(state.x, x_star)
    assert state.proposed.sum() == 0
    assert rng.uniform() == np.random.default_rng(0).uniform()


def test_exact_column_stays_put_despite_proposal_scale(rng):
    hp = make_hp(p=2, m=1, sigma2_e=(0.09, 0.0), proposal_scale=(0.5, 0.5))
    x_star = rng.normal(scale=0.3, size=(50, 2))
    state = LatentState.from_observed(x_star)
    for _ in range(20):
        update_latent_x(state, x_star, np.zeros(50), [Tree.single_leaf()], 1.0, hp, rng)
    assert np.array_equal(state.x[:, 1], x_star[:, 1])
    assert not np.array_equal(state.x[:, 0], x_star[:, 0])


def test_observed_predictors_are_never_modified(rng):
    hp = _flat_hp()
    x_star = rng.normal(scale=0.3, size=(15, 1))
    kept = x_star.copy()
    state = LatentState.from_observed(x_star)
    update_latent_x(state, x_star, np.zeros(15), [Tree.single_leaf()], 1.0, hp, rng)
    assert np.array_equal(x_star, kept)
    assert state.proposed.tolist() == [1] * 15


def test_assignments_follow_accepted_moves(stump, rng):
    hp = make_hp(m=1, sigma_e=0.3, proposal_scale=(0.5,))
    x_star = rng.normal(scale=0.1, size=(200, 1))
    state = LatentState.from_observed(x_star)
    assignments = [NodeAssignment.from_tree(stump, state.x)]
    for _ in range(10):
        update_latent_x(state, x_star, rng.normal(size=200), [stump], 1.0, hp, rng, assignments=assignments)
        assert assignments[0].matches(stump, state.x)
    assert state.accepted.sum() > 0


@pytest.mark.slow
def test_flat_function_stationary_distribution():
    rng = np.random.default_rng(2024)
    hp = _flat_hp(scale=0.1)
    n = 400
    x_star = np.full((n, 1), 0.2)
    state = LatentState.from_observed(x_star)
    trees = [Tree.single_leaf()]
    for _ in range(200):
        update_latent_x(state, x_star, np.zeros(n), trees, 1.0, hp, rng)
    # independent chains, one sample each after burn-in
    precision = 1 / 0.01 + 1 / 0.09
    mean, sd = (0.2 / 0.01) / precision, math.sqrt(1 / precision)
    assert mean == pytest.approx(0.18)
    assert stats.kstest(state.x[:, 0], 'norm', args=(mean, sd)).pvalue > 0.01
    assert 0.2 < state.acceptance_rate.mean() < 0.95
