import math

import numpy as np
import pytest
from scipy import integrate, stats

from mebart import (CutpointGrid, HyperParams, NodeAssignment, Tree, YScaler, build_hyperparams, calibrate_lambda,
                    estimate_sigma2_hat, leaf_log_evidence, leaf_posterior, log_grow_prior_ratio,
                    log_latent_x_prior, log_marginal_likelihood, log_tree_structure_prior, sample_leaf_values,
                    sample_sigma2)
from mebart.priors import lambda_from_sigma2
from mebart.util import DataError, Outcome, SigmaHat
from .conftest import make_hp


def _leaf_integral(residuals, sigma2, sigma_mu2):
    def integrand(mu):
        return np.exp(np.sum(stats.norm.logpdf(residuals, mu, math.sqrt(sigma2))) + stats.norm.logpdf(mu, 0, math.sqrt(sigma_mu2)))
    value, _ = integrate.quad(integrand, -20, 20, epsabs=0, epsrel=1e-12, limit=200)
    return value


def test_zero_residual_leaf_evidence():
    sigma2, sigma_mu2, n = 0.5, 0.2, 7
    assert leaf_log_evidence(n, 0.0, sigma2, sigma_mu2) == pytest.approx(0.5 * math.log(sigma2 / (sigma2 + n * sigma_mu2)))


@pytest.mark.parametrize('residuals', [
    np.array([0.3, -0.1, 0.8, 0.2]),
    np.array([1.5, 1.2, -0.4]),
    np.array([0.0, 0.1, -0.2, 0.4, 0.05, -0.6]),
])
def test_marginal_likelihood_matches_quadrature(residuals):
    sigma2, sigma_mu2 = 0.7, 0.3
    tree = Tree.single_leaf()
    left, right = tree.grow(tree.root, 0, 0, 0.0)
    x = np.linspace(-1, 1, residuals.size)[:, None]
    assignment = NodeAssignment.from_tree(tree, x)
    expected = sum(math.log(_leaf_integral(residuals[assignment.leaf_of == leaf], sigma2, sigma_mu2))
                   for leaf in (left, right))
    assert log_marginal_likelihood(tree, assignment, residuals, sigma2, sigma_mu2) == pytest.approx(expected, abs=1e-8)


def test_marginal_likelihood_three_leaves_with_empty_leaf():
    residuals = np.array([0.2, -0.3, 0.9])
    sigma2, sigma_mu2 = 1.1, 0.4
    tree = Tree.single_leaf()
    left, right = tree.grow(tree.root, 0, 0, 0.0)
    a, b = tree.grow(right, 0, 1, 10.0)
    x = np.array([[-1.0], [0.5], [1.0]])
    assignment = NodeAssignment.from_tree(tree, x)
    expected = sum(math.log(_leaf_integral(residuals[assignment.leaf_of == leaf], sigma2, sigma_mu2))
                   for leaf in (left, a) if np.any(assignment.leaf_of == leaf))
    assert log_marginal_likelihood(tree, assignment, residuals, sigma2, sigma_mu2) == pytest.approx(expected, abs=1e-8)


def test_marginal_likelihood_rejects_bad_variances(stump):
    assignment = NodeAssignment.root_only(2)
    with pytest.raises(ValueError):
        log_marginal_likelihood(Tree.single_leaf(), assignment, np.zeros(2), 0.0, 1.0)


def test_tree_prior_examples(stump, grid_1d):
    hp = make_hp()
    assert log_tree_structure_prior(Tree.single_leaf(), grid_1d, hp) == pytest.approx(math.log(0.05))
    expected = math.log(0.95) + 2 * math.log(1 - 0.95 * 2 ** -2) + math.log(1 / 100)
    assert log_tree_structure_prior(stump, grid_1d, hp) == pytest.approx(expected)


def test_grow_prior_ratio_is_local(stump, grid_1d):
    hp = make_hp()
    left, _ = stump.children(stump.root)
    before = log_tree_structure_prior(stump, grid_1d, hp)
    stump.grow(left, 0, 5, grid_1d.value(0, 5))
    after = log_tree_structure_prior(stump, grid_1d, hp)
    assert after - before == pytest.approx(log_grow_prior_ratio(1, 0, grid_1d, hp))


def test_leaf_posterior_example():
    mean, var = leaf_posterior(4, 2.0, 1.0, 1.0)
    assert mean == pytest.approx(0.4)
    assert var == pytest.approx(0.2)


def test_leaf_posterior_flat_prior_limit():
    mean, _ = leaf_posterior(5, 3.0, 0.5, 1e12)
    assert mean == pytest.approx(0.6)


def test_empty_leaf_draws_from_prior(rng):
    hp = make_hp(m=1, k=1.0, leaf_range=1.0)
    tree = Tree.single_leaf()
    tree.grow(tree.root, 0, 0, 100.0)
    assignment = NodeAssignment.from_tree(tree, np.zeros((5, 1)))
    draws = []
    for _ in range(4000):
        leaves, values = sample_leaf_values(tree, assignment, np.ones(5), 1.0, hp, rng)
        draws.append(values[leaves == tree.children(tree.root)[1]][0])
    assert stats.kstest(draws, 'norm', args=(0.0, hp.sigma_mu)).pvalue > 0.01


def test_occupied_leaf_draws_from_conjugate_posterior(rng):
    hp = make_hp(m=1, k=1.0, leaf_range=1.0)
    assert hp.sigma_mu2 == pytest.approx(1.0)
    tree = Tree.single_leaf()
    tree.grow(tree.root, 0, 0, 100.0)
    assignment = NodeAssignment.from_tree(tree, np.zeros((5, 1)))
    left = tree.children(tree.root)[0]
    draws = []
    for _ in range(4000):
        leaves, values = sample_leaf_values(tree, assignment, np.ones(5), 1.0, hp, rng)
        draws.append(values[leaves == left][0])
    # five residuals of 1 with unit noise and prior variances: precision 1 + 5, mean 5 / 6
    assert stats.kstest(draws, 'norm', args=(5.0 / 6.0, math.sqrt(1.0 / 6.0))).pvalue > 0.01


def test_sigma2_posterior_mean(rng):
    hp = make_hp(nu=3.0, lam=0.01)
    residuals = np.full(100, 0.1)
    draws = np.array([sample_sigma2(residuals, hp, rng) for _ in range(20000)])
    expected = (0.03 + 1.0) / (103 - 2)
    assert expected == pytest.approx(0.010198, abs=1e-6)
    assert draws.mean() == pytest.approx(expected, rel=0.02)


def test_sigma2_draws_follow_inverse_gamma(rng):
    hp = make_hp(nu=3.0, lam=0.05)
    residuals = rng.normal(scale=0.2, size=40)
    draws = [sample_sigma2(residuals, hp, rng) for _ in range(3000)]
    shape = (3.0 + 40) / 2
    scale = (3.0 * 0.05 + residuals @ residuals) / 2
    assert stats.kstest(draws, stats.invgamma(shape, scale=scale).cdf).pvalue > 0.01


def test_sigma2_prior_draw_without_data(rng):
    hp = make_hp(nu=4.0, lam=0.5)
    draws = [sample_sigma2(np.zeros(0), hp, rng) for _ in range(3000)]
    assert stats.kstest(draws, stats.invgamma(2.0, scale=1.0).cdf).pvalue > 0.01


def test_lambda_calibration_example():
    assert stats.chi2.ppf(0.10, 3) == pytest.approx(0.5844, abs=1e-4)
    assert lambda_from_sigma2(0.04, 3.0, 0.90) == pytest.approx(0.007792, abs=1e-6)
    assert lambda_from_sigma2(0.08, 3.0, 0.90) == pytest.approx(2 * lambda_from_sigma2(0.04, 3.0, 0.90))


def test_lambda_median_inversion(rng):
    y = rng.normal(size=50)
    expected = np.var(y, ddof=1) * stats.chi2.median(3) / 3
    assert calibrate_lambda(y, 3.0, 0.5) == pytest.approx(expected)


def test_ols_sigma_hat_uses_residuals(rng):
    x = rng.normal(size=(200, 1))
    y = 2.0 * x[:, 0] + rng.normal(scale=0.1, size=200)
    assert estimate_sigma2_hat(y, x, SigmaHat.OLS) == pytest.approx(0.01, rel=0.3)


def test_sigma_hat_needs_spread():
    with pytest.raises(DataError):
        estimate_sigma2_hat(np.ones(5))


def test_latent_prior_examples():
    hp = HyperParams(mu_x=(0.0,), sigma2_x=(1.0,), sigma2_e=(0.0,), proposal_scale=(0.0,))
    assert log_latent_x_prior(np.array([0.0]), hp) == pytest.approx(-0.5 * math.log(2 * math.pi))

    hp2 = HyperParams(mu_x=(0.0, 1.0), sigma2_x=(1.0, 4.0), sigma2_e=(0.0, 0.0), proposal_scale=(0.0, 0.0))
    x = np.array([0.3, -0.5])
    expected = stats.norm.logpdf(0.3, 0, 1) + stats.norm.logpdf(-0.5, 1, 2)
    assert log_latent_x_prior(x, hp2) == pytest.approx(expected)

    sigma_x = 0.3
    hp5 = HyperParams(mu_x=(0.5,) * 5, sigma2_x=(sigma_x ** 2,) * 5, sigma2_e=(0.0,) * 5, proposal_scale=(0.0,) * 5)
    expected = 5 * (-0.5 * math.log(2 * math.pi * sigma_x ** 2) - 0.5)
    assert log_latent_x_prior(np.full(5, 0.8), hp5) == pytest.approx(expected)


def test_y_scaler_round_trip(rng):
    y = rng.normal(size=100)
    scaler = YScaler.fit(y)
    scaled = scaler.forward(y)
    assert scaled.min() == pytest.approx(-0.5)
    assert scaled.max() == pytest.approx(0.5)
    assert np.allclose(scaler.inverse(scaled), y, rtol=1e-12, atol=0)


def test_leaf_prior_scale_by_outcome():
    x = np.random.default_rng(0).normal(size=(30, 1))
    y = np.linspace(-0.5, 0.5, 30)
    continuous = build_hyperparams(x, y, None, overrides={'m': 50})
    probit = build_hyperparams(x, (y > 0).astype(float), None, Outcome.PROBIT, overrides={'m': 50})
    assert continuous.sigma_mu == pytest.approx(0.5 / (2 * math.sqrt(50)))
    assert probit.sigma_mu == pytest.approx(3.0 / (2 * math.sqrt(50)))


def test_build_hyperparams_empirical_bayes_prior():
    rng = np.random.default_rng(1)
    x = rng.normal(scale=0.5, size=(500, 2))
    y = np.linspace(-0.5, 0.5, 500)
    hp = build_hyperparams(x, y, np.array([0.1, 0.0]), proposal_multiplier=2.0)
    assert hp.mu_x == pytest.approx(tuple(x.mean(axis=0)))
    assert hp.sigma2_x[0] == pytest.approx(x[:, 0].var(ddof=1) - 0.01)
    assert hp.proposal_scale == pytest.approx((0.2, 0.0))
    assert hp.noisy_columns.tolist() == [True, False]
    assert hp.lam == pytest.approx(lambda_from_sigma2(np.var(y, ddof=1), 3.0, 0.9))


def test_hyperparams_validation():
    with pytest.raises(ValueError):
        make_hp(alpha=1.5)
    with pytest.raises(ValueError):
        HyperParams(mu_x=(0.0,), sigma2_x=(1.0, 1.0), sigma2_e=(0.0,), proposal_scale=(0.0,))
