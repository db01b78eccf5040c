import math

import numpy as np
import pytest

from mebart import (EvaluationLayout, Method, MetricReport, Outcome, PosteriorDraws, ScenarioSpec, TrueFunction,
                    coverage95, crps_function, crps_samples, generate, ise, mse, reliability_ratio, score_draws,
                    x_rmse)


def test_mse_examples():
    assert mse(np.array([1.0, 2.0]), np.array([1.0, 4.0])) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        mse(np.zeros(2), np.zeros(3))


def test_ise_of_known_difference():
    # (x - 0)^2 over [0, 1]
    assert ise(lambda g: g, lambda g: np.zeros_like(g), (0.0, 1.0)) == pytest.approx(1 / 3, abs=1e-12)
    assert ise(np.sin, np.sin, (-1.0, 1.0)) == 0.0
    with pytest.raises(ValueError):
        ise(np.sin, np.cos, (0.0, 1.0), n_grid=1000)


def test_ise_is_stable_under_grid_refinement():
    def f_est(g):
        return 0.9 * np.sin(3 * g) + 0.1 * g ** 2

    def f_true(g):
        return np.sin(3 * g)

    coarse = ise(f_est, f_true, (-0.9, 0.9), n_grid=1001)
    fine = ise(f_est, f_true, (-0.9, 0.9), n_grid=2001)
    assert coarse > 0
    assert abs(coarse - fine) < 1e-6


def test_crps_examples():
    assert crps_samples(np.array([0.0, 2.0]), 1.0) == pytest.approx(0.5)
    assert crps_samples(np.full(10, 3.0), 3.0) == 0.0
    assert crps_samples(np.full(10, 3.0), 1.0) == pytest.approx(2.0)


def test_crps_pairwise_term_matches_brute_force(rng):
    samples = rng.normal(size=25)
    brute = np.mean(np.abs(samples - 0.3)) - 0.5 * np.mean(np.abs(samples[:, None] - samples[None, :]))
    assert crps_samples(samples, 0.3) == pytest.approx(brute)


def test_crps_is_bounded_by_sample_mae(rng):
    for _ in range(50):
        samples = rng.normal(size=30)
        observed = rng.normal()
        value = crps_samples(samples, observed)
        assert 0.0 <= value <= np.mean(np.abs(samples - observed)) + 1e-12


def test_crps_approaches_normal_closed_form(rng):
    samples = rng.normal(size=20000)
    observed = 0.5
    closed = observed * (2 * 0.6914624612740131 - 1) + 2 * 0.3520653267642995 - 1 / math.sqrt(math.pi)
    assert crps_samples(samples, observed) == pytest.approx(closed, abs=0.01)


def test_crps_function_averages_points(rng):
    draws = rng.normal(size=(50, 4))
    truth = np.zeros(4)
    assert crps_function(draws, truth) == pytest.approx(np.mean([crps_samples(draws[:, i], 0.0) for i in range(4)]))


def test_coverage_of_calibrated_draws(rng):
    truth = np.zeros(2000)
    draws = rng.normal(size=(400, 2000))
    assert coverage95(draws, truth) == pytest.approx(0.95, abs=0.02)
    assert coverage95(draws, truth + 10.0) == 0.0
    with pytest.raises(ValueError):
        coverage95(draws[:39], truth)


def test_truth_at_the_median_is_always_covered(rng):
    draws = rng.gamma(2.0, size=(41, 300))
    assert coverage95(draws, np.median(draws, axis=0)) == 1.0


def test_x_rmse_raw_and_scaled():
    raw, scaled = x_rmse(np.array([[0.1], [0.3]]), np.array([[0.0], [0.0]]), 0.2)
    assert raw == pytest.approx(math.sqrt(0.05))
    assert scaled == pytest.approx(math.sqrt(0.05) / 0.2)
    assert math.isnan(x_rmse(np.zeros((2, 1)), np.ones((2, 1)))[1])


def test_reliability_ratio_example():
    assert reliability_ratio(0.3, 0.1) == pytest.approx(0.9)
    with pytest.raises(ValueError):
        reliability_ratio(0.0, 0.1)


def test_metric_report_rows():
    report = MetricReport(mse_noisy=0.1, crps_y=0.2)
    record = report.to_record('indicator_se0.1', 'bart', 3, seconds=1.5)
    assert record['scenario'] == 'indicator_se0.1'
    assert record['ise'] is None
    assert record['seconds'] == 1.5
    long = report.to_long_rows('indicator_se0.1', 'bart', 3)
    assert [row['metric'] for row in long] == ['mse_noisy', 'crps_y']
    with pytest.raises(ValueError):
        MetricReport(coverage95=1.2)
    with pytest.raises(ValueError):
        MetricReport(mse_noisy=-1.0)


def test_evaluation_layout_stacks_and_splits():
    spec = ScenarioSpec(n_train=20, n_test=6)
    test = generate(spec).test.to_observed()
    layout = EvaluationLayout.for_scenario(spec, test.n, n_grid=11)
    stacked = layout.stack(test)
    assert stacked.shape == (6 + 6 + 11, 1)
    assert layout.grid[0] == pytest.approx(-0.9)
    at_noisy, at_true, at_grid = layout.split(np.arange(23.0)[None, :])
    assert at_noisy.shape == (1, 6) and at_true.shape == (1, 6) and at_grid.shape == (1, 11)
    assert EvaluationLayout.for_scenario(ScenarioSpec.preset('friedman'), 6).grid is None


def test_score_draws_with_perfect_function_draws(rng):
    spec = ScenarioSpec(n_train=20, n_test=10, sigma_e=0.1, sigma_y=0.1, seed=8)
    split = generate(spec)
    train, test = split.train.to_observed(), split.test.to_observed()
    layout = EvaluationLayout.for_scenario(spec, test.n, n_grid=101)
    truth = spec.f_true(layout.stack(test))
    f_draws = np.tile(truth, (40, 1))
    latent = np.tile(train.x_true, (40, 1, 1))
    draws = PosteriorDraws(Method.MEBART, Outcome.CONTINUOUS, np.zeros(40, dtype=np.int64), np.zeros((40, 20)),
                           f_draws, sigma=np.full(40, 0.1), latent_x=latent)
    report = score_draws(draws, train, test, spec, layout, f_draws=f_draws)
    assert report.ise == pytest.approx(0.0)
    assert report.crps_y == pytest.approx(0.0)
    assert report.crps_sigma == pytest.approx(0.0)
    assert report.x_rmse == pytest.approx(0.0)
    assert report.coverage95 is None
    assert report.mse_true_x == pytest.approx(np.mean((test.f_true - test.y) ** 2))


@pytest.mark.slow
def test_naive_slope_is_attenuated_by_reliability(rng):
    spec = ScenarioSpec(function=TrueFunction.LINEAR, n_train=20000, n_test=0, sigma_y=0.1, seed=13)
    data = generate(spec).train
    x = data.x_star[:, 0]
    design = np.column_stack([np.ones_like(x), x])
    coef, residuals, *_ = np.linalg.lstsq(design, data.y, rcond=None)
    sigma2 = residuals[0] / (x.size - 2)
    standard_error = math.sqrt(sigma2 / np.sum((x - x.mean()) ** 2))
    expected = reliability_ratio(spec.sigma_x, spec.sigma_e) * spec.slope
    assert expected == pytest.approx(0.9)
    assert abs(coef[1] - expected) < 3 * standard_error
