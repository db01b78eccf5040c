import numpy as np
import pytest

from mebart import ScenarioSpec, TrueFunction, eval_true_function, generate


def _reference(kind: TrueFunction, x: float) -> float:
    if kind is TrueFunction.INDICATOR:
        return -1.0 if x < 0 else 1.0
    if kind is TrueFunction.SIN:
        return float(np.sin(2 * np.pi * x))
    if kind is TrueFunction.COMBO:
        return float(np.cos(np.pi * x)) if x < 0 else float(-np.cos(np.pi * x))
    a = abs(x)
    if a > 5 / 8:
        return 3.0
    if a > 3 / 8:
        return 2.0
    if a > 1 / 8:
        return 1.0
    return 0.0


@pytest.mark.parametrize('kind', [TrueFunction.INDICATOR, TrueFunction.SIN, TrueFunction.COMBO, TrueFunction.STEP])
def test_one_dimensional_functions_match_reference_table(kind):
    grid = np.linspace(-1.5, 1.5, 10001)
    values = eval_true_function(kind, grid[:, None])
    np.testing.assert_allclose(values, [_reference(kind, x) for x in grid], rtol=0, atol=1e-12)


def test_function_examples():
    assert eval_true_function(TrueFunction.INDICATOR, np.array([0.0])) == 1.0
    assert eval_true_function(TrueFunction.STEP, np.array([0.125])) == 0.0
    assert eval_true_function(TrueFunction.STEP, np.array([0.7])) == 3.0
    assert eval_true_function(TrueFunction.FRIEDMAN, np.full(5, 0.5)) == pytest.approx(1.457107, abs=1e-6)
    assert eval_true_function(TrueFunction.INDICATOR2D, np.array([0.3, -0.2])) == 1.0
    assert eval_true_function(TrueFunction.INDICATOR2D, np.array([0.3, 0.2])) == 3.0
    assert eval_true_function(TrueFunction.LINEAR, np.array([0.4]), slope=2.5) == pytest.approx(1.0)


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError):
        eval_true_function(TrueFunction.FRIEDMAN, np.zeros(3))


def test_generate_shapes_and_split():
    split = generate(ScenarioSpec.preset('friedman', n_train=40, n_test=10))
    assert split.train.x_true.shape == (40, 5)
    assert split.test.x_star.shape == (10, 5)
    assert split.train.y.shape == (40,)


def test_generate_is_deterministic():
    spec = ScenarioSpec(seed=5)
    a, b = generate(spec), generate(spec)
    assert np.array_equal(a.train.x_star, b.train.x_star)
    assert np.array_equal(a.test.y, b.test.y)
    assert not np.array_equal(a.train.y, generate(spec.clone(seed=6)).train.y)


def test_noiseless_scenario():
    split = generate(ScenarioSpec(sigma_e=0.0, sigma_y=0.0, seed=1))
    assert np.array_equal(split.train.x_star, split.train.x_true)
    assert np.array_equal(split.train.y, split.train.f_true)


def test_measurement_noise_scale():
    n = 100000
    split = generate(ScenarioSpec(n_train=n, n_test=0, seed=2))
    error = split.train.x_star - split.train.x_true
    sd = error.std(ddof=1)
    assert abs(sd - 0.1) < 3 * 0.1 / np.sqrt(2 * n)


def test_friedman_design_moments():
    n = 100000
    x = generate(ScenarioSpec.preset('friedman', n_train=n, n_test=0, seed=3)).train.x_true
    assert np.all(np.abs(x.mean(axis=0) - 0.5) < 3 * 0.3 / np.sqrt(n))
    assert np.all(np.abs(x.std(axis=0, ddof=1) - 0.3) < 3 * 0.3 / np.sqrt(2 * n))


def test_errors_are_independent_of_signal():
    n = 50000
    split = generate(ScenarioSpec(n_train=n, n_test=0, seed=4))
    error = (split.train.x_star - split.train.x_true)[:, 0]
    eps = split.train.y - split.train.f_true
    assert abs(np.corrcoef(error, split.train.x_true[:, 0])[0, 1]) < 4 / np.sqrt(n)
    assert abs(np.corrcoef(error, eps)[0, 1]) < 4 / np.sqrt(n)


def test_observed_view_carries_oracle_columns():
    observed = generate(ScenarioSpec(n_train=20, n_test=5)).train.to_observed()
    assert observed.has_oracle
    assert observed.sigma_e.tolist() == [0.1]


def test_invalid_spec():
    with pytest.raises(ValueError):
        ScenarioSpec(sigma_x=0.0)
    with pytest.raises(ValueError):
        ScenarioSpec(sigma_e=-0.1)
