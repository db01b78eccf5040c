from collections.abc import Callable

import numpy as np
from scipy.integrate import simpson


def mse(pred: np.ndarray, truth: np.ndarray) -> float:
    pred, truth = np.asarray(pred, dtype=float), np.asarray(truth, dtype=float)
    if pred.shape != truth.shape or pred.size == 0:
        raise ValueError(f"Cannot compare arrays of shapes {pred.shape} and {truth.shape}.")
    return float(np.mean((pred - truth) ** 2))


def ise(f_est: Callable[[np.ndarray], np.ndarray], f_true: Callable[[np.ndarray], np.ndarray],
        domain: tuple[float, float], n_grid: int = 1001) -> float:
    """
    Integrated squared error of a 1-D function estimate by composite Simpson's rule.
    :param f_est: vectorized estimate, e.g. the posterior mean function
    :param f_true: vectorized true function
    :param domain: integration interval
    :param n_grid: odd number of grid points, at least 3
    """
    if n_grid < 3 or n_grid % 2 == 0:
        raise ValueError(f"n_grid must be an odd number of at least 3, got {n_grid}.")
    grid = np.linspace(domain[0], domain[1], n_grid)
    diff = np.asarray(f_true(grid), dtype=float) - np.asarray(f_est(grid), dtype=float)
    if not np.all(np.isfinite(diff)):
        raise ValueError("Non-finite function value on the integration grid.")
    return float(simpson(diff ** 2, x=grid))


def crps_samples(samples: np.ndarray, observed: float) -> float:
    """
    Continuous ranked probability score of a sample-based forecast,
    E|S - y| - 1/2 E|S - S'| with the pairwise term averaged over all ordered pairs.
    """
    samples = np.sort(np.asarray(samples, dtype=float).ravel())
    k = samples.size
    if k < 2:
        raise ValueError(f"CRPS needs at least two samples, got {k}.")
    spread = 2.0 * np.dot(samples, 2.0 * np.arange(1, k + 1) - k - 1) / k ** 2
    # non-negative in exact arithmetic; rounding can leave a tiny negative value for degenerate samples
    return max(float(np.mean(np.abs(samples - observed)) - 0.5 * spread), 0.0)


def crps_function(draws: np.ndarray, truth: np.ndarray) -> float:
    """
    Mean CRPS over points of function draws (k, n) against true values (n,).
    """
    return float(np.mean([crps_samples(draws[:, i], truth[i]) for i in range(draws.shape[1])]))


def coverage95(draws: np.ndarray, truth: np.ndarray) -> float:
    """
    Share of points whose true value lies in the pointwise 2.5%-97.5% interval of the draws.
    :param draws: (k, n) posterior draws of the mean function, k >= 40
    :param truth: (n,) true function values
    """
    if draws.shape[0] < 40:
        raise ValueError(f"At least 40 draws are needed for a 95% interval, got {draws.shape[0]}.")
    lower, upper = np.quantile(draws, [0.025, 0.975], axis=0)
    return float(np.mean((truth >= lower) & (truth <= upper)))


def x_rmse(x_hat: np.ndarray, x_true: np.ndarray, sigma_e: float | None = None) -> tuple[float, float]:
    """
    Root mean squared error of predictor estimates, raw and divided by sigma_e.
    The scaled value is nan when sigma_e is not positive.
    """
    x_hat, x_true = np.asarray(x_hat, dtype=float), np.asarray(x_true, dtype=float)
    if x_hat.shape != x_true.shape:
        raise ValueError(f"Cannot compare arrays of shapes {x_hat.shape} and {x_true.shape}.")
    raw = float(np.sqrt(np.mean((x_hat - x_true) ** 2)))
    scaled = raw / sigma_e if sigma_e else float('nan')
    return raw, scaled


def reliability_ratio(sigma_x: float, sigma_e: float) -> float:
    """
    Share of the observed predictor variance that is signal, sigma_x^2 / (sigma_x^2 + sigma_e^2).
    """
    if sigma_x <= 0:
        raise ValueError(f"sigma_x must be positive, got {sigma_x}.")
    return sigma_x ** 2 / (sigma_x ** 2 + sigma_e ** 2)
