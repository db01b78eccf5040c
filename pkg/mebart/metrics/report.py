from __future__ import annotations
from dataclasses import asdict, dataclass, fields
import math

import numpy as np

from mebart.core import PosteriorDraws
from mebart.data import ObservedDataset
from mebart.synthetic import ScenarioSpec
from .scores import coverage95, crps_function, crps_samples, ise, mse, x_rmse

METRIC_NAMES = ('mse_noisy', 'mse_true_x', 'ise', 'coverage95', 'x_rmse', 'x_rmse_scaled', 'crps_y', 'crps_sigma')
KEY_COLUMNS = ('scenario', 'method', 'replicate')
WIDE_COLUMNS = KEY_COLUMNS + METRIC_NAMES + ('seconds',)
LONG_COLUMNS = KEY_COLUMNS + ('metric', 'value')

ISE_HALF_WIDTH = 3.0


@dataclass(frozen=True)
class MetricReport:
    """
    Scores of one fit. Metrics that do not apply to a scenario or method are None: ISE only for
    1-D designs, coverage only for multi-dimensional ones, X RMSE only when latent predictors were
    sampled, sigma CRPS only for continuous outcomes.
    """
    mse_noisy: float | None = None
    mse_true_x: float | None = None
    ise: float | None = None
    coverage95: float | None = None
    x_rmse: float | None = None
    x_rmse_scaled: float | None = None
    crps_y: float | None = None
    crps_sigma: float | None = None

    def __post_init__(self):
        for name, value in self.values().items():
            if value is not None and value < 0:
                raise ValueError(f"Metric {name} cannot be negative, got {value}.")
        if self.coverage95 is not None and self.coverage95 > 1:
            raise ValueError(f"Coverage must lie in [0, 1], got {self.coverage95}.")

    def values(self) -> dict[str, float | None]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def to_record(self, scenario: str, method: str, replicate: int, seconds: float | None = None) -> dict:
        """One wide row: keys, every metric (empty when absent) and the fit time."""
        return {'scenario': scenario, 'method': method, 'replicate': replicate, **asdict(self), 'seconds': seconds}

    def to_long_rows(self, scenario: str, method: str, replicate: int) -> list[dict]:
        """One row per present metric."""
        return [{'scenario': scenario, 'method': method, 'replicate': replicate, 'metric': name, 'value': value}
                for name, value in self.values().items() if value is not None and not math.isnan(value)]


@dataclass(frozen=True)
class EvaluationLayout:
    """
    Order of the rows stacked into one prediction matrix: the test set at its observed inputs,
    the test set at its true inputs, then (1-D designs only) the ISE grid.
    """
    n_test: int
    grid: np.ndarray | None = None

    @classmethod
    def for_scenario(cls, spec: ScenarioSpec, n_test: int, n_grid: int = 1001) -> EvaluationLayout:
        if spec.p != 1:
            return cls(n_test)
        half = ISE_HALF_WIDTH * spec.sigma_x
        return cls(n_test, np.linspace(spec.mu_x - half, spec.mu_x + half, n_grid))

    def stack(self, test: ObservedDataset) -> np.ndarray:
        blocks = [test.x_star, test.x_true]
        if self.grid is not None:
            blocks.append(self.grid[:, None])
        return np.vstack(blocks)

    def split(self, f_draws: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray | None]:
        n = self.n_test
        grid = f_draws[:, 2 * n:] if self.grid is not None else None
        return f_draws[:, :n], f_draws[:, n:2 * n], grid


def score_draws(draws: PosteriorDraws, train: ObservedDataset, test: ObservedDataset, spec: ScenarioSpec,
                layout: EvaluationLayout, f_draws: np.ndarray | None = None) -> MetricReport:
    """
    Compute every metric that applies to one fit of a synthetic scenario.
    :param draws: posterior draws of the fit
    :param train: training data with oracle columns
    :param test: test data with oracle columns
    :param spec: the scenario that generated the data
    :param layout: row layout of `f_draws`
    :param f_draws: function draws at `layout.stack(test)`; predicted from the stored trees when omitted
    """
    if f_draws is None:
        f_draws = draws.predict(layout.stack(test))
    at_noisy, at_true, at_grid = layout.split(f_draws)

    ise_value = None
    if at_grid is not None:
        mean_on_grid = at_grid.mean(axis=0)
        grid = layout.grid
        ise_value = ise(lambda g: mean_on_grid, lambda g: spec.f_true(g[:, None]), (grid[0], grid[-1]), grid.size)

    x_raw = x_scaled = None
    if draws.latent_x is not None:
        x_raw, x_scaled = x_rmse(draws.latent_x.mean(axis=0), train.x_true, spec.sigma_e)

    return MetricReport(
        mse_noisy=mse(at_noisy.mean(axis=0), test.y),
        mse_true_x=mse(at_true.mean(axis=0), test.y),
        ise=ise_value,
        coverage95=coverage95(at_true, test.f_true) if spec.p > 1 and at_true.shape[0] >= 40 else None,
        x_rmse=x_raw,
        x_rmse_scaled=x_scaled,
        crps_y=crps_function(at_true, test.f_true),
        crps_sigma=crps_samples(draws.sigma, spec.sigma_y) if draws.sigma is not None else None,
    )
