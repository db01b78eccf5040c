from __future__ import annotations
from dataclasses import dataclass, replace

import numpy as np

from mebart.data import ObservedDataset
from .functions import TrueFunction, eval_true_function


@dataclass(frozen=True)
class ScenarioSpec:
    """
    Recipe of a synthetic benchmark: x ~ N(mu_x, sigma_x^2 I), x* = x + N(0, sigma_e^2 I),
    y = f(x) + N(0, sigma_y^2).
    """
    function: TrueFunction = TrueFunction.INDICATOR
    n_train: int = 100
    n_test: int = 100
    mu_x: float = 0.0
    sigma_x: float = 0.3
    sigma_e: float = 0.1
    sigma_y: float = 0.1
    slope: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n_train < 1 or self.n_test < 0:
            raise ValueError(f"Invalid sample sizes n_train={self.n_train}, n_test={self.n_test}.")
        if self.sigma_x <= 0:
            raise ValueError(f"sigma_x must be positive, got {self.sigma_x}.")
        if self.sigma_e < 0 or self.sigma_y < 0:
            raise ValueError("Noise standard deviations cannot be negative.")

    @classmethod
    def preset(cls, function: TrueFunction | str, **kwargs) -> ScenarioSpec:
        """
        Default design of a benchmark function: standard normal-ish inputs centred at 0 for the 1-D
        and 2-D functions, centred at 0.5 for Friedman.
        """
        function = TrueFunction(function)
        defaults = dict(function=function)
        if function is TrueFunction.FRIEDMAN:
            defaults.update(mu_x=0.5)
        defaults.update(kwargs)
        return cls(**defaults)

    def clone(self, **kwargs) -> ScenarioSpec:
        return replace(self, **kwargs)

    @property
    def p(self) -> int:
        return self.function.p

    @property
    def name(self) -> str:
        return self.function.value

    def f_true(self, x: np.ndarray):
        return eval_true_function(self.function, x, self.slope)


@dataclass(frozen=True, eq=False)
class SyntheticDataset:
    """
    One simulated sample together with its ground truth.
    """
    spec: ScenarioSpec
    x_true: np.ndarray
    x_star: np.ndarray
    y: np.ndarray

    @property
    def n(self) -> int:
        return self.y.size

    @property
    def f_true(self) -> np.ndarray:
        return self.spec.f_true(self.x_true)

    def to_observed(self) -> ObservedDataset:
        return ObservedDataset(self.x_star, self.y, np.full(self.spec.p, self.spec.sigma_e),
                               x_true=self.x_true, f_true=self.f_true, meta={'scenario': self.spec.name})


@dataclass(frozen=True, eq=False)
class SyntheticSplit:
    train: SyntheticDataset
    test: SyntheticDataset


def generate(spec: ScenarioSpec, rng: np.random.Generator | None = None) -> SyntheticSplit:
    """
    Simulate a training and a test sample from the same design.
    :param spec: scenario recipe
    :param rng: generator, seeded from `spec.seed` when omitted
    :return: train/test split
    """
    rng = np.random.default_rng(spec.seed) if rng is None else rng
    n = spec.n_train + spec.n_test
    x_true = spec.mu_x + spec.sigma_x * rng.standard_normal((n, spec.p))
    x_star = x_true + spec.sigma_e * rng.standard_normal((n, spec.p))
    y = spec.f_true(x_true) + spec.sigma_y * rng.standard_normal(n)

    train, test = slice(0, spec.n_train), slice(spec.n_train, n)
    return SyntheticSplit(
        train=SyntheticDataset(spec, x_true[train], x_star[train], y[train]),
        test=SyntheticDataset(spec, x_true[test], x_star[test], y[test]),
    )
