import numpy as np
import pytest

from mebart import (CutpointGrid, ExperimentConfig, HyperParams, ObservedDataset, SamplerConfig, ScenarioSpec, Tree,
                    TrueFunction, generate)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def stump():
    """Root split on x0 at 0.0 with leaves -1 (left) and +1 (right)."""
    tree = Tree.single_leaf()
    left, right = tree.grow(tree.root, 0, 50, 0.0)
    tree.set_leaf_values(np.array([left, right]), np.array([-1.0, 1.0]))
    return tree


@pytest.fixture
def grid_1d():
    return CutpointGrid((np.linspace(-1.0, 1.0, 100),))


def make_hp(p: int = 1, m: int = 10, sigma_e: float = 0.1, **kwargs) -> HyperParams:
    fields = dict(m=m, mu_x=(0.0,) * p, sigma2_x=(0.09,) * p, sigma2_e=(sigma_e ** 2,) * p,
                  proposal_scale=(sigma_e,) * p, lam=0.01, sigma2_hat=0.04)
    fields.update(kwargs)
    return HyperParams(**fields)


@pytest.fixture
def indicator_split():
    return generate(ScenarioSpec.preset(TrueFunction.INDICATOR, n_train=60, n_test=30, seed=7))


@pytest.fixture
def indicator_data(indicator_split) -> ObservedDataset:
    return indicator_split.train.to_observed()


@pytest.fixture
def short_run() -> SamplerConfig:
    return SamplerConfig(n_burn=10, n_keep=30, seed=3)


@pytest.fixture
def small_experiment() -> ExperimentConfig:
    return ExperimentConfig(
        scenarios=[{'function': 'indicator', 'n_train': 25, 'n_test': 15}],
        prior={'m': 5},
        sampler={'n_burn': 5, 'n_keep': 20},
        replicates=2,
    )
