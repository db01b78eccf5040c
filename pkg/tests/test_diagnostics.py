import numpy as np
import pytest

from mebart import (Method, Outcome, PosteriorDraws, diagnostics, effective_sample_size, potential_scale_reduction,
                    split_drift)
from mebart.core.diagnostics import split_chains


def _draws(sigma: np.ndarray, chain: np.ndarray, accepted=None, proposed=None) -> PosteriorDraws:
    k = sigma.size
    return PosteriorDraws(Method.MEBART, Outcome.CONTINUOUS, chain, np.zeros((k, 3)), np.zeros((k, 0)), sigma=sigma,
                          accepted=accepted, proposed=proposed)


def test_split_chains_drops_middle_draw():
    halves = split_chains(np.arange(7.0)[None, :])
    assert halves.tolist() == [[0.0, 1.0, 2.0], [4.0, 5.0, 6.0]]


def test_identical_chains_give_unit_psr():
    trending = np.arange(20.0)
    assert potential_scale_reduction(np.stack([trending, trending])) == 1.0
    assert potential_scale_reduction(np.stack([trending] * 3)) == 1.0


def test_drift_flags_trending_chains(rng):
    trending = np.arange(20.0)
    assert split_drift(np.stack([trending, trending])) > 2.0
    assert split_drift(rng.normal(size=(2, 1000))) == pytest.approx(1.0, abs=0.01)


def test_single_chain_psr_is_its_drift():
    trending = np.arange(20.0)[None, :]
    assert potential_scale_reduction(trending) == split_drift(trending)


def test_separated_chains_give_large_psr(rng):
    chains = np.stack([rng.normal(0, 1, 500), rng.normal(5, 1, 500)])
    assert potential_scale_reduction(chains) > 2.0


def test_mixed_chains_give_psr_near_one(rng):
    assert potential_scale_reduction(rng.normal(size=(4, 1000))) == pytest.approx(1.0, abs=0.01)


def test_white_noise_ess_near_draw_count(rng):
    chains = rng.normal(size=(2, 2000))
    assert effective_sample_size(chains) == pytest.approx(4000, rel=0.2)


def test_autocorrelated_draws_have_lower_ess(rng):
    n = 4000
    x = np.zeros(n)
    noise = rng.normal(size=n)
    for t in range(1, n):
        x[t] = 0.9 * x[t - 1] + noise[t]
    # AR(1) with phi=0.9: ESS / n = (1 - phi) / (1 + phi)
    assert effective_sample_size(x[None, :]) == pytest.approx(n * 0.1 / 1.9, rel=0.35)


def test_report_summarizes_sigma_and_acceptance(rng):
    sigma = np.abs(rng.normal(1.0, 0.1, 40))
    chain = np.repeat([0, 1], 20)
    report = diagnostics(_draws(sigma, chain, accepted=np.array([5, 10, 15]), proposed=np.array([20, 20, 20])))
    assert report.n_chains == 2
    assert report.n_draws == 40
    assert report.chain_means == pytest.approx((sigma[:20].mean(), sigma[20:].mean()))
    assert report.acceptance_mean == pytest.approx(0.5)
    assert report.acceptance_min == pytest.approx(0.25)
    assert report.acceptance_max == pytest.approx(0.75)
    assert set(report.as_dict()) >= {'rhat', 'split_drift', 'ess', 'chain_means'}


def test_report_needs_ten_draws_per_chain():
    with pytest.raises(ValueError):
        diagnostics(_draws(np.ones(9), np.zeros(9, dtype=np.int64)))
