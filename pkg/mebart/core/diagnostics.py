from __future__ import annotations
from dataclasses import dataclass

import numpy as np

from .draws import PosteriorDraws

MIN_DRAWS = 10


@dataclass(frozen=True)
class DiagnosticsReport:
    """
    Convergence summary of a run. Sigma fields are None for probit outcomes, acceptance fields
    are None when no latent predictors were sampled.
    """
    n_chains: int
    n_draws: int
    chain_means: tuple[float, ...] | None
    rhat: float | None
    split_drift: float | None
    ess: float | None
    acceptance_mean: float | None
    acceptance_min: float | None
    acceptance_max: float | None

    def as_dict(self) -> dict:
        return {
            'n_chains': self.n_chains,
            'n_draws': self.n_draws,
            'chain_means': list(self.chain_means) if self.chain_means is not None else None,
            'rhat': self.rhat,
            'split_drift': self.split_drift,
            'ess': self.ess,
            'acceptance_mean': self.acceptance_mean,
            'acceptance_min': self.acceptance_min,
            'acceptance_max': self.acceptance_max,
        }


def split_chains(chains: np.ndarray) -> np.ndarray:
    """
    Cut every chain in two halves (dropping the middle draw of odd-length chains).
    :param chains: (n_chains, n_draws)
    :return: (2 n_chains, n_draws // 2)
    """
    half = chains.shape[1] // 2
    return np.concatenate([chains[:, :half], chains[:, chains.shape[1] - half:]])


def _reduction(groups: np.ndarray) -> float:
    within = groups.var(axis=1).mean()
    between = groups.mean(axis=1).var(ddof=1)
    if within == 0:
        return 1.0 if between == 0 else float('inf')
    return float(np.sqrt(1.0 + between / within))


def potential_scale_reduction(chains: np.ndarray) -> float:
    """
    Potential scale reduction across chains, sqrt(1 + B / (n W)), with W the mean within-chain
    variance (divisor n) and B / n the variance of the chain means. Equals 1 exactly when all
    chain means agree, so identical chains always give 1.
    A single chain is compared with itself through its two halves, as in :func:`split_drift`.
    """
    chains = np.atleast_2d(np.asarray(chains, dtype=float))
    if chains.shape[0] == 1:
        return split_drift(chains)
    return _reduction(chains)


def split_drift(chains: np.ndarray) -> float:
    """
    Worst within-chain drift: the scale reduction between the first and second half of each
    chain, maximized over chains. Near 1 for stationary chains, large for trending ones.
    """
    chains = np.atleast_2d(np.asarray(chains, dtype=float))
    return max(_reduction(split_chains(chain[None, :])) for chain in chains)


def _autocovariance(chains: np.ndarray) -> np.ndarray:
    n = chains.shape[1]
    centered = chains - chains.mean(axis=1, keepdims=True)
    size = 1 << int(np.ceil(np.log2(2 * n)))
    spectrum = np.fft.rfft(centered, n=size, axis=1)
    return np.fft.irfft(spectrum * np.conj(spectrum), n=size, axis=1)[:, :n] / n


def effective_sample_size(chains: np.ndarray) -> float:
    """
    Multi-chain effective sample size with Geyer's initial monotone sequence truncation.
    :param chains: (n_chains, n_draws)
    """
    chains = np.atleast_2d(np.asarray(chains, dtype=float))
    n_chains, n = chains.shape
    acov = _autocovariance(chains)
    within = (acov[:, 0] * n / (n - 1)).mean()
    between_over_n = chains.mean(axis=1).var(ddof=1) if n_chains > 1 else 0.0
    var_plus = within * (n - 1) / n + between_over_n
    if var_plus == 0:
        return float('nan')

    rho = 1.0 - (within - acov.mean(axis=0)) / var_plus
    rho[0] = 1.0
    pairs = []
    for t in range(0, n - 1, 2):
        pair = rho[t] + rho[t + 1]
        if pair <= 0:
            break
        pairs.append(min(pair, pairs[-1]) if pairs else pair)
    tau = -1.0 + 2.0 * sum(pairs) if pairs else 1.0
    # antithetic chains can push tau towards zero; cap the gain
    tau = max(tau, 1.0 / np.log10(max(n_chains * n, 10)))
    return float(n_chains * n / tau)


def diagnostics(draws: PosteriorDraws) -> DiagnosticsReport:
    """
    Per-chain sigma means, potential scale reduction, within-chain drift and effective sample size of
    sigma, and a summary of latent-x acceptance rates.
    :raises ValueError: when fewer than ten draws per chain were kept
    """
    per_chain = draws.n_draws // max(draws.n_chains, 1)
    if per_chain < MIN_DRAWS:
        raise ValueError(f"Diagnostics need at least {MIN_DRAWS} draws per chain, got {per_chain}.")

    chain_means = rhat = drift = ess = None
    if draws.sigma is not None:
        chains = np.stack([draws.sigma[draws.chain == c] for c in range(draws.n_chains)])
        chain_means = tuple(float(v) for v in chains.mean(axis=1))
        rhat = potential_scale_reduction(chains)
        drift = split_drift(chains)
        ess = effective_sample_size(chains)

    rate = draws.acceptance_rate
    return DiagnosticsReport(
        n_chains=draws.n_chains,
        n_draws=draws.n_draws,
        chain_means=chain_means,
        rhat=rhat,
        split_drift=drift,
        ess=ess,
        acceptance_mean=None if rate is None else float(rate.mean()),
        acceptance_min=None if rate is None else float(rate.min()),
        acceptance_max=None if rate is None else float(rate.max()),
    )
