from __future__ import annotations
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from mebart.ensemble import NodeAssignment, Tree, evaluate_ensemble
from mebart.priors import HyperParams, log_latent_x_prior


@dataclass
class LatentState:
    """
    Current latent true predictors and per-observation Metropolis tallies.
    """
    x: np.ndarray
    accepted: np.ndarray = field(default=None)
    proposed: np.ndarray = field(default=None)

    def __post_init__(self):
        n = self.x.shape[0]
        if self.accepted is None:
            self.accepted = np.zeros(n, dtype=np.int64)
        if self.proposed is None:
            self.proposed = np.zeros(n, dtype=np.int64)

    @classmethod
    def from_observed(cls, x_star: np.ndarray) -> LatentState:
        return cls(np.array(x_star, dtype=float, copy=True))

    @property
    def acceptance_rate(self) -> np.ndarray:
        return np.divide(self.accepted, self.proposed, out=np.zeros(self.accepted.size), where=self.proposed > 0)


def _log_measurement(x: np.ndarray, x_star: np.ndarray, hp: HyperParams) -> np.ndarray:
    noisy = hp.noisy_columns
    if not noisy.any():
        return np.zeros(x.shape[:-1])
    sd = np.sqrt(hp.sigma2_e_array[noisy])
    return np.sum(stats.norm.logpdf(x_star[..., noisy], loc=x[..., noisy], scale=sd), axis=-1)


def log_full_conditional_x(x: np.ndarray, y_i: float, x_star_i: np.ndarray, trees: Sequence[Tree],
                           sigma2: float, hp: HyperParams) -> float:
    """
    Unnormalised log full conditional of one observation's latent predictors:
    N(y_i; f(x), sigma2) N_p(x*_i; x, Sigma_e) N_p(x; mu_x, Sigma_x).
    Columns observed without error contribute no measurement term.
    """
    f = evaluate_ensemble(trees, x)
    return float(stats.norm.logpdf(y_i, loc=f, scale=np.sqrt(sigma2))
                 + _log_measurement(x, x_star_i, hp)
                 + log_latent_x_prior(x, hp))


def _log_target(x: np.ndarray, f: np.ndarray, response: np.ndarray, x_star: np.ndarray, sigma2: float,
                hp: HyperParams) -> np.ndarray:
    return (stats.norm.logpdf(response, loc=f, scale=np.sqrt(sigma2))
            + _log_measurement(x, x_star, hp)
            + log_latent_x_prior(x, hp))


def update_latent_x(state: LatentState, x_star: np.ndarray, response: np.ndarray, trees: Sequence[Tree],
                    sigma2: float, hp: HyperParams, rng: np.random.Generator,
                    fit: np.ndarray | None = None,
                    assignments: Sequence[NodeAssignment] | None = None) -> LatentState:
    """
    One random-walk Metropolis sweep over all observations.
    Each x_i gets an independent Gaussian proposal with per-column sd `hp.proposal_scale` on the
    columns with sigma_e > 0; the other columns never move. The proposal is symmetric so only the
    target ratio enters the acceptance test. Observations are conditionally independent given the
    ensemble, so the sweep is evaluated for all rows at once; the random numbers are drawn in
    observation order from the chain's generator.
    :param state: current latent state, updated in place
    :param x_star: observed predictors (n, p), never modified
    :param response: y on the model scale, or the probit latents z
    :param trees: current ensemble
    :param sigma2: current error variance (1 for probit)
    :param hp: hyperparameters
    :param rng: random generator
    :param fit: current ensemble fit at state.x, recomputed when omitted
    :param assignments: per-tree leaf memberships refreshed for accepted rows
    :return: the updated state
    """
    if not hp.noisy_columns.any():
        return state

    n, p = state.x.shape
    # columns observed without error never move, whatever their proposal scale
    step = np.where(hp.noisy_columns, hp.proposal_scale_array, 0.0)
    proposal = state.x + rng.standard_normal((n, p)) * step
    log_u = np.log(rng.uniform(size=n))

    leaves = np.stack([tree.route(proposal) for tree in trees])
    f_proposal = np.zeros(n)
    for tree, tree_leaves in zip(trees, leaves):
        f_proposal += tree.values[tree_leaves]
    if fit is None:
        fit = np.zeros(n)
        for tree in trees:
            fit += tree.predict(state.x)

    log_ratio = (_log_target(proposal, f_proposal, response, x_star, sigma2, hp)
                 - _log_target(state.x, fit, response, x_star, sigma2, hp))
    accept = log_u < log_ratio

    rows = np.flatnonzero(accept)
    state.x[rows] = proposal[rows]
    state.accepted += accept
    state.proposed += 1
    if assignments is not None:
        for assignment, tree_leaves in zip(assignments, leaves):
            assignment.refresh(rows, tree_leaves[rows])
    return state
