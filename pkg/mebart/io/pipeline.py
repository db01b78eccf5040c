from __future__ import annotations
from dataclasses import asdict
import logging

import numpy as np

from mebart.core import PosteriorDraws, SamplerConfig, fit_chains
from mebart.data import ObservedDataset
from mebart.priors import HyperParams, YScaler, build_hyperparams
from mebart.synthetic import ScenarioSpec, TrueFunction
from mebart.util import DataError, Method, Outcome
from .config_store import ExperimentConfig

logger = logging.getLogger(__name__)


def resolve_outcome(config: ExperimentConfig, data: ObservedDataset) -> Outcome:
    """
    The configured outcome type, or the one detected from the response values.
    """
    return config.outcome or data.outcome


def apply_sigma_e(config: ExperimentConfig, data: ObservedDataset) -> ObservedDataset:
    """
    Configured measurement-error scales take precedence over the file header.
    """
    if config.sigma_e is None:
        return data
    if np.size(config.sigma_e) not in (1, data.p):
        raise DataError(f"{np.size(config.sigma_e)} sigma_e values configured for {data.p} predictors.")
    return data.with_sigma_e(config.sigma_e)


def prepare_fit(config: ExperimentConfig, data: ObservedDataset, method: Method, outcome: Outcome, seed: int,
                progress: bool = False) -> tuple[HyperParams, SamplerConfig]:
    """
    Calibrate the priors for one dataset and build the sampler settings.
    Plain BART treats the predictors as exact, so its latent-predictor prior is never used and its
    cutpoint grid is not widened.
    """
    data.require_fit_ready(method, outcome)
    y_model = data.y if outcome is Outcome.PROBIT else YScaler.fit(data.y).forward(data.y)
    sigma_e = data.sigma_e if method is Method.MEBART else None
    prior = config.prior
    hp = build_hyperparams(data.x_star, y_model, sigma_e, outcome, prior.sigma_hat, prior.proposal_multiplier,
                           prior.overrides())
    return hp, config.sampler.to_sampler_config(method, outcome, seed, progress)


def fit_dataset(config: ExperimentConfig, data: ObservedDataset, method: Method, x_test: np.ndarray | None = None,
                seed: int | None = None, workers: int = 1, progress: bool = False) -> PosteriorDraws:
    """
    Fit one method to one dataset with the experiment's priors and sampler settings.
    :param seed: root seed of the chains, the experiment seed when omitted
    :param workers: processes used for the chains
    """
    outcome = resolve_outcome(config, data)
    hp, cfg = prepare_fit(config, data, method, outcome, config.seed if seed is None else seed, progress)
    logger.info("Fitting %s (%s) on n=%d, p=%d with m=%d trees, %d chain(s) of %d iterations",
                method.value, outcome.value, data.n, data.p, hp.m, cfg.n_chains, cfg.n_iterations)
    return fit_chains(data, hp, cfg, x_test, workers)


def fit_record(config: ExperimentConfig, method: Method, data: ObservedDataset | None = None) -> dict:
    """
    Configuration stored next to saved draws, from which its hash is taken. The predictor names
    let later predictions select the same columns.
    """
    return {
        'experiment': config.to_json(),
        'method': method.value,
        'data': None if data is None else data.meta.get('source'),
        'columns': None if data is None else list(data.columns),
    }


def scenario_to_meta(spec: ScenarioSpec) -> dict:
    return {**asdict(spec), 'function': spec.function.value}


def scenario_from_meta(meta: dict) -> ScenarioSpec:
    """
    Rebuild the generating scenario recorded in a simulated file.
    :raises DataError: when the file does not describe one
    """
    scenario = meta.get('scenario')
    if not isinstance(scenario, dict):
        raise DataError(f"{meta.get('source', 'dataset')} does not record its generating scenario; "
                        "metrics need files written by 'simulate'.")
    try:
        return ScenarioSpec(**{**scenario, 'function': TrueFunction(scenario['function'])})
    except (KeyError, TypeError, ValueError) as e:
        raise DataError(f"Invalid scenario description: {e}") from None
