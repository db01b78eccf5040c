import logging

import numpy as np
from scipy import stats

from mebart.util import DataError, Outcome, SigmaHat
from .hyperparams import HyperParams

logger = logging.getLogger(__name__)

PROBIT_LEAF_RANGE = 3.0


def estimate_sigma2_hat(y: np.ndarray, x: np.ndarray | None = None, method: SigmaHat = SigmaHat.VARIANCE) -> float:
    """
    Rough estimate of the error variance the sigma prior is calibrated against.
    :param y: response, already rescaled
    :param x: predictors, only needed for the least-squares option
    :param method: sample variance of y, or residual variance of a least-squares fit
    """
    y = np.asarray(y, dtype=float)
    if y.size < 2:
        raise DataError("At least two responses are needed to estimate the error variance.")
    if method is SigmaHat.OLS:
        if x is None:
            raise ValueError("The least-squares estimate needs the predictors.")
        design = np.column_stack([np.ones(y.size), x])
        coef, *_ = np.linalg.lstsq(design, y, rcond=None)
        resid = y - design @ coef
        dof = max(y.size - design.shape[1], 1)
        sigma2_hat = float(np.dot(resid, resid) / dof)
    else:
        sigma2_hat = float(np.var(y, ddof=1))
    if not sigma2_hat > 0:
        raise DataError("Response has zero variance; nothing to model.")
    return sigma2_hat


def lambda_from_sigma2(sigma2_hat: float, nu: float, q: float) -> float:
    """
    Scale of the nu lam / chi2_nu prior that puts probability q below sigma2_hat.
    """
    return sigma2_hat * stats.chi2.ppf(1.0 - q, nu) / nu


def calibrate_lambda(y: np.ndarray, nu: float, q: float, x: np.ndarray | None = None,
                     method: SigmaHat = SigmaHat.VARIANCE) -> float:
    """
    Calibrate lam so that P(sigma2 < sigma2_hat) = q under the prior.
    """
    return lambda_from_sigma2(estimate_sigma2_hat(y, x, method), nu, q)


def latent_prior_moments(x_star: np.ndarray, sigma_e: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Empirical-Bayes mean and variance of the latent predictor prior.
    Uses var(X*) = var(X) + sigma_e^2, floored at 1% of var(X*) when the error dominates.
    """
    mu_x = x_star.mean(axis=0)
    var_star = x_star.var(axis=0, ddof=1)
    sigma2_x = np.maximum(var_star - sigma_e ** 2, 0.01 * var_star)
    # a constant column still needs a proper prior
    sigma2_x = np.where(sigma2_x > 0, sigma2_x, 1.0)
    return mu_x, sigma2_x


def build_hyperparams(x_star: np.ndarray, y_model: np.ndarray, sigma_e: np.ndarray | None,
                      outcome: Outcome = Outcome.CONTINUOUS, sigma_hat: SigmaHat = SigmaHat.VARIANCE,
                      proposal_multiplier: float = 1.0, overrides: dict | None = None) -> HyperParams:
    """
    Derive the data-dependent prior constants and apply explicit overrides on top.
    :param x_star: observed predictors (n, p)
    :param y_model: response on the model scale (rescaled, or binary labels for probit)
    :param sigma_e: known measurement-error standard deviations, None when predictors are exact
    :param outcome: continuous or probit
    :param sigma_hat: source of the variance estimate used for lam calibration
    :param proposal_multiplier: random-walk sd as a multiple of sigma_e
    :param overrides: HyperParams fields set explicitly (e.g. from a config file)
    """
    overrides = dict(overrides or {})
    p = x_star.shape[1]
    sigma_e = np.zeros(p) if sigma_e is None else np.broadcast_to(np.asarray(sigma_e, dtype=float), (p,))
    mu_x, sigma2_x = latent_prior_moments(x_star, sigma_e)

    fields = dict(
        mu_x=tuple(mu_x.tolist()),
        sigma2_x=tuple(sigma2_x.tolist()),
        sigma2_e=tuple((sigma_e ** 2).tolist()),
        proposal_scale=tuple((proposal_multiplier * sigma_e).tolist()),
    )
    if outcome is Outcome.PROBIT:
        fields.update(leaf_range=PROBIT_LEAF_RANGE)
    else:
        nu = overrides.get('nu', HyperParams.nu)
        q = overrides.get('q', HyperParams.q)
        sigma2_hat = overrides.get('sigma2_hat') or estimate_sigma2_hat(y_model, x_star, sigma_hat)
        fields.update(sigma2_hat=sigma2_hat, lam=lambda_from_sigma2(sigma2_hat, nu, q))
    fields.update(overrides)

    hp = HyperParams(**fields)
    logger.debug("Hyperparameters: m=%d sigma_mu=%.5f lam=%.5g sigma2_hat=%.5g", hp.m, hp.sigma_mu, hp.lam, hp.sigma2_hat)
    return hp
