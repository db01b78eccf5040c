import numpy as np
from scipy.special import log_ndtr, ndtri_exp


def sample_probit_latents(f: np.ndarray, y: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """
    Draw z_i ~ N(f_i, 1) truncated to z_i > 0 when y_i = 1 and z_i <= 0 when y_i = 0.
    Inverse-CDF sampling carried out in log space, so means far on the wrong side of zero do not
    underflow.
    :param f: current ensemble fit on the probit scale
    :param y: binary labels
    :param rng: random generator
    :return: latent z
    """
    log_u = np.log1p(-rng.uniform(size=f.size))
    above = -ndtri_exp(log_u + log_ndtr(f))
    below = ndtri_exp(log_u + log_ndtr(-f))
    return f + np.where(y == 1, above, below)


def check_probit_signs(z: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Indices where the sign of z disagrees with the label."""
    return np.flatnonzero((z > 0) != (y == 1))
