import numpy as np
from scipy import stats

from mebart.ensemble import NodeAssignment, Tree
from .hyperparams import HyperParams


def leaf_posterior(counts, sums, sigma2: float, sigma_mu2: float) -> tuple[np.ndarray, np.ndarray]:
    """
    Mean and variance of the normal full conditional of leaf values.
    Empty leaves get the prior N(0, sigma_mu2).
    """
    precision = 1.0 / sigma_mu2 + np.asarray(counts) / sigma2
    variance = 1.0 / precision
    return np.asarray(sums) / sigma2 * variance, variance


def sample_leaf_values(tree: Tree, assignment: NodeAssignment, residuals: np.ndarray, sigma2: float,
                       hp: HyperParams, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """
    Draw every leaf value of `tree` from its conjugate normal full conditional.
    :return: (leaf ids, drawn values)
    """
    leaves = tree.leaves()
    counts, sums = assignment.leaf_statistics(leaves, residuals, tree.capacity)
    mean, variance = leaf_posterior(counts, sums, sigma2, hp.sigma_mu2)
    return leaves, mean + np.sqrt(variance) * rng.standard_normal(leaves.size)


def sample_sigma2(residuals: np.ndarray, hp: HyperParams, rng: np.random.Generator) -> float:
    """
    Draw the error variance from its inverse-gamma full conditional,
    shape (nu + n) / 2 and scale (nu lam + sum r^2) / 2.
    """
    shape = 0.5 * (hp.nu + residuals.size)
    scale = 0.5 * (hp.nu * hp.lam + float(np.dot(residuals, residuals)))
    return scale / rng.gamma(shape)


def log_latent_x_prior(x: np.ndarray, hp: HyperParams):
    """
    Log density of the diagonal normal prior on latent predictors.
    Accepts a single vector or an (n, p) matrix, in which case one value per row is returned.
    """
    return np.sum(stats.norm.logpdf(x, loc=hp.mu_x_array, scale=np.sqrt(hp.sigma2_x_array)), axis=-1)
