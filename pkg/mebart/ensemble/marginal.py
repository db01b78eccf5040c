import numpy as np

from .assignment import NodeAssignment
from .tree import Tree


def leaf_log_evidence(count, total, sigma2: float, sigma_mu2: float):
    """
    Leaf-dependent part of the integrated likelihood of one leaf, with the leaf value
    integrated out against its N(0, sigma_mu2) prior.
    Terms that only depend on the residuals are left out; they cancel in any ratio of two trees
    fitted to the same residuals.
    :param count: number of observations in the leaf (scalar or array)
    :param total: residual sum in the leaf (scalar or array)
    """
    denominator = sigma2 + count * sigma_mu2
    return 0.5 * np.log(sigma2 / denominator) + sigma_mu2 * total ** 2 / (2.0 * sigma2 * denominator)


def log_marginal_likelihood(tree: Tree, assignment: NodeAssignment, residuals: np.ndarray,
                            sigma2: float, sigma_mu2: float) -> float:
    """
    Log of the likelihood of the residuals under `tree` with every leaf value integrated out.
    Includes the residual-only normal terms, so the value is the full evidence and can be compared
    with direct numerical integration.
    :param tree: tree whose leaf values are ignored
    :param assignment: leaf membership of the residuals
    :param residuals: partial residuals the tree is fitted to
    :param sigma2: error variance
    :param sigma_mu2: leaf prior variance
    """
    if sigma2 <= 0 or sigma_mu2 <= 0:
        raise ValueError("sigma2 and sigma_mu2 must be positive.")
    leaves = tree.leaves()
    counts, sums = assignment.leaf_statistics(leaves, residuals, tree.capacity)
    n = residuals.size
    base = -0.5 * n * np.log(2.0 * np.pi * sigma2) - np.dot(residuals, residuals) / (2.0 * sigma2)
    return float(base + np.sum(leaf_log_evidence(counts, sums, sigma2, sigma_mu2)))
