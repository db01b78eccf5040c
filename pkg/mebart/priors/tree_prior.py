import math

from mebart.ensemble import CutpointGrid, Tree
from .hyperparams import HyperParams


def split_probability(depth: int, hp: HyperParams) -> float:
    """Prior probability that a node at `depth` is internal, alpha (1 + d)^-beta."""
    return hp.alpha * (1.0 + depth) ** -hp.beta


def log_split_rule_prior(grid: CutpointGrid, var: int) -> float:
    return -math.log(grid.p) - math.log(grid.n_cuts(var))


def log_tree_structure_prior(tree: Tree, grid: CutpointGrid, hp: HyperParams) -> float:
    """
    Log prior probability of a tree structure: depth-dependent split/stop probabilities for every
    node times uniform variable and cutpoint probabilities for every split.
    """
    total = 0.0
    for node in tree.internal_nodes():
        total += math.log(split_probability(tree.depth(node), hp)) + log_split_rule_prior(grid, tree.var(node))
    for node in tree.leaves():
        total += math.log(1.0 - split_probability(tree.depth(node), hp))
    return total


def log_grow_prior_ratio(depth: int, var: int, grid: CutpointGrid, hp: HyperParams) -> float:
    """
    Change in log tree prior when a leaf at `depth` is split on `var`.
    The pruned-to-grown ratio of a PRUNE move is the negative of this.
    """
    p_split = split_probability(depth, hp)
    p_child = split_probability(depth + 1, hp)
    return (math.log(p_split) + 2.0 * math.log(1.0 - p_child) - math.log(1.0 - p_split)
            + log_split_rule_prior(grid, var))
