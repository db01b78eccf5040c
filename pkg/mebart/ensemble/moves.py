from __future__ import annotations
from dataclasses import dataclass
from enum import Enum
import math

import numpy as np

from .cutpoints import CutpointGrid
from .tree import Tree

GROW_PROBABILITY = 0.5


class MoveKind(Enum):
    GROW = 'grow'
    PRUNE = 'prune'


@dataclass(frozen=True)
class TreeMove:
    """
    A proposed change of tree structure. For GROW, `node` is the leaf to split and (var, cut) the
    new rule; for PRUNE, `node` is the internal node to collapse.
    """
    kind: MoveKind
    node: int
    var: int = -1
    cut: int = -1


def grow_probability(tree: Tree) -> float:
    return 1.0 if tree.n_leaves == 1 else GROW_PROBABILITY


def log_grow_density(tree: Tree, grid: CutpointGrid, var: int) -> float:
    """
    Log probability of proposing one specific GROW (leaf, variable, cutpoint) on `tree`.
    """
    return (math.log(grow_probability(tree)) - math.log(tree.n_leaves)
            - math.log(grid.p) - math.log(grid.n_cuts(var)))


def log_prune_density(n_prunable: int) -> float:
    """
    Log probability of proposing one specific PRUNE on a tree with `n_prunable` candidates.
    Only called on trees with at least two leaves.
    """
    return math.log(1.0 - GROW_PROBABILITY) - math.log(n_prunable)


def propose_move(tree: Tree, grid: CutpointGrid, rng: np.random.Generator) -> tuple[TreeMove, float, float]:
    """
    Draw a GROW or PRUNE proposal, without modifying the tree.
    GROW splits a uniformly chosen leaf on a uniformly chosen variable and cutpoint; PRUNE collapses
    a uniformly chosen node whose children are both leaves. Single-leaf trees always grow.
    :param tree: current tree
    :param grid: cutpoint grid
    :param rng: random generator
    :return: (move, log forward density, log reverse density)
    """
    if rng.uniform() < grow_probability(tree):
        leaves = tree.leaves()
        node = int(leaves[rng.integers(leaves.size)])
        var = int(rng.integers(grid.p))
        cut = int(rng.integers(grid.n_cuts(var)))

        forward = log_grow_density(tree, grid, var)
        # after the split, `node` becomes prunable and its parent stops being prunable
        n_prunable = tree.prunable_nodes().size + 1 - int(tree.is_prunable(tree.parent(node)))
        reverse = log_prune_density(n_prunable)
        return TreeMove(MoveKind.GROW, node, var, cut), forward, reverse

    prunable = tree.prunable_nodes()
    node = int(prunable[rng.integers(prunable.size)])
    var = tree.var(node)

    forward = log_prune_density(prunable.size)
    n_leaves_after = tree.n_leaves - 1
    reverse = (math.log(1.0 if n_leaves_after == 1 else GROW_PROBABILITY) - math.log(n_leaves_after)
               - math.log(grid.p) - math.log(grid.n_cuts(var)))
    return TreeMove(MoveKind.PRUNE, node, var, tree.cut(node)), forward, reverse


def apply_move(tree: Tree, move: TreeMove, grid: CutpointGrid) -> tuple[int, int]:
    """
    Apply a move in place.
    :return: the two child slots created (GROW) or freed (PRUNE)
    """
    if move.kind is MoveKind.GROW:
        return tree.grow(move.node, move.var, move.cut, grid.value(move.var, move.cut))
    return tree.prune(move.node)
