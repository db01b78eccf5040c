from __future__ import annotations

import numpy as np

from .tree import Tree


class NodeAssignment:
    """
    Leaf membership of every observation for one tree.
    Kept up to date incrementally by grow/prune moves and latent-predictor updates; per-leaf
    counts and residual sums are derived on demand because the residuals change with every tree step.
    """

    def __init__(self, leaf_of: np.ndarray):
        self._leaf_of = np.asarray(leaf_of, dtype=np.intp)

    @classmethod
    def from_tree(cls, tree: Tree, x: np.ndarray) -> NodeAssignment:
        return cls(tree.route(x))

    @classmethod
    def root_only(cls, n: int) -> NodeAssignment:
        return cls(np.zeros(n, dtype=np.intp))

    def copy(self) -> NodeAssignment:
        return NodeAssignment(self._leaf_of.copy())

    @property
    def leaf_of(self) -> np.ndarray:
        return self._leaf_of

    @property
    def n(self) -> int:
        return self._leaf_of.size

    def members(self, leaf: int) -> np.ndarray:
        return np.flatnonzero(self._leaf_of == leaf)

    def leaf_statistics(self, leaves: np.ndarray, residuals: np.ndarray, capacity: int) -> tuple[np.ndarray, np.ndarray]:
        """
        Observation count and residual sum of each requested leaf.
        :param leaves: leaf node ids
        :param residuals: residual per observation
        :param capacity: arena size of the tree
        :return: (counts, sums) aligned with `leaves`
        """
        counts = np.bincount(self._leaf_of, minlength=capacity)
        sums = np.bincount(self._leaf_of, weights=residuals, minlength=capacity)
        return counts[leaves], sums[leaves]

    def apply_grow(self, rows: np.ndarray, go_left: np.ndarray, left: int, right: int) -> None:
        """
        Move the members of a freshly split leaf to its children.
        :param rows: members of the split leaf
        :param go_left: routing decision for each member
        """
        self._leaf_of[rows] = np.where(go_left, left, right)

    def apply_prune(self, node: int, left: int, right: int) -> None:
        self._leaf_of[(self._leaf_of == left) | (self._leaf_of == right)] = node

    def refresh(self, rows: np.ndarray, leaves: np.ndarray) -> None:
        self._leaf_of[rows] = leaves

    def matches(self, tree: Tree, x: np.ndarray) -> bool:
        """
        True when the maintained assignment equals a from-scratch traversal.
        """
        return np.array_equal(self._leaf_of, tree.route(x))
