from __future__ import annotations
from collections.abc import Sequence

import numpy as np

LEAF = -1


class Tree:
    """
    Binary decision tree stored as an arena of nodes with explicit child indices.
    Internal nodes carry (variable, cutpoint index, threshold); leaves carry a scalar value.
    Routing rule: go left iff x[var] < threshold.

    Freed node slots are recycled by later grow moves, so node indices are stable for as long as
    a node is alive but carry no meaning beyond that.
    """

    def __init__(self, capacity: int = 8):
        self._var = np.full(capacity, LEAF, dtype=np.intp)
        self._cut = np.full(capacity, -1, dtype=np.intp)
        self._threshold = np.zeros(capacity)
        self._left = np.full(capacity, -1, dtype=np.intp)
        self._right = np.full(capacity, -1, dtype=np.intp)
        self._parent = np.full(capacity, -1, dtype=np.intp)
        self._depth = np.zeros(capacity, dtype=np.intp)
        self._value = np.zeros(capacity)
        self._alive = np.zeros(capacity, dtype=bool)
        self._free: list[int] = list(range(capacity - 1, 0, -1))
        self._alive[0] = True

    @classmethod
    def single_leaf(cls, value: float = 0.0) -> Tree:
        tree = cls()
        tree._value[0] = value
        return tree

    @property
    def root(self) -> int:
        return 0

    @property
    def capacity(self) -> int:
        return self._alive.size

    def copy(self) -> Tree:
        clone = Tree.__new__(Tree)
        for name in ('_var', '_cut', '_threshold', '_left', '_right', '_parent', '_depth', '_value', '_alive'):
            setattr(clone, name, getattr(self, name).copy())
        clone._free = list(self._free)
        return clone

    def cut(self, node: int) -> int:
        return int(self._cut[node])

    def depth(self, node: int) -> int:
        return int(self._depth[node])

    def children(self, node: int) -> tuple[int, int]:
        return int(self._left[node]), int(self._right[node])

    def is_leaf(self, node: int) -> bool:
        return self._var[node] == LEAF

    def internal_nodes(self) -> np.ndarray:
        return np.flatnonzero(self._alive & (self._var != LEAF))

    def leaves(self) -> np.ndarray:
        return np.flatnonzero(self._alive & (self._var == LEAF))

    @property
    def n_leaves(self) -> int:
        return int(np.count_nonzero(self._alive & (self._var == LEAF)))

    def parent(self, node: int) -> int:
        return int(self._parent[node])

    def prunable_nodes(self) -> np.ndarray:
        """
        Internal nodes whose two children are both leaves.
        """
        internal = self.internal_nodes()
        if internal.size == 0:
            return internal
        both_leaves = (self._var[self._left[internal]] == LEAF) & (self._var[self._right[internal]] == LEAF)
        return internal[both_leaves]

    def is_prunable(self, node: int) -> bool:
        if node < 0 or self.is_leaf(node):
            return False
        left, right = self.children(node)
        return self.is_leaf(left) and self.is_leaf(right)

    def threshold(self, node: int) -> float:
        return float(self._threshold[node])

    def var(self, node: int) -> int:
        return int(self._var[node])

    def value(self, node: int) -> float:
        return float(self._value[node])

    @property
    def values(self) -> np.ndarray:
        """Node value array indexed by node id (only leaf entries are meaningful)."""
        return self._value

    def set_leaf_values(self, leaves: np.ndarray, values: np.ndarray) -> None:
        self._value[leaves] = values

    def grow(self, node: int, var: int, cut: int, threshold: float) -> tuple[int, int]:
        """
        Split a leaf into two children.
        :param node: leaf to split
        :param var: split variable
        :param cut: index of the cutpoint in the grid for `var`
        :param threshold: cut value, cached so routing does not need the grid
        :return: (left child, right child)
        """
        if not self.is_leaf(node):
            raise ValueError(f"Node {node} is not a leaf.")
        left = self._allocate()
        right = self._allocate()
        for child in (left, right):
            self._var[child] = LEAF
            self._cut[child] = -1
            self._left[child] = -1
            self._right[child] = -1
            self._parent[child] = node
            self._depth[child] = self._depth[node] + 1
            self._value[child] = self._value[node]
        self._var[node] = var
        self._cut[node] = cut
        self._threshold[node] = threshold
        self._left[node] = left
        self._right[node] = right
        return left, right

    def prune(self, node: int) -> tuple[int, int]:
        """
        Collapse an internal node whose children are both leaves back into a leaf.
        :return: the (left, right) slots that were freed
        """
        if not self.is_prunable(node):
            raise ValueError(f"Node {node} cannot be pruned.")
        left, right = self.children(node)
        for child in (left, right):
            self._alive[child] = False
            self._free.append(child)
        self._var[node] = LEAF
        self._cut[node] = -1
        self._left[node] = -1
        self._right[node] = -1
        return left, right

    def route(self, x: np.ndarray) -> np.ndarray:
        """
        Leaf reached by every row of x.
        :param x: inputs (n, p)
        :return: leaf index per row
        """
        node = np.zeros(x.shape[0], dtype=np.intp)
        rows = np.arange(x.shape[0])
        while rows.size:
            current = node[rows]
            var = self._var[current]
            internal = var != LEAF
            rows, current, var = rows[internal], current[internal], var[internal]
            go_left = x[rows, var] < self._threshold[current]
            node[rows] = np.where(go_left, self._left[current], self._right[current])
        return node

    def predict(self, x: np.ndarray) -> np.ndarray:
        return self._value[self.route(x)]

    def structure(self, node: int = 0) -> tuple:
        """
        Canonical nested description of the split structure, independent of arena slot numbers.
        """
        if self.is_leaf(node):
            return ()
        left, right = self.children(node)
        return self.var(node), self.cut(node), self.structure(left), self.structure(right)

    def to_arrays(self) -> dict[str, np.ndarray]:
        """
        Compact pre-order copy of the live nodes, children renumbered accordingly.
        """
        order = []
        stack = [0]
        while stack:
            node = stack.pop()
            order.append(node)
            if not self.is_leaf(node):
                left, right = self.children(node)
                stack.extend((right, left))
        order = np.asarray(order, dtype=np.intp)
        position = np.full(self.capacity, -1, dtype=np.intp)
        position[order] = np.arange(order.size)

        internal = self._var[order] != LEAF
        left = np.where(internal, position[self._left[order]], -1)
        right = np.where(internal, position[self._right[order]], -1)
        return {
            'var': self._var[order].copy(),
            'cut': self._cut[order].copy(),
            'threshold': self._threshold[order].copy(),
            'left': left,
            'right': right,
            'value': self._value[order].copy(),
        }

    @classmethod
    def from_arrays(cls, arrays: dict[str, np.ndarray]) -> Tree:
        size = arrays['var'].size
        tree = cls(capacity=max(size, 1))
        tree._var[:size] = arrays['var']
        tree._cut[:size] = arrays['cut']
        tree._threshold[:size] = arrays['threshold']
        tree._left[:size] = arrays['left']
        tree._right[:size] = arrays['right']
        tree._value[:size] = arrays['value']
        tree._alive[:size] = True
        tree._free = []
        for node in range(size):
            if tree._var[node] != LEAF:
                for child in (tree._left[node], tree._right[node]):
                    tree._parent[child] = node
                    tree._depth[child] = tree._depth[node] + 1
        return tree

    def _allocate(self) -> int:
        if not self._free:
            self._extend()
        node = self._free.pop()
        self._alive[node] = True
        return node

    def _extend(self):
        old = self.capacity
        for name, fill in (('_var', LEAF), ('_cut', -1), ('_threshold', 0.0), ('_left', -1), ('_right', -1),
                           ('_parent', -1), ('_depth', 0), ('_value', 0.0), ('_alive', False)):
            array = getattr(self, name)
            setattr(self, name, np.concatenate([array, np.full(old, fill, dtype=array.dtype)]))
        self._free.extend(range(2 * old - 1, old - 1, -1))


def evaluate_tree(tree: Tree, x: np.ndarray) -> float:
    """
    Value of the leaf reached by a single input vector.
    :param tree: tree to evaluate
    :param x: input of length p
    :return: leaf value
    """
    node = tree.root
    while not tree.is_leaf(node):
        left, right = tree.children(node)
        node = left if x[tree.var(node)] < tree.threshold(node) else right
    return tree.value(node)


def evaluate_ensemble(trees: Sequence[Tree], x: np.ndarray) -> float:
    """
    Sum of the tree outputs at a single input vector.
    """
    if not trees:
        raise ValueError("An ensemble needs at least one tree.")
    return sum(evaluate_tree(tree, x) for tree in trees)


def predict_ensemble(trees: Sequence[Tree], x: np.ndarray) -> np.ndarray:
    """
    Vectorized sum of tree outputs for every row of x.
    """
    total = np.zeros(x.shape[0])
    for tree in trees:
        total += tree.predict(x)
    return total
