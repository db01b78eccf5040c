from __future__ import annotations
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from mebart.ensemble import Tree
from mebart.util import Method, Outcome

TREE_FIELDS = ('var', 'cut', 'threshold', 'left', 'right', 'value')


@dataclass(eq=False)
class ForestTrace:
    """
    The kept ensembles of a run, flattened: node arrays of all trees of all draws concatenated,
    with `offsets[d * m + h]` the first node of tree h in draw d. Leaf values are on the model scale.
    """
    m: int
    var: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    cut: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    threshold: np.ndarray = field(default_factory=lambda: np.zeros(0))
    left: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    right: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    value: np.ndarray = field(default_factory=lambda: np.zeros(0))
    offsets: np.ndarray = field(default_factory=lambda: np.zeros(1, dtype=np.int64))

    @property
    def n_draws(self) -> int:
        return (self.offsets.size - 1) // self.m

    @classmethod
    def from_ensembles(cls, m: int, ensembles: Sequence[Sequence[dict[str, np.ndarray]]]) -> ForestTrace:
        """
        :param m: trees per ensemble
        :param ensembles: per draw, the `Tree.to_arrays()` record of each tree
        """
        records = [record for ensemble in ensembles for record in ensemble]
        sizes = np.array([record['var'].size for record in records], dtype=np.int64)
        offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
        if not records:
            return cls(m)
        columns = {name: np.concatenate([record[name] for record in records]) for name in TREE_FIELDS}
        for name in ('var', 'cut', 'left', 'right'):
            columns[name] = columns[name].astype(np.int64)
        return cls(m, offsets=offsets, **columns)

    @classmethod
    def concatenate(cls, traces: Sequence[ForestTrace]) -> ForestTrace:
        m = traces[0].m
        offsets = [np.zeros(1, dtype=np.int64)]
        shift = 0
        for trace in traces:
            offsets.append(trace.offsets[1:] + shift)
            shift += int(trace.offsets[-1])
        columns = {name: np.concatenate([getattr(trace, name) for trace in traces]) for name in TREE_FIELDS}
        return cls(m, offsets=np.concatenate(offsets), **columns)

    def tree(self, draw: int, h: int) -> Tree:
        start, stop = self.offsets[draw * self.m + h], self.offsets[draw * self.m + h + 1]
        return Tree.from_arrays({name: getattr(self, name)[start:stop] for name in TREE_FIELDS})

    def predict(self, x: np.ndarray) -> np.ndarray:
        """
        Ensemble output of every kept draw at every row of x.
        :param x: inputs (n, p)
        :return: (n_draws, n) on the model scale
        """
        out = np.zeros((self.n_draws, x.shape[0]))
        for draw in range(self.n_draws):
            for h in range(self.m):
                start = self.offsets[draw * self.m + h]
                node = np.zeros(x.shape[0], dtype=np.int64)
                rows = np.arange(x.shape[0])
                while rows.size:
                    var = self.var[start + node[rows]]
                    internal = var >= 0
                    rows, var = rows[internal], var[internal]
                    current = start + node[rows]
                    go_left = x[rows, var] < self.threshold[current]
                    node[rows] = np.where(go_left, self.left[current], self.right[current])
                out[draw] += self.value[start + node]
        return out


@dataclass(eq=False)
class PosteriorDraws:
    """
    Kept draws of one or more chains, concatenated in chain order.
    Function values are in response units (probit scale for probit outcomes); sigma is absent for
    probit outcomes. `sigma_trace` keeps every iteration of every chain, burn-in included.
    """
    method: Method
    outcome: Outcome
    chain: np.ndarray
    train_f: np.ndarray
    test_f: np.ndarray
    sigma: np.ndarray | None = None
    sigma_trace: np.ndarray | None = None
    latent_x: np.ndarray | None = None
    accepted: np.ndarray | None = None
    proposed: np.ndarray | None = None
    forest: ForestTrace | None = None
    y_min: float = float('nan')
    y_max: float = float('nan')
    n_burn: int = 0
    thin: int = 1
    seed: int = 0

    def __post_init__(self):
        k = self.chain.size
        for name in ('train_f', 'test_f', 'sigma', 'latent_x'):
            values = getattr(self, name)
            if values is not None and values.shape[0] != k:
                raise ValueError(f"{name} holds {values.shape[0]} draws, expected {k}.")
        if self.sigma is not None and np.any(self.sigma <= 0):
            raise ValueError("Every sigma draw must be positive.")

    @property
    def n_draws(self) -> int:
        return self.chain.size

    @property
    def n_chains(self) -> int:
        return int(self.chain.max()) + 1 if self.chain.size else 0

    @property
    def acceptance_rate(self) -> np.ndarray | None:
        if self.accepted is None:
            return None
        return np.divide(self.accepted, self.proposed, out=np.zeros(self.accepted.size), where=self.proposed > 0)

    @property
    def train_prob(self) -> np.ndarray:
        return stats.norm.cdf(self.train_f)

    @property
    def test_prob(self) -> np.ndarray:
        return stats.norm.cdf(self.test_f)

    def to_response_scale(self, f_model: np.ndarray) -> np.ndarray:
        """Map ensemble outputs on the model scale to response units."""
        if self.outcome is Outcome.PROBIT:
            return f_model
        return (f_model + 0.5) * (self.y_max - self.y_min) + self.y_min

    def predict(self, x: np.ndarray) -> np.ndarray:
        """
        Posterior draws of the regression function at new inputs, using the stored forests.
        :param x: inputs (n, p), taken as given (no latent update)
        :return: (n_draws, n) in response units
        """
        if self.forest is None:
            raise ValueError("These draws were saved without their trees; refit with keep_trees enabled.")
        return self.to_response_scale(self.forest.predict(np.asarray(x, dtype=float)))

    @classmethod
    def concatenate(cls, parts: Sequence[PosteriorDraws]) -> PosteriorDraws:
        first = parts[0]

        def stack(name):
            values = [getattr(part, name) for part in parts]
            return None if values[0] is None else np.concatenate(values)

        def total(name):
            values = [getattr(part, name) for part in parts]
            return None if values[0] is None else np.sum(values, axis=0)

        chain = np.concatenate([part.chain for part in parts])
        sigma_trace = None if first.sigma_trace is None else np.vstack([part.sigma_trace for part in parts])
        forest = None if first.forest is None else ForestTrace.concatenate([part.forest for part in parts])
        return cls(first.method, first.outcome, chain, stack('train_f'), stack('test_f'), stack('sigma'),
                   sigma_trace, stack('latent_x'), total('accepted'), total('proposed'), forest,
                   first.y_min, first.y_max, first.n_burn, first.thin, first.seed)
