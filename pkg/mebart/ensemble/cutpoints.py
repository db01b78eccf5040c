from __future__ import annotations
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class CutpointGrid:
    """
    Candidate split values, one strictly increasing array per predictor.
    The grid is fixed once a chain starts; trees refer to a split by (variable, index into the grid).
    """
    values: tuple[np.ndarray, ...]

    def __post_init__(self):
        if not self.values:
            raise ValueError("A cutpoint grid needs at least one variable.")
        for j, column in enumerate(self.values):
            if column.ndim != 1 or column.size < 1:
                raise ValueError(f"Variable {j} has no candidate cutpoints.")
            if column.size > 1 and np.any(np.diff(column) <= 0):
                raise ValueError(f"Cutpoints of variable {j} are not strictly increasing.")

    @classmethod
    def from_data(cls, x_star: np.ndarray, sigma_e: np.ndarray | None = None, n_cuts: int = 100,
                  expand: float = 3.0) -> CutpointGrid:
        """
        Build equally spaced cutpoints over the observed range of each column, widened by
        `expand` measurement-error standard deviations on both sides so latent values that drift
        past the observed range can still be routed.
        :param x_star: observed predictors (n, p)
        :param sigma_e: measurement-error standard deviation per column, None for exact predictors
        :param n_cuts: number of cutpoints per variable
        :param expand: widening factor in units of sigma_e
        :return: the grid
        """
        if n_cuts < 1:
            raise ValueError(f"n_cuts must be at least 1, got {n_cuts}.")
        x_star = np.asarray(x_star, dtype=float)
        p = x_star.shape[1]
        sigma_e = np.zeros(p) if sigma_e is None else np.broadcast_to(np.asarray(sigma_e, dtype=float), (p,))

        columns = []
        for j in range(p):
            lo = x_star[:, j].min() - expand * sigma_e[j]
            hi = x_star[:, j].max() + expand * sigma_e[j]
            # a constant column cannot be split
            columns.append(np.linspace(lo, hi, n_cuts) if hi > lo else np.array([lo]))
        return cls(tuple(columns))

    def n_cuts(self, var: int) -> int:
        return self.values[var].size

    @property
    def p(self) -> int:
        return len(self.values)

    def value(self, var: int, cut: int) -> float:
        return float(self.values[var][cut])
