from __future__ import annotations
from dataclasses import dataclass, field

import numpy as np

from mebart.util import DataError, Method, Outcome

MIN_FIT_ROWS = 10


@dataclass(frozen=True, eq=False)
class ObservedDataset:
    """
    Noisy predictors X*, response y and the known measurement-error scale of each predictor.
    Synthetic datasets may also carry oracle columns (true predictors and true function values)
    that are only ever used for scoring.
    """
    x_star: np.ndarray
    y: np.ndarray
    sigma_e: np.ndarray | None = None
    columns: tuple[str, ...] = ()
    x_true: np.ndarray | None = None
    f_true: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        x_star = np.atleast_2d(np.asarray(self.x_star, dtype=float))
        if x_star.shape[0] == 1 and np.ndim(self.x_star) == 1:
            x_star = x_star.T
        y = np.asarray(self.y, dtype=float).ravel()
        object.__setattr__(self, 'x_star', x_star)
        object.__setattr__(self, 'y', y)

        if x_star.shape[0] != y.size:
            raise DataError(f"X* has {x_star.shape[0]} rows but y has {y.size} entries.")
        if not self.columns:
            object.__setattr__(self, 'columns', tuple(f"x{j + 1}" for j in range(x_star.shape[1])))
        elif len(self.columns) != x_star.shape[1]:
            raise DataError(f"{len(self.columns)} column names given for {x_star.shape[1]} predictors.")

        if self.sigma_e is not None:
            sigma_e = np.broadcast_to(np.asarray(self.sigma_e, dtype=float), (x_star.shape[1],)).copy()
            if np.any(sigma_e < 0) or not np.all(np.isfinite(sigma_e)):
                raise DataError(f"Measurement-error scales must be finite and non-negative, got {sigma_e.tolist()}.")
            object.__setattr__(self, 'sigma_e', sigma_e)

        for name, values in (('X*', x_star), ('y', y)):
            bad = np.argwhere(~np.isfinite(values))
            if bad.size:
                raise DataError(f"Non-finite value in {name} at position {tuple(int(i) for i in bad[0])}.")

    @property
    def n(self) -> int:
        return self.y.size

    @property
    def p(self) -> int:
        return self.x_star.shape[1]

    @property
    def is_binary(self) -> bool:
        return bool(np.all((self.y == 0) | (self.y == 1)))

    @property
    def outcome(self) -> Outcome:
        return Outcome.PROBIT if self.is_binary else Outcome.CONTINUOUS

    @property
    def has_oracle(self) -> bool:
        return self.x_true is not None and self.f_true is not None

    def with_sigma_e(self, sigma_e) -> ObservedDataset:
        return ObservedDataset(self.x_star, self.y, sigma_e, self.columns, self.x_true, self.f_true, dict(self.meta))

    def require_fit_ready(self, method: Method, outcome: Outcome) -> None:
        """
        Check the dataset can be fitted with the requested method and outcome type.
        :raises DataError: when it cannot
        """
        if self.n < MIN_FIT_ROWS:
            raise DataError(f"At least {MIN_FIT_ROWS} observations are needed to fit, got {self.n}.")
        if method is Method.MEBART and self.sigma_e is None:
            raise DataError("Measurement-error scales (sigma_e) are required for mebart; "
                            "give them in the config or a '#sigma_e:' header line.")
        if outcome is Outcome.PROBIT and not self.is_binary:
            values = np.unique(self.y[(self.y != 0) & (self.y != 1)])[:3]
            raise DataError(f"Probit outcome needs y in {{0, 1}}, found {values.tolist()}.")
