from __future__ import annotations
from dataclasses import dataclass

import numpy as np

from mebart.util import DataError


@dataclass(frozen=True)
class YScaler:
    """
    Affine map of the training response range [y_min, y_max] onto [-0.5, 0.5].
    """
    y_min: float
    y_max: float

    def __post_init__(self):
        if not self.y_max > self.y_min:
            raise DataError(f"Response has no spread (min={self.y_min}, max={self.y_max}); nothing to model.")

    @classmethod
    def fit(cls, y: np.ndarray) -> YScaler:
        return cls(float(np.min(y)), float(np.max(y)))

    @property
    def span(self) -> float:
        return self.y_max - self.y_min

    def forward(self, y):
        return (np.asarray(y, dtype=float) - self.y_min) / self.span - 0.5

    def inverse(self, y_scaled):
        return (np.asarray(y_scaled, dtype=float) + 0.5) * self.span + self.y_min

    def inverse_scale(self, sd):
        """Map a standard deviation from the rescaled space back to response units."""
        return np.asarray(sd, dtype=float) * self.span
