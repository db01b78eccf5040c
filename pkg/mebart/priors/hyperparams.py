from __future__ import annotations
from dataclasses import dataclass, replace
from functools import cached_property
import math

import numpy as np


@dataclass(frozen=True)
class HyperParams:
    """
    All prior constants of the model.
    Vector fields hold one entry per predictor; a zero measurement-error variance marks a column
    observed without error, which the latent-predictor step then leaves untouched.
    """
    m: int = 200
    k: float = 2.0
    alpha: float = 0.95
    beta: float = 2.0
    nu: float = 3.0
    lam: float = 1.0
    q: float = 0.90
    sigma2_hat: float = 1.0
    leaf_range: float = 0.5
    n_min: int = 1
    mu_x: tuple[float, ...] = ()
    sigma2_x: tuple[float, ...] = ()
    sigma2_e: tuple[float, ...] = ()
    proposal_scale: tuple[float, ...] = ()

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"m must be at least 1, got {self.m}.")
        if self.k <= 0:
            raise ValueError(f"k must be positive, got {self.k}.")
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}.")
        if self.beta <= 0:
            raise ValueError(f"beta must be positive, got {self.beta}.")
        if self.nu <= 0 or self.lam <= 0:
            raise ValueError(f"nu and lam must be positive, got nu={self.nu}, lam={self.lam}.")
        if not 0 < self.q < 1:
            raise ValueError(f"q must lie in (0, 1), got {self.q}.")
        if self.sigma2_hat <= 0 or self.leaf_range <= 0:
            raise ValueError("sigma2_hat and leaf_range must be positive.")
        if self.n_min < 1:
            raise ValueError(f"n_min must be at least 1, got {self.n_min}.")

        p = len(self.mu_x)
        for name in ('sigma2_x', 'sigma2_e', 'proposal_scale'):
            if len(getattr(self, name)) != p:
                raise ValueError(f"{name} has {len(getattr(self, name))} entries, expected {p}.")
        if any(v <= 0 for v in self.sigma2_x):
            raise ValueError("Latent predictor prior variances must be positive.")
        if any(v < 0 for v in self.sigma2_e) or any(v < 0 for v in self.proposal_scale):
            raise ValueError("Measurement-error variances and proposal scales cannot be negative.")

    def clone(self, **kwargs) -> HyperParams:
        """
        Create a copy with some fields replaced. Derived quantities are recomputed.
        :param kwargs: fields to replace
        """
        return replace(self, **kwargs)

    @property
    def p(self) -> int:
        return len(self.mu_x)

    @property
    def sigma_mu(self) -> float:
        """Leaf prior standard deviation, leaf_range / (k sqrt(m))."""
        return self.leaf_range / (self.k * math.sqrt(self.m))

    @property
    def sigma_mu2(self) -> float:
        return self.sigma_mu ** 2

    @cached_property
    def mu_x_array(self) -> np.ndarray:
        return np.asarray(self.mu_x, dtype=float)

    @cached_property
    def sigma2_x_array(self) -> np.ndarray:
        return np.asarray(self.sigma2_x, dtype=float)

    @cached_property
    def sigma2_e_array(self) -> np.ndarray:
        return np.asarray(self.sigma2_e, dtype=float)

    @cached_property
    def proposal_scale_array(self) -> np.ndarray:
        return np.asarray(self.proposal_scale, dtype=float)

    @property
    def noisy_columns(self) -> np.ndarray:
        """Boolean mask of the predictors observed with error."""
        return self.sigma2_e_array > 0
