from __future__ import annotations
from dataclasses import dataclass, replace

from mebart.util import Method, Outcome


@dataclass(frozen=True)
class SamplerConfig:
    """
    Run-length and mode settings of the MCMC sampler.
    """
    method: Method = Method.MEBART
    outcome: Outcome = Outcome.CONTINUOUS
    n_burn: int = 200
    n_keep: int = 1000
    thin: int = 1
    n_chains: int = 1
    seed: int = 0
    n_cuts: int = 100
    debug_every: int = 0
    keep_trees: bool = True
    keep_latent: bool = True
    progress: bool = False

    def __post_init__(self):
        if self.n_burn < 0:
            raise ValueError(f"n_burn cannot be negative, got {self.n_burn}.")
        if self.n_keep < 1 or self.thin < 1 or self.n_chains < 1:
            raise ValueError("n_keep, thin and n_chains must all be at least 1.")
        if self.n_cuts < 1:
            raise ValueError(f"n_cuts must be at least 1, got {self.n_cuts}.")
        if self.debug_every < 0:
            raise ValueError(f"debug_every cannot be negative, got {self.debug_every}.")

    def clone(self, **kwargs) -> SamplerConfig:
        return replace(self, **kwargs)

    @property
    def n_iterations(self) -> int:
        return self.n_burn + self.n_keep * self.thin
