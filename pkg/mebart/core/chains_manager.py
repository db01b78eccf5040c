from __future__ import annotations
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import logging

import numpy as np

from mebart.data import ObservedDataset
from mebart.priors import HyperParams
from .config import SamplerConfig
from .draws import PosteriorDraws
from .sampler import ChainSampler

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ChainJob:
    data: ObservedDataset
    hp: HyperParams
    cfg: SamplerConfig
    seed: np.random.SeedSequence
    chain: int = 0
    x_test: np.ndarray | None = None


def run_job(job: ChainJob) -> PosteriorDraws:
    return ChainSampler(job.data, job.hp, job.cfg, np.random.default_rng(job.seed), job.x_test, job.chain).run()


class ChainsManager:
    """
    Runs independent jobs (chains, or whole benchmark cells) on a pool of worker processes.
    Results always come back in submission order and every job owns its random stream, so the
    output does not depend on the number of workers.
    """

    def __init__(self, workers: int = 1):
        """
        :param workers: number of worker processes, 1 runs everything in the calling process
        """
        if workers < 1:
            raise ValueError(f"workers must be at least 1, got {workers}.")
        self._workers = workers
        self._jobs: list[ChainJob] = []

    def add(self, job: ChainJob) -> ChainJob:
        self._jobs.append(job)
        return job

    def map(self, fn: Callable, items: Sequence) -> list:
        """
        Apply `fn` to every item, possibly in parallel, preserving order.
        `fn` must be a module-level function when more than one worker is used.
        """
        if self._workers == 1 or len(items) <= 1:
            return [fn(item) for item in items]
        with ProcessPoolExecutor(max_workers=min(self._workers, len(items))) as pool:
            return list(pool.map(fn, items))

    def run(self) -> PosteriorDraws:
        """
        Run every queued chain and concatenate their draws in chain order.
        """
        if not self._jobs:
            raise ValueError("No chain to run.")
        logger.info("Running %d chain(s) on %d worker(s)", len(self._jobs), self._workers)
        draws = PosteriorDraws.concatenate(self.map(run_job, self._jobs))
        self._jobs = []
        return draws


def fit_chains(data: ObservedDataset, hp: HyperParams, cfg: SamplerConfig, x_test: np.ndarray | None = None,
               workers: int = 1) -> PosteriorDraws:
    """
    Run `cfg.n_chains` chains with seed-derived independent streams and pool their draws.
    """
    manager = ChainsManager(workers)
    for chain, seed in enumerate(np.random.SeedSequence(cfg.seed).spawn(cfg.n_chains)):
        manager.add(ChainJob(data, hp, cfg, seed, chain, x_test))
    return manager.run()
