from __future__ import annotations
import logging
import math

import numpy as np
from tqdm import tqdm

from mebart.data import ObservedDataset
from mebart.ensemble import CutpointGrid, MoveKind, NodeAssignment, Tree, apply_move, leaf_log_evidence, propose_move
from mebart.latent import LatentState, update_latent_x
from mebart.priors import HyperParams, YScaler, log_grow_prior_ratio, sample_leaf_values, sample_sigma2
from mebart.util import Method, Outcome, SamplerError
from .config import SamplerConfig
from .draws import ForestTrace, PosteriorDraws
from .probit import check_probit_signs, sample_probit_latents

logger = logging.getLogger(__name__)

RESIDUAL_TOLERANCE = 1e-10


class ChainSampler:
    """
    One MCMC chain of the sum-of-trees model.
    Each sweep updates every tree in turn (structure by Metropolis-Hastings with the leaf values
    integrated out, then conjugate leaf draws), then sigma2, then, in mebart mode, the latent
    predictors. For probit outcomes the sweep starts by drawing the latent z and sigma2 stays at 1.

    The ensemble fit is maintained incrementally: `_fits[h]` holds tree h's output at the current
    latent predictors and `_fit` their sum.
    """

    def __init__(self, data: ObservedDataset, hp: HyperParams, cfg: SamplerConfig, rng: np.random.Generator,
                 x_test: np.ndarray | None = None, chain: int = 0):
        """
        :param data: training data
        :param hp: hyperparameters, see :func:`mebart.priors.build_hyperparams`
        :param cfg: sampler settings
        :param rng: generator owned by this chain
        :param x_test: inputs at which to record function draws, evaluated as given
        :param chain: chain index recorded with the draws
        """
        data.require_fit_ready(cfg.method, cfg.outcome)
        if hp.p != data.p:
            raise SamplerError(f"Hyperparameters describe {hp.p} predictors, data has {data.p}.")

        self._data = data
        self._hp = hp
        self._cfg = cfg
        self._rng = rng
        self._chain = chain
        self._x_test = np.zeros((0, data.p)) if x_test is None else np.asarray(x_test, dtype=float)

        self._probit = cfg.outcome is Outcome.PROBIT
        self._scaler = None if self._probit else YScaler.fit(data.y)
        self._y = data.y if self._probit else self._scaler.forward(data.y)

        self._grid = CutpointGrid.from_data(data.x_star, np.sqrt(hp.sigma2_e_array), cfg.n_cuts)
        self._trees = [Tree.single_leaf() for _ in range(hp.m)]
        self._assignments = [NodeAssignment.root_only(data.n) for _ in range(hp.m)]
        self._fits = np.zeros((hp.m, data.n))
        self._fit = np.zeros(data.n)
        self._sigma2 = 1.0 if self._probit else hp.sigma2_hat
        self._latent = LatentState.from_observed(data.x_star)
        self._update_latent = cfg.method is Method.MEBART and bool(hp.noisy_columns.any())
        self._response = sample_probit_latents(self._fit, self._y, rng) if self._probit else self._y

    @property
    def fit(self) -> np.ndarray:
        return self._fit

    @property
    def grid(self) -> CutpointGrid:
        return self._grid

    @property
    def latent(self) -> LatentState:
        return self._latent

    @property
    def sigma2(self) -> float:
        return self._sigma2

    @property
    def trees(self) -> list[Tree]:
        return self._trees

    def run(self) -> PosteriorDraws:
        """
        Run burn-in and sampling, keeping every `thin`-th draw after burn-in.
        :return: the kept draws of this chain
        """
        cfg = self._cfg
        n_keep = cfg.n_keep
        train_f = np.empty((n_keep, self._data.n))
        test_f = np.empty((n_keep, self._x_test.shape[0]))
        sigma = None if self._probit else np.empty(n_keep)
        sigma_trace = None if self._probit else np.empty((1, cfg.n_iterations))
        latent_x = np.empty((n_keep, self._data.n, self._data.p)) \
            if self._update_latent and cfg.keep_latent else None
        ensembles = []

        kept = 0
        iterations = tqdm(range(cfg.n_iterations), desc=f"chain {self._chain}", disable=not cfg.progress,
                          leave=False)
        for iteration in iterations:
            self.sweep()
            if cfg.debug_every and (iteration + 1) % cfg.debug_every == 0:
                self.check_consistency()
            if sigma_trace is not None:
                sigma_trace[0, iteration] = self._sigma_response_units()

            after_burn = iteration - cfg.n_burn
            if after_burn < 0 or (after_burn + 1) % cfg.thin:
                continue
            train_f[kept] = self._to_response(self._fit)
            if self._x_test.shape[0]:
                test_f[kept] = self._to_response(self._predict(self._x_test))
            if sigma is not None:
                sigma[kept] = self._sigma_response_units()
            if latent_x is not None:
                latent_x[kept] = self._latent.x
            if cfg.keep_trees:
                ensembles.append([tree.to_arrays() for tree in self._trees])
            kept += 1

        if self._update_latent:
            rate = self._latent.acceptance_rate
            logger.info("Chain %d: latent-x acceptance mean %.3f (min %.3f, max %.3f)",
                        self._chain, rate.mean(), rate.min(), rate.max())
        return PosteriorDraws(
            method=cfg.method,
            outcome=cfg.outcome,
            chain=np.full(n_keep, self._chain, dtype=np.int64),
            train_f=train_f,
            test_f=test_f,
            sigma=sigma,
            sigma_trace=sigma_trace,
            latent_x=latent_x,
            accepted=self._latent.accepted.copy() if self._update_latent else None,
            proposed=self._latent.proposed.copy() if self._update_latent else None,
            forest=ForestTrace.from_ensembles(self._hp.m, ensembles) if cfg.keep_trees else None,
            y_min=float('nan') if self._probit else self._scaler.y_min,
            y_max=float('nan') if self._probit else self._scaler.y_max,
            n_burn=cfg.n_burn,
            thin=cfg.thin,
            seed=cfg.seed,
        )

    def sweep(self) -> None:
        """
        One full Gibbs iteration.
        """
        if self._probit:
            self._response = sample_probit_latents(self._fit, self._y, self._rng)
        for h in range(self._hp.m):
            self._update_tree(h)
        # resum once per sweep so rounding errors of the incremental updates do not accumulate
        self._fit = self._fits.sum(axis=0)
        self._check_finite()

        if not self._probit:
            self._sigma2 = sample_sigma2(self._response - self._fit, self._hp, self._rng)

        if self._update_latent:
            before = self._latent.accepted.copy()
            update_latent_x(self._latent, self._data.x_star, self._response, self._trees, self._sigma2, self._hp,
                            self._rng, fit=self._fit, assignments=self._assignments)
            rows = np.flatnonzero(self._latent.accepted != before)
            if rows.size:
                for h, (tree, assignment) in enumerate(zip(self._trees, self._assignments)):
                    self._fits[h, rows] = tree.values[assignment.leaf_of[rows]]
                self._fit = self._fits.sum(axis=0)

    def check_consistency(self) -> None:
        """
        Compare every incrementally maintained quantity with a from-scratch recomputation.
        :raises SamplerError: on the first mismatch
        """
        x = self._latent.x
        for h, (tree, assignment) in enumerate(zip(self._trees, self._assignments)):
            if not assignment.matches(tree, x):
                raise SamplerError(f"Leaf assignment of tree {h} diverged from its traversal.")
        fresh = self._predict(x)
        worst = np.max(np.abs(fresh - self._fit)) if fresh.size else 0.0
        if worst > RESIDUAL_TOLERANCE:
            raise SamplerError(f"Maintained ensemble fit is off by {worst:.3g} from a fresh evaluation.")
        if self._probit:
            wrong = check_probit_signs(self._response, self._y)
            if wrong.size:
                raise SamplerError(f"Latent z has the wrong sign for observation {int(wrong[0])}.")

    def _check_finite(self):
        bad = np.flatnonzero(~np.isfinite(self._fit))
        if bad.size:
            raise SamplerError(f"Non-finite ensemble fit at observation {int(bad[0])}; check the input row.")

    def _predict(self, x: np.ndarray) -> np.ndarray:
        total = np.zeros(x.shape[0])
        for tree in self._trees:
            total += tree.predict(x)
        return total

    def _sigma_response_units(self) -> float:
        return float(self._scaler.inverse_scale(math.sqrt(self._sigma2)))

    def _to_response(self, f: np.ndarray) -> np.ndarray:
        return f if self._probit else self._scaler.inverse(f)

    def _update_tree(self, h: int) -> None:
        hp, grid, rng = self._hp, self._grid, self._rng
        tree, assignment = self._trees[h], self._assignments[h]
        residuals = self._response - self._fit + self._fits[h]
        sigma2, sigma_mu2 = self._sigma2, hp.sigma_mu2

        move, forward, reverse = propose_move(tree, grid, rng)
        log_u = math.log(1.0 - rng.uniform())
        if move.kind is MoveKind.GROW:
            rows = assignment.members(move.node)
            go_left = self._latent.x[rows, move.var] < grid.value(move.var, move.cut)
            n_left = int(np.count_nonzero(go_left))
            n_right = rows.size - n_left
            if n_left >= hp.n_min and n_right >= hp.n_min:
                s_total = float(residuals[rows].sum())
                s_left = float(residuals[rows[go_left]].sum())
                log_ratio = (leaf_log_evidence(n_left, s_left, sigma2, sigma_mu2)
                             + leaf_log_evidence(n_right, s_total - s_left, sigma2, sigma_mu2)
                             - leaf_log_evidence(rows.size, s_total, sigma2, sigma_mu2)
                             + log_grow_prior_ratio(tree.depth(move.node), move.var, grid, hp)
                             + reverse - forward)
                if log_u < log_ratio:
                    left, right = apply_move(tree, move, grid)
                    assignment.apply_grow(rows, go_left, left, right)
        else:
            left, right = tree.children(move.node)
            rows_left, rows_right = assignment.members(left), assignment.members(right)
            s_left, s_right = float(residuals[rows_left].sum()), float(residuals[rows_right].sum())
            log_ratio = (leaf_log_evidence(rows_left.size + rows_right.size, s_left + s_right, sigma2, sigma_mu2)
                         - leaf_log_evidence(rows_left.size, s_left, sigma2, sigma_mu2)
                         - leaf_log_evidence(rows_right.size, s_right, sigma2, sigma_mu2)
                         - log_grow_prior_ratio(tree.depth(move.node), move.var, grid, hp)
                         + reverse - forward)
            if log_u < log_ratio:
                apply_move(tree, move, grid)
                assignment.apply_prune(move.node, left, right)

        leaves, values = sample_leaf_values(tree, assignment, residuals, sigma2, hp, rng)
        tree.set_leaf_values(leaves, values)
        fit_h = tree.values[assignment.leaf_of]
        self._fit += fit_h - self._fits[h]
        self._fits[h] = fit_h


def run_chain(data: ObservedDataset, hp: HyperParams, cfg: SamplerConfig, rng: np.random.Generator,
              x_test: np.ndarray | None = None, chain: int = 0) -> PosteriorDraws:
    """
    Run one chain of BART or meBART on a continuous response.
    In bart mode the latent step is skipped and the predictors stay at X*.
    """
    if cfg.outcome is not Outcome.CONTINUOUS:
        raise SamplerError("run_chain fits continuous responses; use run_probit_chain for binary ones.")
    return ChainSampler(data, hp, cfg, rng, x_test, chain).run()


def run_probit_chain(data: ObservedDataset, hp: HyperParams, cfg: SamplerConfig, rng: np.random.Generator,
                     x_test: np.ndarray | None = None, chain: int = 0) -> PosteriorDraws:
    """
    Run one chain of probit BART or meBART on a binary response.
    Function draws are on the probit scale; see `PosteriorDraws.train_prob` for probabilities.
    """
    if cfg.outcome is not Outcome.PROBIT:
        cfg = cfg.clone(outcome=Outcome.PROBIT)
    return ChainSampler(data, hp, cfg, rng, x_test, chain).run()
