from __future__ import annotations
from dataclasses import dataclass
import logging
from pathlib import Path
import time

import numpy as np
import pandas as pd

from mebart.core import ChainsManager
from mebart.metrics import KEY_COLUMNS, LONG_COLUMNS, METRIC_NAMES, WIDE_COLUMNS, EvaluationLayout, score_draws
from mebart.synthetic import ScenarioSpec, generate
from mebart.util import Method, Outcome, stream_seed
from .config_store import ExperimentConfig
from .pipeline import fit_dataset

logger = logging.getLogger(__name__)

METHOD_ORDER = tuple(Method)


@dataclass(frozen=True, eq=False)
class BenchCell:
    """
    One (scenario, replicate) pair of the grid; every configured method is fitted to the same data.
    """
    config: ExperimentConfig
    scenario_index: int
    replicate: int
    spec: ScenarioSpec

    @property
    def label(self) -> str:
        return f"{self.spec.name}_se{self.spec.sigma_e:g}"


@dataclass(eq=False)
class BenchResult:
    wide: pd.DataFrame
    long: pd.DataFrame
    summary: pd.DataFrame


def fit_seed(seed: int, scenario_index: int, replicate: int, method: Method) -> int:
    """
    Root seed of one fit. It only depends on the grid position, so it does not change with the
    set of methods or the number of workers.
    """
    state = stream_seed(seed, scenario_index, replicate, METHOD_ORDER.index(method)).generate_state(1)
    return int(state[0])


def bench_cells(config: ExperimentConfig, replicates: int | None = None) -> list[BenchCell]:
    """
    Expand the experiment into its (scenario level, replicate) grid, scenario-major.
    """
    replicates = replicates or config.replicates
    specs = [spec for scenario in config.scenarios for spec in scenario.specs(config.seed)]
    return [BenchCell(config, index, replicate, spec) for index, spec in enumerate(specs)
            for replicate in range(replicates)]


def run_cell(cell: BenchCell) -> tuple[list[dict], list[dict]]:
    """
    Simulate one dataset and score every method on it.
    :return: wide records and long rows of this cell
    """
    config = cell.config.clone(sampler={**cell.config.sampler.model_dump(), 'keep_trees': False},
                               outcome=Outcome.CONTINUOUS.value)
    split = generate(cell.spec, np.random.default_rng(stream_seed(config.seed, cell.scenario_index, cell.replicate)))
    train, test = split.train.to_observed(), split.test.to_observed()
    layout = EvaluationLayout.for_scenario(cell.spec, test.n)
    x_eval = layout.stack(test)

    records, rows = [], []
    for method in config.methods:
        started = time.perf_counter()
        draws = fit_dataset(config, train, method, x_eval, fit_seed(config.seed, cell.scenario_index, cell.replicate, method))
        seconds = time.perf_counter() - started
        report = score_draws(draws, train, test, cell.spec, layout, f_draws=draws.test_f)
        records.append(report.to_record(cell.label, method.value, cell.replicate, seconds))
        rows.extend(report.to_long_rows(cell.label, method.value, cell.replicate))
        logger.info("%s replicate %d %s: %.1fs", cell.label, cell.replicate, method.value, seconds)
    return records, rows


def run_bench(config: ExperimentConfig, workers: int = 1, replicates: int | None = None) -> BenchResult:
    """
    Run the replicate x scenario x method grid. Cells run in parallel over `workers` processes
    and are merged in grid order, so the tables are identical for any worker count.
    """
    cells = bench_cells(config, replicates)
    if not cells:
        raise ValueError("The experiment defines no scenario to benchmark.")
    logger.info("Benchmark: %d cell(s) x %d method(s) on %d worker(s)", len(cells), len(config.methods), workers)

    records, rows = [], []
    for cell_records, cell_rows in ChainsManager(workers).map(run_cell, cells):
        records.extend(cell_records)
        rows.extend(cell_rows)
    wide = pd.DataFrame(records, columns=list(WIDE_COLUMNS))
    long = pd.DataFrame(rows, columns=list(LONG_COLUMNS))
    return BenchResult(wide, long, summarize_bench(wide))


def summarize_bench(wide: pd.DataFrame) -> pd.DataFrame:
    """
    Median of every metric and of the fit time per scenario and method, with the replicate count.
    """
    keys = [c for c in KEY_COLUMNS if c != 'replicate']
    values = list(METRIC_NAMES) + ['seconds']
    grouped = wide.astype({c: float for c in values}).groupby(keys, sort=False)
    summary = grouped[values].median()
    summary.insert(0, 'replicates', grouped.size())
    return summary.reset_index()


def write_bench(result: BenchResult, output_dir: str | Path) -> dict[str, Path]:
    """
    Write the wide, long (plot-ready) and summary tables.
    :return: table name -> written path
    """
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    paths = {}
    for name in ('wide', 'long', 'summary'):
        paths[name] = output_dir / f"bench_{name}.csv"
        getattr(result, name).to_csv(paths[name], index=False, float_format='%.10g', lineterminator='\n')
    return paths
