from .bench import BenchCell, BenchResult, bench_cells, fit_seed, run_bench, run_cell, summarize_bench, write_bench
from .config_store import (DEFAULT_CONFIG_PATH, ConfigStore, ExperimentBook, ExperimentConfig, PriorModel,
                           SamplerModel, ScenarioModel, deep_merge, validate_experiment)
from .csv_io import load_csv, load_predictors, save_csv
from .draws_store import TRACE_COLUMNS, config_hash, load_draws, load_sidecar, persist_draws, sidecar_path, trace_frame
from .pipeline import (apply_sigma_e, fit_dataset, fit_record, prepare_fit, resolve_outcome, scenario_from_meta,
                       scenario_to_meta)
