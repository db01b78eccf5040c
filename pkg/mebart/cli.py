"""
Command line of the sampler and its benchmarks.

    mebart [--config FILE] [--experiment NAME] [--seed N] [--threads N] [--quiet] [--print-config]
           [--list-experiments]
           {simulate,fit,predict,metrics,bench,trace} ...

Errors are reported as one JSON object on stderr and the process exits with
0 (ok), 1 (usage), 2 (data) or 3 (runtime).
"""
from __future__ import annotations
import argparse
from dataclasses import asdict
import json
import logging
from pathlib import Path
import sys

import numpy as np
import pandas as pd

from mebart.core import diagnostics, summarize_predictions
from mebart.metrics import WIDE_COLUMNS, EvaluationLayout, score_draws
from mebart.synthetic import TrueFunction, generate
from mebart.util import DataError, MebartError, Method, UsageError
from mebart.io import (ConfigStore, ExperimentBook, ExperimentConfig, ScenarioModel, apply_sigma_e, fit_dataset,
                       fit_record, load_csv, load_draws, load_predictors, load_sidecar, persist_draws, prepare_fit,
                       resolve_outcome, run_bench, save_csv, scenario_from_meta, scenario_to_meta, trace_frame,
                       write_bench)

logger = logging.getLogger(__name__)


class ArgumentParser(argparse.ArgumentParser):
    """Raises instead of exiting so bad flags get the same error report as every other failure."""

    def error(self, message):
        raise UsageError(message)


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog='mebart', description=__doc__.strip().splitlines()[0])
    parser.add_argument('--config', help="experiment configuration file (JSON), the bundled presets by default")
    parser.add_argument('--experiment', help="experiment name in the configuration, its root entry by default")
    parser.add_argument('--seed', type=int, help="root seed, overrides the configuration")
    parser.add_argument('--threads', type=int, default=1, help="worker processes for chains and benchmark cells")
    parser.add_argument('--quiet', action='store_true', help="only log warnings and hide progress bars")
    parser.add_argument('--print-config', action='store_true', help="print the resolved configuration and exit")
    parser.add_argument('--list-experiments', action='store_true',
                        help="list the experiments of the configuration and exit")
    commands = parser.add_subparsers(dest='command')

    simulate = commands.add_parser('simulate', help="write a synthetic train/test pair")
    simulate.add_argument('--function', choices=[f.value for f in TrueFunction])
    simulate.add_argument('--n-train', type=int)
    simulate.add_argument('--n-test', type=int)
    simulate.add_argument('--mu-x', type=float)
    simulate.add_argument('--sigma-x', type=float)
    simulate.add_argument('--sigma-e', type=float)
    simulate.add_argument('--sigma-y', type=float)
    simulate.add_argument('--slope', type=float)
    simulate.add_argument('--out-dir')

    fit = commands.add_parser('fit', help="sample the posterior of one method and save the draws")
    fit.add_argument('--data', help="training CSV, the configured one by default")
    fit.add_argument('--test', help="CSV of inputs at which to record function draws")
    fit.add_argument('--method', choices=[m.value for m in Method])
    fit.add_argument('--sigma-e', type=float, nargs='+', help="measurement-error scale(s) of the predictors")
    fit.add_argument('--out', help="draw container path")

    predict = commands.add_parser('predict', help="apply saved draws to new inputs")
    predict.add_argument('--draws', required=True)
    predict.add_argument('--data', required=True, help="CSV of new observed inputs")
    predict.add_argument('--level', type=float, default=0.95)
    predict.add_argument('--out', required=True)

    metrics = commands.add_parser('metrics', help="score saved draws against a simulated pair")
    metrics.add_argument('--draws', required=True)
    metrics.add_argument('--train', required=True)
    metrics.add_argument('--test', required=True)
    metrics.add_argument('--out', required=True)

    bench = commands.add_parser('bench', help="run the scenario x method x replicate grid")
    bench.add_argument('--replicates', type=int)
    bench.add_argument('--out-dir')

    trace = commands.add_parser('trace', help="export the sigma trace of saved draws")
    trace.add_argument('--draws', required=True)
    trace.add_argument('--out', required=True)
    return parser


def load_book(args: argparse.Namespace) -> ExperimentBook:
    return ConfigStore.load(args.config) if args.config else ConfigStore.current()


def load_experiment(args: argparse.Namespace) -> ExperimentConfig:
    config = load_book(args).get(args.experiment)
    if args.seed is not None:
        config = config.clone(seed=args.seed)
    return config


def print_config(config: ExperimentConfig) -> None:
    """
    The resolved experiment, plus the calibrated priors of each method when a dataset is configured.
    """
    out = {'experiment': config.to_json()}
    if config.data:
        data = apply_sigma_e(config, load_csv(config.data))
        outcome = resolve_outcome(config, data)
        out['hyperparams'] = {}
        for method in config.methods:
            hp, _ = prepare_fit(config, data, method, outcome, config.seed)
            out['hyperparams'][method.value] = asdict(hp)
    print(json.dumps(out, indent=2, default=str))


def cmd_simulate(args, config: ExperimentConfig) -> None:
    base = config.scenarios[0] if config.scenarios else ScenarioModel()
    flags = {'function': args.function, 'n_train': args.n_train, 'n_test': args.n_test, 'mu_x': args.mu_x,
             'sigma_x': args.sigma_x, 'sigma_e': args.sigma_e, 'sigma_y': args.sigma_y, 'slope': args.slope}
    fields = {**base.model_dump(), **{key: value for key, value in flags.items() if value is not None}}
    if args.function is not None and args.mu_x is None:
        # a new function gets its own default design
        fields.pop('mu_x')
    spec = ScenarioModel(**fields).specs(config.seed)[0]

    split = generate(spec)
    out_dir = Path(args.out_dir or config.output_dir)
    for name, part in (('train', split.train), ('test', split.test)):
        path = save_csv(part.to_observed(), out_dir / f"{name}.csv", scenario_to_meta(spec))
        logger.info("Wrote %d rows to %s", part.n, path)


def cmd_fit(args, config: ExperimentConfig) -> None:
    data_path = args.data or config.data
    if data_path is None:
        raise UsageError("No training data: pass --data or set 'data' in the configuration.")
    if args.sigma_e is not None:
        config = config.clone(sigma_e=args.sigma_e if len(args.sigma_e) > 1 else args.sigma_e[0])
    method = Method(args.method) if args.method else config.methods[0]
    data = apply_sigma_e(config, load_csv(data_path))
    test_path = args.test or config.test_data
    x_test = load_predictors(test_path, data.columns) if test_path else None

    draws = fit_dataset(config, data, method, x_test, workers=args.threads, progress=not args.quiet)
    out = Path(args.out or Path(config.output_dir) / f"draws_{method.value}.bin")
    persist_draws(draws, out, fit_record(config, method, data))
    logger.info("Wrote %d draws to %s", draws.n_draws, out)

    try:
        report = diagnostics(draws)
    except ValueError as e:
        logger.warning("Skipping diagnostics: %s", e)
        return
    with open(out.with_name(out.name + '.diagnostics.json'), 'w') as file:
        json.dump(report.as_dict(), file, indent=2)
    logger.info("Diagnostics: %s", report.as_dict())


def cmd_predict(args, config: ExperimentConfig) -> None:
    draws = load_draws(args.draws)
    columns = load_sidecar(args.draws).get('config', {}).get('columns')
    x = load_predictors(args.data, tuple(columns) if columns else None)
    summary = summarize_predictions(draws.predict(x), draws.outcome, draws.sigma,
                                    np.random.default_rng(config.seed), args.level)
    frame = pd.DataFrame({'row': np.arange(1, x.shape[0] + 1), **summary})
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(args.out, index=False, float_format='%.10g', lineterminator='\n')
    logger.info("Wrote predictions for %d rows to %s", x.shape[0], args.out)


def cmd_metrics(args, config: ExperimentConfig) -> None:
    draws = load_draws(args.draws)
    train, test = load_csv(args.train), load_csv(args.test)
    if not (test.has_oracle and train.x_true is not None):
        raise DataError("Metrics need the oracle columns written by 'simulate' in both files.")
    spec = scenario_from_meta(train.meta)
    report = score_draws(draws, train, test, spec, EvaluationLayout.for_scenario(spec, test.n))
    record = report.to_record(f"{spec.name}_se{spec.sigma_e:g}", draws.method.value, 0)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame([record], columns=list(WIDE_COLUMNS)).to_csv(args.out, index=False, float_format='%.10g',
                                                                lineterminator='\n')


def cmd_bench(args, config: ExperimentConfig) -> None:
    if args.replicates is not None and args.replicates < 1:
        raise UsageError(f"--replicates must be at least 1, got {args.replicates}.")
    result = run_bench(config, args.threads, args.replicates)
    for name, path in write_bench(result, args.out_dir or config.output_dir).items():
        logger.info("Wrote %s table to %s", name, path)


def cmd_trace(args, config: ExperimentConfig) -> None:
    frame = trace_frame(load_draws(args.draws))
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(args.out, index=False, float_format='%.10g', lineterminator='\n')


COMMANDS = {
    'simulate': cmd_simulate,
    'fit': cmd_fit,
    'predict': cmd_predict,
    'metrics': cmd_metrics,
    'bench': cmd_bench,
    'trace': cmd_trace,
}


def report_error(error: Exception, exit_code: int) -> int:
    print(json.dumps({'error': type(error).__name__, 'message': str(error), 'exit_code': exit_code}), file=sys.stderr)
    return exit_code


def main(argv: list[str] | None = None) -> int:
    """
    Run the command line.
    :param argv: arguments without the program name, sys.argv by default
    :return: process exit code
    """
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                            format='%(asctime)s %(levelname)s %(name)s: %(message)s', stream=sys.stderr)
        if args.threads < 1:
            raise UsageError(f"--threads must be at least 1, got {args.threads}.")
        if args.list_experiments:
            book = load_book(args)
            print(json.dumps({'config': book.name, 'experiments': book.experiment_names}, indent=2))
            return 0
        config = load_experiment(args)
        if args.print_config:
            print_config(config)
            return 0
        if args.command is None:
            raise UsageError("No command given; choose one of " + ', '.join(COMMANDS) + '.')
        COMMANDS[args.command](args, config)
    except MebartError as e:
        return report_error(e, e.exit_code)
    except ValueError as e:
        return report_error(e, 3)
    return 0


if __name__ == '__main__':
    sys.exit(main())
