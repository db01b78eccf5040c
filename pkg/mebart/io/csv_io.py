from __future__ import annotations
import json
from pathlib import Path

import numpy as np
import pandas as pd

from mebart.data import ObservedDataset
from mebart.util import DataError

RESPONSE = 'y'
ORACLE_PREFIX = 'oracle_'
ORACLE_F = 'oracle_f'
SIGMA_E_TAG = '#sigma_e:'
SCENARIO_TAG = '#scenario:'


def _parse_header(lines: list[str]) -> dict:
    header = {}
    for line in lines:
        if line.startswith(SIGMA_E_TAG):
            text = line[len(SIGMA_E_TAG):].strip()
            try:
                header['sigma_e'] = np.array([float(v) for v in text.replace(',', ' ').split()])
            except ValueError as e:
                raise DataError(f"Cannot read sigma_e header '{text}'.") from e
        elif line.startswith(SCENARIO_TAG):
            text = line[len(SCENARIO_TAG):].strip()
            try:
                header['scenario'] = json.loads(text)
            except json.JSONDecodeError as e:
                raise DataError(f"Cannot read scenario header '{text}': {e.msg}.") from e
    return header


def _numeric_column(frame: pd.DataFrame, column: str) -> np.ndarray:
    cells = frame[column].to_numpy(dtype=str)
    for row, cell in enumerate(cells):
        if not cell.strip():
            raise DataError(f"Missing value at row {row + 1}, column '{column}'.")
    try:
        return np.array([float(cell) for cell in cells])
    except ValueError:
        for row, cell in enumerate(cells):
            try:
                float(cell)
            except ValueError:
                raise DataError(f"Non-numeric value '{cell}' at row {row + 1}, column '{column}'.") from None
        raise


def load_csv(path: str | Path, sigma_e=None, require_sigma_e: bool = False) -> ObservedDataset:
    """
    Read a dataset. The header row names the columns; the response column is `y`, columns
    prefixed `oracle_` hold ground truth (`oracle_<name>` true predictors, `oracle_f` true
    function values) and every other column is a noisy predictor.
    Measurement-error scales come from `sigma_e` when given, else from a `#sigma_e:` comment line.
    :param path: CSV file
    :param sigma_e: scalar or one value per predictor
    :param require_sigma_e: raise when no measurement-error scale is available
    :raises DataError: on missing or non-numeric cells, naming row and column
    """
    path = Path(path)
    with open(path) as file:
        comments = [line.strip() for line in file if line.startswith('#')]
    header = _parse_header(comments)

    frame = pd.read_csv(path, comment='#', dtype=str, keep_default_na=False, skipinitialspace=True).fillna('')
    if RESPONSE not in frame.columns:
        raise DataError(f"{path}: no '{RESPONSE}' column among {list(frame.columns)}.")

    predictors = [c for c in frame.columns if c != RESPONSE and not c.startswith(ORACLE_PREFIX)]
    if not predictors:
        raise DataError(f"{path}: no predictor column.")
    x_star = np.column_stack([_numeric_column(frame, c) for c in predictors])
    y = _numeric_column(frame, RESPONSE)

    x_true = f_true = None
    oracle_x = [f"{ORACLE_PREFIX}{c}" for c in predictors]
    if all(c in frame.columns for c in oracle_x):
        x_true = np.column_stack([_numeric_column(frame, c) for c in oracle_x])
    if ORACLE_F in frame.columns:
        f_true = _numeric_column(frame, ORACLE_F)

    sigma_e = header.get('sigma_e') if sigma_e is None else sigma_e
    if sigma_e is None and require_sigma_e:
        raise DataError(f"{path}: measurement-error scales are required; pass sigma_e or add a "
                        f"'{SIGMA_E_TAG}' line.")
    if sigma_e is not None and np.size(sigma_e) not in (1, len(predictors)):
        raise DataError(f"{path}: {np.size(sigma_e)} sigma_e values for {len(predictors)} predictors.")

    meta = {'source': str(path)}
    if 'scenario' in header:
        meta['scenario'] = header['scenario']
    return ObservedDataset(x_star, y, sigma_e, tuple(predictors), x_true, f_true, meta)


def load_predictors(path: str | Path, columns: tuple[str, ...] | None = None) -> np.ndarray:
    """
    Read only the noisy predictor columns of a file, e.g. new inputs to predict at.
    The response and oracle columns are optional and ignored.
    :param columns: predictor names to read in this order; every non-response column when omitted
    """
    frame = pd.read_csv(path, comment='#', dtype=str, keep_default_na=False, skipinitialspace=True).fillna('')
    if columns is None:
        columns = tuple(c for c in frame.columns if c != RESPONSE and not c.startswith(ORACLE_PREFIX))
    missing = [c for c in columns if c not in frame.columns]
    if missing:
        raise DataError(f"{path}: missing predictor column(s) {missing}.")
    if not columns:
        raise DataError(f"{path}: no predictor column.")
    return np.column_stack([_numeric_column(frame, c) for c in columns])


def save_csv(dataset: ObservedDataset, path: str | Path, scenario: dict | None = None) -> Path:
    """
    Write a dataset in the format read by :func:`load_csv`, at full float precision.
    :param scenario: description of the generating scenario, stored as a comment line
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    columns = {name: dataset.x_star[:, j] for j, name in enumerate(dataset.columns)}
    columns[RESPONSE] = dataset.y
    if dataset.x_true is not None:
        columns.update({f"{ORACLE_PREFIX}{name}": dataset.x_true[:, j] for j, name in enumerate(dataset.columns)})
    if dataset.f_true is not None:
        columns[ORACLE_F] = dataset.f_true

    with open(path, 'w', newline='') as file:
        if dataset.sigma_e is not None:
            file.write(f"{SIGMA_E_TAG} {','.join(repr(float(v)) for v in dataset.sigma_e)}\n")
        if scenario is not None:
            file.write(f"{SCENARIO_TAG} {json.dumps(scenario, sort_keys=True)}\n")
        pd.DataFrame(columns).to_csv(file, index=False, float_format='%.17g', lineterminator='\n')
    return path
