from __future__ import annotations
from datetime import datetime, timezone
import hashlib
import json
import math
from pathlib import Path

import numpy as np
import pandas as pd

from mebart.core import ForestTrace, PosteriorDraws
from mebart.core.draws import TREE_FIELDS
from mebart.util import DataError, Method, Outcome

MAGIC = b'MEBART-DRAWS\n'
FORMAT_VERSION = 1
ARRAY_FIELDS = ('chain', 'train_f', 'test_f', 'sigma', 'sigma_trace', 'latent_x', 'accepted', 'proposed')
TRACE_COLUMNS = ('chain', 'iteration', 'sigma', 'burn_in')


def config_hash(config: dict) -> str:
    return hashlib.sha256(json.dumps(config, sort_keys=True, default=str).encode()).hexdigest()


def sidecar_path(path: str | Path) -> Path:
    path = Path(path)
    return path.with_name(path.name + '.json')


def _blocks(draws: PosteriorDraws) -> dict[str, np.ndarray]:
    blocks = {name: getattr(draws, name) for name in ARRAY_FIELDS if getattr(draws, name) is not None}
    if draws.forest is not None:
        blocks.update({f"forest_{name}": getattr(draws.forest, name) for name in TREE_FIELDS})
        blocks['forest_offsets'] = draws.forest.offsets
    return blocks


def persist_draws(draws: PosteriorDraws, path: str | Path, config: dict | None = None) -> Path:
    """
    Write draws to a versioned binary container plus a JSON sidecar.
    The container holds a magic line, a one-line JSON header describing every block, then the
    blocks as raw column-major bytes. It depends only on the draws, so runs with the same seed and
    config produce byte-identical files; timestamps and versions live in the sidecar.
    :param draws: draws to save
    :param path: container path, the sidecar is written next to it with a `.json` suffix
    :param config: experiment configuration recorded in the sidecar
    :return: the container path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    blocks = _blocks(draws)
    entries, offset = [], 0
    for name, array in blocks.items():
        nbytes = array.nbytes
        entries.append({'name': name, 'dtype': array.dtype.str, 'shape': list(array.shape),
                        'offset': offset, 'nbytes': nbytes})
        offset += nbytes
    header = {
        'version': FORMAT_VERSION,
        'method': draws.method.value,
        'outcome': draws.outcome.value,
        'y_min': None if math.isnan(draws.y_min) else draws.y_min,
        'y_max': None if math.isnan(draws.y_max) else draws.y_max,
        'n_burn': draws.n_burn,
        'thin': draws.thin,
        'seed': draws.seed,
        'm': draws.forest.m if draws.forest is not None else None,
        'blocks': entries,
    }
    with open(path, 'wb') as file:
        file.write(MAGIC)
        file.write(json.dumps(header, sort_keys=True).encode() + b'\n')
        for array in blocks.values():
            file.write(np.asarray(array).tobytes(order='F'))

    config = config or {}
    sidecar = {
        'format_version': FORMAT_VERSION,
        'config': config,
        'config_hash': config_hash(config),
        'seed': draws.seed,
        'provenance': {
            'created': datetime.now(timezone.utc).isoformat(),
            'numpy': np.__version__,
            'container': path.name,
        },
    }
    with open(sidecar_path(path), 'w') as file:
        json.dump(sidecar, file, indent=2, sort_keys=True, default=str)
    return path


def load_draws(path: str | Path) -> PosteriorDraws:
    """
    Read a container written by :func:`persist_draws`.
    :raises DataError: when the file is not a draw container or has an unknown version
    """
    with open(path, 'rb') as file:
        if file.readline() != MAGIC:
            raise DataError(f"{path} is not a draw container.")
        header = json.loads(file.readline())
        payload = file.read()
    if header.get('version') != FORMAT_VERSION:
        raise DataError(f"{path}: unsupported container version {header.get('version')}.")

    arrays = {}
    for entry in header['blocks']:
        raw = payload[entry['offset']:entry['offset'] + entry['nbytes']]
        arrays[entry['name']] = np.frombuffer(raw, dtype=np.dtype(entry['dtype'])).reshape(entry['shape'], order='F').copy()

    forest = None
    if 'forest_offsets' in arrays:
        forest = ForestTrace(header['m'], offsets=arrays['forest_offsets'],
                             **{name: arrays[f"forest_{name}"] for name in TREE_FIELDS})
    return PosteriorDraws(
        method=Method(header['method']),
        outcome=Outcome(header['outcome']),
        forest=forest,
        y_min=float('nan') if header['y_min'] is None else header['y_min'],
        y_max=float('nan') if header['y_max'] is None else header['y_max'],
        n_burn=header['n_burn'],
        thin=header['thin'],
        seed=header['seed'],
        **{name: arrays.get(name) for name in ARRAY_FIELDS},
    )


def load_sidecar(path: str | Path) -> dict:
    with open(sidecar_path(path)) as file:
        return json.load(file)


def trace_frame(draws: PosteriorDraws) -> pd.DataFrame:
    """
    Every sigma draw of every chain, burn-in included and flagged, iterations counted from 1.
    :raises DataError: for probit fits, which have no sigma
    """
    if draws.sigma_trace is None:
        raise DataError("These draws have no sigma trace (probit outcome).")
    n_chains, n_iter = draws.sigma_trace.shape
    iteration = np.tile(np.arange(1, n_iter + 1), n_chains)
    return pd.DataFrame({
        'chain': np.repeat(np.arange(n_chains), n_iter),
        'iteration': iteration,
        'sigma': draws.sigma_trace.ravel(),
        'burn_in': (iteration <= draws.n_burn).astype(int),
    }, columns=list(TRACE_COLUMNS))
