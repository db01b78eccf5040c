from enum import Enum

import numpy as np


class TrueFunction(Enum):
    INDICATOR = 'indicator'
    SIN = 'sin'
    COMBO = 'combo'
    STEP = 'step'
    FRIEDMAN = 'friedman'
    INDICATOR2D = 'indicator2d'
    LINEAR = 'linear'

    @property
    def p(self) -> int:
        return {TrueFunction.FRIEDMAN: 5, TrueFunction.INDICATOR2D: 2}.get(self, 1)


def _indicator(x):
    return np.where(x[:, 0] < 0, -1.0, 1.0)


def _sin(x):
    return np.sin(2 * np.pi * x[:, 0])


def _combo(x):
    return np.where(x[:, 0] < 0, np.cos(np.pi * x[:, 0]), -np.cos(np.pi * x[:, 0]))


def _step(x):
    a = np.abs(x[:, 0])
    return np.select([a > 5 / 8, a > 3 / 8, a > 1 / 8], [3.0, 2.0, 1.0], default=0.0)


def _friedman(x):
    return np.sin(np.pi * x[:, 0] * x[:, 1]) + 2 * (x[:, 2] - 0.5) ** 2 + x[:, 3] + 0.5 * x[:, 4]


def _indicator2d(x):
    return (x[:, 0] > 0).astype(float) + 2.0 * (x[:, 1] > 0)


_FUNCTIONS = {
    TrueFunction.INDICATOR: _indicator,
    TrueFunction.SIN: _sin,
    TrueFunction.COMBO: _combo,
    TrueFunction.STEP: _step,
    TrueFunction.FRIEDMAN: _friedman,
    TrueFunction.INDICATOR2D: _indicator2d,
}


def eval_true_function(kind: TrueFunction, x: np.ndarray, slope: float = 1.0):
    """
    Evaluate a benchmark regression function.
    :param kind: which function
    :param x: a single input of length p, or an (n, p) matrix
    :param slope: coefficient of the linear function, ignored otherwise
    :return: scalar for a single input, array otherwise
    :raises ValueError: when the input dimension does not match the function
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    rows = np.atleast_2d(x)
    if rows.shape[1] != kind.p:
        raise ValueError(f"Function '{kind.value}' takes {kind.p} input(s), got {rows.shape[1]}.")
    values = slope * rows[:, 0] if kind is TrueFunction.LINEAR else _FUNCTIONS[kind](rows)
    return float(values[0]) if single else values
