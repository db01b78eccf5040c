from enum import Enum


class Outcome(Enum):
    CONTINUOUS = 'continuous'
    PROBIT = 'probit'


class Method(Enum):
    BART = 'bart'
    MEBART = 'mebart'


class SigmaHat(Enum):
    """Source of the rough residual variance the sigma prior is calibrated against."""
    VARIANCE = 'variance'
    OLS = 'ols'
