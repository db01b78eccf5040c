import numpy as np


def stream_seed(seed: int, *keys: int) -> np.random.SeedSequence:
    """
    Seed sequence addressed by a path of integer keys, e.g. (replicate, method, chain).
    """
    return np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in keys))
