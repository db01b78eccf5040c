from .dataset import MIN_FIT_ROWS, ObservedDataset
