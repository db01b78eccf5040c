from .calibration import (build_hyperparams, calibrate_lambda, estimate_sigma2_hat, lambda_from_sigma2,
                          latent_prior_moments)
from .conjugate import leaf_posterior, log_latent_x_prior, sample_leaf_values, sample_sigma2
from .hyperparams import HyperParams
from .scaler import YScaler
from .tree_prior import log_grow_prior_ratio, log_tree_structure_prior, split_probability
