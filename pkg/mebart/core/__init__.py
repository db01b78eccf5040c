from .chains_manager import ChainJob, ChainsManager, fit_chains
from .config import SamplerConfig
from .diagnostics import (DiagnosticsReport, diagnostics, effective_sample_size, potential_scale_reduction,
                          split_drift)
from .draws import ForestTrace, PosteriorDraws
from .probit import sample_probit_latents
from .sampler import ChainSampler, run_chain, run_probit_chain
from .summary import summarize_predictions
