import numpy as np
from scipy import stats

from mebart.util import Outcome


def summarize_predictions(f_draws: np.ndarray, outcome: Outcome = Outcome.CONTINUOUS, sigma: np.ndarray | None = None,
                          rng: np.random.Generator | None = None, level: float = 0.95) -> dict[str, np.ndarray]:
    """
    Pointwise posterior summaries of function draws.
    Continuous outcomes get the posterior mean, the credible interval of the mean function and,
    when sigma draws are given, the posterior predictive interval (each function draw plus its
    own N(0, sigma^2) noise). Probit outcomes get the mean probability and its credible interval.
    :param f_draws: (k, n) function draws in response units, or on the probit scale
    :param outcome: how to read the draws
    :param sigma: (k,) noise standard deviation draws
    :param rng: generator for the predictive noise
    :param level: interval probability
    :return: column name -> (n,) array
    """
    if not 0 < level < 1:
        raise ValueError(f"level must lie in (0, 1), got {level}.")
    tails = [(1 - level) / 2, (1 + level) / 2]

    if outcome is Outcome.PROBIT:
        prob = stats.norm.cdf(f_draws)
        lower, upper = np.quantile(prob, tails, axis=0)
        return {'prob_mean': prob.mean(axis=0), 'prob_lower': lower, 'prob_upper': upper}

    lower, upper = np.quantile(f_draws, tails, axis=0)
    summary = {'mean': f_draws.mean(axis=0), 'lower': lower, 'upper': upper}
    if sigma is not None:
        rng = np.random.default_rng() if rng is None else rng
        noisy = f_draws + sigma[:, None] * rng.standard_normal(f_draws.shape)
        summary['pred_lower'], summary['pred_upper'] = np.quantile(noisy, tails, axis=0)
    return summary
