from .report import (KEY_COLUMNS, LONG_COLUMNS, METRIC_NAMES, WIDE_COLUMNS, EvaluationLayout, MetricReport,
                     score_draws)
from .scores import coverage95, crps_function, crps_samples, ise, mse, reliability_ratio, x_rmse
