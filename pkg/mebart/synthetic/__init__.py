from .functions import TrueFunction, eval_true_function
from .scenario import ScenarioSpec, SyntheticDataset, SyntheticSplit, generate
