from .assignment import NodeAssignment
from .cutpoints import CutpointGrid
from .marginal import leaf_log_evidence, log_marginal_likelihood
from .moves import MoveKind, TreeMove, apply_move, propose_move
from .tree import Tree, evaluate_ensemble, evaluate_tree, predict_ensemble
