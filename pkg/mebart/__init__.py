from .util import *
from .ensemble import *
from .priors import *
from .latent import *
from .data import *
from .core import *
from .synthetic import *
from .metrics import *
from .io import *

__version__ = '0.1.0'
