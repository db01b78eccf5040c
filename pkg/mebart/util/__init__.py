from .errors import DataError, MebartError, SamplerError, UsageError
from .modes import Method, Outcome, SigmaHat
from .seeding import stream_seed
