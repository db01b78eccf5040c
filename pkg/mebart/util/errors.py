class MebartError(Exception):
    """
    Base class for errors surfaced to the command line.
    Each subclass carries the process exit code used by the CLI.
    """
    exit_code: int = 3


class UsageError(MebartError):
    exit_code = 1


class DataError(MebartError):
    exit_code = 2


class SamplerError(MebartError):
    exit_code = 3
