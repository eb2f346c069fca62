"""Exception hierarchy. ``exit_code`` is what the CLI returns for each family."""


class IdrError(Exception):
    exit_code = 1


class ConfigError(IdrError):
    exit_code = 2


class DataError(IdrError):
    exit_code = 3


class NumericError(IdrError):
    exit_code = 4


class UndefinedMetricError(NumericError):
    """A metric has no value on this input (zero variance, no triads, ...)."""


class DisconnectedError(NumericError):
    pass
