"""Exception hierarchy shared by all modules."""


class RelayError(Exception):
    """Base class for every error raised by relaydp."""


class ConfigError(RelayError, ValueError):
    pass


class NonPositiveParameter(ConfigError):
    pass


class TooFewRelays(ConfigError):
    pass


class ThresholdCountMismatch(ConfigError):
    pass


class ShapeMismatch(RelayError, ValueError):
    pass


class EmptyStateSpace(RelayError, ValueError):
    pass


class BudgetExceeded(RelayError):
    pass


class InfeasibleResidual(RelayError):
    pass
