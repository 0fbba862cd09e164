"""Exception types shared across the package."""


class LuccsimError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(LuccsimError):
    """Invalid scenario configuration, parameter table, or input file."""


class MetricUndefinedError(LuccsimError):
    """A goodness-of-fit statistic is undefined for the given series."""
