"""Exception types shared across the toolkit."""


class RecbenchError(Exception):
    """Base class for all recbench errors."""


class ParseError(RecbenchError):
    """A dataset file contains a malformed line."""

    def __init__(self, path, line_number, message):
        self.path = str(path)
        self.line_number = line_number
        super().__init__(f"{self.path}:{line_number}: {message}")


class EmptyDatasetError(RecbenchError):
    """The input file contains no interactions."""


class EmptyAfterFilterError(RecbenchError):
    """Core filtering removed every user or item."""


class DimensionMismatchError(RecbenchError):
    """Two matrices that must share a shape do not."""


class LeakedSplitError(RecbenchError):
    """A split that must be disjoint has train/test overlap."""


class ResourceLimitError(RecbenchError):
    """A model refused to fit because a configured resource cap was exceeded."""


class TuningError(RecbenchError):
    """Every trial of a tuning run failed."""

    def __init__(self, message, failures=()):
        self.failures = list(failures)
        super().__init__(message)


class ConfigError(RecbenchError):
    """An experiment configuration file is invalid."""
