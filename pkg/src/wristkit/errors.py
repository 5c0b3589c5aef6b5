"""Error taxonomy shared across the toolkit.

The CLI maps these onto its exit-code contract: usage problems exit 1,
data problems exit 2, configuration problems exit 3.
"""


class DomainError(ValueError):
    """An input violates a physical or mathematical precondition."""


class DataError(Exception):
    """A data file is malformed, empty, or otherwise unusable."""


class TrialRejected(DataError):
    """A trial log failed a quality threshold and was excluded.

    Attributes
    ----------
    fraction : float
        Fraction of samples that would need repair.
    """

    def __init__(self, message: str, fraction: float):
        super().__init__(message)
        self.fraction = fraction


class ConfigError(Exception):
    """A configuration file is missing, malformed, or inconsistent."""
