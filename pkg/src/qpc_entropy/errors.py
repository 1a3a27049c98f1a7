"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class NumericalError(RuntimeError):
    """A numerical procedure failed to reach its tolerance.

    ``achieved`` carries the error estimate that was actually reached.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class DataIntegrityError(RuntimeError):
    """A computed quantity violates an invariant by more than round-off."""


class ConfigError(ValueError):
    """Invalid user-supplied configuration; ``field`` names the offending key."""

    def __init__(self, message, field=None):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field
