"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class NumericalError(RuntimeError):
    """A numerical procedure failed to reach its target accuracy.

    ``trace`` carries whatever diagnostics the failing routine collected
    (refinement history, offending nodes, ...).
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = list(trace) if trace is not None else []


class ResolutionError(NumericalError):
    """A discretisation grid is too coarse for the requested observable."""


class ConfigError(ValueError):
    """Invalid run configuration (bad value, unknown key, missing preset)."""


class RegimeWarning(UserWarning):
    """An approximation is used outside the regime where it was derived."""
