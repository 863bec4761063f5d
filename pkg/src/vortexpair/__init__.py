"""Vortex-photon induced emission: biphoton TAM statistics and OAM coincidences."""

__version__ = "0.1.0"

from .errors import ConfigError, DomainError, NumericalError, RegimeWarning, ResolutionError

__all__ = [
    "__version__",
    "ConfigError",
    "DomainError",
    "NumericalError",
    "RegimeWarning",
    "ResolutionError",
]
