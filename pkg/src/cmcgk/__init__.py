"""Gauss map and Weierstrass-type representation of critical CMC surfaces in E(kappa, tau)."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    CMCGKError,
    ConfigError,
    DegenerateInputError,
    DomainError,
    DomainGuardAbort,
    IntegrationToleranceError,
    NumericalAbort,
)
from .model import ModelParams  # noqa: E402

__all__ = [
    "__version__",
    "ModelParams",
    "CMCGKError",
    "ConfigError",
    "DegenerateInputError",
    "DomainError",
    "DomainGuardAbort",
    "IntegrationToleranceError",
    "NumericalAbort",
]
