"""Exception hierarchy shared by the library and the command line."""


class CMCGKError(Exception):
    """Base class for all errors raised by cmcgk."""


class DomainError(CMCGKError, ValueError):
    """A point or value lies outside the domain where a formula is defined."""


class DegenerateInputError(CMCGKError, ValueError):
    """Input data violates a non-degeneracy requirement (e.g. antiholomorphic g)."""


class NumericalAbort(CMCGKError, RuntimeError):
    """A numerical procedure stopped before completion.

    ``partial`` carries whatever was computed before the abort, ``node`` the
    first offending grid node when one is known.
    """

    def __init__(self, message, node=None, partial=None, detail=None):
        super().__init__(message)
        self.node = node
        self.partial = partial
        self.detail = detail or {}


class DomainGuardAbort(NumericalAbort):
    """The reconstruction left the admissible disk 1 - c^2|zeta|^2 > guard."""


class IntegrationToleranceError(NumericalAbort):
    """Adaptive quadrature did not reach its requested accuracy."""


class ConfigError(CMCGKError, ValueError):
    """Invalid scene configuration."""
