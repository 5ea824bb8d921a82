"""
Exception hierarchy for the RIS two-way beamforming toolkit.
"""
from typing import Any, Optional


class RisError(Exception):
    """Base class for all errors raised by the toolkit."""


class DimensionError(RisError, ValueError):
    """Vector or matrix shapes do not agree."""


class DomainError(RisError, ValueError):
    """An argument lies outside the domain of an operation."""


class GeometryError(RisError, ValueError):
    """Node positions do not define a valid link (e.g. coincident nodes)."""


class ConfigError(RisError):
    """A scenario file or override could not be loaded or validated."""


class ZeroChannelError(RisError):
    """The effective BS-side channel vanishes, so MRT/MRC is undefined."""


class RetractionDegenerateError(RisError):
    """An element of b + alpha*d collapsed to zero during retraction."""


class LineSearchFailure(RisError):
    """No Armijo step above the minimum step size gave sufficient increase."""


class NumericalFailure(RisError):
    """
    The objective or its gradient became non-finite during optimization.

    The partial trace is attached so callers can inspect how far the run got.
    """

    def __init__(self, message: str, trace: Optional[Any] = None):
        super().__init__(message)
        self.trace = trace
