"""Exception types raised across the package."""

from __future__ import annotations


class SpinTomoError(Exception):
    """Base class for all package errors."""


class DimensionError(SpinTomoError, ValueError):
    """Matrix or vector sizes do not agree with the declared spins."""


class ValidationError(SpinTomoError, ValueError):
    """A candidate density matrix or probability vector is invalid.

    ``report`` holds the structured list of violations when available.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ZeroProbabilityError(SpinTomoError, ValueError):
    """Conditioning on an outcome whose marginal probability vanishes."""


class QuadratureError(SpinTomoError, ValueError):
    """Quadrature request is invalid or too large."""


class ReconstructionError(SpinTomoError, RuntimeError):
    """Tomogram samples fed to the inverse map are unusable."""
