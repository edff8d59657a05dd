"""Exception types raised by the library."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the domain of a function (e.g. r = 0)."""


class QuadratureError(RuntimeError):
    """The semi-infinite quadrature failed to converge or hit a NaN."""

    def __init__(self, message, estimates=None, xi=None):
        super().__init__(message)
        self.estimates = estimates
        self.xi = xi


class PerturbativeValidityError(RuntimeError):
    """Self-energy or mixing too large for first-order dressing."""

    def __init__(self, message, pair=None, value=None):
        super().__init__(message)
        self.pair = pair
        self.value = value


class ConvergenceError(RuntimeError):
    """The self-consistent iteration did not converge within max_iter."""

    def __init__(self, message, history=None, result=None):
        super().__init__(message)
        self.history = list(history or [])
        self.result = result


class ConfigError(ValueError):
    """Malformed or invalid configuration document."""

    def __init__(self, message, location=None):
        if location:
            message = f"{location}: {message}"
        super().__init__(message)
        self.location = location
