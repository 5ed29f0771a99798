"""
Exception hierarchy for fadeber.

Every precondition failure raises ``InvalidParameterError`` (also a ``ValueError``), so
callers that only know the standard library can still catch it.
"""

from typing import Any, Optional


class FadeberError(Exception):
    """Base exception for fadeber operations."""
    pass


class InvalidParameterError(FadeberError, ValueError):
    """Exception raised when an argument violates an operation's preconditions."""
    pass


class DomainMismatchError(InvalidParameterError):
    """Exception raised when decibel and linear SNR values are mixed."""
    pass


class ConfigurationError(FadeberError):
    """Exception raised when a settings file cannot be loaded or validated."""
    pass


class ConvergenceError(FadeberError):
    """
    Exception raised when an iterative computation exhausts its budget.

    Attributes:
        result: Best estimate available when the computation stopped
    """

    def __init__(self, message: str, result: Optional[Any] = None):
        super().__init__(message)
        self.result = result
