"""Exception hierarchy shared by every mmdlab module."""

from __future__ import annotations


class MmdLabError(Exception):
    """Base class for library errors."""


class ArgumentError(MmdLabError, ValueError):
    """Raised when an operation receives arguments it cannot work with."""


class ConfigurationError(MmdLabError, ValueError):
    """Raised when a configuration is invalid or makes a bound infeasible."""


class ConsistencyError(MmdLabError, RuntimeError):
    """Raised when a numerical result violates an internal invariant."""


__all__ = ["MmdLabError", "ArgumentError", "ConfigurationError", "ConsistencyError"]
