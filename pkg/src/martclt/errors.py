"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: configuration and domain errors
exit 2, data errors exit 3. Library code raises them directly so callers can
distinguish "you asked for something ill-posed" from "your input is broken".
"""

from __future__ import annotations


class MartcltError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(MartcltError, ValueError):
    """Invalid configuration or parameters (CLI exit code 2)."""


class DomainError(MartcltError, ValueError):
    """Mathematically ill-posed request, e.g. an argument outside the
    operation's domain (CLI exit code 2)."""


class DataError(MartcltError, ValueError):
    """Malformed or non-finite input data (CLI exit code 3)."""


class InvalidNFunctionError(DataError):
    """A gauge evaluated to NaN or a negative value where it must not."""
