"""Exception hierarchy shared by the library and the command line.

The CLI maps these classes onto exit codes: invalid input and domain
problems exit with 2, assumption failures with 3 and internal consistency
failures with 4.
"""

from __future__ import annotations

from typing import Optional, Sequence


class ModelError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(ModelError, ValueError):
    """Input is malformed: non-finite numbers, wrong types, bad files."""


class DomainError(ModelError, ValueError):
    """A numeric argument lies outside the domain of a function."""


class ConfigurationError(ModelError, ValueError):
    """Options that cannot be combined or are out of range for a mode."""


class MarketValidityError(InvalidInputError):
    """Market primitives fall outside the region where the closed forms hold."""


class PreconditionError(ModelError):
    """An operation was called on inputs that fail its documented precondition."""


class AssumptionViolation(ModelError):
    """One or more modelling assumptions fail for the supplied inputs.

    Attributes:
        codes: Short identifiers of the failed assumptions, e.g. ``"A2"``.
        bound: The numeric bound that was violated, when there is one.
    """

    def __init__(self, message: str, codes: Sequence[str] = (), bound: Optional[float] = None):
        super().__init__(message)
        self.codes = tuple(codes)
        self.bound = bound


class InvariantViolation(ModelError):
    """An internal self-check failed. This always indicates a bug."""
