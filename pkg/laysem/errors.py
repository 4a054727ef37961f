"""Exception hierarchy for laysem.

Law violations are never raised: they are FAIL entries of a CheckReport. The
exceptions below signal invalid inputs to constructions and parsers.
"""

from typing import Optional


class LaysemError(Exception):
    """Base class for every error raised by laysem."""


class ConfigError(LaysemError):
    """Invalid command-line flag or instance description."""


class ParseError(LaysemError):
    """Malformed element, expression, series or file content."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotEnumerableError(LaysemError):
    """An operation needs a finite carrier (or a cancellative declaration)."""


class IdealTooSmallError(LaysemError):
    """A supplied ideal omits a noncancellative product."""


class NotAnIdealError(LaysemError):
    """A subset is not closed under multiplication by the ambient carrier."""


class InvalidIdealError(LaysemError):
    """An ideal does not have the shape a quotient needs."""


class InvalidTransitionError(LaysemError):
    """A sort transition was requested outside 0 < sort(x) <= m."""


class InvalidThresholdError(LaysemError):
    """A truncation threshold is not above the identity."""


class AlreadyPointedError(LaysemError):
    """The semiring already has a zero layer or a zero element."""


class NotUniformError(LaysemError):
    """A whole zero layer needs an empty ideal over a totally ordered L."""


class NotDominatedError(LaysemError):
    """The first supervaluation does not dominate the second."""


class DomainMismatchError(LaysemError):
    """A map was applied outside its domain."""


class ZeroSeriesError(LaysemError):
    """The valuation is undefined at the zero series."""


class NotARootError(LaysemError):
    """A supplied root does not annihilate the polynomial."""
