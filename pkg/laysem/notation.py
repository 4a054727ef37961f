"""Text syntax for sorts and values.

Sorts are written ``0|1|2|...|inf``, values as integers or ``p/q`` rationals, and
layered elements as ``<value>@<sort>``.
"""

from fractions import Fraction
from typing import Any

from laysem.errors import ParseError

INFINITY_TOKEN = "inf"


def format_value(value: Any) -> str:
    """Render a monoid value.

    Args:
        value: Fraction, int or sentinel symbol

    Returns:
        ``p`` for integral rationals, ``p/q`` otherwise
    """
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return str(value)


def format_sort(sort: Any) -> str:
    return str(sort)


def parse_fraction(text: str) -> Fraction:
    """Parse ``p``, ``-p`` or ``p/q`` into an exact rational.

    Raises:
        ParseError: If the text is not a rational literal
    """
    token = text.strip()
    if not token:
        raise ParseError("empty rational literal")
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"invalid rational literal {token!r}") from exc


def parse_positive_int(text: str, what: str) -> int:
    try:
        number = int(text.strip())
    except ValueError as exc:
        raise ParseError(f"{what} must be an integer, got {text!r}") from exc
    if number < 1:
        raise ParseError(f"{what} must be >= 1, got {number}")
    return number


def split_element(text: str) -> tuple[str, str]:
    """Split ``<value>@<sort>`` into its two tokens."""
    value, sep, sort = text.strip().partition("@")
    if not sep or not value.strip() or not sort.strip():
        raise ParseError(f"expected <value>@<sort>, got {text.strip()!r}")
    return value.strip(), sort.strip()
