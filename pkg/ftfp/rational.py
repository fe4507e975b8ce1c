"""Exact rational helpers for file formats.

Rationals travel as decimal-integer or "p/q" strings so that values
survive a save/load cycle bit-exactly.

Functions
---------
parse_rational(value)
    convert an int or string to Fraction
format_rational(value)
    convert a Fraction to its canonical string
floor_int(value)
    integer floor of a Fraction
"""

# Standard imports
from fractions import Fraction
import math

# Local imports
from ftfp.errors import InputError

ZERO = Fraction(0)
ONE = Fraction(1)


def parse_rational(value):
    """Parse an int, Fraction or rational string into a Fraction.

    Floats are refused: they would smuggle binary rounding into exact data.
    """

    if isinstance(value, bool) or isinstance(value, float):
        raise InputError(f"expected an integer or 'p/q' string, got {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"not a rational number: {value!r}")
    raise InputError(f"expected an integer or 'p/q' string, got {value!r}")


def format_rational(value):
    """Return "p/q" (or "p" for integers) for a Fraction."""

    return str(Fraction(value))


def floor_int(value):
    """Return floor(value) as a Python int."""

    return math.floor(Fraction(value))
