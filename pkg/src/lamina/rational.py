"""Small helpers for exact rational input and output."""
from fractions import Fraction


def frac(value):
    """Coerce ints, strings like "3/7" and Fractions to a Fraction.

    Floats are rejected so that nothing inexact sneaks into the exact core.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {value!r}")


def fstr(value):
    """Render a Fraction as "p/q" (or "p" when integral)."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
