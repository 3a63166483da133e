from __future__ import annotations

from fractions import Fraction
from numbers import Rational


def to_fraction(value) -> Fraction:
    """Exact conversion; strings may be ``"p/q"``, ``"p"`` or a finite decimal."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        # floats only come from user shorthand such as 0.5; keep the exact
        # short decimal rather than the binary expansion
        return Fraction(repr(value))
    raise TypeError(f"cannot interpret {value!r} as a rational")


def fmt(value: Fraction | int) -> str:
    return str(Fraction(value))


def frac_part(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def is_integral(x: Fraction) -> bool:
    return Fraction(x).denominator == 1
