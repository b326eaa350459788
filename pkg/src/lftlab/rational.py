"""Exact rational helpers.

All core computations run on ``fractions.Fraction`` so that optimizer
selection, which compares gradients against dual points with a half-open
rule, never suffers rounding. Serialized documents write rationals as
"p/q" strings; floats are accepted only where a caller explicitly opts
into the float mode (see ``FLOAT_ABS_TOL``).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Rational = Union[Fraction, int]
Number = Union[Fraction, int, float]

# Absolute tolerance used by the float mode when validating convexity of
# float-valued samples. Exact (Fraction/int) inputs are validated at 0.
FLOAT_ABS_TOL = 1e-9


def frac(value: Number | str) -> Fraction:
    """Coerce to an exact Fraction. Strings use the "p/q" wire form."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, float):
        # exact binary expansion; callers wanting decimal semantics should
        # pass a string instead
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_rational(value: Number) -> str:
    """Render a rational as "p/q" (or "p" for integers)."""
    f = value if isinstance(value, Fraction) else Fraction(value)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def is_exact(value: Number) -> bool:
    return isinstance(value, (int, Fraction))
