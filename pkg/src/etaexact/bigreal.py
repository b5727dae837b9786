"""Arbitrary-precision real carrier shared by the numeric modules."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mpf

__all__ = ["BigReal", "mpf_to_fraction"]


@dataclass(frozen=True)
class BigReal:
    """An mpmath real tagged with the precision (bits) it was computed at.

    ``rigorous`` is True only when the producer guarantees the stated
    precision (e.g. an interval endpoint), otherwise the value is a
    heuristic floating approximation.
    """

    value: mpf
    precision_bits: int
    rigorous: bool = False

    def __float__(self) -> float:
        return float(self.value)

    def __str__(self) -> str:
        digits = max(1, int(self.precision_bits * 0.30103))
        return mpmath.nstr(self.value, digits)

    def decimal(self, digits: int = 30) -> str:
        return mpmath.nstr(self.value, digits)


def mpf_to_fraction(x: mpf) -> Fraction:
    """Exact rational value of a finite mpf."""
    man, exp = mpmath.mpf(x).man_exp
    man = int(man)
    exp = int(exp)
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)
