"""Dedekind sums s(h, k) as exact rationals.

Two evaluations are provided: the O(k) defining sum, kept as a reference,
and an O(log k) Euclidean descent built on the reciprocity law

    s(h, k) + s(k, h) = -1/4 + (h/k + k/h + 1/(hk)) / 12.

Unrolling the descent along the continued fraction of k/h telescopes into
an integer formula for 12k*s(h, k), which is what the exponential-sum code
consumes (it never needs to build a Fraction).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

__all__ = [
    "dedekind_sum_def",
    "dedekind_sum_fast",
    "dedekind_sum_12k",
    "dedekind_sum_reciprocity",
]


def _check_args(h: int, k: int) -> None:
    if k <= 0:
        raise ValueError(f"k must be a positive integer, got {k}")
    if h < 0:
        raise ValueError(f"h must be nonnegative, got {h}")
    if gcd(h, k) != 1:
        raise ValueError(f"gcd({h}, {k}) != 1")


def dedekind_sum_def(h: int, k: int) -> Fraction:
    """s(h, k) straight from the defining sum over j = 1..k-1."""
    _check_args(h, k)
    # sum_j j*({hj/k} - 1/2)/k  ==  sum_j (2j*(hj mod k) - jk) / (2k^2)
    total = 0
    for j in range(1, k):
        total += 2 * j * ((h * j) % k) - j * k
    return Fraction(total, 2 * k * k)


def dedekind_sum_12k(h: int, k: int) -> int:
    """Return the integer 12*k*s(h, k) in O(log k) integer operations.

    With k/h = [a_1; a_2, ..., a_r] (h reduced mod k) and h' = h^{-1} mod k,

        12k s(h, k) = h + h' + k * (a_1 - a_2 + ... +- a_r - e_r)

    where e_r = 3 for odd r and 1 for even r. s(0, 1) = 0.
    """
    _check_args(h, k)
    if k == 1:
        return 0
    h %= k
    alt = 0
    sign = 1
    steps = 0
    a, b = k, h
    while b:
        q, r = divmod(a, b)
        alt += sign * q
        sign = -sign
        steps += 1
        a, b = b, r
    correction = 3 if steps & 1 else 1
    return h + pow(h, -1, k) + k * (alt - correction)


def dedekind_sum_fast(h: int, k: int) -> Fraction:
    """s(h, k) by reciprocity descent; agrees exactly with dedekind_sum_def."""
    return Fraction(dedekind_sum_12k(h, k), 12 * k)


def dedekind_sum_reciprocity(h: int, k: int) -> Fraction:
    """The right-hand side -1/4 + (h/k + k/h + 1/(hk))/12 of the reciprocity law."""
    if h <= 0 or k <= 0:
        raise ValueError("reciprocity needs h, k >= 1")
    return Fraction(-1, 4) + (Fraction(h, k) + Fraction(k, h) + Fraction(1, h * k)) / 12
