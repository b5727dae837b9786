"""Gamma at half-integers and the modified Bessel function I_nu.

I_nu is evaluated from its power series

    I_nu(s) = sum_m (s/2)^(nu+2m) / (m! Gamma(nu+m+1)),

whose terms are all positive for s >= 0, so the truncation rule below gives a
rigorous relative bound. The large-s expansion

    I_nu(s) ~ e^s / sqrt(2 pi s) * sum_m (-1)^m d_m(nu) / s^m

is divergent and is exposed only for asymptotic work and cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
from mpmath import mpf

from .bigreal import BigReal

__all__ = [
    "BesselOrder",
    "gamma_half",
    "bessel_I_series",
    "bessel_I_asymptotic",
    "asymptotic_coefficient",
    "bessel_I_float",
    "bessel_I_upper_bound",
    "gamma_ctx",
]


@dataclass(frozen=True)
class BesselOrder:
    """Order nu held as the integer 2*nu, so half-integers stay exact."""

    two_nu: int

    def __post_init__(self):
        if self.two_nu < 0:
            raise ValueError(f"negative Bessel order nu={Fraction(self.two_nu, 2)}")

    @classmethod
    def of(cls, nu: "BesselOrder | int | Fraction | str") -> "BesselOrder":
        if isinstance(nu, BesselOrder):
            return nu
        q = Fraction(nu)
        if (2 * q).denominator != 1:
            raise ValueError(f"order {nu} is not an integer or half-integer")
        return cls(int(2 * q))

    @property
    def nu(self) -> Fraction:
        return Fraction(self.two_nu, 2)

    def mpf(self) -> mpf:
        return mpf(self.two_nu) / 2


def _half_integer(z) -> Fraction:
    q = Fraction(z)
    if q <= 0 or (2 * q).denominator != 1:
        raise ValueError(f"gamma_half needs a positive integer or half-integer, got {z}")
    return q


def gamma_ctx(z: Fraction, ctx=mpmath.mp):
    """Gamma at a positive (half-)integer in ``ctx`` at the caller's precision."""
    if z.denominator == 1:
        return ctx.mpf(math.factorial(int(z) - 1))
    # Gamma(j + 1/2) = (2j)! sqrt(pi) / (4^j j!)
    j = int(z - Fraction(1, 2))
    num = math.factorial(2 * j)
    den = 4**j * math.factorial(j)
    return ctx.mpf(num) / den * ctx.sqrt(ctx.pi)


def gamma_half(z, precision_bits: int = 53) -> BigReal:
    """Gamma(z) for z in {1/2, 1, 3/2, 2, ...}.

    Built from Gamma(1/2) = sqrt(pi), Gamma(1) = 1 and Gamma(z+1) = z Gamma(z).
    """
    q = _half_integer(z)
    with mpmath.workprec(precision_bits + 16):
        g = gamma_ctx(q)
    with mpmath.workprec(precision_bits):
        return BigReal(+g, precision_bits)


def _guard_bits(s: mpf, nu: mpf) -> int:
    if s <= 2:
        return 0
    extra = float(s) / math.log(2) - float(nu) * math.log2(float(s) / 2)
    return max(0, math.ceil(extra))


def _series_mp(order: BesselOrder, s: mpf, wp: int) -> mpf:
    """Partial sum of the I_nu series at ``wp`` bits; caller owns the context."""
    if s == 0:
        return mpf(1) if order.two_nu == 0 else mpf(0)
    nu = order.mpf()
    half = s / 2
    x2 = half * half
    term = half**nu / gamma_ctx(order.nu + 1)
    total = term
    eps = mpf(2) ** (-wp)
    m = 0
    while True:
        m += 1
        term = term * x2 / (m * (nu + m))
        total += term
        # later ratios are smaller, so ratio <= 1/2 bounds the tail by one term
        ratio = x2 / ((m + 1) * (nu + m + 1))
        if ratio <= 0.5 and term <= eps * total:
            return total


def bessel_I_series(nu, s, precision_bits: int = 53) -> BigReal:
    """I_nu(s) for s >= 0 from the convergent power series.

    Working precision is precision_bits + 64 + max(0, ceil(s/ln 2 - nu*log2(s/2))).
    """
    order = BesselOrder.of(nu)
    with mpmath.workprec(precision_bits + 64):
        s = mpf(s)
    if s < 0:
        raise ValueError("bessel_I_series needs s >= 0")
    wp = precision_bits + 64 + _guard_bits(s, order.mpf())
    with mpmath.workprec(wp):
        total = _series_mp(order, s, wp)
    with mpmath.workprec(precision_bits):
        return BigReal(+total, precision_bits)


def asymptotic_coefficient(nu, m: int) -> Fraction:
    """d_m(nu) = binom(nu - 1/2, m) * (nu + 1/2)_m / 2^m, exactly."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    q = BesselOrder.of(nu).nu
    a = q - Fraction(1, 2)
    b = q + Fraction(1, 2)
    binom = Fraction(1)
    rising = Fraction(1)
    for i in range(m):
        binom = binom * (a - i) / (i + 1)
        rising *= b + i
    return binom * rising / 2**m


def bessel_I_asymptotic(nu, s, terms: int, precision_bits: int = 53) -> BigReal:
    """The ``terms``-term truncation of the large-s expansion of I_nu(s).

    ``terms`` counts the coefficients d_0..d_terms used, so terms=0 gives the
    bare e^s/sqrt(2 pi s).
    """
    if terms < 0:
        raise ValueError("terms must be nonnegative")
    order = BesselOrder.of(nu)
    with mpmath.workprec(precision_bits + 32):
        s = mpf(s)
        if s <= 0:
            raise ValueError("bessel_I_asymptotic needs s > 0")
        acc = mpf(0)
        for m in range(terms + 1):
            d = asymptotic_coefficient(order, m)
            acc += (-1) ** m * (mpf(d.numerator) / d.denominator) / s**m
        val = mpmath.exp(s) / mpmath.sqrt(2 * mpmath.pi * s) * acc
    with mpmath.workprec(precision_bits):
        return BigReal(+val, precision_bits)


def bessel_I_float(nu, y: np.ndarray) -> np.ndarray:
    """Double-precision I_nu on an array of moderate nonnegative arguments.

    Used for the many small tail terms of the coefficient series, where
    mpmath would be wasted. Accurate to a few ulps for y up to ~50.
    """
    order = BesselOrder.of(nu)
    y = np.asarray(y, dtype=float)
    nu_f = order.two_nu / 2
    half = y / 2
    x2 = half * half
    with np.errstate(divide="ignore"):
        term = np.where(half > 0, np.exp(nu_f * np.log(np.where(half > 0, half, 1.0))), 0.0)
    if order.two_nu == 0:
        term = np.ones_like(y)
    term = term / math.gamma(nu_f + 1)
    total = term.copy()
    x2_max = float(np.max(x2, initial=0.0))
    m = 0
    while True:
        m += 1
        term = term * x2 / (m * (nu_f + m))
        total += term
        if x2_max <= 0.5 * (m + 1) * (nu_f + m + 1) and np.all(term <= 1e-18 * total):
            return total


def bessel_I_upper_bound(nu, y, ctx=mpmath.mp):
    """(y/2)^nu exp(y^2/4) / Gamma(nu+1), an upper bound for I_nu(y), y >= 0.

    Follows from m! Gamma(nu+m+1) >= m! Gamma(nu+1). Pass ``ctx=mpmath.iv``
    for a rigorous enclosure.
    """
    order = BesselOrder.of(nu)
    nu_c = ctx.mpf(order.two_nu) / 2
    return (y / 2) ** nu_c * ctx.exp(y * y / 4) / gamma_ctx(order.nu + 1, ctx)
