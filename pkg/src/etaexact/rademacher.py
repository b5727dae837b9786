"""Exact coefficients of admissible eta-quotients from the Bessel-series formula.

For an admissible G(q) = sum g(n) q^n and n > -Delta_2/24,

    g(n) = 2 pi sum_{l in L>0} Delta_4(l) (Delta_3(l)/(24n+Delta_2))^((Delta_1+1)/2)
           * sum_{k = l mod L} I_{Delta_1+1}(pi sqrt(Delta_3(l)(24n+Delta_2)) / (6k)) A^_k(n)/k.

The series is truncated at k <= K. The omitted tail is bounded with
|A^_k(n)| <= k and I_nu(y) <= (y/2)^nu e^{y^2/4}/Gamma(nu+1), which makes the
k-th term O(k^-nu); the comparison sum is evaluated in interval arithmetic.
A value whose distance to the nearest integer plus the tail and rounding
bounds is below 1/4 is certified.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from mpmath import mpf

from .besselgamma import BesselOrder, bessel_I_float, bessel_I_series, gamma_ctx
from .bigreal import BigReal
from .etaquotient import (
    Admissibility,
    EtaQuotient,
    check_admissible,
    delta_profile,
    two_color,
)
from .expsums import a_hat_float, phase_table

__all__ = [
    "ADMISSIBLE_PRIMES",
    "InadmissibleSpecError",
    "ResourceCapError",
    "SeriesEvaluation",
    "coefficient_series",
    "certify",
    "exact_coefficient",
    "a_p",
    "leading_bits",
]

log = logging.getLogger(__name__)

ADMISSIBLE_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23)
CERTIFICATE_THRESHOLD = Fraction(1, 4)
DEFAULT_MAX_K = 1 << 15

# absolute error budget for the whole truncated sum; terms are computed in
# double precision when their share of the budget allows it
_ABS_TARGET_BITS = 40
_FLOAT_BITS = 48


class InadmissibleSpecError(ValueError):
    def __init__(self, spec: EtaQuotient, verdict: Admissibility):
        self.spec = spec
        self.verdict = verdict
        super().__init__(f"{spec}: {verdict.describe()}")


class ResourceCapError(RuntimeError):
    pass


@dataclass
class SeriesEvaluation:
    value: BigReal
    truncation_K: int
    tail_bound: BigReal
    rounding_bound: float
    certified_integer: int | None
    per_l_contributions: dict[int, BigReal]
    terms: dict[int, float] = field(default_factory=dict, repr=False)
    precision_bits: int = 0

    @property
    def int_distance(self) -> mpf:
        with mpmath.workprec(self.value.precision_bits):
            v = self.value.value
            return abs(v - mpmath.nint(v))


def _check_range(spec: EtaQuotient, n: int) -> int:
    verdict = check_admissible(spec)
    if not verdict:
        raise InadmissibleSpecError(spec, verdict)
    if int(n) != n:
        raise ValueError(f"n must be an integer, got {n!r}")
    n = int(n)
    x = 24 * n + delta_profile(spec).delta2
    if n < 1 or x <= 0:
        raise ValueError(
            f"n={n} outside the range of the exact formula for {spec} "
            f"(need a positive integer n > {Fraction(-delta_profile(spec).delta2, 24)})"
        )
    return x


def leading_bits(spec: EtaQuotient, n: int) -> int:
    """Bits of the largest Bessel argument, pi sqrt(Delta_3 max * (24n+Delta_2))/(6 ln 2)."""
    prof = delta_profile(spec)
    x = 24 * n + prof.delta2
    d3max = max(prof.delta3[l] for l in prof.l_pos)
    if x <= 0:
        return 0
    return math.ceil(math.pi * math.sqrt(float(d3max) * x) / (6 * math.log(2)))


def _frac_mpf(q: Fraction) -> mpf:
    return mpf(q.numerator) / q.denominator


def _log2_magnitude(log2_pref: float, y: float, nu: float) -> float:
    """log2 of an upper bound for |term_k| = pref * I_nu(y) * |A^_k| / k."""
    log_e = y  # I_nu(y) <= e^y for nu >= 0
    if y > 0:
        log_small = nu * math.log(y / 2) + y * y / 4 - math.lgamma(nu + 1)
        log_e = min(log_e, log_small)
    else:
        return -math.inf
    return log2_pref + log_e / math.log(2)


def _tail_bound(prof, x: int, K: int, ctx=mpmath.iv) -> mpf:
    order = BesselOrder.of(prof.nu)
    nu = ctx.mpf(order.two_nu) / 2
    total = ctx.mpf(0)
    for l in sorted(prof.l_pos):
        d3 = ctx.mpf(prof.delta3[l].numerator) / prof.delta3[l].denominator
        d4sq = prof.delta4_sq[l]
        d4 = ctx.sqrt(ctx.mpf(d4sq.numerator) / d4sq.denominator)
        first = K + 1 + (l - (K + 1)) % prof.L
        y_first = ctx.pi * ctx.sqrt(d3 * x) / (6 * first)
        # pref * I-bound(y_k) * |A|/k with |A| <= k collapses to
        # 2 pi Delta_4 (pi Delta_3/12)^nu e^{y_k^2/4} / Gamma(nu+1) * k^-nu
        weight = 2 * ctx.pi * d4 * (ctx.pi * d3 / 12) ** nu / gamma_ctx(order.nu + 1, ctx)
        weight = weight * ctx.exp(y_first**2 / 4)
        kf = ctx.mpf(first)
        comparison = kf ** (-nu) + kf ** (1 - nu) / ((nu - 1) * prof.L)
        total += weight * comparison
    return total


def coefficient_series(
    spec: EtaQuotient, n: int, K: int, precision_bits: int = 256
) -> SeriesEvaluation:
    """Sum the exact-formula series over k <= K and try to certify the integer g(n)."""
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    x = _check_range(spec, n)
    prof = delta_profile(spec)
    order = BesselOrder.of(prof.nu)
    nu_f = order.two_nu / 2
    classes = sorted(prof.l_pos)
    n_terms = sum(len(range(l, K + 1, prof.L)) for l in classes)
    budget = -_ABS_TARGET_BITS - math.log2(max(n_terms, 1))

    contributions: dict[int, BigReal] = {}
    terms: dict[int, float] = {}
    rounding = 0.0
    wp = precision_bits
    with mpmath.workprec(wp + 32):
        total = mpf(0)
        for l in classes:
            d3 = prof.delta3[l]
            arg_base = mpmath.pi * mpmath.sqrt(_frac_mpf(d3) * x) / 6
            pref = 2 * mpmath.pi * prof.delta4(l, wp + 32) * (_frac_mpf(d3) / x) ** (order.mpf() / 2)
            log2_pref = float(mpmath.log(pref, 2))
            arg_f = float(arg_base)

            mp_ks, float_ks, bits = [], [], {}
            for k in range(l, K + 1, prof.L):
                mag = _log2_magnitude(log2_pref, arg_f / k, nu_f)
                if mag - _FLOAT_BITS <= budget:
                    float_ks.append(k)
                    rounding += 2.0 ** (mag - _FLOAT_BITS)
                else:
                    need = math.ceil(mag - budget) + 16
                    p_k = max(64, min(wp, need))
                    bits[k] = p_k
                    mp_ks.append(k)
                    phi = len(phase_table(spec, k, n))
                    rounding += (phi + 8) * 2.0 ** (mag - p_k + 2)

            class_sum = mpf(0)
            for k in mp_ks:
                p_k = bits[k]
                with mpmath.workprec(p_k + 16):
                    y = arg_base / k
                    bessel = bessel_I_series(order, y, p_k).value
                    phases = phase_table(spec, k, n)
                    den = 12 * k
                    a = mpmath.fsum(mpmath.cospi(mpf(j) / den) for j in phases.tolist())
                    term = pref * bessel * a / k
                class_sum += term
                terms[k] = float(term)

            if float_ks:
                ks = np.asarray(float_ks, dtype=float)
                a = a_hat_float(spec, float_ks, n)
                vals = float(pref) * bessel_I_float(order, arg_f / ks) * a / ks
                for k, v in zip(float_ks, vals.tolist()):
                    terms[k] = v
                class_sum += mpf(math.fsum(vals.tolist()))

            contributions[l] = BigReal(class_sum, wp)
            total += class_sum

        with mpmath.workprec(wp):
            value = +total

    saved = mpmath.iv.prec
    try:
        mpmath.iv.prec = 64
        tail_iv = _tail_bound(prof, x, K)
    finally:
        mpmath.iv.prec = saved
    tail = mpf(tail_iv.b)

    with mpmath.workprec(wp):
        nearest = mpmath.nint(value)
        dist = abs(value - nearest)
        slack = dist + tail + mpf(rounding)
        certified = int(nearest) if slack < mpf(1) / 4 else None

    return SeriesEvaluation(
        value=BigReal(value, wp),
        truncation_K=K,
        tail_bound=BigReal(tail, 64, rigorous=True),
        rounding_bound=rounding,
        certified_integer=certified,
        per_l_contributions=contributions,
        terms=dict(sorted(terms.items())),
        precision_bits=wp,
    )


def certify(
    spec: EtaQuotient,
    n: int,
    precision_bits: int = 256,
    max_K: int = DEFAULT_MAX_K,
) -> SeriesEvaluation:
    """Adaptive driver: double K (and precision when rounding dominates) until certified.

    ``precision_bits`` is a floor; the start is raised to leading_bits + 96.
    """
    x = _check_range(spec, n)
    K = max(16, math.isqrt(x - 1) + 1)
    prec = max(int(precision_bits), leading_bits(spec, n) + 96)
    while True:
        if K > max_K:
            raise ResourceCapError(f"{spec}, n={n}: no certificate with K <= {max_K}")
        ev = coefficient_series(spec, n, K, prec)
        if ev.certified_integer is not None:
            return ev
        log.debug("n=%d K=%d prec=%d tail=%s rounding=%g: not certified", n, K, prec, ev.tail_bound, ev.rounding_bound)
        if ev.rounding_bound > 1 / 64:
            prec *= 2
        K *= 2


def exact_coefficient(
    spec: EtaQuotient,
    n: int,
    precision_bits: int = 256,
    max_K: int = DEFAULT_MAX_K,
) -> int:
    """The integer g(n), certified from the truncated series."""
    return certify(spec, n, precision_bits, max_K).certified_integer


def a_p(p: int, n: int) -> int:
    """Number of partitions of n whose parts divisible by p come in 2 colours, p <= 23 prime.

    (p, n) = (23, 1) lies on the boundary n = (p+1)/24 where the series
    degenerates (its Bessel argument is 0); the q-series value 1 is returned.
    """
    if p not in ADMISSIBLE_PRIMES:
        raise ValueError(f"p must be one of {ADMISSIBLE_PRIMES}, got {p}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if 24 * n - p - 1 <= 0:
        from .oracle import eta_quotient_coeffs

        return eta_quotient_coeffs(two_color(p), n).coeffs[n]
    return exact_coefficient(two_color(p), n)
