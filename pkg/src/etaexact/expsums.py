"""The exponential sums A^_k(n) attached to an eta-quotient.

    A^_k(n) = sum_{0<=h<k, (h,k)=1} exp(-2 pi i n h/k - pi i sum_r delta_r s(m_r h/g_r, k/g_r)),

with g_r = gcd(m_r, k). Every angle is a rational multiple of pi with
denominator 12k, so each summand is stored as an integer phase J and the sum
becomes sum_h exp(-pi i J_h / (12k)) with J_h reduced mod 24k exactly.
Only the final cosine is rounded.
"""

from __future__ import annotations

import threading
from math import gcd

import mpmath
import numpy as np
from mpmath import mpf

from .bigreal import BigReal
from .dedekind import dedekind_sum_12k
from .etaquotient import EtaQuotient, two_color

__all__ = ["phase_table", "phase_numerators", "a_hat", "b_k", "a_hat_float", "clear_phase_cache"]

_cache: dict[tuple[EtaQuotient, int], tuple[np.ndarray, np.ndarray]] = {}
_cache_lock = threading.Lock()


def phase_numerators(spec: EtaQuotient, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Residues h coprime to k and the integers 12k * sum_r delta_r s(m_r h/g_r, k/g_r).

    Results are memoised per (spec, k) since they do not depend on n.
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    key = (spec, k)
    hit = _cache.get(key)
    if hit is not None:
        return hit
    gs = [gcd(m, k) for m in spec.m]
    hs = [h for h in range(k) if gcd(h, k) == 1] if k > 1 else [0]
    nums = []
    for h in hs:
        acc = 0
        for m, d, g in zip(spec.m, spec.delta, gs):
            # s(a, k/g) = S12(a, k/g) * g / (12k)
            acc += d * g * dedekind_sum_12k((m // g) * h, k // g)
        nums.append(acc)
    entry = (np.asarray(hs, dtype=np.int64), np.asarray(nums, dtype=np.int64))
    with _cache_lock:
        _cache.setdefault(key, entry)
    return entry


def phase_table(spec: EtaQuotient, k: int, n: int) -> np.ndarray:
    """Integer phases J_h in [0, 24k): summand h equals exp(-pi i J_h / (12k))."""
    hs, nums = phase_numerators(spec, k)
    return (24 * ((n % k) * hs % k) + nums) % (24 * k)


def clear_phase_cache() -> None:
    with _cache_lock:
        _cache.clear()


def a_hat(spec: EtaQuotient, k: int, n: int, precision_bits: int = 64) -> BigReal:
    """Re A^_k(n) at ``precision_bits``; the imaginary part is checked to vanish."""
    if precision_bits < 32:
        raise ValueError("precision_bits must be at least 32")
    if n < 0:
        raise ValueError("n must be nonnegative")
    phases = phase_table(spec, k, n)
    den = 12 * k
    with mpmath.workprec(precision_bits + 16):
        re = mpf(0)
        im = mpf(0)
        for j in phases.tolist():
            x = mpf(j) / den
            re += mpmath.cospi(x)
            im -= mpmath.sinpi(x)
        bound = mpf(2) ** (16 - precision_bits) * len(phases)
        if abs(im) >= bound:
            raise ArithmeticError(f"A^_{k}({n}) has imaginary residual {mpmath.nstr(im, 5)}")
    with mpmath.workprec(precision_bits):
        return BigReal(+re, precision_bits)


def b_k(p: int, k: int, n: int, precision_bits: int = 64) -> BigReal:
    """b_k(n) = A^_k(n) for m = (1, p), delta = (-1, -1)."""
    return a_hat(two_color(p), k, n, precision_bits)


def a_hat_float(spec: EtaQuotient, ks, n: int) -> np.ndarray:
    """Re A^_k(n) in double precision for every k in ``ks`` (one vectorised pass)."""
    ks = [int(k) for k in ks]
    if not ks:
        return np.zeros(0)
    parts, dens, sizes = [], [], []
    for k in ks:
        ph = phase_table(spec, k, n)
        parts.append(ph)
        dens.append(np.full(len(ph), 12 * k, dtype=np.int64))
        sizes.append(len(ph))
    phases = np.concatenate(parts)
    den = np.concatenate(dens)
    vals = np.cos(np.pi * (phases / den))
    starts = np.concatenate(([0], np.cumsum(sizes)[:-1]))
    return np.add.reduceat(vals, starts)
