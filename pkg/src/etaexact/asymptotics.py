"""Asymptotic formulas for a_p(n) and the numerical experiments around them.

log a_p(n) ~ pi sqrt(2n(1+1/p)/3) - (5/4) log n
             + log(2 sqrt(3p) (1+1/p)^(3/4) / 24^(5/4)) - c_p / (24 sqrt(6n)),

c_p = 135 / (pi sqrt(1+1/p)) + pi sqrt((1+p)^3/p).

All logarithms are natural. Exact values come from the Bessel-series engine
for p <= 23 and from the q-series oracle otherwise.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import mpf

from .besselgamma import bessel_I_series
from .bigreal import BigReal, mpf_to_fraction
from .etaquotient import two_color
from .oracle import eta_quotient_coeffs, partition_numbers
from .rademacher import ADMISSIBLE_PRIMES, a_p

__all__ = [
    "is_prime",
    "c_p",
    "leading_asymptotic",
    "log_asymptotic",
    "log_asymptotic_three_terms",
    "log_asymptotic_p2",
    "kotesovec_ratio",
    "turan_check",
    "AsymptoticReport",
    "asymptotic_report",
    "conjecture_scan",
    "A2_RESIDUAL_COEFFICIENT",
]

# 1/sqrt(n) coefficient of log a_2(n) as conjectured numerically ("0.79...")
A2_RESIDUAL_COEFFICIENT = -0.7931


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


def _wrap(x: mpf, bits: int) -> BigReal:
    with mpmath.workprec(bits):
        return BigReal(+x, bits)


def c_p(p: int, precision_bits: int = 128) -> BigReal:
    if p < 1:
        raise ValueError("p must be >= 1")
    with mpmath.workprec(precision_bits + 16):
        pp = mpf(p)
        val = 135 / (mpmath.pi * mpmath.sqrt(1 + 1 / pp)) + mpmath.pi * mpmath.sqrt((1 + pp) ** 3 / pp)
    return _wrap(val, precision_bits)


def leading_asymptotic(p: int, n: int, precision_bits: int = 128) -> BigReal:
    """2 pi sqrt(p) ((1+1/p)/(24n-p-1)) I_2((pi/6) sqrt((1+1/p)(24n-p-1))): the k=1 term."""
    x = 24 * n - p - 1
    if x <= 0:
        raise ValueError(f"need n > (p+1)/24, got p={p}, n={n}")
    lead = math.ceil(math.pi * math.sqrt(2 * x) / (6 * math.log(2)))
    wp = precision_bits + lead + 16
    with mpmath.workprec(wp):
        r = 1 + mpf(1) / p
        arg = mpmath.pi / 6 * mpmath.sqrt(r * x)
        bessel = bessel_I_series(2, arg, wp).value
        val = 2 * mpmath.pi * mpmath.sqrt(p) * (r / x) * bessel
    return _wrap(val, precision_bits)


def _log_terms(p: int, n: int) -> tuple[mpf, mpf, mpf, mpf]:
    pp = mpf(p)
    nn = mpf(n)
    r = 1 + 1 / pp
    t1 = mpmath.pi * mpmath.sqrt(2 * nn * r / 3)
    t2 = -mpf(5) / 4 * mpmath.log(nn)
    t3 = mpmath.log(2 * mpmath.sqrt(3 * pp) * r ** (mpf(3) / 4) / mpf(24) ** (mpf(5) / 4))
    cp = 135 / (mpmath.pi * mpmath.sqrt(r)) + mpmath.pi * mpmath.sqrt((1 + pp) ** 3 / pp)
    t4 = -cp / (24 * mpmath.sqrt(6 * nn))
    return t1, t2, t3, t4


def log_asymptotic(p: int, n: int, precision_bits: int = 128) -> BigReal:
    """The four-term expansion of log a_p(n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    with mpmath.workprec(precision_bits + 16):
        val = sum(_log_terms(p, n))
    return _wrap(val, precision_bits)


def log_asymptotic_three_terms(p: int, n: int, precision_bits: int = 128) -> BigReal:
    """The expansion without its 1/sqrt(n) term; residuals are measured against this."""
    if n < 1:
        raise ValueError("n must be >= 1")
    with mpmath.workprec(precision_bits + 16):
        val = sum(_log_terms(p, n)[:3])
    return _wrap(val, precision_bits)


def log_asymptotic_p2(n: int, precision_bits: int = 128) -> BigReal:
    """pi sqrt(n) - (5/4) log n - log 8 - (15/(8 pi) + pi/16)/sqrt(n)."""
    with mpmath.workprec(precision_bits + 16):
        nn = mpf(n)
        coeff = 15 / (8 * mpmath.pi) + mpmath.pi / 16
        val = mpmath.pi * mpmath.sqrt(nn) - mpf(5) / 4 * mpmath.log(nn) - mpmath.log(8) - coeff / mpmath.sqrt(nn)
    return _wrap(val, precision_bits)


def exact_value(p: int, n: int) -> tuple[int, str]:
    """a_p(n) and where it came from ("engine" or "oracle")."""
    if p in ADMISSIBLE_PRIMES and n >= 1:
        return a_p(p, n), "engine"
    return eta_quotient_coeffs(two_color(p), n).coeffs[n], "oracle"


def _log_int(a: int, precision_bits: int) -> mpf:
    with mpmath.workprec(max(precision_bits, a.bit_length()) + 32):
        return mpmath.log(mpf(a))


def kotesovec_ratio(n: int, a2: int | None = None, precision_bits: int = 128) -> BigReal:
    """a_2(n) * 8 n^(5/4) exp(-pi sqrt(n)), which tends to 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if a2 is None:
        a2 = a_p(2, n)
    with mpmath.workprec(a2.bit_length() + precision_bits + 32):
        nn = mpf(n)
        val = mpf(a2) * 8 * nn ** (mpf(5) / 4) * mpmath.exp(-mpmath.pi * mpmath.sqrt(nn))
    return _wrap(val, precision_bits)


@lru_cache(maxsize=8)
def _partition_table(N: int) -> tuple[int, ...]:
    return tuple(partition_numbers(N))


def _pi_term_enclosure(n: int, bits: int, sqrt24: bool) -> tuple[Fraction, Fraction]:
    """Rational [lo, hi] containing pi / (24 n^(3/2)), or pi / (sqrt(24) n^(3/2))."""
    saved = mpmath.iv.prec
    try:
        mpmath.iv.prec = bits
        iv = mpmath.iv
        den = iv.sqrt(iv.mpf(24)) if sqrt24 else iv.mpf(24)
        t = iv.pi / (den * iv.mpf(n) ** iv.mpf(1.5))
        return mpf_to_fraction(mpf(t.a)), mpf_to_fraction(mpf(t.b))
    finally:
        mpmath.iv.prec = saved


def turan_check(
    n: int, table: list[int] | tuple[int, ...] | None = None, sqrt24: bool = True
) -> bool:
    """Both sides of (1 + t - 1/n^2) P < p(n)^2 < (1 + t) P with P = p(n-1)p(n+1).

    t = pi/(sqrt(24) n^1.5). The pair holds exactly from n = 120 on (it fails
    at n = 119). ``sqrt24=False`` uses t = pi/(24 n^1.5) instead; with that
    constant the upper bound fails for every n >= 32, since p(n)^2/P - 1
    behaves like pi/(sqrt(24) n^1.5).

    p(.) is exact and t is enclosed in a rational interval, so the verdict is
    exact (precision grows until no side is ambiguous).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if table is None or len(table) <= n + 1:
        table = _partition_table(max(n + 1, 2048))
    prev, cur, nxt = table[n - 1], table[n], table[n + 1]
    prod = prev * nxt
    sq = cur * cur
    inv_n2 = Fraction(1, n * n)
    bits = 128
    while bits <= 1 << 14:
        lo, hi = _pi_term_enclosure(n, bits, sqrt24)
        # the left side grows with t, the right side too: test worst and best ends
        left_sure = (1 + hi - inv_n2) * prod < sq
        left_fail = (1 + lo - inv_n2) * prod >= sq
        right_sure = sq < (1 + lo) * prod
        right_fail = sq >= (1 + hi) * prod
        if (left_sure or left_fail) and (right_sure or right_fail):
            return left_sure and right_sure
        bits *= 2
    raise ArithmeticError(f"turan_check({n}) undecided at {bits} bits")


@dataclass
class AsymptoticReport:
    p: int
    samples: list[tuple[int, BigReal, BigReal, BigReal]]
    fitted_c_coefficient: BigReal
    predicted_c_coefficient: BigReal
    source: str = "engine"
    protocol: str = ""
    spread_lower_half: float = 0.0
    spread_upper_half: float = 0.0
    notes: list[str] = field(default_factory=list)

    @property
    def relative_error(self) -> float:
        f = float(self.fitted_c_coefficient)
        q = float(self.predicted_c_coefficient)
        return abs(f - q) / abs(q)

    @property
    def flattening(self) -> bool:
        return self.spread_upper_half < self.spread_lower_half

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "source": self.source,
            "protocol": self.protocol,
            "fitted_c_coefficient": self.fitted_c_coefficient.decimal(25),
            "predicted_c_coefficient": self.predicted_c_coefficient.decimal(25),
            "relative_error": self.relative_error,
            "spread_lower_half": self.spread_lower_half,
            "spread_upper_half": self.spread_upper_half,
            "notes": list(self.notes),
            "samples": [
                {
                    "n": n,
                    "exact_log": e.decimal(25),
                    "predicted_log": q.decimal(25),
                    "residual_times_sqrt_n": r.decimal(25),
                }
                for n, e, q, r in self.samples
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict, precision_bits: int = 96) -> "AsymptoticReport":
        def big(s: str) -> BigReal:
            with mpmath.workprec(precision_bits):
                return BigReal(mpf(s), precision_bits)

        samples = [
            (int(s["n"]), big(s["exact_log"]), big(s["predicted_log"]), big(s["residual_times_sqrt_n"]))
            for s in d["samples"]
        ]
        return cls(
            p=int(d["p"]),
            samples=samples,
            fitted_c_coefficient=big(d["fitted_c_coefficient"]),
            predicted_c_coefficient=big(d["predicted_c_coefficient"]),
            source=d["source"],
            protocol=d["protocol"],
            spread_lower_half=float(d["spread_lower_half"]),
            spread_upper_half=float(d["spread_upper_half"]),
            notes=list(d.get("notes", [])),
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "exact_log", "predicted_log", "residual_times_sqrt_n"])
        for n, e, q, r in self.samples:
            w.writerow([n, e.decimal(25), q.decimal(25), r.decimal(25)])
        return buf.getvalue()


_PROTOCOL = (
    "residual = (log a_p(n) - three-term expansion) * sqrt(n); "
    "fitted coefficient = least-squares constant (mean) over the largest-n half of the samples"
)


def _spread(values: list[float]) -> float:
    return max(values) - min(values) if values else 0.0


def asymptotic_report(p: int, ns, values: dict[int, int] | None = None, precision_bits: int = 96) -> AsymptoticReport:
    """Residual samples and the fitted 1/sqrt(n) coefficient for the given n's."""
    ns = sorted(set(int(n) for n in ns))
    if len(ns) < 2:
        raise ValueError("need at least two sample points")
    sources = set()
    samples = []
    for n in ns:
        if values is not None and n in values:
            a, src = values[n], "supplied"
        else:
            a, src = exact_value(p, n)
        sources.add(src)
        with mpmath.workprec(precision_bits + 32):
            exact_log = _log_int(a, precision_bits)
            three = log_asymptotic_three_terms(p, n, precision_bits + 32).value
            four = log_asymptotic(p, n, precision_bits + 32).value
            resid = (exact_log - three) * mpmath.sqrt(n)
        samples.append((n, _wrap(exact_log, precision_bits), _wrap(four, precision_bits), _wrap(resid, precision_bits)))

    half = len(samples) // 2
    upper = samples[half:]
    lower = samples[:half]
    with mpmath.workprec(precision_bits + 16):
        fitted = mpmath.fsum(r.value for _, _, _, r in upper) / len(upper)
        predicted = -c_p(p, precision_bits + 16).value / (24 * mpmath.sqrt(6))
    return AsymptoticReport(
        p=p,
        samples=samples,
        fitted_c_coefficient=_wrap(fitted, precision_bits),
        predicted_c_coefficient=_wrap(predicted, precision_bits),
        source="+".join(sorted(sources)),
        protocol=_PROTOCOL,
        spread_lower_half=_spread([float(r) for _, _, _, r in lower]),
        spread_upper_half=_spread([float(r) for _, _, _, r in upper]),
    )


def conjecture_scan(p: int, N: int, n_samples: int = 40) -> AsymptoticReport:
    """Residual experiment for a prime p > 23 using q-series values up to N.

    Samples are evenly spaced on (0, N]; no exact Bessel formula is available
    for these p.
    """
    if p <= 23 or not is_prime(p):
        raise ValueError(f"conjecture_scan needs a prime p > 23, got {p}")
    if N < 2 * n_samples:
        n_samples = max(2, N // 2)
    step = max(1, N // n_samples)
    ns = list(range(N - step * (n_samples - 1), N + 1, step))
    table = eta_quotient_coeffs(two_color(p), N).coeffs
    report = asymptotic_report(p, ns, values={n: table[n] for n in ns})
    report.source = "oracle"
    report.notes.append(
        f"p={p} > 23: no exact series (the gcd condition fails); values from q-series to N={N}; "
        "finite-n O(1/sqrt n) corrections make the comparison loose at desk scale"
    )
    return report
