"""Eta-quotients G(q) = prod_r (q^{m_r}; q^{m_r})_inf^{delta_r} and their Delta-profile.

Everything here is exact: Delta_3 and Delta_4^2 are Fractions, and the
admissibility verdict never touches floating point.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

import mpmath

__all__ = [
    "EtaQuotient",
    "DeltaProfile",
    "Admissibility",
    "Verdict",
    "delta_profile",
    "check_admissible",
    "two_color",
    "partition_spec",
]

_TERM_RE = re.compile(r"^\s*(\d+)\s*\^\s*([+-]?\d+)\s*$")


@dataclass(frozen=True)
class EtaQuotient:
    m: tuple[int, ...]
    delta: tuple[int, ...]

    def __post_init__(self):
        m = tuple(int(x) for x in self.m)
        delta = tuple(int(x) for x in self.delta)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "delta", delta)
        if not m or len(m) != len(delta):
            raise ValueError("m and delta must be nonempty and of equal length")
        if any(x <= 0 for x in m):
            raise ValueError(f"all m_r must be positive integers, got {m}")
        if len(set(m)) != len(m):
            raise ValueError(f"m_r must be distinct, got {m}")
        if any(d == 0 for d in delta):
            raise ValueError(f"all delta_r must be nonzero, got {delta}")

    @property
    def R(self) -> int:
        return len(self.m)

    def negated(self) -> "EtaQuotient":
        return EtaQuotient(self.m, tuple(-d for d in self.delta))

    @classmethod
    def parse(cls, text: str) -> "EtaQuotient":
        """Parse the ``m^delta*m^delta`` form, e.g. ``"1^-1*5^-1"``."""
        ms, ds = [], []
        for chunk in text.split("*"):
            match = _TERM_RE.match(chunk)
            if match is None:
                raise ValueError(f"bad eta-quotient term {chunk!r} in {text!r}; expected m^delta")
            ms.append(int(match.group(1)))
            ds.append(int(match.group(2)))
        return cls(tuple(ms), tuple(ds))

    def __str__(self) -> str:
        return "*".join(f"{m}^{d}" for m, d in zip(self.m, self.delta))


def two_color(p: int) -> EtaQuotient:
    """1/((q;q)(q^p;q^p)), the generating function of a_p(n)."""
    return EtaQuotient((1, p), (-1, -1))


def partition_spec() -> EtaQuotient:
    """1/(q;q), the generating function of p(n)."""
    return EtaQuotient((1,), (-1,))


@dataclass(frozen=True)
class DeltaProfile:
    delta1: Fraction
    delta2: int
    L: int
    delta3: dict[int, Fraction]
    delta4_sq: dict[int, Fraction]
    l_pos: frozenset[int]
    l_nonpos: frozenset[int]

    @property
    def nu(self) -> Fraction:
        """Bessel order Delta_1 + 1."""
        return self.delta1 + 1

    def delta4(self, l: int, prec: int = 53) -> mpmath.mpf:
        """Positive square root of Delta_4(l)^2 at ``prec`` bits."""
        sq = self.delta4_sq[l]
        with mpmath.workprec(prec):
            return mpmath.sqrt(mpmath.mpf(sq.numerator) / sq.denominator)


def _signature(spec: EtaQuotient, l: int) -> tuple[int, ...]:
    return tuple(gcd(m, l) for m in spec.m)


@lru_cache(maxsize=256)
def delta_profile(spec: EtaQuotient) -> DeltaProfile:
    delta1 = Fraction(-sum(spec.delta), 2)
    delta2 = sum(m * d for m, d in zip(spec.m, spec.delta))
    L = lcm(*spec.m)
    d3: dict[int, Fraction] = {}
    d4: dict[int, Fraction] = {}
    by_sig: dict[tuple[int, ...], tuple[Fraction, Fraction]] = {}
    for l in range(1, L + 1):
        sig = _signature(spec, l)
        if sig not in by_sig:
            v3 = -sum(Fraction(g * g, m) * d for g, m, d in zip(sig, spec.m, spec.delta))
            v4 = Fraction(1)
            for g, m, d in zip(sig, spec.m, spec.delta):
                v4 *= Fraction(g, m) ** d
            by_sig[sig] = (v3, v4)
        d3[l], d4[l] = by_sig[sig]
    pos = frozenset(l for l, v in d3.items() if v > 0)
    nonpos = frozenset(d3) - pos
    return DeltaProfile(delta1, delta2, L, d3, d4, pos, nonpos)


class Verdict(enum.Enum):
    ADMISSIBLE = "admissible"
    FAILS_DELTA1 = "fails_delta1"
    FAILS_CONDITION2 = "fails_condition2"


@dataclass(frozen=True)
class Admissibility:
    verdict: Verdict
    l: int | None = None

    def __bool__(self) -> bool:
        return self.verdict is Verdict.ADMISSIBLE

    def describe(self) -> str:
        if self.verdict is Verdict.ADMISSIBLE:
            return "admissible"
        if self.verdict is Verdict.FAILS_DELTA1:
            return "inadmissible: Delta_1 = -(sum of delta_r)/2 must be positive"
        return (
            f"inadmissible: gcd condition min_r gcd(m_r,l)^2/m_r >= Delta_3(l)/24 "
            f"fails at l={self.l}"
        )


def check_admissible(spec: EtaQuotient) -> Admissibility:
    """Decide whether the exact Bessel-series formula applies to ``spec``.

    Requires Delta_1 > 0 and min_r gcd(m_r, l)^2/m_r >= Delta_3(l)/24 for all
    1 <= l <= L. Each gcd-signature is tested once; the reported l is the
    smallest failing one.
    """
    prof = delta_profile(spec)
    if prof.delta1 <= 0:
        return Admissibility(Verdict.FAILS_DELTA1)
    seen: dict[tuple[int, ...], bool] = {}
    for l in range(1, prof.L + 1):
        sig = _signature(spec, l)
        ok = seen.get(sig)
        if ok is None:
            lhs = min(Fraction(g * g, m) for g, m in zip(sig, spec.m))
            ok = lhs >= prof.delta3[l] / 24
            seen[sig] = ok
        if not ok:
            return Admissibility(Verdict.FAILS_CONDITION2, l)
    return Admissibility(Verdict.ADMISSIBLE)
