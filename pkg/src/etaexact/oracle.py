"""Ground truth by exact power-series arithmetic on Python integers.

(q^m; q^m)_inf is expanded with Euler's pentagonal number theorem, which
gives a sparse series with O(sqrt N) nonzero coefficients below q^N.
Dividing by such a factor is a sparse recurrence, so an eta-quotient table
to order N costs O(N sqrt N) big-integer additions per factor.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from .etaquotient import EtaQuotient

__all__ = [
    "CoeffTable",
    "pentagonal_terms",
    "euler_coeffs",
    "eta_quotient_coeffs",
    "eta_quotient_coeffs_dense",
    "series_mul",
    "series_inverse",
    "partition_numbers",
    "enumerate_colored",
    "ENUMERATION_CAP",
]

ENUMERATION_CAP = 40


@dataclass(frozen=True)
class CoeffTable:
    coeffs: list[int]
    spec: EtaQuotient
    N: int

    def __getitem__(self, n: int) -> int:
        return self.coeffs[n]

    def __len__(self) -> int:
        return len(self.coeffs)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "coefficient"])
        for n, c in enumerate(self.coeffs):
            writer.writerow([n, c])
        return buf.getvalue()

    def to_json(self) -> str:
        # full decimal strings: JSON numbers lose exactness in most readers
        return json.dumps({"spec": str(self.spec), "N": self.N, "coeffs": [str(c) for c in self.coeffs]})


def pentagonal_terms(m: int, N: int) -> list[tuple[int, int]]:
    """Nonzero (exponent, sign) pairs of (q^m; q^m)_inf up to q^N, exponent 0 excluded."""
    out = []
    j = 1
    while m * (j * (3 * j - 1) // 2) <= N:
        sign = -1 if j & 1 else 1
        out.append((m * (j * (3 * j - 1) // 2), sign))
        e2 = m * (j * (3 * j + 1) // 2)
        if e2 <= N:
            out.append((e2, sign))
        j += 1
    out.sort()
    return out


def euler_coeffs(m: int, N: int) -> list[int]:
    """Coefficients of (q^m; q^m)_inf through q^N."""
    if m < 1 or N < 0:
        raise ValueError("need m >= 1 and N >= 0")
    c = [0] * (N + 1)
    c[0] = 1
    for e, s in pentagonal_terms(m, N):
        c[e] = s
    return c


def _mul_sparse(a: list[int], terms: list[tuple[int, int]]) -> list[int]:
    out = a[:]
    N = len(a) - 1
    for e, s in terms:
        for i in range(N - e + 1):
            if a[i]:
                out[i + e] += s * a[i]
    return out


def _div_sparse(a: list[int], terms: list[tuple[int, int]]) -> list[int]:
    # b * (1 + sum s q^e) = a  =>  b[n] = a[n] - sum s b[n-e]
    b = a[:]
    for n in range(1, len(a)):
        acc = b[n]
        for e, s in terms:
            if e > n:
                break
            acc -= s * b[n - e]
        b[n] = acc
    return b


def eta_quotient_coeffs(spec: EtaQuotient, N: int) -> CoeffTable:
    """Exact coefficients of prod_r (q^{m_r}; q^{m_r})^{delta_r} through q^N."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    c = [0] * (N + 1)
    c[0] = 1
    for m, d in zip(spec.m, spec.delta):
        terms = pentagonal_terms(m, N)
        step = _mul_sparse if d > 0 else _div_sparse
        for _ in range(abs(d)):
            c = step(c, terms)
    return CoeffTable(c, spec, N)


def series_mul(a: list[int], b: list[int], N: int) -> list[int]:
    """Dense truncated product through q^N."""
    out = [0] * (N + 1)
    for i, x in enumerate(a[: N + 1]):
        if x:
            for j, y in enumerate(b[: N + 1 - i]):
                out[i + j] += x * y
    return out


def series_inverse(a: list[int], N: int) -> list[int]:
    """Dense truncated inverse of a series with constant term +-1."""
    if a[0] not in (1, -1):
        raise ValueError("constant term must be a unit")
    inv = [0] * (N + 1)
    inv[0] = a[0]
    for n in range(1, N + 1):
        acc = 0
        for j in range(1, min(n, len(a) - 1) + 1):
            acc += a[j] * inv[n - j]
        inv[n] = -acc * a[0]
    return inv


def _series_pow(a: list[int], e: int, N: int) -> list[int]:
    result = [1] + [0] * N
    base = a
    while e:
        if e & 1:
            result = series_mul(result, base, N)
        e >>= 1
        if e:
            base = series_mul(base, base, N)
    return result


def eta_quotient_coeffs_dense(spec: EtaQuotient, N: int) -> CoeffTable:
    """Slow O(N^2) path: dense inversion and binary powering. Cross-check only."""
    c = [1] + [0] * N
    for m, d in zip(spec.m, spec.delta):
        f = euler_coeffs(m, N)
        if d < 0:
            f = series_inverse(f, N)
        c = series_mul(c, _series_pow(f, abs(d), N), N)
    return CoeffTable(c, spec, N)


def partition_numbers(N: int) -> list[int]:
    """p(0..N) by the pentagonal recurrence."""
    return eta_quotient_coeffs(EtaQuotient((1,), (-1,)), N).coeffs


def enumerate_colored(p: int, n: int, cap: int = ENUMERATION_CAP) -> int:
    """Count partitions of n where parts divisible by p come in two colours.

    Brute force over partitions (largest part first). A part size divisible
    by p used j times can be coloured in j + 1 ways.
    """
    if p < 1:
        raise ValueError("p must be positive")
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > cap:
        raise ValueError(f"n={n} above enumeration cap {cap}; use eta_quotient_coeffs")

    def walk(remaining: int, largest: int) -> int:
        if remaining == 0:
            return 1
        total = 0
        for part in range(min(remaining, largest), 0, -1):
            for j in range(1, remaining // part + 1):
                ways = j + 1 if part % p == 0 else 1
                total += ways * walk(remaining - j * part, part - 1)
        return total

    return walk(n, n)
