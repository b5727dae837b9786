"""Exact coefficients of eta-quotients from a convergent Bessel series."""

from .dedekind import dedekind_sum_def, dedekind_sum_fast
from .etaquotient import EtaQuotient, check_admissible, delta_profile, partition_spec, two_color
from .oracle import eta_quotient_coeffs, partition_numbers
from .rademacher import (
    ADMISSIBLE_PRIMES,
    InadmissibleSpecError,
    ResourceCapError,
    a_p,
    certify,
    exact_coefficient,
)

__all__ = [
    "ADMISSIBLE_PRIMES",
    "EtaQuotient",
    "InadmissibleSpecError",
    "ResourceCapError",
    "a_p",
    "certify",
    "check_admissible",
    "dedekind_sum_def",
    "dedekind_sum_fast",
    "delta_profile",
    "eta_quotient_coeffs",
    "exact_coefficient",
    "partition_numbers",
    "partition_spec",
    "two_color",
]
