from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from etaexact.dedekind import (
    dedekind_sum_12k,
    dedekind_sum_def,
    dedekind_sum_fast,
    dedekind_sum_reciprocity,
)


def _naive(h, k):
    # independent transcription with Fractions and an explicit fractional part
    total = Fraction(0)
    for j in range(1, k):
        t = Fraction(h * j, k)
        total += Fraction(j, k) * (t - (t.numerator // t.denominator) - Fraction(1, 2))
    return total


@pytest.mark.parametrize(
    "h,k,expected",
    [(1, 1, Fraction(0)), (0, 1, Fraction(0)), (1, 3, Fraction(1, 18)), (5, 7, Fraction(-1, 14))],
)
def test_definition_examples(h, k, expected):
    assert dedekind_sum_def(h, k) == expected
    assert _naive(h, k) == expected


@pytest.mark.parametrize(
    "h,k,expected",
    [(1, 2, Fraction(0)), (3, 5, Fraction(0)), (1, 3, Fraction(1, 18)), (2, 5, Fraction(0)), (4, 5, Fraction(-1, 5))],
)
def test_fast_examples(h, k, expected):
    # s(3,5): terms (1 - 6 + 9 - 4)/50 from the defining sum
    assert _naive(h, k) == expected
    assert dedekind_sum_fast(h, k) == expected


def test_examples_cross_via_reciprocity():
    # s(5,7) + s(7,5) with s(7,5) = s(2,5) = 0
    assert dedekind_sum_def(5, 7) + dedekind_sum_def(2, 5) == dedekind_sum_reciprocity(5, 7)


@pytest.mark.parametrize("h,k", [(2, 4), (0, 5), (3, 0), (-1, 3)])
def test_rejects_bad_arguments(h, k):
    with pytest.raises(ValueError):
        dedekind_sum_def(h, k)
    with pytest.raises(ValueError):
        dedekind_sum_fast(h, k)


def test_reduces_h_mod_k():
    assert dedekind_sum_fast(12, 7) == dedekind_sum_fast(5, 7)
    assert dedekind_sum_fast(7 * 1000 + 3, 7) == dedekind_sum_def(3, 7)


def test_agreement_small_exhaustive():
    for k in range(1, 120):
        for h in range(k):
            if gcd(h, k) == 1:
                assert dedekind_sum_fast(h, k) == dedekind_sum_def(h, k) == _naive(h, k)


coprime_pairs = (
    st.tuples(st.integers(1, 10**6), st.integers(1, 10**6)).filter(lambda t: gcd(*t) == 1)
)


@given(coprime_pairs)
def test_reciprocity(hk):
    h, k = hk
    assert dedekind_sum_fast(h, k) + dedekind_sum_fast(k, h) == dedekind_sum_reciprocity(h, k)


@given(st.integers(2, 10**5), st.data())
def test_oddness(k, data):
    h = data.draw(st.integers(1, k - 1).filter(lambda h: gcd(h, k) == 1))
    assert dedekind_sum_fast(k - h, k) == -dedekind_sum_fast(h, k)


@given(st.integers(1, 10**7))
def test_closed_form_s1k(k):
    assert dedekind_sum_fast(1, k) == Fraction((k - 1) * (k - 2), 12 * k)


@given(coprime_pairs)
def test_6k_integrality(hk):
    h, k = hk
    s = dedekind_sum_fast(h, k)
    assert (6 * k * s).denominator == 1
    assert dedekind_sum_12k(h, k) == 12 * k * s
