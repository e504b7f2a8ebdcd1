from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from vrx.exactnum import IDENTITIES, binom, binomial_expansion_coeffs, check_binomial_identities


def oracle_binom(m, n):
    """Falling factorial over Fractions, independent of the integer routine."""
    if n < 0:
        return 0
    acc = Fraction(1)
    for k in range(n):
        acc *= Fraction(m - k, k + 1)
    assert acc.denominator == 1
    return int(acc)


ints = st.integers(-60, 60)
nats = st.integers(0, 40)


@pytest.mark.parametrize("m,n,want", [(-1, 2, 1), (-2, 3, -4), (3, 5, 0), (5, 2, 10), (0, 0, 1), (7, -1, 0)])
def test_small_values(m, n, want):
    assert binom(m, n) == want


def test_nonnegative_top_matches_math_comb():
    for m in range(0, 30):
        for n in range(0, 30):
            assert binom(m, n) == comb(m, n)


@given(ints, st.integers(-5, 40))
def test_matches_fraction_oracle(m, n):
    assert binom(m, n) == oracle_binom(m, n)


@given(ints, st.integers(1, 40))
def test_pascal(m, n):
    assert binom(m, n) == binom(m - 1, n) + binom(m - 1, n - 1)


@given(ints, nats)
def test_upper_negation(m, n):
    assert binom(-m, n) == (-1) ** n * binom(m + n - 1, n)


@given(ints, st.integers(0, 25))
def test_expansion_coefficients(m, k):
    assert binomial_expansion_coeffs(m, k) == [binom(m, i) for i in range(k + 1)]


def test_expansion_rejects_negative_power():
    with pytest.raises(ValueError):
        binomial_expansion_coeffs(3, -1)


def test_identities_exhaustive_small_range():
    reps = check_binomial_identities(6, 6, 6)
    assert {r.identity for r in reps} == set(IDENTITIES)
    assert all(r.passed and r.counterexample is None for r in reps)
    assert all(r.checked > 0 for r in reps)


def test_report_json_keys():
    js = check_binomial_identities(2, 2, 2)[0].to_json()
    assert js["pass"] is True
    assert js["range"] == [2, 2, 2]
