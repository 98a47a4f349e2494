from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from uqzrp.qseries import (
    EXACT,
    FLOAT,
    ModeError,
    ModelParams,
    format_rational,
    g_weight,
    mode_of,
    parse_rational,
    phi_exp,
    qbinom,
    qfact,
    qpoch,
    rational_points,
)

small_q = st.fractions(min_value=Fraction(1, 50), max_value=Fraction(49, 50), max_denominator=60)
occ = st.lists(st.integers(0, 4), min_size=1, max_size=4)


def inversion_qbinom(m, k, q):
    # sum over k-subsets of q^{#inversions} of the 0/1 word: independent of any recurrence
    total = Fraction(0)
    for subset in combinations(range(m), k):
        word = [1 if i in subset else 0 for i in range(m)]
        inv = sum(1 for i in range(m) for j in range(i + 1, m) if word[i] > word[j])
        total += q**inv
    return total


def test_parse_examples():
    assert parse_rational("-6/14") == Fraction(-3, 7)
    assert parse_rational(" 5 ") == 5
    with pytest.raises(ValueError):
        parse_rational("0.3")
    with pytest.raises(ZeroDivisionError):
        parse_rational("1/0")


@given(st.fractions(max_denominator=10**6))
def test_parse_format_roundtrip(x):
    assert parse_rational(format_rational(x)) == x


def test_mode_rules():
    assert mode_of(Fraction(1, 2), 3) == EXACT
    assert mode_of(0.5, 3) == FLOAT
    assert mode_of(2, 3) == EXACT
    with pytest.raises(ModeError):
        mode_of(Fraction(1, 2), 0.5)
    with pytest.raises(ModeError):
        qpoch(Fraction(1, 2), 2, 0.3)


def test_model_params_regime():
    ModelParams(2, Fraction(1, 3))
    for bad in (Fraction(0), Fraction(1), Fraction(3, 2)):
        with pytest.raises(ValueError):
            ModelParams(2, bad)
    with pytest.raises(ValueError):
        ModelParams(0, Fraction(1, 3))


def test_qpoch_small_cases():
    q, z = Fraction(1, 3), Fraction(2, 5)
    assert qpoch(z, 0, q) == 1
    assert qpoch(z, 2, q) == (1 - z) * (1 - z * q)
    assert qfact(3, q) == (1 - q) * (1 - q**2) * (1 - q**3)
    with pytest.raises(ValueError):
        qpoch(z, -1, q)


@given(st.integers(0, 7), st.integers(-2, 9), small_q)
def test_qbinom_against_inversions(m, k, q):
    expected = inversion_qbinom(m, k, q) if 0 <= k <= m else 0
    assert qbinom(m, k, q) == expected


@given(st.integers(0, 8), st.integers(0, 8), small_q)
def test_qbinom_factorial_ratio(m, k, q):
    if k > m:
        return
    assert qbinom(m, k, q) == qfact(m, q) / (qfact(k, q) * qfact(m - k, q))


def test_qbinom_at_q_zero_is_one():
    assert all(qbinom(5, k, Fraction(0)) == 1 for k in range(6))


@given(occ, occ)
def test_phi_exp_double_sum(a, b):
    n = min(len(a), len(b))
    a, b = a[:n], b[:n]
    assert phi_exp(a, b) == sum(a[i] * b[j] for i in range(n) for j in range(n) if i < j)


def test_g_weight_definition():
    q, mu = Fraction(1, 3), Fraction(1, 4)
    assert g_weight((1, 1), mu, q) == mu**-2 * qpoch(mu, 2, q) / qfact(1, q) ** 2
    assert g_weight((0, 0), mu, q) == 1
    with pytest.raises(ZeroDivisionError):
        g_weight((1,), Fraction(0), q)


def test_rational_points_deterministic_and_in_unit_interval():
    a = rational_points(5, 3, seed=4)
    assert a == rational_points(5, 3, seed=4)
    assert all(0 < x < 1 for p in a for x in p)
