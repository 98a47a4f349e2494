from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from uqzrp import stochastic_r as sr
from uqzrp.qseries import qbinom, qpoch
from uqzrp.statespace import below

F = Fraction
unit = st.fractions(min_value=F(1, 40), max_value=F(39, 40), max_denominator=50)
occ2 = st.tuples(st.integers(0, 3), st.integers(0, 3))
occ3 = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))


def phi_by_hand(gamma, beta, lam, mu, q):
    # direct transcription with phi(a, b) = sum_{i<j} a_i b_j written out
    n = len(beta)
    if any(g > b for g, b in zip(gamma, beta)):
        return 0
    diff = [b - g for b, g in zip(beta, gamma)]
    expo = sum(diff[i] * gamma[j] for i in range(n) for j in range(i + 1, n))
    g, b = sum(gamma), sum(beta)
    val = q**expo * (mu / lam) ** g * qpoch(lam, g, q) * qpoch(mu / lam, b - g, q) / qpoch(mu, b, q)
    for bi, gi in zip(beta, gamma):
        val *= qbinom(bi, gi, q)
    return val


@given(occ3, occ3, unit, unit, unit)
def test_phi_matches_transcription(gamma, beta, lam, mu, q):
    assert sr.phi_weight(gamma, beta, lam, mu, q) == phi_by_hand(gamma, beta, lam, mu, q)


@given(occ3, unit, unit, unit)
def test_sum_rule_property(beta, lam, mu, q):
    assert sr.verify_sum_rule(beta, lam, mu, q)


@given(occ2, unit, unit, unit)
def test_nonnegative_in_regime(beta, a, b, q):
    lam, mu = max(a, b), min(a, b)
    if lam == mu:
        return
    assert all(sr.phi_weight(g, beta, lam, mu, q) >= 0 for g in below(beta))


def test_empty_occupancies_give_one():
    z = (0, 0)
    assert sr.r_element(z, z, z, z, F(1, 2), F(1, 3), F(1, 5)) == 1


def test_weight_conservation_selects_support():
    lam, mu, q = F(1, 2), F(1, 3), F(1, 5)
    assert sr.r_element((1, 0), (0, 0), (0, 1), (0, 0), lam, mu, q) == 0
    assert sr.r_element((1, 0), (0, 1), (0, 0), (1, 1), lam, mu, q) == sr.phi_weight((1, 0), (1, 1), lam, mu, q)


def test_phi_rejects_length_mismatch():
    with pytest.raises(ValueError):
        sr.phi_weight((1,), (1, 0), F(1, 2), F(1, 3), F(1, 5))


def test_block_columns_sum_to_one():
    for w in [(1, 1), (2, 1), (1, 1, 1)]:
        assert sr.verify_column_sums(w, F(2, 3), F(1, 4), F(1, 3))
        assert sr.verify_support(w, F(2, 3), F(1, 4), F(1, 3))
        assert sr.verify_nonnegative(w, F(2, 3), F(1, 4), F(1, 3))


def test_block_dense_form():
    block = sr.build_r_block((1, 0), F(1, 2), F(1, 3), F(1, 5))
    dense = block.to_dense()
    assert [sum(col) for col in zip(*dense)] == [1, 1]


@pytest.mark.parametrize("weight", [(1,), (2,), (1, 1), (2, 1), (1, 1, 1)])
def test_yang_baxter_small_weights(weight):
    assert sr.verify_yang_baxter(weight, F(1, 2), F(2, 7), F(3, 11), F(1, 3))


def test_inversion():
    assert sr.verify_inversion((2, 1), F(1, 2), F(1, 7), F(1, 3))


def test_inversion_check_detects_wrong_order():
    # S(lam, mu) applied twice is not the identity
    lam, mu, q = F(1, 2), F(1, 7), F(1, 3)
    basis = sr.tensor_basis((1, 1), 2)
    wrong = sr._compose(sr.s_checked(lam, mu, q), sr.s_checked(lam, mu, q))
    assert not sr._operator_equal("wrong", wrong, lambda b: {b: 1}, basis)


def test_yang_baxter_detects_mismatched_parameters():
    w = (1, 1)
    basis = sr.tensor_basis(w, 3)
    q = F(1, 3)
    a, b, c = F(1, 2), F(2, 7), F(3, 11)
    lhs = sr._compose(sr.s_acting(0, 1, a, b, q), sr.s_acting(0, 2, a, c, q), sr.s_acting(1, 2, b, c, q))
    rhs = sr._compose(sr.s_acting(1, 2, b, c, q), sr.s_acting(0, 2, a, b, q), sr.s_acting(0, 1, a, c, q))
    assert not sr._operator_equal("ybe_broken", lhs, rhs, basis)


@given(occ2, occ2, occ2, unit, unit, unit)
def test_gauge_identities_property(alpha, beta, gamma, lam, mu, q):
    total = tuple(a + b for a, b in zip(alpha, beta))
    if any(g > t for g, t in zip(gamma, total)):
        return
    delta = tuple(t - g for t, g in zip(total, gamma))
    c = sr.verify_gauge_identities(alpha, beta, gamma, delta, lam, mu, q)
    assert c, c.witness


def test_gauge_skips_exchange_outside_precondition():
    c = sr.verify_gauge_identities((0, 1), (1, 0), (1, 0), (0, 1), F(1, 2), F(1, 3), F(1, 5))
    assert c and c.detail["skipped"] == ["exchange"]
    with pytest.raises(ValueError):
        sr.check_exchange((0, 1), (1, 0), (1, 0), F(1, 2), F(1, 3), F(1, 5))


def test_float_mode_agrees_with_exact():
    args = ((1, 1), (2, 1), F(1, 2), F(1, 3), F(1, 5))
    exact = sr.phi_weight(*args)
    approx = sr.phi_weight((1, 1), (2, 1), 0.5, 1 / 3, 0.2)
    assert abs(float(exact) - approx) < 1e-14
