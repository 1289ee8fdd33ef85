import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qreals import core
from qreals.core import QParam, QReal, neg, ominus, oplus, oslash, otimes, q_compare, tau, tau_inv
from qreals.errors import ParamMismatchError, QDomainError, QOverflowError, QZeroDivisionError
from qreals.qint import q_integer_closed, q_integer_recursive

P = QParam(0.5)
qs = st.floats(0.0, 1.0)
pre = st.floats(-10.0, 10.0)


def exact_tau(n, q):
    """Oracle: iterate n_q = (2 - q)(n-1)_q + 1 in rationals."""
    return float(q_integer_recursive(n, Fraction(q)))


def test_qparam_validation():
    assert QParam(0.25).s == 1.75
    assert QParam(1).is_classical
    for bad in (-0.1, 1.5, math.nan, math.inf):
        with pytest.raises(QDomainError):
            QParam(bad)
    with pytest.raises(TypeError):
        QParam("0.5")


def test_qreal_rejects_values_outside_image():
    with pytest.raises(QDomainError):
        QReal(P, -2.0)
    with pytest.raises(QDomainError):
        QReal(P, math.inf)
    assert QReal(QParam(1.0), -1e300).preimage == -1e300


@pytest.mark.parametrize("q", [0.0, 0.3, 0.5, 0.99, 1.0])
def test_tau_fixes_one_and_zero(q):
    assert tau(q, 1).value == pytest.approx(1.0, rel=1e-15)
    assert tau(q, 0).value == 0.0


def test_tau_examples():
    assert tau(P, 2).value == 2.5
    assert tau(P, 3).value == pytest.approx(exact_tau(3, Fraction(1, 2)), rel=1e-15)
    assert tau(P, 3).value == pytest.approx(4.75, rel=1e-15)
    assert tau(1.0, 3.7).value == 3.7


def test_tau_overflow():
    with pytest.raises(QOverflowError):
        tau(0.0, 1100)
    tau(0.0, 1000)


def test_tau_inv_examples():
    assert tau_inv(P, 2.5) == pytest.approx(2.0, rel=1e-15)
    assert tau_inv(P, 0.0) == 0.0
    assert tau_inv(P, -2.0 / 3.0) == pytest.approx(-1.0, rel=1e-14)
    with pytest.raises(QDomainError):
        tau_inv(P, -2.0)
    with pytest.raises(ParamMismatchError):
        tau_inv(QParam(0.3), tau(P, 1.0))


def test_oplus_examples():
    a, b = QReal(P, 4.75), QReal(P, 2.5)
    assert oplus(a, b).value == 13.1875
    assert oplus(a, b).value == pytest.approx(tau(P, 5).value, rel=1e-14)
    assert oplus(a, core.zero(P)) == a
    one = QParam(1.0)
    assert oplus(QReal(one, 3.25), QReal(one, -1.5)).value == 1.75


def test_mixed_parameters_are_rejected():
    with pytest.raises(ParamMismatchError):
        oplus(tau(0.5, 1), tau(0.4, 1))
    with pytest.raises(ParamMismatchError):
        otimes(tau(0.5, 1), tau(0.4, 1))
    with pytest.raises(ParamMismatchError):
        q_compare(tau(0.5, 1), tau(0.4, 1))


def test_neg_examples():
    assert neg(QReal(P, 1.0)).value == pytest.approx(-2.0 / 3.0, rel=1e-15)
    assert neg(core.zero(P)).value == 0.0
    assert neg(QReal(P, 2.5)).value == pytest.approx(-1.1111111111111112, rel=1e-14)
    # Opposite formula -a / (1 + (1 - q) a) on the value.
    assert neg(QReal(P, 2.5)).value == pytest.approx(-2.5 / (1 + 0.5 * 2.5), rel=1e-14)


def test_ominus_examples():
    x = QReal(P, 3.3)
    assert ominus(x, x).value == 0.0
    assert ominus(QReal(P, 13.1875), QReal(P, 2.5)).value == pytest.approx(4.75, rel=1e-14)
    one = QParam(1.0)
    assert ominus(QReal(one, 3.0), QReal(one, 5.0)).value == -2.0


def test_otimes_examples():
    a, b = QReal(P, 2.5), QReal(P, 4.75)
    assert otimes(a, b).value == pytest.approx((1.5 ** 6 - 1) / 0.5, rel=1e-14)
    assert otimes(a, b).value == pytest.approx(20.78125, rel=1e-14)
    assert otimes(a, core.one(P)).value == pytest.approx(2.5, rel=1e-15)
    assert otimes(a, core.zero(P)).value == 0.0


def test_oslash_examples():
    b = QReal(P, 2.5)
    assert oslash(b, b).value == pytest.approx(1.0, rel=1e-15)
    assert oslash(core.one(P), b).value == pytest.approx((1.5 ** 0.5 - 1) / 0.5, rel=1e-14)
    assert oslash(core.one(P), b).value == pytest.approx(0.4494897, abs=1e-7)
    one = QParam(1.0)
    assert oslash(QReal(one, 3.0), QReal(one, 4.0)).value == 0.75
    with pytest.raises(QZeroDivisionError):
        oslash(b, core.zero(P))


def test_q_dist_and_abs():
    a, b = QReal(P, 4.75), QReal(P, 2.5)
    assert core.q_dist(a, a).value == 0.0
    assert core.q_dist(a, b).value == pytest.approx(1.0, rel=1e-14)
    assert core.q_dist(a, b) == core.q_dist(b, a)
    assert core.q_abs(neg(a)).value == pytest.approx(4.75, rel=1e-14)
    one = QParam(1.0)
    assert core.q_dist(QReal(one, 1.5), QReal(one, -2.0)).value == 3.5


def test_q_compare_examples():
    assert q_compare(QReal(P, 4.75), QReal(P, 2.5)) is core.Ordering.GREATER
    assert q_compare(QReal(P, 2.5), QReal(P, 2.5)) is core.Ordering.EQUAL
    assert q_compare(QReal(P, -0.6667), core.zero(P)) is core.Ordering.LESS
    assert QReal(P, -0.6667) < core.zero(P) <= QReal(P, 0.0)


def test_exp_and_log():
    assert core.exp_cap(core.zero(P)).value == pytest.approx(1.0, rel=1e-15)
    assert core.log_cap(core.one(P)).value == 0.0
    one = QParam(1.0)
    assert core.exp_cap(QReal(one, 1.3)).value == pytest.approx(math.exp(1.3), rel=1e-15)
    with pytest.raises(QDomainError):
        core.log_cap(QReal(P, -0.5))
    with pytest.raises(QDomainError):
        core.log_cap(core.zero(P))
    with pytest.raises(QOverflowError):
        core.exp_cap(tau(P, 800))
    with pytest.raises(QOverflowError):
        core.exp_cap(tau(P, 8))


def test_operators_delegate():
    a, b = tau(P, 1.5), tau(P, -0.25)
    assert (a + b) == oplus(a, b)
    assert (a - b) == ominus(a, b)
    assert (a * b) == otimes(a, b)
    assert (a / b) == oslash(a, b)
    assert -a == neg(a)
    assert abs(b) == core.q_abs(b)
    assert b < a and a > b and a >= a
    with pytest.raises(TypeError):
        a + 1.0


def test_values_on_the_singularity_keep_their_preimage():
    p = QParam(0.0)
    lo = tau(p, -100.0)
    assert lo.value == -1.0
    hi = tau(p, 100.0)
    assert (lo * tau(p, -1.0)).value == pytest.approx(2.0 ** 100 - 1, rel=1e-13)
    assert (hi + lo).value == pytest.approx(0.0, abs=1e-12)


@settings(max_examples=300)
@given(qs, st.floats(-20.0, 20.0))
def test_round_trip_through_values(q, x):
    p = QParam(q)
    back = tau_inv(p, tau(p, x).value)
    assert abs(back - x) <= 1e-10 * max(1.0, abs(x))


@settings(max_examples=300)
@given(qs, pre, pre)
def test_additive_homomorphism_matches_sum_formula(q, x, y):
    p = QParam(q)
    a, b = tau(p, x).value, tau(p, y).value
    assert core.close(tau(p, x + y).value, a + b + p.u * a * b, 1e-10)


@settings(max_examples=300)
@given(qs, pre, pre)
def test_multiplicative_homomorphism(q, x, y):
    p = QParam(q)
    a, b = QReal(p, tau(p, x).value), QReal(p, tau(p, y).value)
    assert core.close(otimes(a, b).value, tau(p, x * y).value, 1e-10)


@settings(max_examples=300)
@given(qs, pre, pre, pre)
def test_field_axioms(q, x, y, z):
    p = QParam(q)
    a, b, c = (QReal(p, tau(p, v).value) for v in (x, y, z))
    assert core.close(((a + b) + c).value, (a + (b + c)).value, 1e-9)
    assert core.close(((a * b) * c).value, (a * (b * c)).value, 1e-9)
    assert (a + b).value == (b + a).value
    assert (a * b).value == (b * a).value
    assert core.close((a * (b + c)).value, ((a * b) + (a * c)).value, 1e-9)


@settings(max_examples=300)
@given(qs, pre)
def test_neg_involution_and_cancellation(q, x):
    p = QParam(q)
    a = QReal(p, tau(p, x).value)
    assert core.close(neg(neg(a)).value, a.value, 1e-12)
    assert core.close((a + neg(a)).value, 0.0, 1e-12)
    # Same identity on the opposite formula applied to the value.
    v = a.value
    w = -v / (1 + p.u * v)
    assert core.close(-w / (1 + p.u * w), v, 1e-12)


@settings(max_examples=300)
@given(qs, pre, pre)
def test_order_agrees_with_values_and_preimages(q, x, y):
    p = QParam(q)
    a, b = tau(p, x), tau(p, y)
    order = int(q_compare(a, b))
    assert order == (x > y) - (x < y)
    assert order == (a.value > b.value) - (a.value < b.value)


@settings(max_examples=200)
@given(qs, st.floats(0.0, 20.0), st.floats(0.0, 20.0))
def test_superadditive_on_nonnegative_arguments(q, x, y):
    p = QParam(q)
    lhs, rhs = tau(p, x + y).value, tau(p, x).value + tau(p, y).value
    assert lhs >= rhs * (1 - 1e-14) - 1e-300


@pytest.mark.parametrize("x", [-10.0, -3.5, 0.5, 7.0, 10.0])
def test_continuity_towards_q_equal_one(x):
    errs = [abs(tau(1.0 - d, x).value - x) for d in (1e-2, 1e-4, 1e-6, 1e-8)]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert errs[-1] <= 1e-6


def test_stable_form_beats_naive_power_near_one():
    q = 1.0 - 1e-12
    naive = ((2.0 - q) ** 3 - 1.0) / (1.0 - q)
    stable = tau(q, 3.0).value
    assert abs(stable - 3.0) < 1e-10
    assert abs(naive - 3.0) > abs(stable - 3.0)


def test_deviation_floor():
    assert core.close(1e-13, 0.0, 1e-9)
    assert not core.close(1.0, 1.0 + 1e-8, 1e-9)
    assert core.deviation(2.0, 2.0, 1e-9) == 0.0


def test_exact_oracle_matches_float_layer():
    for q in (Fraction(0), Fraction(1, 3), Fraction(9, 10)):
        for n in range(-12, 13):
            assert tau(float(q), n).value == pytest.approx(float(q_integer_closed(n, q)),
                                                           rel=1e-13, abs=1e-15)
