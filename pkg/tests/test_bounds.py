"""Closed-form bound formulas against hand-derived anchor values."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from driftlab.bounds import BoundSpec, expected_time_upper, tail_probability_upper

E = math.e


def rel_close(a, b, tol=1e-12):
    return abs(a - b) <= tol * max(abs(a), abs(b), 1.0)


# --- expected-time formulas -------------------------------------------------


def test_expected_time_two_absorbing():
    spec = BoundSpec(kind="TwoAbsorbing", b=20, x0=10, delta=1.0)
    assert expected_time_upper(spec) == 100.0


def test_expected_time_additive():
    spec = BoundSpec(kind="Additive", b=50, x0=0, epsilon=0.5)
    assert expected_time_upper(spec) == 100.0


def test_expected_time_standard_variance():
    spec = BoundSpec(kind="StandardVariance", b=1, x0=0, delta=1.0)
    assert expected_time_upper(spec) == 1.0


def test_expected_time_negative_drift_variance():
    spec = BoundSpec(kind="NegativeDriftVariance", b=10, x0=4, delta=0.5)
    assert rel_close(expected_time_upper(spec), (100 - 36) / 0.5)


def test_expected_time_unsupported_for_polynomial_kind():
    spec = BoundSpec(kind="KotzingPolynomial", ell=1.0, c=E, n=10)
    with pytest.raises(ValueError):
        expected_time_upper(spec)


# --- tail formulas at exponent -1 anchors -----------------------------------


def test_tail_standard_variance_exponent_minus_one():
    spec = BoundSpec(kind="StandardVariance", b=1, x0=0, delta=1.0)
    assert rel_close(tail_probability_upper(spec, E), math.exp(-1))


def test_tail_additive_exponent_minus_one():
    spec = BoundSpec(kind="Additive", b=1, x0=0, epsilon=1.0)
    assert rel_close(tail_probability_upper(spec, E), math.exp(-1))


def test_tail_additive_formula_at_b_e():
    # exponent is -tau*eps/(e*b) = -1/e here, not -1: the denominator
    # carries b = e as well as the constant e
    spec = BoundSpec(kind="Additive", b=E, x0=0, epsilon=1.0)
    assert rel_close(tail_probability_upper(spec, E), math.exp(-1 / E))


def test_tail_two_absorbing_exponent_minus_one():
    spec = BoundSpec(kind="TwoAbsorbing", b=1, x0=0.5, delta=1.0)
    assert rel_close(tail_probability_upper(spec, E / 2), math.exp(-1))


def test_tail_negative_drift_variance_matches_standard():
    a = BoundSpec(kind="NegativeDriftVariance", b=3, x0=1, delta=0.25)
    s = BoundSpec(kind="StandardVariance", b=3, x0=1, delta=0.25)
    for tau in (1.0, 10.0, 100.0):
        assert tail_probability_upper(a, tau) == tail_probability_upper(s, tau)


def test_tail_polynomial_quarter_at_r_four():
    # tau = r * n^2 with r = 4, c = e: (1/4)^(1/(1*ln e)) = 0.25
    spec = BoundSpec(kind="KotzingPolynomial", ell=1.0, c=E, n=10)
    assert rel_close(tail_probability_upper(spec, 400.0), 0.25)


def test_tail_polynomial_vacuous_below_quadratic():
    spec = BoundSpec(kind="KotzingPolynomial", ell=1.0, c=E, n=10)
    assert tail_probability_upper(spec, 50.0) == 1.0
    assert tail_probability_upper(spec, 100.0) == 1.0


def test_tail_stays_in_unit_interval():
    spec = BoundSpec(kind="StandardVariance", b=100, x0=0, delta=0.01)
    assert tail_probability_upper(spec, 0.0) == 1.0
    p = tail_probability_upper(spec, 0.001)
    assert 0.0 < p <= 1.0


def test_tail_two_absorbing_squares_the_standard_bound():
    two = BoundSpec(kind="TwoAbsorbing", b=7, x0=3, delta=0.5)
    std = BoundSpec(kind="StandardVariance", b=7, x0=3, delta=0.5)
    for tau in (200.0, 500.0, 900.0):
        assert rel_close(
            tail_probability_upper(two, tau), tail_probability_upper(std, tau) ** 2
        )


@given(
    tau=st.floats(min_value=0.1, max_value=1e5),
    later=st.floats(min_value=1.01, max_value=10.0),
)
@settings(max_examples=80)
def test_tail_nonincreasing_in_tau(tau, later):
    spec = BoundSpec(kind="StandardVariance", b=10, x0=5, delta=0.5)
    assert tail_probability_upper(spec, tau * later) <= tail_probability_upper(spec, tau)


# --- validation -------------------------------------------------------------


def test_spec_rejects_unknown_kind():
    with pytest.raises(ValueError):
        BoundSpec(kind="Nope", b=1, x0=0, delta=1.0)


def test_spec_rejects_bad_geometry():
    with pytest.raises(ValueError):
        BoundSpec(kind="StandardVariance", b=0, x0=0, delta=1.0)
    with pytest.raises(ValueError):
        BoundSpec(kind="StandardVariance", b=1, x0=2, delta=1.0)
    with pytest.raises(ValueError):
        BoundSpec(kind="StandardVariance", b=1, x0=0)  # delta missing
    with pytest.raises(ValueError):
        BoundSpec(kind="Additive", b=1, x0=0)  # epsilon missing
    with pytest.raises(ValueError):
        BoundSpec(kind="KotzingPolynomial", ell=1.0, c=1.0, n=10)  # c must exceed 1
    with pytest.raises(ValueError):
        BoundSpec(kind="KotzingPolynomial", ell=1.0, c=E, n=1)


def test_tail_rejects_negative_tau():
    spec = BoundSpec(kind="StandardVariance", b=1, x0=0, delta=1.0)
    with pytest.raises(ValueError):
        tail_probability_upper(spec, -1.0)
