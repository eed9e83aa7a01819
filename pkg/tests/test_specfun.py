import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import bessel_i_series, jacobi_explicit, log_gamma_stirling, trapezoid
from ptcoh.specfun import (
    BesselOrder,
    JacobiParams,
    bessel_i,
    bessel_k,
    jacobi_all,
    jacobi_poly,
    log_gamma,
)

A = JacobiParams(1 + 0.5j, 1 - 0.5j)
B = JacobiParams(0.85 + 0.4j, 0.85 - 0.4j)


# --- log gamma ---


def test_log_gamma_small_integers():
    assert log_gamma(1) == pytest.approx(0, abs=1e-15)
    assert log_gamma(5).real == pytest.approx(math.log(24), rel=1e-14)
    assert abs(log_gamma(5).imag) < 1e-15


def test_log_gamma_complex_against_stirling_oracle():
    # frozen from the shifted Stirling oracle
    expected = -0.304349609021898 + 0.48375784292991586j
    assert log_gamma_stirling(2 + 1j) == pytest.approx(expected, abs=1e-15)
    assert abs(log_gamma(2 + 1j) - expected) < 1e-12


@pytest.mark.parametrize(
    "z", [0.1, 0.5 + 3j, 0.0625 + 3j, 0.01 + 25j, 2 + 1j, 7.5 - 4j, 25 + 10j, 41.7 + 0.5j]
)
def test_log_gamma_matches_oracle(z):
    got = log_gamma(z)
    ref = log_gamma_stirling(z)
    assert abs(cmath.exp(got - ref) - 1) < 1e-12


@given(st.floats(0.05, 60), st.floats(-30, 30))
def test_log_gamma_recurrence(x, y):
    z = complex(x, y)
    assert abs(log_gamma(z + 1) - log_gamma(z) - cmath.log(z)) < 1e-12 * max(1, abs(z))


@pytest.mark.parametrize("z", [0, -1.5, -2 + 1j])
def test_log_gamma_domain(z):
    with pytest.raises(ValueError):
        log_gamma(z)


# --- Jacobi ---


def test_jacobi_degree_zero():
    s = np.linspace(-1, 1, 7)
    assert np.all(jacobi_poly(0, A, s) == 1)


@pytest.mark.parametrize("s", [-1.0, -0.3, 0.0, 0.8, 1.0])
def test_jacobi_degree_one_closed_form(s):
    a, b = A.a, A.b
    assert jacobi_poly(1, A, s) == pytest.approx((a + 1) + (a + b + 2) * (s - 1) / 2, abs=1e-15)


def test_jacobi_reflection():
    flipped = JacobiParams(A.b, A.a)
    assert jacobi_poly(3, A, -0.4) == pytest.approx(-jacobi_poly(3, flipped, 0.4), abs=1e-13)


@pytest.mark.parametrize("params", [A, B])
@pytest.mark.parametrize("n", [2, 5, 9, 14])
@pytest.mark.parametrize("s", [-0.95, -0.2, 0.37, 1.0])
def test_jacobi_against_explicit_sum(params, n, s):
    ref = jacobi_explicit(n, params.a, params.b, s)
    assert abs(jacobi_poly(n, params, s) - ref) < 1e-11 * max(1, abs(ref))


@given(st.integers(0, 30), st.floats(-1, 1), st.floats(0.6, 3), st.floats(-2, 2))
def test_jacobi_conjugate_pair(n, s, ar, ai):
    a = complex(ar, ai)
    p = JacobiParams(a, a.conjugate())
    q = JacobiParams(a.conjugate(), a)
    lhs = np.conj(jacobi_poly(n, p, s))
    rhs = jacobi_poly(n, q, s)
    assert abs(lhs - rhs) <= 1e-12 * max(1, abs(rhs))


def test_jacobi_all_shape():
    out = jacobi_all(4, A, np.zeros((3, 2)))
    assert out.shape == (5, 3, 2)


# --- Bessel ---


def test_bessel_i_at_zero():
    assert bessel_i(3, 0) == 0


def test_bessel_i_series_oracle():
    ref = bessel_i_series(3, 2.0)
    assert ref == pytest.approx(0.2127399592398526, rel=1e-14)
    assert bessel_i(BesselOrder(3), 2.0) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("nu", [0.5, 2.7, 3, 5, 17.25])
def test_wronskian_at_one(nu):
    w = bessel_i(nu, 1) * bessel_k(nu + 1, 1) + bessel_i(nu + 1, 1) * bessel_k(nu, 1)
    assert abs(w - 1) < 1e-10


@pytest.mark.parametrize("nu", [0.5, 2.7, 3, 5])
@pytest.mark.parametrize("x", [0.01, 0.3, 1.0, 4.0, 12.0, 33.0, 50.0])
def test_bessel_positivity_and_wronskian(nu, x):
    i0, i1 = bessel_i(nu, x), bessel_i(nu + 1, x)
    k0, k1 = bessel_k(nu, x), bessel_k(nu + 1, x)
    assert i0 > 0 and k0 > 0
    assert abs(x * (i0 * k1 + i1 * k0) - 1) < 1e-10


def test_bessel_k_half_order_closed_form():
    assert bessel_k(0.5, 1.0) == pytest.approx(math.sqrt(math.pi / 2) * math.exp(-1), rel=1e-12)


def test_bessel_k_against_trapezoid_oracle():
    # plain trapezoid on the cosh integral, frozen; converges geometrically
    ref = trapezoid(lambda t: math.exp(-4 * math.cosh(t)) * math.cosh(3 * t), 0.0, 8.0, 400)
    assert ref == pytest.approx(0.029884924416755672, rel=1e-13)
    assert bessel_k(3, 4.0) == pytest.approx(ref, rel=1e-12)


def _k_asymptotic_terms(nu, x, count):
    mu = 4 * nu * nu
    lead = math.sqrt(math.pi / (2 * x)) * math.exp(-x)
    terms, t = [], 1.0
    for k in range(count):
        terms.append(lead * t)
        t *= (mu - (2 * k + 1) ** 2) / ((k + 1) * 8 * x)
    return terms


def test_bessel_k_large_argument_asymptotics():
    nu, x = 2.7, 10.0
    terms = _k_asymptotic_terms(nu, x, 30)
    k = bessel_k(nu, x)
    # two-term form: off by about the first neglected term (~1e-6 here)
    assert abs(k - sum(terms[:2])) < 1.2 * abs(terms[2])
    # the divergent series bottoms out near 1e-10 relative at x = 10
    assert abs(k - sum(terms[:20])) < 1e-9 * k


def test_bessel_k_vectorised_matches_scalar():
    xs = np.array([0.05, 1.0, 7.0, 40.0])
    vec = bessel_k(2.7, xs)
    for x, v in zip(xs, vec):
        assert v == pytest.approx(bessel_k(2.7, float(x)), rel=1e-13)


def test_bessel_i_series_and_asymptotic_branches_agree():
    # x = 36 uses the asymptotic branch for nu = 3; the series must agree
    from ptcoh.specfun import _bessel_i_asymptotic, _bessel_i_series

    for nu, x in [(3, 36.0), (0.5, 80.0), (5, 150.0)]:
        a = _bessel_i_asymptotic(nu, x)
        assert a is not None
        assert a == pytest.approx(_bessel_i_series(nu, x), rel=1e-13)


@settings(max_examples=40)
@given(st.floats(0.5, 50), st.floats(0.01, 200))
def test_bessel_i_relative_accuracy(nu, x):
    mpmath = pytest.importorskip("mpmath")
    ref = float(mpmath.besseli(nu, x))
    assert bessel_i(nu, x) == pytest.approx(ref, rel=1e-12)


def test_bessel_domain_errors():
    with pytest.raises(ValueError):
        bessel_k(3, 0.0)
    with pytest.raises(ValueError):
        bessel_i(3, -1.0)
    with pytest.raises(ValueError):
        BesselOrder(0)
    with pytest.raises(OverflowError):
        bessel_i(3, 800.0)
