import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import rho_product
from ptcoh.model import (
    HALF_PI,
    MODEL_A,
    MODEL_B,
    ScarfIModel,
    basis,
    cpt_apply_sign,
    eigenfunction,
    eigenstate,
    energy,
    excitation,
    log_rho,
    norm_constant,
    potential,
    rho,
)
from ptcoh.quadrature import integrate_finite


def test_model_invariants(model):
    assert model.beta == model.alpha.conjugate()
    assert model.nu == pytest.approx(2 * model.alpha.real + 1)
    assert model.nu > 2
    assert model.omega == 1.0


@pytest.mark.parametrize("alpha", [0.5, 0.2 + 1j, -1 + 0j])
def test_rejects_small_real_part(alpha):
    with pytest.raises(ValueError):
        ScarfIModel(alpha)


def test_potential_at_origin():
    a, b = MODEL_A.alpha, MODEL_A.beta
    expected = (2 * (a * a + b * b) - 1) / 4 - (a + b + 1) ** 2 / 4
    assert potential(MODEL_A, 0.0) == pytest.approx(expected, abs=1e-14)


def test_potential_duplicate_formula():
    a = 1 + 0.5j
    b = a.conjugate()
    x = 0.3
    ref = (
        (2 * (a**2 + b**2) - 1) / (4 * math.cos(x) ** 2)
        + (a**2 - b**2) * math.sin(x) / (2 * math.cos(x) ** 2)
        - (a + b + 1) ** 2 / 4
    )
    assert potential(MODEL_A, x) == pytest.approx(ref, abs=1e-13)


@given(st.floats(-1.5, 1.5))
def test_potential_pt_symmetric(x):
    assert potential(MODEL_B, -x).conjugate() == pytest.approx(potential(MODEL_B, x), abs=1e-9)


def test_potential_domain():
    with pytest.raises(ValueError):
        potential(MODEL_A, HALF_PI)


def test_excitation_values():
    assert excitation(MODEL_A, 0) == 0
    assert excitation(MODEL_A, 1) == 4
    assert excitation(MODEL_A, 4) == 28
    assert energy(MODEL_A, 4) == MODEL_A.omega * 28


def test_spectrum_real_and_increasing(model):
    e = [energy(model, n) for n in range(model.n_max + 1)]
    assert e[0] == 0
    assert all(a < b for a, b in zip(e, e[1:]))


def test_rho_small_values():
    assert rho(MODEL_A, 0) == 1
    assert rho(MODEL_A, 2) == 40
    assert rho(MODEL_A, 3) == 720
    # gamma-function form Gamma(4) Gamma(7) / Gamma(4)
    assert math.gamma(4) * math.gamma(7) / math.gamma(4) == 720


@pytest.mark.parametrize("n", [0, 1, 5, 12, 20, 21, 30, 40])
def test_rho_product_vs_gamma_form(model, n):
    nu = model.nu
    gamma_form = math.lgamma(n + 1) + math.lgamma(n + nu + 1) - math.lgamma(nu + 1)
    assert log_rho(model, n) == pytest.approx(math.log(rho_product(nu, n)), rel=1e-12, abs=1e-12)
    assert log_rho(model, n) == pytest.approx(gamma_form, rel=1e-12, abs=1e-12)


def test_rho_overflow_is_signalled():
    with pytest.raises(OverflowError):
        rho(MODEL_A, 200)
    assert math.isfinite(log_rho(MODEL_A, 200))


def test_rho_ratio_grows_without_bound(model):
    ratios = [rho(model, n + 1) / rho(model, n) for n in range(30)]
    assert ratios == pytest.approx([excitation(model, n + 1) for n in range(30)], rel=1e-12)
    assert all(a < b for a, b in zip(ratios, ratios[1:]))


def test_norm_constant_phase(model):
    for n in range(model.n_max + 1):
        c = norm_constant(model, n)
        if n % 2 == 0:
            assert abs(c.imag) <= 1e-15 * abs(c)
        else:
            assert abs(c.real) <= 1e-15 * abs(c)
        # conj(N_n) = (-1)^n N_n
        assert c.conjugate() == pytest.approx((-1) ** n * c, rel=1e-15)


def test_jacobi_norm_is_real_positive(model):
    from ptcoh.specfun import log_gamma

    for n in range(10):
        prod = cmath.exp(log_gamma(n + model.alpha + 1) + log_gamma(n + model.beta + 1))
        assert abs(prod.imag) < 1e-12 * abs(prod)
        assert prod.real > 0


def test_ground_state_normalised_by_quadrature():
    res = integrate_finite(lambda x: eigenfunction(MODEL_A, 0, x) ** 2, -HALF_PI, HALF_PI, tol=1e-13)
    assert abs(res.value - 1) < 1e-10


def test_eigenfunction_vanishes_at_walls(model):
    for n in (0, 3, 12):
        assert eigenfunction(model, n, HALF_PI) == 0
        assert eigenfunction(model, n, -HALF_PI) == 0


@pytest.mark.parametrize("n", range(0, 13))
def test_pt_invariance_pointwise(model, n):
    x = np.linspace(-HALF_PI, HALF_PI, 61)
    assert np.max(np.abs(np.conj(eigenfunction(model, n, -x)) - eigenfunction(model, n, x))) < 1e-10


def test_pt_norm_signs():
    def integrand(x):
        B = basis(MODEL_A, 6, x)
        return B[:, :, None] * B[:, None, :]

    G = integrate_finite(integrand, -HALF_PI, HALF_PI, tol=1e-13).value
    expected = np.diag([(-1) ** n for n in range(7)])
    assert np.max(np.abs(G - expected)) < 1e-10


def test_real_phase_convention_breaks_pt_for_odd_levels():
    bad = ScarfIModel(MODEL_A.alpha, phase_convention="real")
    x = np.linspace(-1.2, 1.2, 9)
    for n in range(6):
        dev = np.max(np.abs(np.conj(eigenfunction(bad, n, -x)) - eigenfunction(bad, n, x)))
        if n % 2:
            assert dev > 1e-3
        else:
            assert dev < 1e-12


def test_eigenfunction_matches_direct_formula():
    from oracles import jacobi_explicit

    m, n, x = MODEL_B, 4, 0.41
    s = math.sin(x)
    a, b = m.alpha, m.beta
    direct = (
        norm_constant(m, n)
        * (1 - s) ** (a / 2 + 0.25)
        * (1 + s) ** (b / 2 + 0.25)
        * jacobi_explicit(n, a, b, s)
    )
    assert eigenfunction(m, n, x) == pytest.approx(direct, rel=1e-12)


def test_cpt_sign():
    assert cpt_apply_sign(0) == 1
    assert cpt_apply_sign(1) == -1
    assert cpt_apply_sign(7) == -1
    with pytest.raises(ValueError):
        cpt_apply_sign(-1)


def test_eigenstate_record(model):
    st_ = eigenstate(model, 3)
    assert st_.energy == model.omega * st_.excitation
    assert st_.cpt_sign == -1
    assert st_.norm_constant == norm_constant(model, 3)


def test_level_bounds():
    small = ScarfIModel(1 + 0.5j, n_max=5)
    with pytest.raises(ValueError):
        eigenfunction(small, 6, 0.0)
    with pytest.raises(ValueError):
        eigenfunction(small, 2, 2.0)


def test_model_is_immutable():
    with pytest.raises(Exception):
        MODEL_A.alpha = 2.0
