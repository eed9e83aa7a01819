"""Special-function kernels restricted to the domains this package needs.

* ``log_gamma``: complex argument, Re(z) > 0.
* ``jacobi_poly`` / ``jacobi_all``: Jacobi polynomials with complex
  parameters on real arguments.
* ``bessel_i`` / ``bessel_k``: modified Bessel functions of real order
  nu > 0 and non-negative real argument.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .quadrature import integrate_halfline

# Lanczos approximation, g = 7, n = 9.  Coefficients as published by
# P. Godfrey (also reproduced in Press et al., Numerical Recipes, 3rd ed.);
# relative accuracy about 1e-15 in the right half plane.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class JacobiParams:
    a: complex
    b: complex


@dataclass(frozen=True)
class BesselOrder:
    nu: float

    def __post_init__(self):
        if not self.nu > 0:
            raise ValueError(f"Bessel order must be positive, got {self.nu}")


def log_gamma(z: complex) -> complex:
    """Principal log-gamma for Re(z) > 0."""
    z = complex(z)
    if z.real <= 0:
        raise ValueError(f"log_gamma needs Re(z) > 0, got {z}")
    z -= 1.0
    acc = _LANCZOS_COEF[0]
    for k, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc += c / (z + k)
    t = z + _LANCZOS_G + 0.5
    val = _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(acc)
    # cmath.log(acc) can land on the wrong sheet when Im(z) is large and
    # Re(z) small; snap to the analytic branch using a coarse estimate
    coarse = _coarse_log_gamma(z + 1.0)
    turns = round((coarse - val).imag / (2.0 * math.pi))
    return val + 2j * math.pi * turns


def _coarse_log_gamma(z: complex) -> complex:
    # leading Stirling terms after shifting by 8; error well below pi
    w = z + 8.0
    s = (w - 0.5) * cmath.log(w) - w + _HALF_LOG_2PI + 1.0 / (12.0 * w)
    for k in range(8):
        s -= cmath.log(z + k)
    return s


def log_gamma_real(x: float) -> float:
    return log_gamma(x).real


def jacobi_all(n: int, p: JacobiParams, s) -> np.ndarray:
    """P_0 .. P_n at ``s``; result has shape ``(n + 1,) + shape(s)``."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    a, b = complex(p.a), complex(p.b)
    s = np.asarray(s, dtype=float)
    out = np.empty((n + 1,) + s.shape, dtype=complex)
    out[0] = 1.0
    if n == 0:
        return out
    out[1] = (a + 1.0) + (a + b + 2.0) * (s - 1.0) / 2.0
    ab = a + b
    for k in range(2, n + 1):
        c = 2 * k + ab
        a1 = 2 * k * (k + ab) * (c - 2)
        a2 = (c - 1) * (a * a - b * b)
        a3 = (c - 2) * (c - 1) * c
        a4 = 2 * (k + a - 1) * (k + b - 1) * c
        out[k] = ((a2 + a3 * s) * out[k - 1] - a4 * out[k - 2]) / a1
    return out


def jacobi_poly(n: int, p: JacobiParams, s):
    """P_n^{(a,b)}(s) by forward three-term recurrence."""
    val = jacobi_all(n, p, s)[n]
    return complex(val) if val.ndim == 0 else val


def _check_order(order) -> float:
    nu = order.nu if isinstance(order, BesselOrder) else float(order)
    if not nu > 0:
        raise ValueError(f"Bessel order must be positive, got {nu}")
    return nu


def _log_i_estimate(nu: float, x: float) -> float:
    # uniform asymptotic leading term, good enough to predict overflow
    root = math.sqrt(nu * nu + x * x)
    eta = root + nu * math.log(x / (nu + root))
    return eta - 0.5 * math.log(2 * math.pi * root)


def _bessel_i_series(nu: float, x: float) -> float:
    half = 0.5 * x
    term = math.exp(nu * math.log(half) - log_gamma_real(nu + 1.0))
    total = term
    q = half * half
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + nu))
        total += term
        if term <= 1e-17 * total and k > q / (nu + 1.0):
            return total


def _bessel_i_asymptotic(nu: float, x: float) -> float | None:
    """Hankel expansion e^x / sqrt(2 pi x) * sum (-1)^k a_k / x^k.

    Returns None when the terms stop decreasing before reaching full
    precision, so the caller can fall back to the series.
    """
    mu = 4.0 * nu * nu
    term, total, prev = 1.0, 1.0, math.inf
    for k in range(1, 200):
        term *= -(mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        if abs(term) > prev:
            return None
        total += term
        prev = abs(term)
        if prev <= 1e-17 * abs(total):
            return math.exp(x - 0.5 * math.log(2 * math.pi * x)) * total
    return None


def bessel_i(order, x: float) -> float:
    """Modified Bessel function of the first kind I_nu(x), nu > 0, x >= 0."""
    nu = _check_order(order)
    x = float(x)
    if x < 0:
        raise ValueError(f"bessel_i needs x >= 0, got {x}")
    if x == 0.0:
        return 0.0
    if _log_i_estimate(nu, x) > 709.0:
        raise OverflowError(f"I_{nu}({x}) exceeds the floating-point range")
    if x > 35.0 and x > nu * nu:
        val = _bessel_i_asymptotic(nu, x)
        if val is not None:
            return val
    return _bessel_i_series(nu, x)


def _cosh_m1(t):
    # cosh(t) - 1 without cancellation near t = 0
    return 2.0 * np.sinh(0.5 * t) ** 2


def bessel_k(order, x):
    """Modified Bessel function of the second kind K_nu(x), nu > 0, x > 0.

    Evaluated from K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt.  ``x`` may
    be an array; all entries then share one node set.
    """
    nu = _check_order(order)
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0):
        raise ValueError("bessel_k needs x > 0")
    flat = xa.reshape(-1)

    def integrand(t):
        return np.exp(-np.outer(_cosh_m1(t), flat)) * np.cosh(nu * t)[:, None]

    res = integrate_halfline(integrand, 1.0, tol=1e-300, rtol=1e-14)
    with np.errstate(over="ignore"):
        val = np.real(res.value) * np.exp(-flat)
    if not np.all(np.isfinite(val)):
        raise OverflowError(f"K_{nu} exceeds the floating-point range")
    val = val.reshape(xa.shape)
    return float(val) if val.ndim == 0 else val
