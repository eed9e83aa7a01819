"""Double-exponential quadrature on finite intervals and on the half line.

Both engines work on a uniform grid in a transformed variable ``u`` and halve
the step until two successive levels agree.  Integrands are called with a 1-d
array of nodes and must return an array whose first axis matches the nodes;
trailing axes are allowed, which lets a whole Gram matrix or a vector of
Bessel arguments be integrated on one shared node set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

MAX_LEVEL = 12
MIN_LEVEL = 3
# level-0 step in the transformed variable
H0 = 0.5
# hard limits on the transformed variable
FINITE_U_MAX = 6.0
HALFLINE_U_MIN = -6.0
HALFLINE_U_MAX = 8.0


class QuadratureError(ArithmeticError):
    """Raised when refinement reaches MAX_LEVEL without meeting the tolerance."""


@dataclass(frozen=True)
class QuadratureResult:
    value: complex | np.ndarray
    abs_error_estimate: float
    evaluations: int

    def __post_init__(self):
        if not self.abs_error_estimate >= 0:
            raise ValueError("abs_error_estimate must be non-negative")
        if self.evaluations <= 0:
            raise ValueError("evaluations must be positive")


def _finite_map(a: float, b: float):
    half = 0.5 * (b - a)

    def phi(u):
        s = 0.5 * np.pi * np.sinh(u)
        # distances to the endpoints without cancellation
        e = np.exp(-2.0 * np.abs(s))
        near = (b - a) * e / (1.0 + e)
        x = np.where(u < 0, a + near, b - near)
        dxdu = half * 0.5 * np.pi * np.cosh(u) * 4.0 * e / (1.0 + e) ** 2
        return x, dxdu

    return phi


def _halfline_map(c: float):
    def phi(u):
        x = np.exp(u - np.exp(-u)) / c
        return x, x * (1.0 + np.exp(-u))

    return phi


def _weighted(f, phi, u):
    x, w = phi(u)
    with np.errstate(all="ignore"):
        fx = np.asarray(f(x))
        w = w.reshape(w.shape + (1,) * (fx.ndim - 1))
        terms = w * fx
    # the transformed integrand vanishes at the far ends; drop overflow debris
    return np.where(np.isfinite(terms), terms, 0.0)


def _window(f, phi, u_lo, u_hi, tol):
    """Grow the level-0 window outward until the contributions are negligible.

    A side stops once two consecutive terms fall below ``tol * 1e-3`` times the
    running sum.
    """
    centre = _weighted(f, phi, np.array([0.0]))[0]
    total = np.sum(np.abs(centre))
    limits = []
    for direction, bound in ((-1, u_lo), (1, u_hi)):
        k, small = 0, 0
        while True:
            k += 1
            u = direction * k * H0
            if abs(u) > abs(bound):
                k -= 1
                break
            term = np.max(np.abs(_weighted(f, phi, np.array([u]))[0]))
            total += term
            if term < tol * 1e-3 * max(total, 1e-300):
                small += 1
                if small == 2:
                    break
            else:
                small = 0
        limits.append(direction * k * H0)
    return limits[0], limits[1]


def _refine(f, phi, u_lo, u_hi, tol, rtol):
    n_lo, n_hi = round(u_lo / H0), round(u_hi / H0)
    u = np.arange(n_lo, n_hi + 1) * H0
    acc = np.sum(_weighted(f, phi, u), axis=0)
    evaluations = u.size
    estimate = acc * H0
    err = np.inf
    for level in range(1, MAX_LEVEL + 1):
        h = H0 / 2**level
        # odd multiples of the new step are the only new nodes
        k = np.arange(2 * n_lo * 2 ** (level - 1) + 1, 2 * n_hi * 2 ** (level - 1), 2)
        u = k * h
        acc = acc + np.sum(_weighted(f, phi, u), axis=0)
        evaluations += u.size
        new = acc * h
        diff = np.abs(new - estimate)
        err = float(np.max(diff))
        estimate = new
        # elementwise, so entries of very different size can share nodes
        if level >= MIN_LEVEL and np.all(diff <= np.maximum(tol, rtol * np.abs(new))):
            return estimate, err, evaluations
    raise QuadratureError(
        f"no convergence after {MAX_LEVEL} levels (last difference {err:.3e})"
    )


def _package(value, err, evaluations):
    value = np.asarray(value)
    if value.ndim == 0:
        value = complex(value)
    return QuadratureResult(value, err, evaluations)


def integrate_finite(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float = 1e-12,
    rtol: float = 0.0,
) -> QuadratureResult:
    """Tanh-sinh quadrature of ``f`` over ``[a, b]``.

    Endpoint algebraic singularities with exponent > -1 are fine; the
    endpoints themselves are never evaluated.  Nodes near an endpoint are
    resolved only to the spacing of doubles at that endpoint, so a strong
    singularity is best placed at an endpoint equal to zero.
    """
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    if tol <= 0 and rtol <= 0:
        raise ValueError("tolerance must be positive")
    phi = _finite_map(a, b)
    u_lo, u_hi = _window(f, phi, -FINITE_U_MAX, FINITE_U_MAX, max(tol, rtol))
    return _package(*_refine(f, phi, u_lo, u_hi, tol, rtol))


def integrate_halfline(
    g: Callable[[np.ndarray], np.ndarray],
    decay_rate_hint: float = 1.0,
    tol: float = 1e-12,
    rtol: float = 0.0,
) -> QuadratureResult:
    """Exp-sinh type quadrature of ``g`` over ``[0, inf)``.

    Uses x = exp(u - exp(-u)) / decay_rate_hint, suited to integrands that
    decay like exp(-decay_rate_hint * x).
    """
    if decay_rate_hint <= 0:
        raise ValueError("decay_rate_hint must be positive")
    if tol <= 0 and rtol <= 0:
        raise ValueError("tolerance must be positive")
    phi = _halfline_map(decay_rate_hint)
    u_lo, u_hi = _window(g, phi, HALFLINE_U_MIN, HALFLINE_U_MAX, max(tol, rtol))
    return _package(*_refine(g, phi, u_lo, u_hi, tol, rtol))
