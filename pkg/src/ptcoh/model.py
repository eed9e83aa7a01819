"""PT-symmetric Scarf I model: potential, spectrum and eigenfunctions.

Conventions
-----------
The shape parameters are a complex ``alpha`` and ``beta = conj(alpha)`` with
``Re(alpha) > 1/2``.  Levels are

    e_n = n (n + nu),   nu = 2 Re(alpha) + 1,   E_n = omega e_n,

and the eigenfunctions are

    psi_n(x) = N_n (1 - sin x)^(alpha/2 + 1/4) (1 + sin x)^(beta/2 + 1/4) P_n^(alpha, beta)(sin x)

with ``N_n = i**n / sqrt(h_n)``, ``h_n`` the Jacobi norm continued to the
conjugate parameter pair.  The ``i**n`` phase is what makes both
``conj(psi_n(-x)) == psi_n(x)`` and ``int psi_m psi_n dx == (-1)**n delta_mn``
hold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .specfun import JacobiParams, jacobi_all, log_gamma, log_gamma_real

HALF_PI = 0.5 * np.pi
LOG_SPACE_THRESHOLD = 20


@dataclass(frozen=True)
class ScarfIModel:
    alpha: complex
    omega: float = 1.0
    n_max: int = 40
    # "pt" gives N_n = i**n / sqrt(h_n); "real" drops the i**n and exists only
    # as a negative control.
    phase_convention: str = "pt"
    _log_h: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        if not self.alpha.real > 0.5:
            raise ValueError(f"need Re(alpha) > 1/2, got alpha = {self.alpha}")
        if not self.omega > 0:
            raise ValueError("omega must be positive")
        if self.n_max < 0:
            raise ValueError("n_max must be non-negative")
        if self.phase_convention not in ("pt", "real"):
            raise ValueError(f"unknown phase convention {self.phase_convention!r}")
        object.__setattr__(
            self, "_log_h", tuple(_log_jacobi_norm(self, n) for n in range(self.n_max + 1))
        )

    @property
    def beta(self) -> complex:
        return self.alpha.conjugate()

    @property
    def alpha_r(self) -> float:
        return self.alpha.real

    @property
    def nu(self) -> float:
        return 2.0 * self.alpha.real + 1.0

    @property
    def jacobi_params(self) -> JacobiParams:
        return JacobiParams(self.alpha, self.beta)


@dataclass(frozen=True)
class Eigenstate:
    n: int
    energy: float
    excitation: float
    norm_constant: complex
    cpt_sign: int


def potential(m: ScarfIModel, x):
    x_arr = np.asarray(x, dtype=float)
    if np.any(np.abs(x_arr) >= HALF_PI):
        raise ValueError("potential is defined only for |x| < pi/2")
    a, b = m.alpha, m.beta
    c2 = np.cos(x_arr) ** 2
    v = (
        (2 * (a * a + b * b) - 1) / 4 / c2
        + (a * a - b * b) * np.sin(x_arr) / (2 * c2)
        - (a + b + 1) ** 2 / 4
    )
    return complex(v) if np.ndim(v) == 0 else v


def excitation(m: ScarfIModel, n: int) -> float:
    if n < 0:
        raise ValueError("level index must be non-negative")
    return n * (n + m.nu)


def energy(m: ScarfIModel, n: int) -> float:
    return m.omega * excitation(m, n)


def log_rho(m: ScarfIModel, n: int) -> float:
    """log of rho_n = e_1 e_2 ... e_n (rho_0 = 1)."""
    if n < 0:
        raise ValueError("level index must be non-negative")
    if n <= LOG_SPACE_THRESHOLD:
        return math.log(_rho_product(m, n))
    nu = m.nu
    return log_gamma_real(n + 1) + log_gamma_real(n + nu + 1) - log_gamma_real(nu + 1)


def _rho_product(m: ScarfIModel, n: int) -> float:
    out = 1.0
    for i in range(1, n + 1):
        out *= excitation(m, i)
    return out


def rho(m: ScarfIModel, n: int) -> float:
    """rho_n as a float; OverflowError past the double range."""
    if n <= LOG_SPACE_THRESHOLD:
        if n < 0:
            raise ValueError("level index must be non-negative")
        return _rho_product(m, n)
    lr = log_rho(m, n)
    if lr > 709.78:
        raise OverflowError(f"rho_{n} = exp({lr:.6g}) exceeds the floating-point range")
    return math.exp(lr)


def _log_jacobi_norm(m: ScarfIModel, n: int) -> float:
    # h_n = 2^nu G(n+a+1) G(n+b+1) / ((2n+nu) G(n+nu) n!), real since b = conj(a)
    a = m.alpha
    nu = m.nu
    return (
        nu * math.log(2.0)
        + 2.0 * log_gamma(n + a + 1).real
        - math.log(2 * n + nu)
        - log_gamma_real(n + nu)
        - log_gamma_real(n + 1)
    )


def _check_level(m: ScarfIModel, n: int):
    if not 0 <= n <= m.n_max:
        raise ValueError(f"level {n} outside 0..{m.n_max}")


def norm_constant(m: ScarfIModel, n: int) -> complex:
    _check_level(m, n)
    mag = math.exp(-0.5 * m._log_h[n])
    if m.phase_convention == "real":
        return complex(mag)
    return (1j) ** n * mag


def cpt_sign(n: int) -> int:
    """Eigenvalue (-1)**n of the charge operator on level n."""
    if n < 0:
        raise ValueError("level index must be non-negative")
    return -1 if n % 2 else 1


cpt_apply_sign = cpt_sign


def eigenstate(m: ScarfIModel, n: int) -> Eigenstate:
    return Eigenstate(n, energy(m, n), excitation(m, n), norm_constant(m, n), cpt_sign(n))


def basis(m: ScarfIModel, n_up_to: int, x) -> np.ndarray:
    """psi_0 .. psi_{n_up_to} at ``x``; shape ``shape(x) + (n_up_to + 1,)``."""
    _check_level(m, n_up_to)
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > HALF_PI):
        raise ValueError("eigenfunctions live on [-pi/2, pi/2]")
    # 1 -/+ sin x written as 2 sin^2 to keep accuracy near the walls
    one_minus = 2.0 * np.sin(0.25 * np.pi - 0.5 * x) ** 2
    one_plus = 2.0 * np.sin(0.25 * np.pi + 0.5 * x) ** 2
    pa = m.alpha / 2 + 0.25
    pb = m.beta / 2 + 0.25
    with np.errstate(divide="ignore", invalid="ignore"):
        envelope = np.exp(pa * np.log(one_minus) + pb * np.log(one_plus))
    # the walls: both bases are exactly zero only at |x| = pi/2
    envelope = np.where((one_minus > 0) & (one_plus > 0), envelope, 0.0)
    envelope = np.where(np.abs(x) == HALF_PI, 0.0, envelope)
    polys = jacobi_all(n_up_to, m.jacobi_params, np.sin(x))
    norms = np.array([norm_constant(m, n) for n in range(n_up_to + 1)])
    return np.moveaxis(polys, 0, -1) * (envelope[..., None] * norms)


def eigenfunction(m: ScarfIModel, n: int, x):
    _check_level(m, n)
    val = basis(m, n, x)[..., n]
    return complex(val) if val.ndim == 0 else val


# reference parameter sets: integer nu = 3 and non-integer nu = 2.7
MODEL_A = ScarfIModel(1.0 + 0.5j)
MODEL_B = ScarfIModel(0.85 + 0.4j)
