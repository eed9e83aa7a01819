"""Gazeau-Klauder and minimal coherent states over a Scarf I model.

A state is stored through its eigenbasis coefficients.  Pairings follow the
CPT product, which on coefficients is ``sum conj(a_n) b_n``; the first
argument of every overlap function is the bra.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .model import ScarfIModel, basis, excitation, log_rho
from .specfun import bessel_i, log_gamma_real

MIN_TERMS = 8
DEFAULT_TAIL_EPSILON = 1e-12


@dataclass(frozen=True)
class GKStateSpec:
    J: float
    gamma: float = 0.0
    tail_epsilon: float = DEFAULT_TAIL_EPSILON

    def __post_init__(self):
        if not self.J >= 0:
            raise ValueError(f"J must be non-negative, got {self.J}")
        if not self.tail_epsilon > 0:
            raise ValueError("tail_epsilon must be positive")


@dataclass(frozen=True)
class MinimalStateSpec:
    beta_label: complex
    tail_epsilon: float = DEFAULT_TAIL_EPSILON

    def __post_init__(self):
        object.__setattr__(self, "beta_label", complex(self.beta_label))
        if not self.tail_epsilon > 0:
            raise ValueError("tail_epsilon must be positive")

    @classmethod
    def from_polar(cls, r: float, theta: float, tail_epsilon: float = DEFAULT_TAIL_EPSILON):
        if r < 0:
            raise ValueError("r must be non-negative")
        return cls(cmath.rect(r, theta), tail_epsilon)

    @property
    def r(self) -> float:
        return abs(self.beta_label)

    @property
    def theta(self) -> float:
        return cmath.phase(self.beta_label)


@dataclass(frozen=True)
class CoefficientSequence:
    coefficients: np.ndarray
    truncation_order: int
    tail_bound: float

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=complex)
        c.flags.writeable = False
        object.__setattr__(self, "coefficients", c)
        if c.size != self.truncation_order + 1:
            raise ValueError("need truncation_order + 1 coefficients")

    def __len__(self):
        return self.coefficients.size

    @property
    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.coefficients) ** 2))


# --- Gazeau-Klauder family -------------------------------------------------


def _gk_log_terms(m: ScarfIModel, J: float, n_stop: int) -> np.ndarray:
    lj = math.log(J)
    return np.array([n * lj - log_rho(m, n) for n in range(n_stop + 1)])


def gk_normalization_series(m: ScarfIModel, J: float) -> float:
    """N(J) = sum J**n / rho_n, summed until the geometric tail bound is below 1e-16."""
    if J < 0:
        raise ValueError("J must be non-negative")
    if J == 0:
        return 1.0
    term, total, n = 1.0, 1.0, 0
    while True:
        n += 1
        term *= J / excitation(m, n)
        total += term
        q = J / excitation(m, n + 1)
        if q < 1 and term * q / (1 - q) < 1e-16 * total:
            return total


def gk_normalization_closed(m: ScarfIModel, J: float) -> float:
    """N(J) = J**(-nu/2) Gamma(nu + 1) I_nu(2 sqrt J)."""
    if not J > 0:
        raise ValueError("closed form needs J > 0")
    nu = m.nu
    return math.exp(-0.5 * nu * math.log(J) + log_gamma_real(nu + 1)) * bessel_i(
        nu, 2.0 * math.sqrt(J)
    )


def _gk_truncation(m: ScarfIModel, J: float, norm: float, eps: float):
    """Smallest N_t (at least MIN_TERMS - 1) whose next terms are negligible.

    Returns ``(N_t, tail)`` with ``tail`` a bound on sum_{n > N_t} J**n / rho_n.
    """
    term, n = 1.0, 0
    while True:
        if n >= MIN_TERMS - 1 and term < eps * norm * 1e-2:
            nxt = term * J / excitation(m, n + 1)
            q = J / excitation(m, n + 2)
            if q < 1:
                return n, nxt / (1 - q)
        n += 1
        term *= J / excitation(m, n)


def gk_coefficients(m: ScarfIModel, s: GKStateSpec) -> CoefficientSequence:
    if s.J == 0:
        c = np.zeros(MIN_TERMS, dtype=complex)
        c[0] = 1.0
        return CoefficientSequence(c, MIN_TERMS - 1, 0.0)
    norm = gk_normalization_series(m, s.J)
    n_t, tail = _gk_truncation(m, s.J, norm, s.tail_epsilon)
    n = np.arange(n_t + 1)
    e = n * (n + m.nu)
    mag = np.exp(0.5 * (_gk_log_terms(m, s.J, n_t) - math.log(norm)))
    return CoefficientSequence(mag * np.exp(-1j * s.gamma * e), n_t, tail / norm)


def evolve(s: GKStateSpec, t: float, omega: float = 1.0) -> GKStateSpec:
    """Time evolution acts on GK labels as gamma -> gamma + omega t."""
    return GKStateSpec(s.J, s.gamma + omega * t, s.tail_epsilon)


def energy_expectation(m: ScarfIModel, s: GKStateSpec) -> float:
    """CPT expectation of H, sum_n |c_n|^2 omega e_n."""
    c = gk_coefficients(m, s).coefficients
    n = np.arange(c.size)
    return float(np.sum(np.abs(c) ** 2 * m.omega * n * (n + m.nu)))


def gk_overlap_series(
    m: ScarfIModel, bra: GKStateSpec, ket: GKStateSpec, phase_sign: int = -1
) -> complex:
    """Closed series for <bra|ket>:

        Gamma(nu+1) / sqrt(N N') sum (J J')^(n/2) exp(phase_sign i e_n (gamma_ket - gamma_bra))
                                    / (Gamma(n+1) Gamma(n+nu+1))

    ``phase_sign=-1`` is what the CPT pairing of the coefficients gives;
    ``+1`` gives the opposite sign convention, which is the complex
    conjugate.
    """
    nu = m.nu
    if bra.J == 0 or ket.J == 0:
        other = ket if bra.J == 0 else bra
        return complex(1.0 / math.sqrt(gk_normalization_series(m, other.J)))
    norm = math.sqrt(gk_normalization_series(m, bra.J) * gk_normalization_series(m, ket.J))
    lj = 0.5 * math.log(bra.J * ket.J)
    dg = ket.gamma - bra.gamma
    lg_nu = log_gamma_real(nu + 1)
    total, n = 0j, 0
    while True:
        mag = math.exp(lg_nu + n * lj - log_gamma_real(n + 1) - log_gamma_real(n + nu + 1))
        total += mag * cmath.exp(phase_sign * 1j * n * (n + nu) * dg)
        if n >= MIN_TERMS and mag < 1e-17 * norm and n * (n + nu) > 2 * math.exp(lj):
            return total / norm
        n += 1


# --- minimal (Klauder) family ---------------------------------------------


def default_minimal_log_rho(n: int) -> float:
    """log Gamma(2n + 1)."""
    return log_gamma_real(2 * n + 1)


def minimal_normalization(r: float, log_rho: Optional[Callable[[int], float]] = None) -> float:
    if log_rho is None:
        return math.cosh(r)
    if r == 0:
        return math.exp(-log_rho(0))
    total, n, prev = 0.0, 0, math.inf
    while True:
        term = math.exp(2 * n * math.log(r) - log_rho(n))
        total += term
        if n >= MIN_TERMS and term < 1e-17 * total and term < prev:
            return total
        prev = term
        n += 1


def minimal_coefficients(
    m: ScarfIModel,
    s: MinimalStateSpec,
    log_rho: Optional[Callable[[int], float]] = None,
) -> CoefficientSequence:
    """c_n = beta**n / sqrt(rho_n N(r)), rho_n = Gamma(2n+1) unless ``log_rho`` is given.

    ``m`` is accepted for symmetry with the GK constructor; the coefficients
    do not depend on the model.
    """
    lr = default_minimal_log_rho if log_rho is None else log_rho
    r = s.r
    if r == 0:
        c = np.zeros(MIN_TERMS, dtype=complex)
        # N(0) = 1 / rho_0, so c_0 = 1 exactly
        c[0] = 1.0
        return CoefficientSequence(c, MIN_TERMS - 1, 0.0)
    norm = minimal_normalization(r, log_rho)
    logs = []
    n = 0
    while True:
        logs.append(2 * n * math.log(r) - lr(n))
        if n >= MIN_TERMS - 1 and math.exp(logs[-1]) < s.tail_epsilon * norm * 1e-2:
            log_next = 2 * (n + 1) * math.log(r) - lr(n + 1)
            q = math.exp(log_next - logs[-1])
            if q < 0.5:
                # geometric bound, valid while the term ratios keep decreasing
                tail = math.exp(log_next) / (1 - q)
                break
        n += 1
    n_idx = np.arange(n + 1)
    mag = np.exp(0.5 * (np.array(logs) - math.log(norm)))
    return CoefficientSequence(mag * np.exp(1j * s.theta * n_idx), n, tail / norm)


def minimal_overlap(m: ScarfIModel, bra: MinimalStateSpec, ket: MinimalStateSpec) -> complex:
    """cosh(sqrt(conj(beta_bra) beta_ket)) / sqrt(cosh r_bra cosh r_ket).

    cosh is even, so the branch of the square root does not matter.
    """
    z = bra.beta_label.conjugate() * ket.beta_label
    return cmath.cosh(cmath.sqrt(z)) / math.sqrt(math.cosh(bra.r) * math.cosh(ket.r))


def minimal_overlap_conjugated(
    m: ScarfIModel, bra: MinimalStateSpec, ket: MinimalStateSpec
) -> complex:
    """Same expression with the conjugation moved to the ket label."""
    z = bra.beta_label * ket.beta_label.conjugate()
    return cmath.cosh(cmath.sqrt(z)) / math.sqrt(math.cosh(bra.r) * math.cosh(ket.r))


# --- shared ----------------------------------------------------------------


def evaluate_state(m: ScarfIModel, coeffs: CoefficientSequence, x):
    """sum_n c_n psi_n(x) over the truncated range."""
    if coeffs.truncation_order > m.n_max:
        raise ValueError(
            f"state needs {coeffs.truncation_order + 1} levels, model has {m.n_max + 1}"
        )
    val = basis(m, coeffs.truncation_order, x) @ coeffs.coefficients
    return complex(val) if np.ndim(val) == 0 else val


def pair_coefficients(bra: CoefficientSequence, ket: CoefficientSequence) -> complex:
    """CPT pairing of two coefficient vectors (zero padded to a common length)."""
    a, b = bra.coefficients, ket.coefficients
    k = min(a.size, b.size)
    return complex(np.sum(np.conj(a[:k]) * b[:k]))


def gk_overlap(m: ScarfIModel, bra: GKStateSpec, ket: GKStateSpec) -> complex:
    return pair_coefficients(gk_coefficients(m, bra), gk_coefficients(m, ket))
