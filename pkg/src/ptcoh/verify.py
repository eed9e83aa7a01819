"""Numerical certification of the coherent-state identities.

Each ``check_*`` function returns a :class:`VerificationReport`.  Quadrature
non-convergence is not caught here; it propagates as ``QuadratureError`` so the
CLI can tell it apart from a failed check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize

from . import coherent as co
from .model import HALF_PI, ScarfIModel, basis, cpt_sign, eigenfunction, rho
from .quadrature import integrate_finite, integrate_halfline
from .specfun import bessel_i, bessel_k, log_gamma_real

QUAD_TOL = 1e-13

DEFAULT_TOLERANCES = {
    "orthonormality": 1e-8,
    "completeness": 1e-6,
    "gk_moments": 1e-8,
    "minimal_moments": 1e-8,
    "action": 1e-8,
    "temporal": 1e-12,
    "minimal_instability": 0.01,
    "overlap": 1e-7,
    "pt_invariance": 1e-10,
}

GK_PAIRS = (
    (co.GKStateSpec(1.0, 0.0), co.GKStateSpec(1.0, 0.1)),
    (co.GKStateSpec(0.5, 0.3), co.GKStateSpec(2.0, -1.2)),
)
MINIMAL_PAIRS = (
    (co.MinimalStateSpec.from_polar(1.0, 0.0), co.MinimalStateSpec.from_polar(0.5, math.pi / 3)),
    (co.MinimalStateSpec.from_polar(0.8, 1.0), co.MinimalStateSpec.from_polar(1.5, -2.0)),
)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, complex):
        return f"{v.real:.17g}{v.imag:+.17g}j"
    return str(v)


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one check.

    ``bound`` is "upper" for ordinary checks (pass when residual <= tolerance)
    and "lower" for negative controls that must stay away from zero.
    """

    check_name: str
    parameters: tuple
    residual: float
    tolerance: float
    passed: bool = field(init=False)
    details: tuple = ()
    bound: str = "upper"

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if not self.residual >= 0:
            raise ValueError(f"{self.check_name}: residual is {self.residual}")
        if self.bound == "upper":
            ok = self.residual <= self.tolerance
        elif self.bound == "lower":
            ok = self.residual >= self.tolerance
        else:
            raise ValueError(f"unknown bound {self.bound!r}")
        object.__setattr__(self, "passed", bool(ok))
        object.__setattr__(
            self, "parameters", tuple((k, _fmt(v)) for k, v in self.parameters)
        )

    @property
    def params_text(self) -> str:
        return ";".join(f"{k}={v}" for k, v in self.parameters)


@dataclass(frozen=True)
class MomentWeight:
    family: str
    evaluate: Callable[[np.ndarray], np.ndarray]
    # w = fn_factor * (f / N), f and N the weight and normalisation functions
    fn_factor: float = 1.0


def _model_params(m: ScarfIModel):
    return [("alpha", m.alpha), ("nu", m.nu), ("phase", m.phase_convention)]


# --- inner products --------------------------------------------------------


def cpt_inner_product(m: ScarfIModel, bra, ket, n_terms: int | None = None) -> complex:
    """CPT pairing <bra|ket>.

    With two ``CoefficientSequence`` arguments the pairing is summed on
    coefficients: the CPT image of the bra has coefficients
    ``cpt_sign(n) conj(a_n)`` and ``int psi_n psi_n dx = cpt_sign(n)``.

    With two callables (vectorised functions of x) the charge kernel
    C(x, y) = sum psi_n(x) psi_n(y), truncated to ``n_terms``, is applied to
    PT bra(x) = conj(bra(-x)) and every x-integral is done by quadrature.
    """
    if isinstance(bra, co.CoefficientSequence) and isinstance(ket, co.CoefficientSequence):
        a, b = bra.coefficients, ket.coefficients
        total = 0j
        for n in range(min(a.size, b.size)):
            s = cpt_sign(n)
            total += (s * np.conj(a[n])) * b[n] * s
        return complex(total)
    if callable(bra) and callable(ket):
        n_top = m.n_max if n_terms is None else n_terms - 1
        projections = _kernel_projections(m, n_top, bra, ket)
        return complex(np.sum(projections[0] * projections[1]))
    raise TypeError("pass two CoefficientSequence objects or two callables")


def _kernel_projections(m: ScarfIModel, n_top: int, bra, ket) -> np.ndarray:
    def integrand(x):
        B = basis(m, n_top, x)
        pt_bra = np.conj(bra(-x))
        return np.stack([B * pt_bra[:, None], B * ket(x)[:, None]], axis=1)

    return integrate_finite(integrand, -HALF_PI, HALF_PI, tol=QUAD_TOL).value


def gram_matrix(m: ScarfIModel, n_up_to: int, signed: bool = True) -> np.ndarray:
    """G[j, k] = (-1)**k int psi_j psi_k dx (unsigned: the plain PT pairing)."""

    def integrand(x):
        B = basis(m, n_up_to, x)
        return B[:, :, None] * B[:, None, :]

    G = integrate_finite(integrand, -HALF_PI, HALF_PI, tol=QUAD_TOL).value
    if signed:
        G = G * np.array([cpt_sign(k) for k in range(n_up_to + 1)])[None, :]
    return G


# --- eigenbasis checks -----------------------------------------------------


def check_orthonormality(m: ScarfIModel, n_max_check: int = 12, tol: float = 1e-8):
    if n_max_check > m.n_max:
        raise ValueError("n_max_check exceeds the model's n_max")
    G = gram_matrix(m, n_max_check)
    dev = np.abs(G - np.eye(n_max_check + 1))
    details = tuple(
        (j, k, float(dev[j, k])) for j in range(n_max_check + 1) for k in range(n_max_check + 1)
    )
    return VerificationReport(
        "orthonormality",
        _model_params(m) + [("n_max_check", n_max_check)],
        float(dev.max()),
        tol,
        details,
    )


def check_completeness(
    m: ScarfIModel,
    N_terms: int = 16,
    probe_levels: Sequence[int] = (0, 1, 2, 3, 4, 5),
    tol: float = 1e-6,
    sample_count: int = 41,
):
    """Rebuild psi_p from the signed kernel partial sum and compare pointwise."""
    if max(probe_levels) >= N_terms:
        raise ValueError("every probe level must be below N_terms")
    if N_terms - 1 > m.n_max:
        raise ValueError("N_terms exceeds the model's levels")
    x = np.linspace(-HALF_PI, HALF_PI, sample_count)
    signs = np.array([cpt_sign(n) for n in range(N_terms)])
    B_x = basis(m, N_terms - 1, x)
    details = []
    for p in probe_levels:
        # int S_N(x, y) psi_p(y) dy = sum_n (-1)^n psi_n(x) int psi_n psi_p dy
        proj = integrate_finite(
            lambda y: basis(m, N_terms - 1, y) * eigenfunction(m, p, y)[:, None],
            -HALF_PI,
            HALF_PI,
            tol=QUAD_TOL,
        ).value
        rebuilt = B_x @ (signs * proj)
        details.append((p, float(np.max(np.abs(rebuilt - B_x[:, p])))))
    return VerificationReport(
        "completeness",
        _model_params(m) + [("N_terms", N_terms), ("probes", "/".join(map(str, probe_levels)))],
        max(r for _, r in details),
        tol,
        tuple(details),
    )


def check_pt_invariance(
    m: ScarfIModel, n_up_to: int = 12, sample_count: int = 101, tol: float = 1e-10
):
    if n_up_to > m.n_max:
        raise ValueError("n_up_to exceeds the model's n_max")
    x = np.linspace(-HALF_PI, HALF_PI, sample_count)
    dev = np.abs(np.conj(basis(m, n_up_to, -x)) - basis(m, n_up_to, x)).max(axis=0)
    return VerificationReport(
        "pt_invariance",
        _model_params(m) + [("n_up_to", n_up_to), ("samples", sample_count)],
        float(dev.max()),
        tol,
        tuple((n, float(d)) for n, d in enumerate(dev)),
    )


# --- moment problems -------------------------------------------------------


def gk_moment_weight(m: ScarfIModel) -> MomentWeight:
    """w(J) = 2 J^(nu/2) K_nu(2 sqrt J) / Gamma(nu + 1); int J^n w dJ = rho_n."""
    nu = m.nu
    lg = log_gamma_real(nu + 1)

    def w(J):
        J = np.asarray(J, dtype=float)
        return 2.0 * np.exp(0.5 * nu * np.log(J) - lg) * bessel_k(nu, 2.0 * np.sqrt(J))

    return MomentWeight("GK", w, 2.0 * math.pi)


def minimal_moment_weight() -> MomentWeight:
    """w(r) = exp(-r) / (2 pi r), used as 2 pi int r^(2n+1) w dr = Gamma(2n+1)."""
    return MomentWeight("Minimal", lambda r: np.exp(-r) / (2 * math.pi * np.asarray(r)), math.nan)


def _fn_gk_factor(m: ScarfIModel) -> float:
    """rho_0 / int f(J)/N(J) dJ with the literal f = I_nu K_nu / pi and N from the Bessel form."""
    nu = m.nu

    def integrand(t):
        out = np.zeros_like(t)
        for i, ti in enumerate(t):
            J = ti * ti
            # beyond t = 300 the integrand is below exp(-600)
            if 0 < ti < 300:
                x = 2.0 * ti
                f = bessel_i(nu, x) * bessel_k(nu, x) / math.pi
                out[i] = 2.0 * ti * f / co.gk_normalization_closed(m, J)
        return out

    res = integrate_halfline(integrand, 2.0, tol=1e-300, rtol=1e-12)
    return 1.0 / res.value.real


def check_gk_moments(
    m: ScarfIModel,
    n_up_to: int = 10,
    tol: float = 1e-8,
    targets: Sequence[float] | None = None,
):
    """Moments of the GK weight against rho_n.

    J = t^2 turns int J^n w dJ into int 4 t^(2n+nu+1) K_nu(2t) / Gamma(nu+1) dt,
    which decays like exp(-2t).  ``targets`` replaces rho_n (negative controls).
    """
    if n_up_to > 10:
        raise ValueError("n_up_to is limited to 10")
    nu = m.nu
    lg = log_gamma_real(nu + 1)
    powers = 2 * np.arange(n_up_to + 1) + nu + 1

    def integrand(t):
        # below 1e-20 the integrand is O(t) and contributes nothing
        out = np.zeros((t.size, powers.size))
        live = t > 1e-20
        tl = t[live]
        k = bessel_k(nu, 2.0 * tl)
        out[live] = 4.0 * np.exp(np.outer(np.log(tl), powers) - lg) * k[:, None]
        return out

    moments = integrate_halfline(integrand, 2.0, tol=1e-300, rtol=1e-13).value.real
    expect = [rho(m, n) for n in range(n_up_to + 1)] if targets is None else list(targets)
    rel = [abs(mom - e) / e for mom, e in zip(moments, expect)]

    # the tabulated integral int x^mu K_delta(a x) dx with a = 2, delta = nu
    def table_rhs(mu):
        return 2.0 ** (mu - 1) * 2.0 ** (-mu - 1) * math.exp(
            log_gamma_real((1 + mu + nu) / 2) + log_gamma_real((1 + mu - nu) / 2)
        )

    table = [abs(mom * math.exp(lg) / 4 - table_rhs(mu)) / table_rhs(mu)
             for mom, mu in zip(moments, powers)]
    details = tuple(
        (n, float(moments[n]), float(expect[n]), float(rel[n]), float(table[n]))
        for n in range(n_up_to + 1)
    )
    factor = _fn_gk_factor(m)
    return VerificationReport(
        "gk_moments",
        _model_params(m)
        + [("n_up_to", n_up_to), ("fn_weight_factor", factor), ("factor_over_2pi", factor / (2 * math.pi))],
        max(rel + table),
        tol,
        details,
    )


def check_minimal_moments(n_up_to: int = 8, tol: float = 1e-8, targets: Sequence[float] | None = None):
    """2 pi int r^(2n+1) e^(-r)/(2 pi r) dr against Gamma(2n+1).

    Also records the n = 0 moment obtained when the weight is divided by
    N(r) = cosh r, to document that the normalisation must be left out.
    """
    if n_up_to > 8:
        raise ValueError("n_up_to is limited to 8")
    w = minimal_moment_weight().evaluate
    powers = 2 * np.arange(n_up_to + 1) + 1

    def integrand(r):
        return 2 * math.pi * np.power.outer(r, powers) * w(r)[:, None]

    moments = integrate_halfline(integrand, 1.0, tol=1e-300, rtol=1e-13).value.real
    expect = (
        [math.exp(log_gamma_real(2 * n + 1)) for n in range(n_up_to + 1)]
        if targets is None
        else list(targets)
    )
    rel = [abs(mom - e) / e for mom, e in zip(moments, expect)]
    with_norm = integrate_halfline(
        lambda r: 2 * math.pi * r * w(r) / np.cosh(r), 1.0, tol=1e-14
    ).value.real
    return VerificationReport(
        "minimal_moments",
        [("n_up_to", n_up_to), ("n0_moment_with_cosh_normalisation", with_norm)],
        max(rel),
        tol,
        tuple((n, float(moments[n]), float(expect[n]), float(rel[n])) for n in range(n_up_to + 1)),
    )


# --- coherent-state checks -------------------------------------------------


def check_action_identity(
    m: ScarfIModel,
    J_list: Sequence[float] = (0.5, 2.0, 10.0),
    tol: float = 1e-8,
    gammas: Sequence[float] = (0.0, 3.7),
):
    details = []
    for J in J_list:
        if J < 0:
            raise ValueError("J must be non-negative")
        for g in gammas:
            h = co.energy_expectation(m, co.GKStateSpec(J, g))
            details.append((J, g, h, abs(h - m.omega * J) / max(1.0, m.omega * J)))
    return VerificationReport(
        "action",
        _model_params(m)
        + [("J", "/".join(_fmt(float(j)) for j in J_list)), ("gamma", "/".join(_fmt(float(g)) for g in gammas))],
        max(d[-1] for d in details),
        tol,
        tuple(details),
    )


def check_temporal_stability(
    m: ScarfIModel,
    s: co.GKStateSpec = co.GKStateSpec(1.0, 0.2),
    t: float = 1.4,
    tol: float = 1e-12,
):
    c = co.gk_coefficients(m, s).coefficients
    n = np.arange(c.size)
    evolved = c * np.exp(-1j * m.omega * n * (n + m.nu) * t)
    target = co.gk_coefficients(m, co.evolve(s, t, m.omega)).coefficients
    k = min(evolved.size, target.size)
    diff = np.abs(evolved[:k] - target[:k])
    residual = float(max(diff.max(), np.abs(evolved[k:]).max(initial=0), np.abs(target[k:]).max(initial=0)))
    return VerificationReport(
        "temporal",
        _model_params(m) + [("J", s.J), ("gamma", s.gamma), ("t", t)],
        residual,
        tol,
        tuple((i, float(d)) for i, d in enumerate(diff)),
    )


def minimal_evolution_mismatch(m: ScarfIModel, s: co.MinimalStateSpec, t: float):
    """Distance from the evolved minimal state to the closest minimal state.

    Evolves the coefficients by exp(-i omega e_n t) and minimises the l2
    distance to minimal_coefficients(beta) over complex beta (grid search,
    then Nelder-Mead).  Returns ``(distance, best_beta)``.
    """
    c = co.minimal_coefficients(m, s).coefficients
    n = np.arange(c.size)
    evolved = c * np.exp(-1j * m.omega * n * (n + m.nu) * t)

    def dist(v):
        cand = co.minimal_coefficients(m, co.MinimalStateSpec(complex(v[0], v[1]), s.tail_epsilon))
        a = cand.coefficients
        k = max(a.size, evolved.size)
        pa = np.zeros(k, complex)
        pb = np.zeros(k, complex)
        pa[: a.size] = a
        pb[: evolved.size] = evolved
        return float(np.linalg.norm(pa - pb))

    r_max = 3.0 * max(s.r, 1.0)
    grid = [
        (r * math.cos(th), r * math.sin(th))
        for r in np.linspace(0.0, r_max, 31)
        for th in np.linspace(-math.pi, math.pi, 72, endpoint=False)
    ]
    start = min(grid, key=dist)
    res = minimize(dist, start, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-12})
    best = min((res.x, start), key=dist)
    return dist(best), complex(best[0], best[1])


def check_minimal_instability(
    m: ScarfIModel, r: float = 1.0, t: float = 1.0, threshold: float = 0.01, theta: float = 0.0
):
    """Negative control: evolved minimal states leave the minimal family."""
    s = co.MinimalStateSpec.from_polar(r, theta)
    d, best = minimal_evolution_mismatch(m, s, t)
    return VerificationReport(
        "minimal_instability",
        _model_params(m) + [("r", r), ("theta", theta), ("t", t), ("best_beta", best), ("bound", "lower")],
        d,
        threshold,
        ((float(d), best),),
        bound="lower",
    )


def _state_function(m, coeffs):
    return lambda x: co.evaluate_state(m, coeffs, x)


def check_overlap_consistency(
    m: ScarfIModel,
    gk_pairs=GK_PAIRS,
    minimal_pairs=MINIMAL_PAIRS,
    tol: float = 1e-7,
):
    """Closed overlap series against the quadrature CPT pairing.

    The series are evaluated with the phase convention of the coefficient
    pairing.  The conjugated variant is evaluated as well, and whether it
    agrees with quadrature is recorded under ``conjugated_form_agrees``.
    """
    details = []
    conj_ok = True
    for bra, ket in gk_pairs:
        cb, ck = co.gk_coefficients(m, bra), co.gk_coefficients(m, ket)
        n_terms = max(len(cb), len(ck))
        quad = cpt_inner_product(m, _state_function(m, cb), _state_function(m, ck), n_terms)
        series = co.gk_overlap_series(m, bra, ket, -1)
        other = co.gk_overlap_series(m, bra, ket, +1)
        conj_ok &= abs(other - quad) <= tol
        details.append(("gk", f"{bra.J}/{bra.gamma}", f"{ket.J}/{ket.gamma}", series, quad,
                        abs(series - quad), abs(other - quad)))
    for bra, ket in minimal_pairs:
        cb, ck = co.minimal_coefficients(m, bra), co.minimal_coefficients(m, ket)
        n_terms = max(len(cb), len(ck))
        quad = cpt_inner_product(m, _state_function(m, cb), _state_function(m, ck), n_terms)
        series = co.minimal_overlap(m, bra, ket)
        other = co.minimal_overlap_conjugated(m, bra, ket)
        conj_ok &= abs(other - quad) <= tol
        details.append(("minimal", _fmt(bra.beta_label), _fmt(ket.beta_label), series, quad,
                        abs(series - quad), abs(other - quad)))
    return VerificationReport(
        "overlap",
        _model_params(m)
        + [("gk_pairs", len(gk_pairs)), ("minimal_pairs", len(minimal_pairs)),
           ("conjugated_form_agrees", bool(conj_ok))],
        max(d[5] for d in details),
        tol,
        tuple(details),
    )


# --- suite -----------------------------------------------------------------

CHECK_GROUPS = {
    "orthonormality": ("orthonormality",),
    "completeness": ("completeness",),
    "moments": ("gk_moments", "minimal_moments"),
    "action": ("action",),
    "temporal": ("temporal", "minimal_instability"),
    "overlap": ("overlap",),
    "pt": ("pt_invariance",),
}


def _run_one(m: ScarfIModel, name: str, tol: float | None):
    t = DEFAULT_TOLERANCES[name] if tol is None else tol
    if name == "orthonormality":
        return check_orthonormality(m, min(12, m.n_max), t)
    if name == "completeness":
        return check_completeness(m, tol=t)
    if name == "gk_moments":
        return check_gk_moments(m, tol=t)
    if name == "minimal_moments":
        return check_minimal_moments(tol=t)
    if name == "action":
        return check_action_identity(m, tol=t)
    if name == "temporal":
        return check_temporal_stability(m, tol=t)
    if name == "minimal_instability":
        # a lower bound; an override tolerance does not apply here
        return check_minimal_instability(m, threshold=DEFAULT_TOLERANCES[name])
    if name == "overlap":
        return check_overlap_consistency(m, tol=t)
    if name == "pt_invariance":
        return check_pt_invariance(m, min(12, m.n_max), tol=t)
    raise KeyError(name)


def run_checks(m: ScarfIModel, which: str = "all", tol: float | None = None):
    """Run a group of checks; reports come back sorted by name."""
    if which == "all":
        names = [n for group in CHECK_GROUPS.values() for n in group]
    elif which in CHECK_GROUPS:
        names = list(CHECK_GROUPS[which])
    else:
        raise KeyError(f"unknown check group {which!r}")
    return sorted((_run_one(m, n, tol) for n in names), key=lambda r: r.check_name)
