"""``ptcoh`` command line: spectrum, wavefunctions and states as CSV, and the
verification suite.

Exit codes: 0 success, 1 a verification check failed, 2 usage or config
error, 3 quadrature did not converge.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass, fields, replace
from typing import Optional

import numpy as np

from . import coherent as co
from .model import HALF_PI, ScarfIModel, basis, energy, excitation, log_rho
from .quadrature import QuadratureError
from .verify import CHECK_GROUPS, run_checks

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    alpha_re: float = 1.0
    alpha_im: float = 0.5
    n_max: int = 40
    # None: each check uses its own acceptance tolerance
    tol: Optional[float] = None
    tail_epsilon: float = co.DEFAULT_TAIL_EPSILON
    output_path: str = "-"
    n: Optional[int] = None
    J: float = 1.0
    gamma: float = 0.0
    r: float = 1.0
    theta: float = 0.0
    samples: int = 101

    def validate(self):
        if not self.alpha_re > 0.5:
            raise ConfigError(f"alpha_re must exceed 1/2, got {self.alpha_re}")
        if self.tol is not None and not self.tol > 0:
            raise ConfigError("tol must be positive")
        if not self.tail_epsilon > 0:
            raise ConfigError("tail_epsilon must be positive")
        if self.n_max < 0:
            raise ConfigError("n_max must be non-negative")
        if self.samples < 1:
            raise ConfigError("samples must be at least 1")
        if self.n is not None and self.n < 0:
            raise ConfigError("n must be non-negative")
        return self

    def model(self) -> ScarfIModel:
        return ScarfIModel(complex(self.alpha_re, self.alpha_im), n_max=self.n_max)


_FIELD_TYPES = {
    "alpha_re": float, "alpha_im": float, "n_max": int, "tol": float,
    "tail_epsilon": float, "output_path": str, "n": int, "J": float,
    "gamma": float, "r": float, "theta": float, "samples": int,
}


def read_config(path: str) -> dict:
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _FIELD_TYPES:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = _FIELD_TYPES[key](value)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    return out


def _num(v) -> str:
    return format(float(v), ".17g")


def _writer(buf):
    return csv.writer(buf, lineterminator="\r\n")


def _header(buf, cfg: RunConfig, command: str, extra=()):
    w = _writer(buf)
    buf.write(f"# ptcoh {command}\r\n")
    buf.write(f"# alpha={_num(cfg.alpha_re)}{'+' if cfg.alpha_im >= 0 else '-'}{_num(abs(cfg.alpha_im))}i"
              f" nu={_num(2 * cfg.alpha_re + 1)} n_max={cfg.n_max}\r\n")
    for line in extra:
        buf.write(f"# {line}\r\n")
    return w


def cmd_spectrum(cfg: RunConfig) -> tuple[str, int]:
    m = cfg.model()
    n_up_to = cfg.n if cfg.n is not None else min(10, cfg.n_max)
    buf = io.StringIO()
    w = _header(buf, cfg, "spectrum")
    w.writerow(["n", "E_n", "e_n", "rho_n_log"])
    for n in range(n_up_to + 1):
        w.writerow([n, _num(energy(m, n)), _num(excitation(m, n)), _num(log_rho(m, n))])
    return buf.getvalue(), EXIT_OK


def _grid(samples: int) -> np.ndarray:
    return np.linspace(-HALF_PI, HALF_PI, samples)


def cmd_wavefunction(cfg: RunConfig) -> tuple[str, int]:
    n = 0 if cfg.n is None else cfg.n
    if n > cfg.n_max:
        raise ConfigError(f"n = {n} exceeds n_max = {cfg.n_max}")
    m = cfg.model()
    x = _grid(cfg.samples)
    psi = basis(m, n, x)[:, n]
    buf = io.StringIO()
    w = _header(buf, cfg, "wavefunction", [f"level={n}"])
    w.writerow(["x", "re", "im"])
    for xi, v in zip(x, psi):
        w.writerow([_num(xi), _num(v.real), _num(v.imag)])
    return buf.getvalue(), EXIT_OK


def cmd_state(cfg: RunConfig, family: str) -> tuple[str, int]:
    m = cfg.model()
    if family == "gk":
        if cfg.J < 0:
            raise ConfigError("J must be non-negative")
        coeffs = co.gk_coefficients(m, co.GKStateSpec(cfg.J, cfg.gamma, cfg.tail_epsilon))
        labels = f"J={_num(cfg.J)} gamma={_num(cfg.gamma)}"
    elif family == "minimal":
        if cfg.r < 0:
            raise ConfigError("r must be non-negative")
        spec = co.MinimalStateSpec.from_polar(cfg.r, cfg.theta, cfg.tail_epsilon)
        coeffs = co.minimal_coefficients(m, spec)
        labels = f"r={_num(cfg.r)} theta={_num(cfg.theta)}"
    else:
        raise ConfigError(f"unknown family {family!r}")
    if coeffs.truncation_order > cfg.n_max:
        raise ConfigError(
            f"state needs levels up to {coeffs.truncation_order}; raise n_max above {cfg.n_max}"
        )
    x = _grid(cfg.samples)
    psi = co.evaluate_state(m, coeffs, x)
    buf = io.StringIO()
    w = _header(buf, cfg, f"state {family}", [
        labels,
        f"terms={coeffs.truncation_order + 1} tail_bound={_num(coeffs.tail_bound)}",
        "prob_density is |psi|^2 for plotting; it is not the CPT density",
    ])
    w.writerow(["x", "re", "im", "prob_density"])
    for xi, v in zip(np.atleast_1d(x), np.atleast_1d(psi)):
        w.writerow([_num(xi), _num(v.real), _num(v.imag), _num(abs(v) ** 2)])
    return buf.getvalue(), EXIT_OK


def cmd_verify(cfg: RunConfig, which: str) -> tuple[str, int]:
    if which not in CHECK_GROUPS and which != "all":
        raise ConfigError(f"unknown check group {which!r}")
    reports = run_checks(cfg.model(), which, cfg.tol)
    buf = io.StringIO()
    w = _header(buf, cfg, f"verify {which}")
    w.writerow(["check_name", "params", "residual", "tolerance", "passed"])
    for rep in reports:
        w.writerow([rep.check_name, rep.params_text, _num(rep.residual), _num(rep.tolerance),
                    "true" if rep.passed else "false"])
    return buf.getvalue(), EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _common_options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", metavar="FILE")
    p.add_argument("--alpha-re", type=float)
    p.add_argument("--alpha-im", type=float)
    p.add_argument("--n-max", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--J", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--tol", type=float)
    p.add_argument("--tail-epsilon", type=float)
    p.add_argument("--samples", type=int)
    p.add_argument("--out", dest="output_path", metavar="FILE|-")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(prog="ptcoh", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common], help="levels, energies and log rho_n")
    sub.add_parser("wavefunction", parents=[common], help="sample psi_n on [-pi/2, pi/2]")
    st = sub.add_parser("state", parents=[common], help="sample a coherent state")
    st.add_argument("family", choices=("gk", "minimal"))
    ver = sub.add_parser("verify", parents=[common], help="run the verification suite")
    ver.add_argument("which", nargs="?", default="all", choices=("all",) + tuple(CHECK_GROUPS))
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        cfg = replace(cfg, **read_config(args.config))
    overrides = {
        f.name: getattr(args, f.name)
        for f in fields(RunConfig)
        if getattr(args, f.name, None) is not None
    }
    return replace(cfg, **overrides).validate()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = resolve_config(args)
        if args.command == "spectrum":
            text, code = cmd_spectrum(cfg)
        elif args.command == "wavefunction":
            text, code = cmd_wavefunction(cfg)
        elif args.command == "state":
            text, code = cmd_state(cfg, args.family)
        else:
            text, code = cmd_verify(cfg, args.which)
    except ConfigError as exc:
        print(f"ptcoh: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QuadratureError as exc:
        print(f"ptcoh: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if cfg.output_path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    if code == EXIT_FAIL:
        print("ptcoh: verification failed", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
