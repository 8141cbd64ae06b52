"""Self-contained identity checks behind the CLI ``verify`` subcommand.

Each check compares two independent evaluation routes of the same quantity
(closed form vs. brute-force quadrature, plus-factor vs. minus-factor
assembly, and so on) and reports the measured deviation against a fixed
tolerance.  The test suite exercises the same identities more exhaustively;
this table is the quick, human-readable smoke set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .discrete_ordinates import build_s_matrix
from .kernels import (
    beam_difference_integral,
    boundary_angle_integral,
    e1_kernel,
    milne_kernel,
    milne_kernel_angular,
)
from .medium import (
    IncidenceSpec,
    MediumParams,
    dispersion_residual,
    free_mode_roots,
    resolvent_integral,
)
from .quadrature import build_angular_grid, composite_legendre_rule, integrate
from .wiener_hopf import (
    albedo_from_transform,
    albedo_wh,
    d_function,
    kappa,
    kappa_minus,
    kappa_plus,
)


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.deviation) and self.deviation <= self.tolerance


def _trapezoid_resolvent(s: float, n: int = 10_000) -> float:
    theta = np.linspace(-np.pi, np.pi, n + 1)
    return float(np.trapezoid(1.0 / (1.0 + s * np.cos(theta)), theta))


def _decaying_exponential_overlap(lam: float, mu: float, tau: float, sign: int) -> float:
    """Quadrature for the one-sided exponential overlap integrals.

    sign=-1: integral over depths below tau, closed form mu/(1-lam*mu)*exp(-lam*tau);
    sign=+1: integral over depths above tau, closed form mu/(1+lam*mu)*exp(-lam*tau).
    """
    rate = (1.0 / mu - lam) if sign < 0 else (1.0 / mu + lam)
    u, w = composite_legendre_rule(0.0, 40.0 / rate, 40, 10)
    return math.exp(-lam * tau) * float(w @ np.exp(-rate * u))


def identity_table(omega: float = 0.6, theta0_deg: float = 45.0) -> list[IdentityCheck]:
    params = MediumParams(omega)
    inc = IncidenceSpec.from_degrees(theta0_deg)
    checks: list[IdentityCheck] = []

    s = 0.6
    checks.append(IdentityCheck(
        "resolvent closed form vs 1e4-point trapezoid (s=0.6)",
        abs(resolvent_integral(s) - _trapezoid_resolvent(s)) / resolvent_integral(s),
        1e-8,
    ))

    _, s_plus = free_mode_roots(params)
    checks.append(IdentityCheck(
        "dispersion residual at the free-mode root",
        abs(dispersion_residual(s_plus, params)),
        1e-12,
    ))

    dev = 0.0
    for om in (0.3, omega, 0.99):
        p = MediumParams(om)
        for sv in (-0.85, -0.2, 0.5, 0.85):
            k = kappa(sv, p)
            dev = max(dev, abs(kappa_plus(sv, p) / kappa_minus(sv, p) - k) / abs(k))
    checks.append(IdentityCheck("factorization identity kappa_plus/kappa_minus = kappa", dev, 1e-8))

    mu = -0.7
    checks.append(IdentityCheck(
        "reflection identity kappa_minus(-1/mu) * kappa_plus(1/mu) = 1",
        abs(kappa_minus(-1.0 / mu, params) * kappa_plus(1.0 / mu, params) - 1.0),
        1e-9,
    ))

    theta = math.radians(135.0)
    mu = math.cos(theta)
    mu0, sp = inc.mu0, params.s_plus
    pref = (omega / (2 * math.pi)) * mu0 * (1 + mu0) * (1 - mu) / (
        (mu0 - mu) * (1 + mu0 * sp) * (1 - mu * sp)
    )
    via_plus = pref / (kappa_plus(-1.0 / mu0, params) * kappa_plus(1.0 / mu, params))
    direct = albedo_wh(theta, params, inc)
    checks.append(IdentityCheck(
        "albedo via minus-factors vs via plus-factors", abs(direct - via_plus) / direct, 1e-9
    ))

    theta = math.radians(150.0)
    direct = albedo_wh(theta, params, inc)
    assembled = albedo_from_transform(theta, params, inc)
    checks.append(IdentityCheck(
        "albedo closed form vs transformed-density assembly",
        abs(direct - assembled) / direct,
        1e-9,
    ))

    checks.append(IdentityCheck(
        "direction-interchange symmetry D(x,y) = D(y,x)",
        abs(d_function(0.5, 0.7, params) - d_function(0.7, 0.5, params)),
        1e-9,
    ))

    k_cosh = milne_kernel(1.0)
    checks.append(IdentityCheck(
        "displacement kernel: cosh form vs angular form (dt=1)",
        abs(k_cosh - milne_kernel_angular(1.0)) / k_cosh,
        1e-7,
    ))

    checks.append(IdentityCheck(
        "exponential-integral kernel below displacement kernel (dt=1)",
        e1_kernel(1.0) - k_cosh,  # passes when negative
        0.0,
    ))

    theta_q, w_q = composite_legendre_rule(0.0, math.pi / 2, 32, 10)
    direct_quad = float(w_q @ (1.0 / (inc.mu0 + np.cos(theta_q))))
    checks.append(IdentityCheck(
        "beam angle integral: closed form vs quadrature (45 deg)",
        abs(boundary_angle_integral(inc) - direct_quad),
        1e-8,
    ))

    lam, mu_t, tau = 0.37, 0.61, 1.2
    below = _decaying_exponential_overlap(lam, mu_t, tau, -1)
    above = _decaying_exponential_overlap(lam, mu_t, tau, +1)
    dev = max(
        abs(below - mu_t / (1 - lam * mu_t) * math.exp(-lam * tau)),
        abs(above - mu_t / (1 + lam * mu_t) * math.exp(-lam * tau)),
    )
    checks.append(IdentityCheck("one-sided exponential overlap integrals", dev, 1e-8))

    checks.append(IdentityCheck(
        "beam quadratures positive (theta0=45 deg, tau=0.5)",
        -min(milne_kernel(0.5), boundary_angle_integral(inc),
             beam_difference_integral(inc, 0.5)),
        0.0,
    ))

    grid = build_angular_grid(40, 10)
    checks.append(IdentityCheck(
        "angular grid weights tile the full circle",
        abs(integrate(grid, np.ones(grid.n)) - 2 * math.pi),
        1e-12,
    ))
    checks.append(IdentityCheck(
        "angular grid integrates cos(3 theta) to zero",
        abs(integrate(grid, np.cos(3 * grid.theta))),
        1e-10,
    ))

    smat = build_s_matrix(grid, params)
    row_dev = np.max(np.abs(grid.mu * smat.entries.sum(axis=1) - (1.0 - omega)))
    checks.append(IdentityCheck(
        "S-matrix row sums equal (1 - omega)/mu", float(row_dev), 1e-12
    ))
    return checks


def format_table(checks: list[IdentityCheck]) -> str:
    width = max(len(c.name) for c in checks)
    lines = []
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        lines.append(f"{status}  {c.name:<{width}}  deviation={c.deviation: .3e}  "
                     f"tol={c.tolerance:.1e}")
    return "\n".join(lines)
