"""Standalone integral identities backing the density-equation formulation.

The half-space density equation is driven by a displacement kernel and two
beam quadratures.  This module evaluates each one on its own so they can be
verified independently of any solver:

* :func:`milne_kernel` -- the displacement kernel
  ``integral_1^inf exp(-zeta*dt)/sqrt(zeta^2-1) dzeta``, evaluated through
  the substitution ``zeta = cosh(u)`` which removes the inverse-square-root
  endpoint singularity exactly.
* :func:`e1_kernel` -- its exponential-integral counterpart
  ``integral_1^inf exp(-zeta*dt)/zeta dzeta`` from the classical
  three-dimensional theory, via ``zeta = exp(v)``.
* :func:`boundary_angle_integral` -- the closed-form beam quadrature
  ``integral_0^{pi/2} dtheta/(mu0 + cos(theta))``.
* :func:`beam_difference_integral` -- the remaining beam quadrature, whose
  integrand has only a removable singularity at theta = theta0.

Note the e1 counterpart is sometimes quoted with lower integration limit 0,
which diverges logarithmically; the standard limit of 1 is used here.
"""

from __future__ import annotations

import math

import numpy as np

from .medium import IncidenceSpec
from .quadrature import composite_legendre_rule

_TAIL_DECADES = 40.0  # truncate exponential tails below exp(-40) ~ 4e-18


def milne_kernel(delta_tau: float, panels: int = 24, order: int = 12) -> float:
    """Displacement kernel at separation ``delta_tau > 0``.

    ``integral_0^{u_max} exp(-delta_tau * cosh(u)) du`` with
    ``u_max = log(2*(40/delta_tau + 1))``, beyond which the tail is below
    1e-17 of the value.  Positive and strictly decreasing.
    """
    if delta_tau <= 0.0:
        raise ValueError("milne_kernel requires delta_tau > 0 (logarithmic divergence at 0)")
    u_max = math.log(2.0 * (_TAIL_DECADES / delta_tau + 1.0))
    u, w = composite_legendre_rule(0.0, u_max, panels, order)
    return float(w @ np.exp(-delta_tau * np.cosh(u)))


def milne_kernel_angular(delta_tau: float, panels: int = 64, order: int = 12) -> float:
    """Same kernel in its angular representation
    ``integral_0^{pi/2} exp(-delta_tau/cos(theta)) / cos(theta) dtheta``.

    Kept as an independent evaluation route; the integrand shuts off
    smoothly toward theta = pi/2 where 1/cos blows up inside the
    exponential.
    """
    if delta_tau <= 0.0:
        raise ValueError("milne_kernel_angular requires delta_tau > 0")
    theta, w = composite_legendre_rule(0.0, math.pi / 2, panels, order)
    sec = 1.0 / np.cos(theta)
    return float(w @ (np.exp(-delta_tau * sec) * sec))


def e1_kernel(delta_tau: float, panels: int = 24, order: int = 12) -> float:
    """Exponential-integral kernel at separation ``delta_tau > 0``.

    ``integral_0^{v_max} exp(-delta_tau * exp(v)) dv`` with
    ``v_max = log(1 + 40/delta_tau)``.
    """
    if delta_tau <= 0.0:
        raise ValueError("e1_kernel requires delta_tau > 0 (logarithmic divergence at 0)")
    v_max = math.log(1.0 + _TAIL_DECADES / delta_tau)
    v, w = composite_legendre_rule(0.0, v_max, panels, order)
    return float(w @ np.exp(-delta_tau * np.exp(v)))


def boundary_angle_integral(inc: IncidenceSpec) -> float:
    """Closed form of ``integral_0^{pi/2} dtheta / (mu0 + cos(theta))``.

    Equals ``csc|theta0| * log((1 + tan(|theta0|/2)) / (1 - tan(|theta0|/2)))``
    for 0 < |theta0| < pi/2 and tends to 1 as theta0 -> 0 (handled exactly).
    """
    t0 = abs(inc.theta0)
    if t0 >= math.pi / 2:
        raise ValueError("boundary angle integral diverges for |theta0| >= pi/2")
    if t0 < 1e-10:
        return 1.0
    half_tan = math.tan(t0 / 2.0)
    return math.log((1.0 + half_tan) / (1.0 - half_tan)) / math.sin(t0)


def beam_difference_integral(inc: IncidenceSpec, tau: float,
                             panels: int = 32, order: int = 10) -> float:
    """``integral_0^{pi/2} (exp(-tau/mu0) - exp(-tau/cos(theta))) / (mu0 - cos(theta)) dtheta``.

    The integrand extends continuously through theta = theta0 with limit
    ``tau * exp(-tau/mu0) / mu0^2``; positive for tau > 0.
    """
    if tau <= 0.0:
        raise ValueError("beam difference integral requires tau > 0")
    mu0 = inc.mu0
    beam = math.exp(-tau / mu0)
    theta, w = composite_legendre_rule(0.0, math.pi / 2, panels, order)
    mu = np.cos(theta)
    diff = mu0 - mu
    near = np.abs(diff) < 1e-9
    safe = np.where(near, 1.0, diff)
    vals = (beam - np.exp(-tau / mu)) / safe
    vals = np.where(near, tau * beam / mu0**2, vals)
    return float(w @ vals)
