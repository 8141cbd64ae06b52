"""Physical parameters of the scattering half space and elementary analytic quantities.

Lengths are optical depths throughout (geometric depth times total cross
section), so the medium is fully described by its single-scattering albedo
``omega``.  The companion constant ``s_plus = sqrt(1 - omega^2)`` is the
decay rate of the source-free exponential mode and recurs in every solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

#: Largest accepted single-scattering albedo.  omega = 1 collides with the
#: pole structure of the kernel factorization (s_plus = 0), so purely
#: scattering media are rejected outright.
OMEGA_MAX = 1.0 - 1e-9

METHOD_TAGS = ("wiener-hopf", "discrete-ordinates", "monte-carlo")


@dataclass(frozen=True)
class MediumParams:
    """Absorbing/scattering medium: albedo ``omega`` and free-mode constant ``s_plus``."""

    omega: float
    s_plus: float = field(init=False)

    def __post_init__(self) -> None:
        if not (0.0 <= self.omega <= OMEGA_MAX):
            raise ValueError(
                f"single-scattering albedo must satisfy 0 <= omega <= {OMEGA_MAX}; "
                f"got {self.omega!r}"
            )
        s_plus = math.sqrt((1.0 - self.omega) * (1.0 + self.omega))
        object.__setattr__(self, "s_plus", s_plus)


@dataclass(frozen=True)
class IncidenceSpec:
    """Incident beam direction: angle ``theta0`` (radians) with cosine ``mu0 > 0``."""

    theta0: float
    mu0: float = field(init=False)

    def __post_init__(self) -> None:
        if not (-math.pi / 2 < self.theta0 < math.pi / 2):
            raise ValueError(
                f"incidence angle must lie strictly inside (-pi/2, pi/2); got {self.theta0!r}"
            )
        object.__setattr__(self, "mu0", math.cos(self.theta0))

    @classmethod
    def from_degrees(cls, theta0_deg: float) -> "IncidenceSpec":
        return cls(math.radians(theta0_deg))


@dataclass(frozen=True)
class AlbedoPattern:
    """Emergent diffuse flux per unit angle, sampled at backward directions.

    ``angles`` and ``values`` are aligned arrays; ``method`` tags which solver
    produced the values.
    """

    angles: np.ndarray
    values: np.ndarray
    method: str

    def __post_init__(self) -> None:
        angles = np.asarray(self.angles, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if angles.shape != values.shape:
            raise ValueError("angles and values must have matching shapes")
        if self.method not in METHOD_TAGS:
            raise ValueError(f"unknown method tag {self.method!r}; expected one of {METHOD_TAGS}")
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "values", values)

    @property
    def mu(self) -> np.ndarray:
        return np.cos(self.angles)


def free_mode_roots(params: MediumParams) -> tuple[float, float]:
    """Return the pair (-s_plus, s_plus) of source-free exponential decay rates.

    These are the two real roots of ``1 - omega / sqrt(1 - s^2) = 0``.
    """
    return (-params.s_plus, params.s_plus)


def resolvent_integral(s: float) -> float:
    """Evaluate ``integral dtheta / (1 + s*cos(theta))`` over a full turn.

    Closed form ``2*pi / sqrt(1 - s^2)``, valid on the real segment |s| < 1;
    beyond it the integrand hits a non-integrable pole.
    """
    if not abs(s) < 1.0:
        raise ValueError(f"resolvent integral requires |s| < 1; got s={s!r}")
    return 2.0 * math.pi / math.sqrt((1.0 - s) * (1.0 + s))


def dispersion_residual(lam: float, params: MediumParams) -> float:
    """Residual ``1 - omega / sqrt(1 - lam^2)`` of the free-mode condition.

    Vanishes exactly at ``lam = +/- s_plus``.
    """
    if not abs(lam) < 1.0:
        raise ValueError(f"dispersion residual requires |lambda| < 1; got {lam!r}")
    return 1.0 - params.omega / math.sqrt((1.0 - lam) * (1.0 + lam))
