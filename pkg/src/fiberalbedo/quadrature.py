"""Gauss-Legendre rules and the concatenated angular net over (-pi, pi).

The angular grid tiles the full turn with ``M`` uniform subintervals (``M``
divisible by 4, so that 0 and +/- pi/2 are always subinterval boundaries and
no node ever has a vanishing direction cosine), each carrying a fixed-order
Gauss-Legendre rule whose weights are scaled by the subinterval half-length.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

MAX_GL_ORDER = 64

_NEWTON_TOL = 1e-15
_NEWTON_MAX_ITER = 100


def _legendre_and_derivative(order: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate P_n and P_n' at ``x`` by the three-term recurrence."""
    p_prev = np.ones_like(x)
    p = x.copy()
    for k in range(2, order + 1):
        p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
    # derivative from the standard relation, valid away from |x| = 1
    dp = order * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


def legendre_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the ``order``-point Gauss-Legendre rule on [-1, 1].

    Nodes are found by Newton iteration on the Legendre polynomial from the
    Chebyshev-like initial guesses, then symmetrized about the origin.
    """
    if not isinstance(order, (int, np.integer)) or not 1 <= order <= MAX_GL_ORDER:
        raise ValueError(f"GL order must be an integer in [1, {MAX_GL_ORDER}]; got {order!r}")
    if order == 1:
        return np.zeros(1), np.full(1, 2.0)

    i = np.arange(order, dtype=float)
    x = np.cos(np.pi * (i + 0.75) / (order + 0.5))
    for _ in range(_NEWTON_MAX_ITER):
        p, dp = _legendre_and_derivative(order, x)
        dx = p / dp
        x -= dx
        if np.max(np.abs(dx)) < _NEWTON_TOL:
            break
    x = 0.5 * (x - x[::-1])  # enforce exact +/- symmetry
    _, dp = _legendre_and_derivative(order, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    w = 0.5 * (w + w[::-1])
    order_idx = np.argsort(x)
    return x[order_idx], w[order_idx]


def composite_legendre_rule(
    a: float, b: float, panels: int, order: int
) -> tuple[np.ndarray, np.ndarray]:
    """Concatenate ``panels`` uniform GL rules of the given order across [a, b]."""
    if panels < 1:
        raise ValueError(f"panel count must be >= 1; got {panels!r}")
    x, w = legendre_rule(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


@dataclass(frozen=True)
class AngularGrid:
    """Concatenated GL net over (-pi, pi): nodes, cosines, scaled weights, quartiles.

    ``quartiles`` maps Q1..Q4 to index ranges; Q2 and Q3 cover the forward
    half |theta| < pi/2, Q1 and Q4 the backward (emergent) half.
    """

    n: int
    theta: np.ndarray
    mu: np.ndarray
    w: np.ndarray
    quartiles: tuple[range, range, range, range]
    subintervals: int = field(default=0)
    order: int = field(default=0)

    def __post_init__(self) -> None:
        for arr in (self.theta, self.mu, self.w):
            arr.flags.writeable = False

    @property
    def forward_slice(self) -> slice:
        return slice(self.n // 4, 3 * self.n // 4)

    @property
    def backward_indices(self) -> np.ndarray:
        return np.concatenate(
            [np.arange(self.n // 4), np.arange(3 * self.n // 4, self.n)]
        )

    @property
    def backward_mask(self) -> np.ndarray:
        mask = np.ones(self.n, dtype=bool)
        mask[self.forward_slice] = False
        return mask


def build_angular_grid(subintervals: int, order: int) -> AngularGrid:
    """Build the ``subintervals * order``-node angular grid.

    ``subintervals`` must be divisible by 4 so the quadrant boundaries
    0, +/- pi/2 coincide with subinterval edges; the forward/backward split
    is then exact and no node has |mu| anywhere near zero.
    """
    if subintervals < 1 or subintervals % 4 != 0:
        raise ConfigurationError(
            f"subinterval count must be a positive multiple of 4; got {subintervals!r}"
        )
    theta, w = composite_legendre_rule(-np.pi, np.pi, subintervals, order)
    n = theta.size
    mu = np.cos(theta)

    # quartile index map derived from the node angles, not assumed
    edges = (-np.pi / 2, 0.0, np.pi / 2)
    splits = np.searchsorted(theta, edges)
    quartiles = (
        range(0, splits[0]),
        range(splits[0], splits[1]),
        range(splits[1], splits[2]),
        range(splits[2], n),
    )
    if any(len(q) != n // 4 for q in quartiles):
        raise ConfigurationError(
            f"quartiles are unbalanced for subintervals={subintervals}, order={order}"
        )
    if np.min(np.abs(mu)) < 1e-12:
        raise ConfigurationError("grid produced a node with |mu| < 1e-12")
    return AngularGrid(
        n=n, theta=theta, mu=mu, w=w, quartiles=quartiles,
        subintervals=subintervals, order=order,
    )


def integrate(grid: AngularGrid, samples: np.ndarray) -> float:
    """Weighted sum realizing the angular integral over (-pi, pi)."""
    samples = np.asarray(samples, dtype=float)
    if samples.shape != (grid.n,):
        raise ValueError(
            f"sample vector of length {samples.shape} does not match grid size {grid.n}"
        )
    return float(grid.w @ samples)


def grid_rows(grid: AngularGrid):
    """Yield (index, theta, mu, weight) rows, e.g. for a CSV dump."""
    for k in range(grid.n):
        yield k, grid.theta[k], grid.mu[k], grid.w[k]
