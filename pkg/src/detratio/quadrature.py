"""Polar tensor-product quadrature for planar integrals.

Every 2D integral in this package is taken over a disk or a radially
truncated plane, in polar form: Gauss-Legendre nodes in the radial
direction tensored with a uniform trapezoid rule in the angle (the
trapezoid rule is spectrally accurate for periodic integrands).  Grids
may be centered away from the origin; for a star-shaped region the
radial extent of each ray varies with its angle.

A grid is just a flat list of complex nodes with matching quadrature
weights.  Weights are real for plain area integrals but may be complex:
integrals against the kernel k!/(zbar - cbar)^(k+1) are done on a grid
centered at c, where the 1/rho singularity cancels against the rho of
the area element and the leftover angular phase is folded into the
weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import ConvergenceError


@lru_cache(maxsize=64)
def unit_radial_rule(n_r: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights mapped from [-1, 1] to [0, 1]."""
    x, w = leggauss(n_r)
    return 0.5 * (x + 1.0), 0.5 * w


def angular_rule(n_t: int) -> tuple[np.ndarray, float]:
    """Uniform angles on [0, 2pi) with the constant trapezoid weight."""
    return 2.0 * np.pi * np.arange(n_t) / n_t, 2.0 * np.pi / n_t


@dataclass(frozen=True, eq=False)
class PolarGrid:
    """Flattened quadrature nodes and weights on a planar region."""

    nodes: np.ndarray
    weights: np.ndarray

    @property
    def size(self) -> int:
        return self.nodes.size

    def integrate(self, values: np.ndarray) -> complex:
        return complex(np.sum(values * self.weights))


def _ray_lengths(rho_max, n_t: int) -> tuple[np.ndarray, np.ndarray, float]:
    phis, w_phi = angular_rule(n_t)
    if callable(rho_max):
        lengths = np.asarray(rho_max(phis), dtype=float)
    else:
        lengths = np.full(n_t, float(rho_max))
    return phis, lengths, w_phi


def star_grid(center: complex, rho_max, n_r: int, n_t: int) -> PolarGrid:
    """Area grid on the star-shaped region {center + rho e^{i phi} : rho < rho_max(phi)}.

    ``rho_max`` is a constant or a callable of the angle array.
    """
    phis, lengths, w_phi = _ray_lengths(rho_max, n_t)
    x, w_x = unit_radial_rule(n_r)
    rho = lengths[:, None] * x[None, :]
    nodes = center + rho * np.exp(1j * phis)[:, None]
    weights = (lengths[:, None] * w_x[None, :]) * rho * w_phi
    return PolarGrid(nodes=nodes.ravel(), weights=weights.ravel())


def cauchy_kernel_grid(center: complex, rho_max, n_r: int, n_t: int,
                       order: int = 0) -> PolarGrid:
    """Grid whose weights absorb the kernel order!/(zbar - conj(center))^(order+1).

    Summing F(nodes) * weights evaluates the area integral of
    F(z) * order!/(zbar - conj(center))^(order+1) over the star-shaped
    region: with z = center + rho e^{i phi} the kernel times the area
    element equals order! e^{i(order+1)phi} rho^(-order) drho dphi.
    """
    phis, lengths, w_phi = _ray_lengths(rho_max, n_t)
    x, w_x = unit_radial_rule(n_r)
    rho = lengths[:, None] * x[None, :]
    nodes = center + rho * np.exp(1j * phis)[:, None]
    weights = (lengths[:, None] * w_x[None, :]) * w_phi \
        * np.exp(1j * (order + 1) * phis)[:, None] * math.factorial(order)
    if order > 0:
        weights = weights / rho ** order
    return PolarGrid(nodes=nodes.ravel(), weights=weights.ravel())


def disk_chord_lengths(center: complex, radius: float):
    """Ray lengths from an interior point ``center`` to the circle |z| = radius."""
    c = complex(center)
    if abs(c) > radius:
        raise ValueError("chord grid requires the center inside the disk")

    def rho_max(phis: np.ndarray) -> np.ndarray:
        t = np.real(np.conj(c) * np.exp(1j * phis))
        disc = t * t + radius * radius - abs(c) ** 2
        return -t + np.sqrt(np.maximum(disc, 0.0))

    return rho_max


def adaptive_integral(evaluate, tol: float, *, start: tuple[int, int] = (64, 96),
                      max_doublings: int = 4, scale: float = 0.0,
                      what: str = "integral") -> tuple[complex, float]:
    """Refine ``evaluate(n_r, n_t)`` by doubling both node counts.

    Stops when successive values differ by less than ``tol`` relative to
    max(|value|, scale); raises ConvergenceError otherwise.  Returns the
    finest value together with the last doubling difference as an error
    estimate.
    """
    n_r, n_t = start
    prev = complex(evaluate(n_r, n_t))
    for _ in range(max_doublings):
        n_r *= 2
        n_t *= 2
        cur = complex(evaluate(n_r, n_t))
        err = abs(cur - prev)
        ref = max(abs(cur), scale, 1e-300)
        if err <= tol * ref:
            return cur, err
        prev = cur
    raise ConvergenceError(
        f"{what}: quadrature did not reach tol={tol:g} after "
        f"{max_doublings} doublings (last change {err:.3e}, value {cur!r})"
    )
