"""Orthogonal polynomials for polynomially deformed measures.

Multiplying the weight by prod_j (mu_j - z) and dividing by
prod_k (ebar_k - zbar) produces a complex-valued measure whose monic
bi-orthogonal polynomials admit bordered-determinant expressions in the
undeformed pi's and their Cauchy transforms h:

* multiplication only (Christoffel): ratio of a determinant of pi values
  bordered by the pi row at z over its top-left minor, divided by
  prod_j (z - mu_j);
* division only (Uvarov): determinant with h rows over the pi row at z,
  normalized by the h minor;
* both: the general bordered determinant mixing h rows and pi rows;
* the Cauchy transform of the divided-measure polynomials reduces to an
  all-h determinant with the prefactor (-1)^m / prod_k (ebar - ebar_k).

Deformation variables must be pairwise distinct; nearly coincident
variables lose all significant digits in the determinant ratio long
before the analytic (confluent) limit is reached, so they are rejected
and the caller is directed to derivative rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cauchy import CauchyEvaluator, cauchy_transform
from .determinants import lu_det, require_nonsingular
from .errors import ConstraintError, DegenerateVariablesError
from .orthopoly import OrthoSystem, eval_poly, poly_derivative

NEAR_DEGENERACY_RTOL = 1e-8


def check_nondegenerate(values, label: str) -> None:
    """Reject lists with (nearly) coincident entries.

    The threshold is relative to the largest pairwise separation, with a
    floor of 1 when the list carries no scale of its own.
    """
    xs = [complex(v) for v in values]
    if len(xs) < 2:
        return
    dists = [abs(a - b) for i, a in enumerate(xs) for b in xs[:i]]
    scale = max(max(dists), 1.0)
    worst = min(dists)
    if worst < NEAR_DEGENERACY_RTOL * scale:
        raise DegenerateVariablesError(
            f"{label} contains variables closer than {NEAR_DEGENERACY_RTOL:g} "
            f"of the list scale (min distance {worst:.3e}); "
            "declare multiplicities and use the confluent path")


@dataclass(frozen=True)
class Deformation:
    """Multiplicative mu-factors and inverse ebar-factors of a measure."""

    mus: tuple = ()
    epsbars: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "mus", tuple(complex(v) for v in self.mus))
        object.__setattr__(self, "epsbars", tuple(complex(v) for v in self.epsbars))
        check_nondegenerate(self.mus, "mus")
        check_nondegenerate(self.epsbars, "epsbars")


@dataclass(frozen=True)
class DeformedPolyResult:
    value: complex
    numerator_det: complex
    denominator_det: complex
    conditioning: float


def _pi_row(sys: OrthoSystem, x: complex, degrees) -> list:
    return [eval_poly(sys.poly(d), x) for d in degrees]


def _h_row(cev: CauchyEvaluator, eps: complex, degrees) -> list:
    return [cauchy_transform(cev, d, eps) for d in degrees]


def _require_depth(sys: OrthoSystem, degree: int, what: str) -> None:
    if degree > sys.max_degree:
        raise ConstraintError(
            f"{what} needs polynomials up to degree {degree}; "
            f"system depth is {sys.max_degree}")


def christoffel_q(sys: OrthoSystem, mus, n: int, z: complex) -> complex:
    """Raw bordered determinant for the multiplied measure; vanishes at each mu."""
    mus = tuple(complex(v) for v in mus)
    ell = len(mus)
    _require_depth(sys, n + ell, "christoffel determinant")
    degrees = range(n, n + ell + 1)
    rows = [_pi_row(sys, mu, degrees) for mu in mus]
    rows.append(_pi_row(sys, z, degrees))
    det, _ = lu_det(np.array(rows, dtype=complex))
    return det


def christoffel_poly(sys: OrthoSystem, mus, n: int, z: complex) -> DeformedPolyResult:
    """Monic degree-n polynomial orthogonal after multiplying the weight
    by prod_j (mu_j - z)."""
    mus = tuple(complex(v) for v in mus)
    check_nondegenerate(mus, "mus")
    ell = len(mus)
    if n < 0:
        raise ConstraintError("polynomial degree must be non-negative")
    _require_depth(sys, n + ell, "christoffel formula")
    z = complex(z)
    if ell == 0:
        value = eval_poly(sys.poly(n), z)
        return DeformedPolyResult(value, value, 1.0 + 0j, 1.0)
    if any(z == mu for mu in mus):
        raise ConstraintError(
            "evaluation point coincides with a deformation mu; "
            "use christoffel_q, which vanishes there")
    degrees = range(n, n + ell + 1)
    num_rows = [_pi_row(sys, mu, degrees) for mu in mus]
    num_rows.append(_pi_row(sys, z, degrees))
    den_rows = [_pi_row(sys, mu, range(n, n + ell)) for mu in mus]
    num, cond_num = lu_det(np.array(num_rows, dtype=complex))
    den, cond_den = lu_det(np.array(den_rows, dtype=complex))
    require_nonsingular(den, cond_den, "christoffel denominator minor")
    factor = np.prod([z - mu for mu in mus])
    return DeformedPolyResult(num / (den * factor), num, den,
                              max(cond_num, cond_den))


def christoffel_poly_confluent(sys: OrthoSystem, mus, multiplicities, n: int,
                               z: complex) -> DeformedPolyResult:
    """Christoffel formula with repeated mu's: derivative rows replace the
    coincident-value rows in both determinants."""
    mus = tuple(complex(v) for v in mus)
    mults = tuple(int(m) for m in multiplicities)
    if len(mus) != len(mults) or any(m < 1 for m in mults):
        raise ConstraintError("multiplicities must be positive, one per mu")
    check_nondegenerate(mus, "mus")
    ell = sum(mults)
    _require_depth(sys, n + ell, "confluent christoffel formula")
    z = complex(z)
    if any(z == mu for mu in mus):
        raise ConstraintError("evaluation point coincides with a deformation mu")

    def rows_for(degrees):
        rows = []
        for mu, m in zip(mus, mults):
            for t in range(m):
                rows.append([eval_poly(poly_derivative(sys.poly(d), t), mu)
                             for d in degrees])
        return rows

    num_rows = rows_for(range(n, n + ell + 1))
    num_rows.append(_pi_row(sys, z, range(n, n + ell + 1)))
    den_rows = rows_for(range(n, n + ell))
    num, cond_num = lu_det(np.array(num_rows, dtype=complex))
    den, cond_den = lu_det(np.array(den_rows, dtype=complex)) if ell else (1.0 + 0j, 1.0)
    require_nonsingular(den, cond_den, "confluent christoffel minor")
    factor = np.prod([(z - mu) ** m for mu, m in zip(mus, mults)])
    return DeformedPolyResult(num / (den * factor), num, den,
                              max(cond_num, cond_den))


def uvarov_q(sys: OrthoSystem, cev: CauchyEvaluator, epsbars, n: int,
             z: complex) -> complex:
    """Raw bordered determinant for the divided measure."""
    epsbars = tuple(complex(v) for v in epsbars)
    m = len(epsbars)
    if m > n:
        raise ConstraintError("the number of inverse factors cannot exceed the degree")
    _require_depth(sys, n, "uvarov determinant")
    degrees = range(n - m, n + 1)
    rows = [_h_row(cev, eb, degrees) for eb in epsbars]
    rows.append(_pi_row(sys, z, degrees))
    det, _ = lu_det(np.array(rows, dtype=complex))
    return det


def uvarov_poly(sys: OrthoSystem, cev: CauchyEvaluator, epsbars, n: int,
                z: complex) -> DeformedPolyResult:
    """Monic degree-n polynomial orthogonal after dividing the weight by
    prod_k (ebar_k - zbar)."""
    epsbars = tuple(complex(v) for v in epsbars)
    check_nondegenerate(epsbars, "epsbars")
    m = len(epsbars)
    if n < 0:
        raise ConstraintError("polynomial degree must be non-negative")
    if m > n:
        raise ConstraintError("the number of inverse factors cannot exceed the degree")
    _require_depth(sys, n, "uvarov formula")
    z = complex(z)
    if m == 0:
        value = eval_poly(sys.poly(n), z)
        return DeformedPolyResult(value, value, 1.0 + 0j, 1.0)
    degrees = range(n - m, n + 1)
    num_rows = [_h_row(cev, eb, degrees) for eb in epsbars]
    num_rows.append(_pi_row(sys, z, degrees))
    den_rows = [_h_row(cev, eb, range(n - m, n)) for eb in epsbars]
    num, cond_num = lu_det(np.array(num_rows, dtype=complex))
    den, cond_den = lu_det(np.array(den_rows, dtype=complex))
    require_nonsingular(den, cond_den, "uvarov h-minor")
    return DeformedPolyResult(num / den, num, den, max(cond_num, cond_den))


def combined_poly(sys: OrthoSystem, cev: CauchyEvaluator, mus, epsbars, n: int,
                  z: complex) -> DeformedPolyResult:
    """Monic degree-n polynomial for the general deformed measure
    prod_j (mu_j - z) / prod_k (ebar_k - zbar) times the weight."""
    mus = tuple(complex(v) for v in mus)
    epsbars = tuple(complex(v) for v in epsbars)
    check_nondegenerate(mus, "mus")
    check_nondegenerate(epsbars, "epsbars")
    ell, m = len(mus), len(epsbars)
    if n < 0:
        raise ConstraintError("polynomial degree must be non-negative")
    if m > n:
        raise ConstraintError("the number of inverse factors cannot exceed the degree")
    _require_depth(sys, n + ell, "combined deformation formula")
    z = complex(z)
    if any(z == mu for mu in mus):
        raise ConstraintError("evaluation point coincides with a deformation mu")
    if ell == 0:
        return uvarov_poly(sys, cev, epsbars, n, z)
    if m == 0:
        return christoffel_poly(sys, mus, n, z)
    degrees = range(n - m, n + ell + 1)
    num_rows = [_h_row(cev, eb, degrees) for eb in epsbars]
    num_rows += [_pi_row(sys, mu, degrees) for mu in mus]
    num_rows.append(_pi_row(sys, z, degrees))
    minor_degrees = range(n - m, n + ell)
    den_rows = [_h_row(cev, eb, minor_degrees) for eb in epsbars]
    den_rows += [_pi_row(sys, mu, minor_degrees) for mu in mus]
    num, cond_num = lu_det(np.array(num_rows, dtype=complex))
    den, cond_den = lu_det(np.array(den_rows, dtype=complex))
    require_nonsingular(den, cond_den, "combined-deformation minor")
    factor = np.prod([z - mu for mu in mus])
    return DeformedPolyResult(num / (den * factor), num, den,
                              max(cond_num, cond_den))


def deformed_cauchy(sys: OrthoSystem, cev: CauchyEvaluator, epsbars, n: int,
                    eps: complex) -> complex:
    """Cauchy transform of the divided-measure polynomial, expressed
    entirely through the undeformed transforms."""
    epsbars = tuple(complex(v) for v in epsbars)
    check_nondegenerate(epsbars, "epsbars")
    m = len(epsbars)
    if m > n:
        raise ConstraintError("the number of inverse factors cannot exceed the degree")
    _require_depth(sys, n, "deformed Cauchy transform")
    eps = complex(eps)
    if any(eps == eb for eb in epsbars):
        raise ConstraintError(
            "evaluation point coincides with a deformation ebar")
    if m == 0:
        return cauchy_transform(cev, n, eps)
    check_nondegenerate(epsbars + (eps,), "epsbars plus evaluation point")
    degrees = range(n - m, n + 1)
    num_rows = [_h_row(cev, eb, degrees) for eb in epsbars]
    num_rows.append(_h_row(cev, eps, degrees))
    den_rows = [_h_row(cev, eb, range(n - m, n)) for eb in epsbars]
    num, cond_num = lu_det(np.array(num_rows, dtype=complex))
    den, cond_den = lu_det(np.array(den_rows, dtype=complex))
    require_nonsingular(den, cond_den, "deformed-transform h-minor")
    prefactor = (-1) ** m / np.prod([eps - eb for eb in epsbars])
    return complex(prefactor * num / den)


def poly_values_on_circle(fn, degree: int, radius: float = 2.0) -> np.ndarray:
    """Recover polynomial coefficients by interpolation at degree+1 nodes.

    Evaluates ``fn`` on scaled roots of unity and solves the Vandermonde
    system; used to confirm monic normalization of deformed polynomials.
    """
    nodes = radius * np.exp(2j * np.pi * np.arange(degree + 1) / (degree + 1))
    values = np.array([fn(z) for z in nodes], dtype=complex)
    vand = np.vander(nodes, degree + 1, increasing=True)
    return np.linalg.solve(vand, values)
