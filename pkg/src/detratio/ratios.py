"""Expectation values of characteristic-polynomial ratios.

For an N-eigenvalue ensemble with weight w, the normalized expectation
of prod_{j<=L} prod_i (mu_j - z_i) over prod_{k<=M} prod_i (ebar_k - zbar_i)
equals, for 0 <= M <= N and pairwise distinct variables,

    (-1)^(M(M-1)/2) * prod_{j=N-M}^{N-1} (2 pi / (i r_j))
    / (Delta_L(mu) Delta_M(ebar))
    * det [ h_d(ebar_k)   (M rows)
            pi_d(mu_j)    (L rows) ],   d = N-M, ..., N+L-1,

with pi the monic orthogonal polynomials of w, r their squared norms and
h their Cauchy transforms.  This module evaluates that determinant
expression, its two telescope factorizations (products only through the
Christoffel-deformed polynomials; inverse powers only through deformed
Cauchy transforms), and the confluent version for coinciding variables,
where repeated rows become derivative rows scaled by 1/t! and the
Vandermonde factors become products over distinct pairs raised to the
product of multiplicities.

The prefactor 2 pi/(i r_j) is evaluated as -2 pi i / r_j exactly, and
determinants, norm products and Vandermonde factors are combined in
log-polar form so that large N + L assemblies cannot overflow.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .cauchy import ROTINV_SERIES, CauchyEvaluator, cauchy_transform_full
from .deformed import check_nondegenerate, christoffel_poly, deformed_cauchy
from .determinants import (confluent_vandermonde_logpolar, scaled_lu_det,
                           vandermonde_logpolar)
from .errors import ConstraintError, NumericalError
from .orthopoly import OrthoSystem, Poly, eval_poly, poly_derivative

LOG_TWO_PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class RatioQuery:
    """(N, {mu_j}, {ebar_k}) with optional multiplicities for confluence.

    Values within each list must be pairwise distinct; repetition is
    expressed through the multiplicity lists, and the total inverse count
    (multiplicities included) may not exceed N.
    """

    N: int
    mus: tuple = ()
    epsbars: tuple = ()
    mu_multiplicities: tuple = None
    eps_multiplicities: tuple = None

    def __post_init__(self):
        if self.N < 1:
            raise ConstraintError("the eigenvalue count N must be positive")
        object.__setattr__(self, "mus", tuple(complex(v) for v in self.mus))
        object.__setattr__(self, "epsbars", tuple(complex(v) for v in self.epsbars))
        mm = self.mu_multiplicities
        em = self.eps_multiplicities
        mm = tuple(int(v) for v in mm) if mm is not None else (1,) * len(self.mus)
        em = tuple(int(v) for v in em) if em is not None else (1,) * len(self.epsbars)
        object.__setattr__(self, "mu_multiplicities", mm)
        object.__setattr__(self, "eps_multiplicities", em)
        if len(mm) != len(self.mus) or len(em) != len(self.epsbars):
            raise ConstraintError("one multiplicity is required per variable")
        if any(m < 1 for m in mm + em):
            raise ConstraintError("multiplicities must be at least 1")
        check_nondegenerate(self.mus, "mus")
        check_nondegenerate(self.epsbars, "epsbars")
        if self.M_total > self.N:
            raise ConstraintError(
                f"M = {self.M_total} inverse factors exceed N = {self.N}")

    @property
    def L_total(self) -> int:
        return sum(self.mu_multiplicities)

    @property
    def M_total(self) -> int:
        return sum(self.eps_multiplicities)

    @property
    def is_confluent(self) -> bool:
        return any(m > 1 for m in self.mu_multiplicities + self.eps_multiplicities)

    def expanded_mus(self) -> tuple:
        return tuple(mu for mu, m in zip(self.mus, self.mu_multiplicities)
                     for _ in range(m))

    def expanded_epsbars(self) -> tuple:
        return tuple(eb for eb, m in zip(self.epsbars, self.eps_multiplicities)
                     for _ in range(m))


@dataclass(frozen=True)
class Diagnostics:
    det_conditioning: float
    backend: str
    warnings: tuple = ()


@dataclass(frozen=True)
class EvalResult:
    value: complex
    abs_error_estimate: float
    diagnostics: Diagnostics

    def __post_init__(self):
        v = self.value
        if not (math.isfinite(v.real) and math.isfinite(v.imag)
                and math.isfinite(self.abs_error_estimate)):
            raise NumericalError(f"non-finite evaluation result {v!r}")


def _require_depth(sys: OrthoSystem, q: RatioQuery) -> None:
    need = max(q.N + q.L_total - 1, q.N - 1)
    if need > sys.max_degree:
        raise ConstraintError(
            f"query needs system depth {need}; available {sys.max_degree}")


def expectation_ratio(q: RatioQuery, sys: OrthoSystem,
                      cev: CauchyEvaluator) -> EvalResult:
    """Evaluate the determinant expression for the given query."""
    return _determinant_value(q, sys, cev)


def confluent_expectation(q: RatioQuery, sys: OrthoSystem,
                          cev: CauchyEvaluator) -> EvalResult:
    """Same determinant expression; multiplicities produce derivative rows.

    With all multiplicities equal to 1 this is identical to
    expectation_ratio.
    """
    return _determinant_value(q, sys, cev)


def _determinant_value(q: RatioQuery, sys: OrthoSystem,
                       cev: CauchyEvaluator) -> EvalResult:
    M, L = q.M_total, q.L_total
    if M == 0 and L == 0:
        return EvalResult(1.0 + 0j, 0.0,
                          Diagnostics(1.0, "empty-product", ()))
    _require_depth(sys, q)
    n_ev = q.N
    cols = range(n_ev - M, n_ev + L)
    rows = []
    warnings: list = []
    for eps, mult in zip(q.epsbars, q.eps_multiplicities):
        for t in range(mult):
            scale = 1.0 / math.factorial(t)
            row = []
            for d in cols:
                res = cauchy_transform_full(cev, d, eps, order=t)
                row.append(res.value * scale)
                for w in res.warnings:
                    if w not in warnings:
                        warnings.append(w)
            rows.append(row)
    for mu, mult in zip(q.mus, q.mu_multiplicities):
        for t in range(mult):
            scale = 1.0 / math.factorial(t)
            rows.append([eval_poly(poly_derivative(sys.poly(d), t), mu) * scale
                         for d in cols])

    mant, log_scale, cond = scaled_lu_det(np.array(rows, dtype=complex))
    log_mu, phase_mu = confluent_vandermonde_logpolar(q.mus, q.mu_multiplicities)
    log_eps, phase_eps = confluent_vandermonde_logpolar(q.epsbars,
                                                        q.eps_multiplicities)
    log_pref = M * LOG_TWO_PI - sum(math.log(sys.norms[j])
                                    for j in range(n_ev - M, n_ev))
    phase_pref = -M * math.pi / 2 + math.pi * ((M * (M - 1) // 2) % 2)
    value = mant * cmath.exp(complex(log_pref + log_scale - log_mu - log_eps,
                                     phase_pref - phase_mu - phase_eps))

    h_rel = 1e-14 if cev.method == ROTINV_SERIES else cev.tolerance
    rel_err = cond * (M + L) * 1e-15 + (M > 0) * M * h_rel
    backend = cev.method if M > 0 else "polynomial"
    return EvalResult(complex(value), abs(value) * rel_err,
                      Diagnostics(cond, backend, tuple(warnings)))


def expectation_products(q: RatioQuery, sys: OrthoSystem) -> EvalResult:
    """Telescope product of Christoffel-deformed polynomial values; valid
    for queries with no inverse factors."""
    if q.M_total != 0:
        raise ConstraintError("the product path requires M = 0")
    if q.is_confluent:
        raise ConstraintError(
            "the product path needs pairwise distinct mus; use the "
            "confluent determinant evaluation instead")
    _require_depth(sys, q)
    value = 1.0 + 0j
    cond = 1.0
    for j, mu in enumerate(q.mus):
        res = christoffel_poly(sys, q.mus[:j], q.N, mu)
        value *= res.value
        cond = max(cond, res.conditioning)
    return EvalResult(complex(value), abs(value) * cond * 1e-14 * max(len(q.mus), 1),
                      Diagnostics(cond, "telescope-products", ()))


def expectation_inverses(q: RatioQuery, sys: OrthoSystem,
                         cev: CauchyEvaluator) -> EvalResult:
    """Telescope product of deformed Cauchy transforms; valid for queries
    with no polynomial factors."""
    if q.L_total != 0:
        raise ConstraintError("the inverse path requires L = 0")
    if q.is_confluent:
        raise ConstraintError(
            "the inverse path needs pairwise distinct epsbars; use the "
            "confluent determinant evaluation instead")
    _require_depth(sys, q)
    m_total = q.M_total
    value = 1.0 + 0j
    for j in range(1, m_total + 1):
        r = sys.norms[q.N - j]
        h = deformed_cauchy(sys, cev, q.epsbars[:m_total - j], q.N - j,
                            q.epsbars[m_total - j])
        value *= (-2j * math.pi / r) * h
    h_rel = 1e-14 if cev.method == ROTINV_SERIES else cev.tolerance
    return EvalResult(complex(value),
                      abs(value) * (m_total * h_rel + m_total * 1e-14),
                      Diagnostics(1.0, "telescope-inverses", ()))


def partial_fractions(j: int, epsbars) -> tuple[np.ndarray, Poly]:
    """Decompose zbar^j / prod_k (ebar_k - zbar) into simple poles plus a
    polynomial remainder.

    Returns the pole coefficients a_k = ebar_k^j / prod_{l != k}
    (ebar_l - ebar_k) and the quotient polynomial p with
    zbar^j / prod = sum_k a_k/(ebar_k - zbar) + p(zbar).
    """
    if j < 0:
        raise ConstraintError("the monomial power must be non-negative")
    eps = tuple(complex(v) for v in epsbars)
    check_nondegenerate(eps, "epsbars")
    m = len(eps)
    if m == 0:
        return np.zeros(0, dtype=complex), Poly((0j,) * j + (1.0 + 0j,))
    coeffs = np.empty(m, dtype=complex)
    for k in range(m):
        denom = np.prod([eps[l] - eps[k] for l in range(m) if l != k]) if m > 1 else 1.0
        coeffs[k] = eps[k] ** j / denom
    numerator = np.zeros(j + 1, dtype=complex)
    numerator[j] = 1.0
    denominator = (-1) ** m * npoly.polyfromroots(eps)
    quotient, _ = npoly.polydiv(numerator, denominator)
    return coeffs, Poly(tuple(quotient))
