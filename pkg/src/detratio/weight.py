"""Weight functions on planar domains and their monomial moments.

A weight is a strictly positive density w(z, zbar) on a domain D, either
a disk or the full complex plane (truncated at an effective cutoff
radius for quadrature).  The measure convention throughout the package
is dw = w(z, zbar) dA with dA the real Lebesgue area element.  Monomial
moments are

    M_jk = integral_D  z^j zbar^k w(z, zbar) dA,

a Hermitian positive definite Gram matrix for any admissible weight.

Built-in families:

* ``gaussian``          w = amplitude * exp(-scale |z|^2) on the plane
* ``disk-flat``         w = amplitude on |z| <= radius
* ``shifted-gaussian``  w = amplitude * exp(-scale |z - center|^2); not
  rotation invariant, with closed-form moments, used to exercise the
  generic code paths on a weight whose moment matrix is dense.

Custom weights supply an evaluator callable plus an explicit domain
(including a cutoff radius for full-plane weights); there is no
automatic support detection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.special import gammainc

from .errors import ConstraintError, DomainError, NumericalError, SingularMatrixError
from .quadrature import adaptive_integral, star_grid

DEFAULT_MOMENT_TOL = 1e-10

FULL_PLANE = "full-plane"
DISK = "disk"


@dataclass(frozen=True)
class DomainSpec:
    """Integration domain: a disk, or the plane truncated for quadrature."""

    kind: str
    radius: Optional[float] = None
    cutoff_radius: Optional[float] = None

    def __post_init__(self):
        if self.kind == DISK:
            if self.radius is None or self.radius <= 0:
                raise ConstraintError("disk domain requires a positive radius")
        elif self.kind == FULL_PLANE:
            if self.cutoff_radius is None or self.cutoff_radius <= 0:
                raise ConstraintError(
                    "full-plane domain requires a positive effective cutoff radius")
        else:
            raise ConstraintError(f"unknown domain kind {self.kind!r}")

    def contains(self, z: complex) -> bool:
        if self.kind == DISK:
            return abs(z) <= self.radius
        return True

    @property
    def quad_radius(self) -> float:
        """Radius actually used by quadrature grids."""
        return self.radius if self.kind == DISK else self.cutoff_radius


def disk_domain(radius: float) -> DomainSpec:
    return DomainSpec(kind=DISK, radius=float(radius))


def full_plane_domain(cutoff_radius: float) -> DomainSpec:
    return DomainSpec(kind=FULL_PLANE, cutoff_radius=float(cutoff_radius))


def gaussian_cutoff(scale: float, max_order: int, tail: float = 1e-16) -> float:
    """Truncation radius R with exp(-scale R^2) R^(2n+1) below ``tail`` of the
    full radial integral for every moment order up to ``max_order``."""
    n = max_order
    target = math.log(tail) + math.lgamma(n + 1) - math.log(2.0) \
        - (n + 1) * math.log(scale)

    def excess(r: float) -> float:
        return -scale * r * r + (2 * n + 1) * math.log(r) - target

    lo, hi = 1.0, 4.0
    while excess(hi) > 0.0 and hi < 1e3:
        hi *= 2.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return hi + 0.5


@dataclass(frozen=True, eq=False)
class WeightSpec:
    """A weight family instance together with its domain.

    ``parameters`` carry the family parameters (gaussian scale, disk
    radius, shift center as two reals).  ``amplitude`` is an overall
    positive factor; every moment, norm and Cauchy transform scales
    linearly in it, which the tests rely on.
    """

    kind: str
    parameters: tuple
    domain: DomainSpec
    amplitude: float = 1.0
    rotation_invariant: bool = False
    evaluator: Optional[Callable] = field(default=None, repr=False)
    radial_profile: Optional[Callable] = field(default=None, repr=False)
    max_order: int = 16

    def __post_init__(self):
        if self.amplitude <= 0:
            raise ConstraintError("weight amplitude must be positive")
        _check_positivity(self)

    def evaluate(self, z) -> np.ndarray:
        """Vectorized weight values; no domain membership check."""
        z = np.asarray(z, dtype=complex)
        if self.kind == "gaussian":
            (scale,) = self.parameters
            vals = np.exp(-scale * np.abs(z) ** 2)
        elif self.kind == "disk-flat":
            vals = np.ones_like(z, dtype=float)
        elif self.kind == "shifted-gaussian":
            cre, cim, scale = self.parameters
            vals = np.exp(-scale * np.abs(z - (cre + 1j * cim)) ** 2)
        elif self.kind == "custom":
            vals = np.asarray(self.evaluator(z), dtype=float)
        else:
            raise ConstraintError(f"unknown weight kind {self.kind!r}")
        if self.domain.kind == DISK:
            vals = np.where(np.abs(z) <= self.domain.radius * (1 + 1e-14), vals, 0.0)
        return self.amplitude * vals

    @property
    def domain_scale(self) -> float:
        return self.domain.radius if self.domain.kind == DISK \
            else self.effective_support_radius

    @property
    def effective_support_radius(self) -> float:
        """Radius holding essentially all of the weight's mass."""
        if self.domain.kind == DISK:
            return self.domain.radius
        if self.kind == "gaussian":
            (scale,) = self.parameters
            return 3.0 / math.sqrt(scale)
        if self.kind == "shifted-gaussian":
            cre, cim, scale = self.parameters
            return 3.0 / math.sqrt(scale) + abs(cre + 1j * cim)
        return self.domain.cutoff_radius

    def label(self) -> str:
        params = ",".join(f"{p:g}" for p in self.parameters)
        return f"{self.kind}({params})x{self.amplitude:g}"


def _check_positivity(spec: WeightSpec, samples: int = 64) -> None:
    rng = np.random.default_rng(1234)
    r = spec.domain.quad_radius * np.sqrt(rng.random(samples))
    th = 2 * np.pi * rng.random(samples)
    z = r * np.exp(1j * th)
    vals = spec.evaluate(z)
    if np.any(~np.isfinite(vals)) or np.any(vals <= 0):
        bad = z[np.argmin(vals)]
        raise ConstraintError(
            f"weight {spec.kind} is not strictly positive on its domain "
            f"(w({bad:.4g}) = {np.min(vals):.4g})")


def gaussian_weight(scale: float = 1.0, amplitude: float = 1.0,
                    max_order: int = 16) -> WeightSpec:
    if scale <= 0:
        raise ConstraintError("gaussian scale must be positive")
    dom = full_plane_domain(gaussian_cutoff(scale, max_order))
    return WeightSpec(kind="gaussian", parameters=(float(scale),), domain=dom,
                      amplitude=float(amplitude), rotation_invariant=True,
                      max_order=max_order)


def disk_flat_weight(radius: float = 1.0, amplitude: float = 1.0) -> WeightSpec:
    return WeightSpec(kind="disk-flat", parameters=(float(radius),),
                      domain=disk_domain(radius), amplitude=float(amplitude),
                      rotation_invariant=True)


def shifted_gaussian_weight(center: complex, scale: float = 1.0,
                            amplitude: float = 1.0, max_order: int = 16) -> WeightSpec:
    if scale <= 0:
        raise ConstraintError("gaussian scale must be positive")
    c = complex(center)
    cutoff = gaussian_cutoff(scale, max_order) + abs(c)
    return WeightSpec(kind="shifted-gaussian",
                      parameters=(c.real, c.imag, float(scale)),
                      domain=full_plane_domain(cutoff),
                      amplitude=float(amplitude), rotation_invariant=False,
                      max_order=max_order)


def custom_weight(evaluator: Callable, domain: DomainSpec, *, amplitude: float = 1.0,
                  rotation_invariant: bool = False,
                  radial_profile: Optional[Callable] = None) -> WeightSpec:
    """Wrap a user-supplied evaluator.  The domain (with cutoff, for
    full-plane weights) must be declared explicitly."""
    return WeightSpec(kind="custom", parameters=(), domain=domain,
                      amplitude=float(amplitude),
                      rotation_invariant=rotation_invariant,
                      evaluator=evaluator, radial_profile=radial_profile)


def eval_weight(spec: WeightSpec, z: complex) -> float:
    """Weight value at a single point; errors if z is outside the domain."""
    z = complex(z)
    if not spec.domain.contains(z):
        raise DomainError(f"point {z} lies outside the {spec.domain.kind} domain")
    return float(spec.evaluate(z))


def radial_mass(spec: WeightSpec, n: int, t: float) -> float:
    """integral_0^t r^(2n+1) w(r) dr for rotation-invariant weights
    (amplitude included).  ``t = inf`` gives the full radial moment."""
    if not spec.rotation_invariant:
        raise ConstraintError("radial mass is defined for rotation-invariant weights")
    amp = spec.amplitude
    if spec.kind == "gaussian":
        (scale,) = spec.parameters
        full = math.gamma(n + 1) / (2.0 * scale ** (n + 1))
        if math.isinf(t):
            return amp * full
        return amp * full * float(gammainc(n + 1, scale * t * t))
    if spec.kind == "disk-flat":
        (radius,) = spec.parameters
        r = min(t, radius)
        return amp * r ** (2 * n + 2) / (2 * n + 2)
    # custom rotation-invariant weight: 1D Gauss-Legendre on [0, t]
    from .quadrature import unit_radial_rule
    upper = min(t, spec.domain.quad_radius)
    x, w = unit_radial_rule(256)
    r = upper * x
    prof = spec.radial_profile(r) if spec.radial_profile is not None \
        else spec.evaluate(r + 0j) / amp
    return amp * upper * float(np.sum(w * r ** (2 * n + 1) * prof))


def closed_moment(spec: WeightSpec, j: int, k: int):
    """Closed-form M_jk for the built-in families, or None."""
    amp = spec.amplitude
    if spec.kind == "gaussian":
        (scale,) = spec.parameters
        if j != k:
            return 0j
        return complex(amp * math.pi * math.gamma(k + 1) / scale ** (k + 1))
    if spec.kind == "disk-flat":
        (radius,) = spec.parameters
        if j != k:
            return 0j
        return complex(amp * math.pi * radius ** (2 * k + 2) / (k + 1))
    if spec.kind == "shifted-gaussian":
        cre, cim, scale = spec.parameters
        c = cre + 1j * cim
        total = 0j
        for a in range(min(j, k) + 1):
            total += (math.comb(j, a) * math.comb(k, a) * math.gamma(a + 1)
                      / scale ** (a + 1)) * c ** (j - a) * np.conj(c) ** (k - a)
        return complex(amp * math.pi * total)
    return None


def _moment_grid_radius(spec: WeightSpec, order: int) -> float:
    if spec.domain.kind == DISK:
        return spec.domain.radius
    if order <= spec.max_order:
        return spec.domain.cutoff_radius
    if spec.kind in ("gaussian", "shifted-gaussian"):
        scale = spec.parameters[-1]
        extra = abs(complex(spec.parameters[0], spec.parameters[1])) \
            if spec.kind == "shifted-gaussian" else 0.0
        return gaussian_cutoff(scale, order) + extra
    return spec.domain.cutoff_radius


def moment(spec: WeightSpec, j: int, k: int, *, method: str = "auto",
           tol: float = DEFAULT_MOMENT_TOL) -> complex:
    """Monomial moment M_jk; satisfies M_jk = conj(M_kj)."""
    if j < 0 or k < 0:
        raise ConstraintError("moment indices must be non-negative")
    if method not in ("auto", "closed-form", "quadrature"):
        raise ConstraintError(f"unknown moment method {method!r}")
    if method != "quadrature":
        closed = closed_moment(spec, j, k)
        if closed is not None:
            return closed
        if method == "closed-form":
            raise ConstraintError(f"no closed-form moments for weight {spec.kind!r}")

    radius = _moment_grid_radius(spec, j + k)

    def evaluate(n_r: int, n_t: int) -> complex:
        grid = star_grid(0j, radius, n_r, n_t)
        f = spec.evaluate(grid.nodes) * grid.nodes ** j * np.conj(grid.nodes) ** k
        return grid.integrate(f)

    # L1 size of the integrand fixes the absolute floor of the tolerance,
    # so that exactly-vanishing moments converge immediately.
    probe = star_grid(0j, radius, 48, 64)
    l1 = float(np.sum(np.abs(spec.evaluate(probe.nodes))
                      * np.abs(probe.nodes) ** (j + k) * probe.weights))
    value, _ = adaptive_integral(evaluate, tol, start=(48, 64),
                                 scale=1e-6 * max(l1, 1e-300),
                                 what=f"moment({j},{k}) of {spec.label()}")
    return value


@dataclass(frozen=True, eq=False)
class MomentMatrix:
    """Hermitian positive definite matrix of moments M_jk, 0 <= j,k <= order."""

    order: int
    entries: np.ndarray

    def __post_init__(self):
        n = self.order + 1
        if self.entries.shape != (n, n):
            raise ConstraintError("moment matrix shape does not match order")
        if not np.allclose(self.entries, self.entries.conj().T,
                           rtol=1e-12, atol=1e-12 * self._scale()):
            raise NumericalError("moment matrix is not Hermitian")

    def _scale(self) -> float:
        return float(np.max(np.abs(self.entries))) or 1.0

    def cholesky(self) -> np.ndarray:
        """Lower Cholesky factor; failure reports the offending minor."""
        try:
            return np.linalg.cholesky(self.entries)
        except np.linalg.LinAlgError:
            for m in range(1, self.order + 2):
                try:
                    np.linalg.cholesky(self.entries[:m, :m])
                except np.linalg.LinAlgError:
                    raise SingularMatrixError(
                        f"moment matrix is not positive definite: leading minor "
                        f"of order {m} fails (index {m - 1})") from None
            raise


def moment_matrix(spec: WeightSpec, n: int, *, method: str = "auto",
                  tol: float = DEFAULT_MOMENT_TOL) -> MomentMatrix:
    """Moment matrix up to order n, Hermitized by mirroring the upper triangle."""
    if n < 0:
        raise ConstraintError("moment matrix order must be non-negative")
    size = n + 1
    use_closed = method != "quadrature" and closed_moment(spec, 0, 0) is not None
    if use_closed:
        entries = np.array([[closed_moment(spec, j, k) for k in range(size)]
                            for j in range(size)], dtype=complex)
    else:
        if method == "closed-form":
            raise ConstraintError(f"no closed-form moments for weight {spec.kind!r}")
        radius = _moment_grid_radius(spec, 2 * n)

        def matrix_on(n_r: int, n_t: int) -> np.ndarray:
            grid = star_grid(0j, radius, n_r, n_t)
            powers = np.vstack([grid.nodes ** j for j in range(size)])
            wvals = spec.evaluate(grid.nodes) * grid.weights
            return (powers * wvals) @ powers.conj().T

        n_r, n_t = 48, 64
        prev = matrix_on(n_r, n_t)
        scale = float(np.max(np.abs(prev))) or 1.0
        for _ in range(4):
            n_r *= 2
            n_t *= 2
            cur = matrix_on(n_r, n_t)
            if float(np.max(np.abs(cur - prev))) <= tol * scale:
                break
            prev = cur
        else:
            raise NumericalError(
                f"moment matrix quadrature for {spec.label()} did not converge")
        entries = cur

    # Hermiticity by construction: keep the upper triangle, mirror-conjugate it.
    herm = np.triu(entries, 1) + np.triu(entries, 1).conj().T \
        + np.diag(entries.diagonal().real)
    return MomentMatrix(order=n, entries=herm)
