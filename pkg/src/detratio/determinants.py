"""Dense complex determinants with conditioning diagnostics.

Determinants are evaluated by LU factorization with partial pivoting;
the conditioning indicator is the ratio of the largest to the smallest
pivot magnitude.  For overflow-prone assemblies a row-scaled variant
returns a mantissa determinant together with the logarithm of the
factored-out row scales, so products of large determinants and
factorials can be reassembled in log-polar form.
"""

from __future__ import annotations

import cmath
import math
import warnings

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor

from .errors import SingularMatrixError


def lu_det(matrix) -> tuple[complex, float]:
    """Determinant and pivot-ratio conditioning; a 0x0 matrix has det 1."""
    a = np.asarray(matrix, dtype=complex)
    if a.size == 0:
        return 1.0 + 0j, 1.0
    if a.shape[0] != a.shape[1]:
        raise ValueError("determinant of a non-square matrix")
    if a.shape[0] == 1:
        v = complex(a[0, 0])
        return v, 1.0
    with np.errstate(all="ignore"), warnings.catch_warnings():
        # a vanishing determinant is a legitimate value here (the bordered
        # q-determinants are zero at the deformation points by design)
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(a, check_finite=False)
    diag = np.abs(lu.diagonal())
    sign = 1 - 2 * (np.count_nonzero(piv != np.arange(len(piv))) % 2)
    det = sign * np.prod(lu.diagonal())
    cond = float("inf") if diag.min() == 0.0 else float(diag.max() / diag.min())
    return complex(det), cond


def scaled_lu_det(matrix) -> tuple[complex, float, float]:
    """(mantissa, log_scale, conditioning) with det = mantissa * exp(log_scale).

    Rows are rescaled by their max modulus before factorization and the
    logs of the scales are accumulated separately.
    """
    a = np.asarray(matrix, dtype=complex)
    if a.size == 0:
        return 1.0 + 0j, 0.0, 1.0
    scales = np.max(np.abs(a), axis=1)
    if np.any(scales == 0.0):
        return 0j, 0.0, float("inf")
    mantissa, cond = lu_det(a / scales[:, None])
    return mantissa, float(np.sum(np.log(scales))), cond


def require_nonsingular(det: complex, cond: float, what: str) -> None:
    if det == 0 or not math.isfinite(cond):
        raise SingularMatrixError(
            f"{what} is numerically singular (conditioning {cond:.3e})")


def vandermonde(values) -> complex:
    """prod_{i>j} (x_i - x_j); empty and singleton lists give 1."""
    xs = [complex(v) for v in values]
    out = 1.0 + 0j
    for i in range(len(xs)):
        for j in range(i):
            out *= xs[i] - xs[j]
    return out


def vandermonde_logpolar(values) -> tuple[float, float]:
    """(log modulus, phase) of the Vandermonde product."""
    log_mod, phase = 0.0, 0.0
    xs = [complex(v) for v in values]
    for i in range(len(xs)):
        for j in range(i):
            d = xs[i] - xs[j]
            if d == 0:
                return float("-inf"), 0.0
            log_mod += math.log(abs(d))
            phase += cmath.phase(d)
    return log_mod, phase


def confluent_vandermonde_logpolar(values, multiplicities) -> tuple[float, float]:
    """Log-polar prod over distinct pairs (x_i - x_j)^(m_i m_j).

    This is the Vandermonde limit matching derivative rows normalized by
    1/t!; no extra factorial product appears in that convention.
    """
    log_mod, phase = 0.0, 0.0
    xs = [complex(v) for v in values]
    for i in range(len(xs)):
        for j in range(i):
            d = xs[i] - xs[j]
            if d == 0:
                return float("-inf"), 0.0
            power = multiplicities[i] * multiplicities[j]
            log_mod += power * math.log(abs(d))
            phase += power * cmath.phase(d)
    return log_mod, phase
