import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from detratio import (ConstraintError, DegenerateVariablesError, OracleConfig,
                      RatioQuery, cauchy_evaluator, confluent_expectation,
                      eval_poly, expectation_inverses, expectation_products,
                      expectation_ratio, gaussian_weight, oracle_expectation,
                      ortho_system, partial_fractions)

from conftest import EPS_DISK, EPS_GAUSS, MUS_DISK, MUS_GAUSS


def test_empty_query_is_exactly_one(disk_sys, disk_ev):
    res = expectation_ratio(RatioQuery(N=3), disk_sys, disk_ev)
    assert res.value == 1.0 + 0j
    assert res.abs_error_estimate == 0.0


def test_disk_anchor(disk_sys, disk_ev):
    res = expectation_ratio(RatioQuery(N=1, epsbars=(2.0,)), disk_sys, disk_ev)
    assert res.value == pytest.approx(0.5, abs=1e-12)


def test_gaussian_anchor(gauss_sys, gauss_ev):
    res = expectation_ratio(RatioQuery(N=1, epsbars=(2.0,)), gauss_sys, gauss_ev)
    assert res.value == pytest.approx((1 - math.exp(-4)) / 2, rel=1e-12)


def test_heine_monomials(gauss_sys, gauss_ev):
    # gaussian polynomials are monomials, so <D_N[mu]> = mu^N
    for n_ev in (1, 2, 5):
        mu = 0.8 + 0.6j
        res = expectation_ratio(RatioQuery(N=n_ev, mus=(mu,)), gauss_sys, gauss_ev)
        assert res.value == pytest.approx(mu ** n_ev, rel=1e-13)


def test_path_consistency_products(disk_sys, disk_ev, gauss_sys, gauss_ev):
    for sys_, cev, pool in ((disk_sys, disk_ev, MUS_DISK),
                            (gauss_sys, gauss_ev, MUS_GAUSS)):
        for n_ev in (1, 2, 3):
            for big_l in (1, 2, 3):
                q = RatioQuery(N=n_ev, mus=pool[:big_l])
                a = expectation_ratio(q, sys_, cev).value
                b = expectation_products(q, sys_).value
                assert abs(a - b) <= 1e-9 * abs(a)


def test_path_consistency_inverses(disk_sys, disk_ev, gauss_sys, gauss_ev):
    for sys_, cev, pool in ((disk_sys, disk_ev, EPS_DISK),
                            (gauss_sys, gauss_ev, EPS_GAUSS)):
        for n_ev in (1, 2, 3):
            for big_m in range(1, min(n_ev, 2) + 1):
                q = RatioQuery(N=n_ev, epsbars=pool[:big_m])
                a = expectation_ratio(q, sys_, cev).value
                b = expectation_inverses(q, sys_, cev).value
                assert abs(a - b) <= 1e-9 * abs(a)


def test_permutation_symmetry(disk_sys, disk_ev):
    q0 = RatioQuery(N=2, mus=MUS_DISK[:2], epsbars=EPS_DISK)
    base = expectation_ratio(q0, disk_sys, disk_ev).value
    for pm in itertools.permutations(q0.mus):
        for pe in itertools.permutations(q0.epsbars):
            v = expectation_ratio(RatioQuery(N=2, mus=pm, epsbars=pe),
                                  disk_sys, disk_ev).value
            assert abs(v - base) <= 1e-12 * abs(base)


def test_measure_scaling_invariance(gauss_sys, gauss_ev):
    scaled = gaussian_weight(amplitude=3.7)
    ssys = ortho_system(scaled, 8)
    sev = cauchy_evaluator(ssys)
    for q in (RatioQuery(N=2, mus=MUS_GAUSS[:1], epsbars=EPS_GAUSS[:1]),
              RatioQuery(N=2, epsbars=EPS_GAUSS),
              RatioQuery(N=1, mus=MUS_GAUSS[:2])):
        a = expectation_ratio(q, gauss_sys, gauss_ev).value
        b = expectation_ratio(q, ssys, sev).value
        assert abs(a - b) <= 1e-12 * abs(a)


def test_conjugation_covariance(disk_sys, disk_ev):
    q = RatioQuery(N=2, mus=MUS_DISK[:1], epsbars=EPS_DISK[:1])
    qc = RatioQuery(N=2, mus=tuple(np.conj(v) for v in q.mus),
                    epsbars=tuple(np.conj(v) for v in q.epsbars))
    a = expectation_ratio(q, disk_sys, disk_ev).value
    b = expectation_ratio(qc, disk_sys, disk_ev).value
    assert b == pytest.approx(np.conj(a), rel=1e-13)


def test_confluent_equals_plain_when_trivial(gauss_sys, gauss_ev):
    q = RatioQuery(N=2, mus=MUS_GAUSS[:2], epsbars=EPS_GAUSS[:1],
                   mu_multiplicities=(1, 1), eps_multiplicities=(1,))
    a = expectation_ratio(q, gauss_sys, gauss_ev).value
    b = confluent_expectation(q, gauss_sys, gauss_ev).value
    assert a == b


def test_confluence_richardson(gauss_sys, gauss_ev):
    mu = 0.9 + 0.6j
    conf = confluent_expectation(RatioQuery(N=2, mus=(mu,), mu_multiplicities=(2,)),
                                 gauss_sys, gauss_ev).value

    def at(delta):
        return expectation_ratio(RatioQuery(N=2, mus=(mu, mu + delta)),
                                 gauss_sys, gauss_ev).value

    deltas = (1e-2, 1e-3, 1e-4)
    errs = [abs(at(d) - conf) / abs(conf) for d in deltas]
    assert errs[0] > errs[1] > errs[2]
    # first-order Richardson extrapolation of the last pair
    d1, d2 = deltas[1], deltas[2]
    rich = (d1 * at(d2) - d2 * at(d1)) / (d1 - d2)
    assert abs(rich - conf) / abs(conf) <= 1e-5


def test_confluent_vs_oracle(gauss, gauss_sys, gauss_ev):
    mu = 0.9 + 0.6j
    q = RatioQuery(N=2, mus=(mu,), mu_multiplicities=(2,))
    conf = confluent_expectation(q, gauss_sys, gauss_ev).value
    est = oracle_expectation(q, gauss, OracleConfig(radial_nodes=64, angular_nodes=96))
    assert conf == pytest.approx(est.value, rel=1e-8)


def test_confluent_epsbars_outside_support(gauss_sys, gauss_ev):
    eb = 5.0 + 1.0j
    conf = confluent_expectation(
        RatioQuery(N=2, epsbars=(eb,), eps_multiplicities=(2,)),
        gauss_sys, gauss_ev).value
    for delta in (1e-2, 1e-3):
        v = expectation_ratio(RatioQuery(N=2, epsbars=(eb, eb + delta)),
                              gauss_sys, gauss_ev).value
        assert abs(v - conf) / abs(conf) < delta * 10


def test_constraint_errors(disk_sys, disk_ev):
    with pytest.raises(ConstraintError):
        RatioQuery(N=1, epsbars=EPS_DISK)  # M > N
    with pytest.raises(ConstraintError):
        RatioQuery(N=0)
    with pytest.raises(DegenerateVariablesError):
        RatioQuery(N=2, epsbars=(2.0, 2.0))
    with pytest.raises(ConstraintError):
        expectation_ratio(RatioQuery(N=2, mus=MUS_DISK * 3), disk_sys, disk_ev)
    with pytest.raises(ConstraintError):
        expectation_products(RatioQuery(N=1, epsbars=(2.0,)), disk_sys)
    with pytest.raises(ConstraintError):
        expectation_inverses(RatioQuery(N=1, mus=(1.5,)), disk_sys, disk_ev)


def test_multiplicity_counts_against_n():
    with pytest.raises(ConstraintError):
        RatioQuery(N=2, epsbars=(3.0,), eps_multiplicities=(3,))


def test_diagnostics_fields(disk_sys, disk_ev):
    res = expectation_ratio(RatioQuery(N=2, epsbars=EPS_DISK), disk_sys, disk_ev)
    assert res.diagnostics.backend == "rotinv-series"
    assert res.diagnostics.det_conditioning >= 1.0
    assert math.isfinite(res.abs_error_estimate)


def test_non_finite_results_rejected():
    from detratio import Diagnostics, EvalResult, NumericalError
    with pytest.raises(NumericalError):
        EvalResult(complex("nan"), 0.0, Diagnostics(1.0, "test", ()))
    with pytest.raises(NumericalError):
        EvalResult(1.0 + 0j, float("inf"), Diagnostics(1.0, "test", ()))


def test_overflow_control_large_system():
    # factorial norms at depth 40 only pass through logs
    sys_ = ortho_system(gaussian_weight(max_order=80), 40)
    cev = cauchy_evaluator(sys_)
    mu = 1.1 + 0.2j
    res = expectation_ratio(RatioQuery(N=40, mus=(mu,)), sys_, cev)
    assert res.value == pytest.approx(mu ** 40, rel=1e-11)
    res = expectation_ratio(RatioQuery(N=40, epsbars=(5.5,)), sys_, cev)
    assert math.isfinite(abs(res.value)) and abs(res.value) > 0


def test_partial_fractions_examples():
    a, p = partial_fractions(0, (1.5,))
    assert a[0] == pytest.approx(1.0)
    assert np.allclose(p.coeffs, [0.0])

    a, p = partial_fractions(2, (1.0, 2.0))
    assert np.allclose(p.coeffs, [1.0])  # (-1)^m with m = 2


def test_partial_fractions_two_pole_reconstruction():
    # z/((1 - z)(2 - z)) rebuilt at 20 points away from the poles
    poles = (1.0, 2.0)
    a, p = partial_fractions(1, poles)
    rng = np.random.default_rng(2)
    count = 0
    while count < 20:
        z = 3 * (rng.standard_normal() + 1j * rng.standard_normal())
        if min(abs(z - e) for e in poles) < 0.3:
            continue
        count += 1
        lhs = z / ((1 - z) * (2 - z))
        rhs = a[0] / (1 - z) + a[1] / (2 - z) + eval_poly(p, z)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=5),
       st.lists(st.complex_numbers(min_magnitude=0.1, max_magnitude=3.0,
                                   allow_nan=False, allow_infinity=False),
                min_size=1, max_size=4))
def test_partial_fractions_reconstruction(j, poles):
    # identity z^j / prod (e_k - z) = sum a_k/(e_k - z) + p(z)
    if len(poles) > 1:
        gaps = [abs(a - b) for i, a in enumerate(poles) for b in poles[:i]]
        if min(gaps) < 1e-3:
            return
    try:
        a, p = partial_fractions(j, poles)
    except DegenerateVariablesError:
        return
    rng = np.random.default_rng(17)
    for z in rng.standard_normal(20) + 1j * rng.standard_normal(20):
        if min(abs(z - e) for e in poles) < 1e-2:
            continue
        lhs = z ** j / np.prod([e - z for e in poles])
        rhs = sum(a[k] / (poles[k] - z) for k in range(len(poles))) + eval_poly(p, z)
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))


def test_partial_fractions_rejects_repeated_poles():
    with pytest.raises(DegenerateVariablesError):
        partial_fractions(1, (2.0, 2.0))
