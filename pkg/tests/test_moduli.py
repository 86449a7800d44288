import math

import numpy as np
import pytest

from hyplab.moduli import (
    AuxiliaryFunction,
    ModulusOfContinuity,
    admissibility_check,
    decay_rate,
    decay_rate_pair,
    fd_derivative,
    iterated_log,
    log_grid,
    log_reciprocal,
    power_law,
)

CATALOG = [
    power_law(0.5),
    power_law(2.0 / 3.0),
    power_law(1.0, role="rho"),
    log_reciprocal(1.0),
    log_reciprocal(2.0),
    iterated_log(2),
]


def test_eval_closed_forms():
    assert log_reciprocal(1.0).value(math.exp(-2)) == pytest.approx(0.5, rel=1e-12)
    assert power_law(1.0, role="rho").value(0.3) == pytest.approx(0.3, rel=1e-15)
    assert power_law(2.0 / 3.0).value(0.125) == pytest.approx(0.25, rel=1e-12)


def test_eval_domain_errors():
    f = power_law(0.5)
    with pytest.raises(ValueError):
        f.value(0.0)
    with pytest.raises(ValueError):
        f.value(1.5)
    with pytest.raises(ValueError):
        log_reciprocal(1.0).value(0.7)


def test_deriv_closed_forms():
    assert power_law(0.5).derivative(0.25, 1) == pytest.approx(1.0, rel=1e-12)
    assert power_law(1.0, role="rho").derivative(0.37, 2) == 0.0
    # d/dr (log(1/r))^{-1} = r^{-1} (log(1/r))^{-2}; at r = 1/e this is e
    assert log_reciprocal(1.0).derivative(math.exp(-1), 1) == pytest.approx(math.e, rel=1e-12)


@pytest.mark.parametrize("f", CATALOG, ids=lambda f: f"{f.family}-{f.param}")
def test_deriv_matches_finite_differences(f):
    rs = log_grid(f.r0 * 1e-3, f.r0 * 0.5, 12)
    for k in (1, 2, 3):
        exact = np.asarray(f.derivative(rs, k))
        approx = fd_derivative(lambda r, kk=k - 1: f.derivative(r, kk) if kk else f.value(r), rs)
        scale = np.maximum(np.abs(exact), 1e-300)
        assert np.max(np.abs(approx - exact) / scale) < 1e-6


def test_concavity_caps_and_certification():
    from hyplab.moduli import admissibility_check, certification_grid, concave_domain_end

    assert concave_domain_end(log_reciprocal(1.0)) == pytest.approx(math.exp(-2), rel=1e-6)
    assert concave_domain_end(power_law(0.5)) == 1.0
    assert concave_domain_end(power_law(1.0, role="rho")) == 1.0
    for f in (log_reciprocal(1.0), log_reciprocal(2.0), iterated_log(2)):
        assert admissibility_check(f, certification_grid(f)).passed


@pytest.mark.parametrize("f", CATALOG, ids=lambda f: f"{f.family}-{f.param}")
def test_inverse_round_trip(f):
    rs = log_grid(f.r0 * 1e-6, f.r0, 40)
    ts = np.asarray(f.value(rs))
    back = np.asarray(f.inverse(ts))
    assert np.max(np.abs(back - rs) / rs) < 1e-9


def test_inverse_examples_and_bisection_agreement():
    f = log_reciprocal(1.0)
    assert f.inverse(0.5) == pytest.approx(math.exp(-2), rel=1e-12)
    assert f.inverse_bisect(0.5) == pytest.approx(math.exp(-2), rel=1e-10)
    assert power_law(1.0, role="rho").inverse(0.4) == pytest.approx(0.4, rel=1e-15)
    assert power_law(2.0 / 3.0).inverse(0.25) == pytest.approx(0.125, rel=1e-12)
    for f in CATALOG:
        t = 0.5 * f.range_max
        assert f.inverse_bisect(t) == pytest.approx(f.inverse(t), rel=1e-9)


def test_inverse_range_error():
    f = power_law(0.5)
    with pytest.raises(ValueError):
        f.inverse(1.5)  # range is (0, 1]
    with pytest.raises(ValueError):
        f.inverse(0.0)


def test_admissibility_pass_and_fail():
    grid = log_grid(1e-6, 1.0, 96)
    assert admissibility_check(power_law(2.0 / 3.0), grid).passed
    assert admissibility_check(power_law(1.0, role="rho"), grid).passed
    # the identity fails as an eta: no strict concavity and mu(r) = 1
    rep = admissibility_check(power_law(1.0, role="eta"), grid)
    assert not rep.passed
    assert not rep.clauses["concave"].passed
    assert not rep.clauses["modulus_vanishes"].passed


def test_admissibility_log_family_under_concavity_cap():
    # log families are concave only for r < exp(-(alpha+1))
    f = log_reciprocal(1.0)
    grid = log_grid(1e-8, 0.1, 96)
    rep = admissibility_check(f, grid)
    assert rep.passed, rep.summary()
    assert rep.constants["C_1"] == pytest.approx(1.0, rel=1e-9)
    # and indeed fails when the grid reaches r0 = 0.5
    rep_full = admissibility_check(f, log_grid(1e-8, f.r0, 96))
    assert not rep_full.clauses["concave"].passed


def test_admissibility_grid_validation():
    with pytest.raises(ValueError):
        admissibility_check(power_law(0.5), log_grid(1e-4, 1.0, 32))


def test_modulus_of_continuity():
    mu = ModulusOfContinuity(log_reciprocal(1.0))
    rs = log_grid(1e-8, 0.3, 64)
    vals = mu.value(rs)
    assert np.all(np.diff(vals) > 0)
    assert vals[0] < vals[1]
    assert vals[0] < 1e-2 * vals[-1]
    # mu(r)/r = 1/eta(r) blows up at 0+ (weaker than Lipschitz)
    ratios = vals / rs
    assert ratios[0] > 10 * ratios[-1]
    with pytest.raises(ValueError):
        ModulusOfContinuity(power_law(1.0, role="rho"))


def test_decay_rate_closed_forms():
    # power law eta = r^{1-alpha}: rate = (1-alpha)^{-1} t^{-(2-alpha)/(1-alpha)}
    alpha = 0.5
    eta = power_law(1.0 - alpha)
    ts = np.geomspace(0.01, 1.0, 25)
    target = (1.0 / (1.0 - alpha)) * ts ** (-(2.0 - alpha) / (1.0 - alpha))
    assert np.max(np.abs(decay_rate(eta, ts) / target - 1.0)) < 1e-12
    # log reciprocal: rate = e^{1/t} / t^2
    eta = log_reciprocal(1.0)
    target = np.exp(1.0 / ts) / ts**2
    assert np.max(np.abs(decay_rate(eta, ts) / target - 1.0)) < 1e-12


def test_decay_rate_pair_against_fd():
    eta = power_law(0.5)
    rho = power_law(0.7, role="rho")
    ts = np.linspace(0.05, 0.9, 9)
    closed = decay_rate_pair(eta, rho, ts)
    approx = fd_derivative(lambda t: -1.0 / rho.value(eta.inverse(t)), ts)
    assert np.max(np.abs(approx / closed - 1.0)) < 1e-8
