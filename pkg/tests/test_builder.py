import math

import numpy as np
import pytest
from scipy.special import gammaln

from steinw1 import bespoke as B
from steinw1 import builder as BU
from steinw1 import discretes as D
from steinw1 import oracle as O
from steinw1 import targets
from steinw1.errors import InfeasibleGridError, ParameterError


def test_exp_builder_bound_and_conditions(exp1):
    tau = targets.stein_kernel_weight(exp1)
    law = BU.build_discrete(exp1, tau, BU.UniformGrid(0.0, 0.1))
    assert D.check_conditions(law, exp1, tau).passed
    assert O.exact_w1(law, exp1) <= 1.5 * 0.1


def test_gamma_builder_masses_match_closed_form(gamma21):
    tau = targets.stein_kernel_weight(gamma21)
    delta = 0.01
    law = BU.build_discrete(gamma21, tau, BU.UniformGrid(0.0, delta))
    alpha, beta = 2.0, 1.0
    i = np.arange(1, len(law))
    ar = alpha / (1 - delta * beta)
    log_m = (
        math.log(alpha)
        + (i - 1) * math.log(1 - delta * beta)
        + gammaln(ar + i)
        - gammaln(i + 1)
        - gammaln(ar + 1)
    )
    full = np.concatenate([[0.0], log_m])
    expect = np.exp(full - full.max())
    expect /= expect.sum()
    assert np.max(np.abs(expect - law.masses)) < 1e-13
    assert O.exact_w1(law, gamma21) <= 2 * delta


def test_builder_weights_degenerate(exp1):
    tau = targets.stein_kernel_weight(exp1)
    law = BU.build_discrete(exp1, tau, BU.UniformGrid(0.0, 0.1))
    ws = B.compute_weights(law, exp1, tau)
    assert ws.values[0] == 1.0
    env = B.weight_noise_envelope(law, exp1, tau)
    assert np.all(np.abs(ws.values[1:]) <= 1e-9 + 256 * env[1:])


def test_mesh_halving_monotone(exp1, gamma21):
    for target in (exp1, gamma21):
        tau = targets.stein_kernel_weight(target)
        prev = None
        for delta in (0.2, 0.1, 0.05, 0.025):
            w1 = O.exact_w1(BU.build_discrete(target, tau, BU.UniformGrid(0.0, delta)), target)
            if prev is not None:
                assert w1 <= prev + 1e-8
            prev = w1


def test_finite_grid_endpoint_equation_enforced(beta22):
    tau = targets.stein_kernel_weight(beta22)
    bad = np.linspace(0.0, 0.9, 20)  # endpoint equation not satisfied
    with pytest.raises(InfeasibleGridError):
        BU.build_discrete(beta22, tau, bad)


def test_infeasible_first_step(exp1):
    # delta_1 s_0 >= w_0 fails when the grid starts right of the mean
    tau = targets.stein_kernel_weight(exp1)
    grid = np.array([2.0, 2.1, 2.2])
    with pytest.raises(InfeasibleGridError):
        BU.build_discrete(exp1, tau, grid)


def test_solve_ip_grid_beta(beta22):
    delta, ell = BU.solve_ip_grid(beta22, ell=50)
    end = delta * ell
    assert end < 1
    resid = float(beta22.tau(end)) + delta * (beta22.mean - end)
    assert abs(resid) < 1e-10
    tau = targets.stein_kernel_weight(beta22)
    law = BU.build_discrete(beta22, tau, np.arange(ell + 1) * delta)
    assert D.check_conditions(law, beta22, tau).passed


def test_solve_ip_grid_unbounded(exp1, gamma21):
    # -tau / (mean - x) decreases to the linear kernel coefficient
    assert BU.solve_ip_grid(gamma21) == pytest.approx(1.0)
    assert BU.solve_ip_grid(exp1) == pytest.approx(1.0)
    g3 = targets.make_target("gamma", alpha=1.0, beta=3.0)
    assert BU.solve_ip_grid(g3) == pytest.approx(1 / 3)


def test_solve_ip_grid_rejects_student():
    t = targets.make_target("student", df=5)
    with pytest.raises(ParameterError):
        BU.solve_ip_grid(t)


def test_miw_points_small_cases():
    p3 = BU.miw_points(3)
    assert np.allclose(p3, [-1.0, 0.0, 1.0], atol=1e-12)
    p4 = BU.miw_points(4)
    assert abs(p4.sum()) <= 1e-12
    assert (p4**2).sum() == pytest.approx(3.0, abs=1e-9)


@pytest.mark.parametrize("n", [20, 101, 150, 200])
def test_miw_points_invariants(n):
    pts = BU.miw_points(n)
    assert abs(pts.sum()) <= 1e-12 * max(1.0, np.abs(pts).sum())
    assert (pts**2).sum() / n == pytest.approx((n - 1) / n, rel=1e-9)
    if n > 100:
        m = (n + 1) // 2 if n % 2 else n // 2
        assert pts[-1] <= math.sqrt(2 * (1 + math.log(m)))


def test_miw_weight_formula(std_normal, unit_weight):
    n = 20
    law = D.standardize(D.make_discrete("miw", n=n), std_normal).law
    ws = B.compute_weights(law, std_normal, unit_weight)
    expect = 1.0 - np.arange(n) / (n - 1)
    assert np.max(np.abs(ws.values - expect)) < 1e-9
