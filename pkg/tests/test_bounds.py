import json
import math

import numpy as np
import pytest

from steinw1 import bespoke as B
from steinw1 import bounds as BD
from steinw1 import discretes as D
from steinw1 import factors as F
from steinw1 import targets
from steinw1.errors import ParameterError
from steinw1.schema import SCHEMAS


def _binomial_setup(std_normal, n=12, t=0.4):
    law = D.standardize(D.make_discrete("binomial", n=n, t=t), std_normal).law
    w = targets.constant_weight(1.0)
    ws = B.compute_weights(law, std_normal, w)
    fac = F.closed_form_factors(std_normal, "constant_one")
    return law, ws, fac


def test_breakdown_sums_exactly(std_normal):
    law, ws, fac = _binomial_setup(std_normal)
    rep = BD.wasserstein_bound(law, std_normal, ws, fac)
    assert rep.bound == math.fsum(rep.term_breakdown.values())


def test_regular_spacing_simplification(std_normal):
    law, ws, fac = _binomial_setup(std_normal)
    rep = BD.wasserstein_bound(law, std_normal, ws, fac)
    assert rep.theorem == "regular_spacing_C12"
    sigma = math.sqrt(12 * 0.4 * 0.6)
    assert rep.term_breakdown["first_order"] == pytest.approx(1 / sigma, rel=1e-15)


def test_general_terms_match_simplification(std_normal):
    # force the general path by perturbing one atom off the lattice
    law, ws, fac = _binomial_setup(std_normal)
    pts = law.points.copy()
    pts[3] += 1e-9
    law2 = D.DiscreteLaw(points=pts, masses=law.masses)
    w = targets.constant_weight(1.0)
    ws2 = B.compute_weights(law2, std_normal, w, allow_condition_failure=True)
    rep2 = BD.wasserstein_bound(law2, std_normal, ws2, fac)
    rep = BD.wasserstein_bound(law, std_normal, ws, fac)
    assert rep2.theorem == "uniform_T11"
    assert rep2.term_breakdown["first_order"] == pytest.approx(
        rep.term_breakdown["first_order"], rel=1e-6
    )


def test_uniform_target_second_order_term():
    # discrete uniform weights leave [0, 1], so the general path with both
    # mesh moments is used; terms must be consistent with direct sums
    std_normal = targets.make_target("normal")
    law = D.standardize(D.make_discrete("discrete_uniform", n=12), std_normal).law
    w = targets.constant_weight(1.0)
    ws = B.compute_weights(law, std_normal, w)
    fac = F.closed_form_factors(std_normal, "constant_one")
    rep = BD.wasserstein_bound(law, std_normal, ws, fac)
    assert rep.theorem == "uniform_T11"
    dm = np.diff(law.points)
    pi = ws.values
    e1 = 0.0
    for i in range(len(law)):
        dp = dm[i] if i < len(law) - 1 else 0.0
        dmn = dm[i - 1] if i > 0 else 0.0
        e1 += law.masses[i] * (abs(pi[i]) * dp + abs(1 - pi[i]) * dmn)
    assert rep.term_breakdown["first_order"] == pytest.approx(e1, rel=1e-12)


def test_combined_bound_polya_value():
    a, b, m, n = 2.0, 3.0, 1.0, 40
    target = targets.make_target("beta", alpha=a / m, beta=b / m)
    law = D.standardize(D.make_discrete("polya", alpha=a, beta=b, m=m, n=n), target).law
    weight = targets.stein_kernel_weight(target)
    ws = B.compute_weights(law, target, weight)
    fac = F.closed_form_factors(target, "stein_kernel")
    rep = BD.wasserstein_bound_combined(law, target, ws, fac)
    b0, b1 = F.beta_b0b1(a / m, b / m)
    expect = (1 + (b0 + b1) / 2) / math.sqrt(n * (a / m + b / m + n))
    assert rep.bound == pytest.approx(expect, rel=1e-9)


def test_combined_requires_constant(std_normal):
    law, ws, _ = _binomial_setup(std_normal)
    fac = F.SteinFactors(c0=2.0, c1=0.0, c_combined=None)
    with pytest.raises(ParameterError):
        BD.wasserstein_bound_combined(law, std_normal, ws, fac)


def test_refined_uniform_constants_degenerate(std_normal):
    law, ws, fac0 = _binomial_setup(std_normal)
    n = len(law)
    const = np.full(n + 1, fac0.c0)
    const[0] = 0.0
    const[-1] = 0.0
    fac = F.SteinFactors(c0=fac0.c0, c1=0.0, piecewise_c0=const, piecewise_c1=np.zeros(n + 1))
    rep = BD.wasserstein_bound_refined(law, std_normal, ws, fac)
    e1, _ = BD._mesh_moments(law, ws.values)
    assert rep.term_breakdown["first_order"] == pytest.approx(fac0.c0 * e1, rel=1e-12)
    zero = F.SteinFactors(c0=0.0, c1=0.0, piecewise_c0=np.zeros(n + 1), piecewise_c1=np.zeros(n + 1))
    rep0 = BD.wasserstein_bound_refined(law, std_normal, ws, zero)
    assert rep0.bound == pytest.approx(0.0, abs=1e-15)


def test_clt_bound_values():
    bern = D.make_discrete("binomial", n=1, t=0.3)
    rep = BD.clt_bound(bern, 50)
    assert rep.bound == pytest.approx(1 / math.sqrt(50 * 0.3 * 0.7), rel=1e-12)
    assert rep.theorem == "clt_T37"
    assert rep.diagnostics["goldstein_comparison"] > 0
    pois = D.make_discrete("poisson", lam=2.0, tail_tol=1e-13)
    rep = BD.clt_bound(pois, 10)
    assert rep.bound == pytest.approx(1 / math.sqrt(10 * 2.0), rel=1e-7)
    uni = D.make_discrete("discrete_uniform", n=6)
    rep = BD.clt_bound(uni, 10)
    ell = 3
    expect = math.sqrt(3) * (4 + ell + ell**2) / (math.sqrt(ell + ell**2) * (2 + 4 * ell))
    assert rep.bound == pytest.approx(expect / math.sqrt(10), rel=1e-12)
    with pytest.raises(ParameterError):
        BD.clt_bound(bern, 0)


def test_affine_shift_examples():
    assert BD.affine_shift_bound(1, 0, 1, 0, 5.0) == 0.0
    assert BD.affine_shift_bound(2, 0, 1, 1, 1.0) == 2.0


def test_affine_shift_polya_chain_remark():
    # switching the sum standardization back to Y/n costs exactly
    # (1 - n / sqrt(n(n+A+B))) * 2A/(A+B)
    a, b, m, n = 2.0, 3.0, 1.0, 40
    cap_a, cap_b = a / m, b / m
    s1 = 1 / math.sqrt(n * (cap_a + cap_b + n))
    c1 = cap_a / (cap_a + cap_b) - s1 * n * cap_a / (cap_a + cap_b)
    e_y = n * cap_a / (cap_a + cap_b)
    gap = BD.affine_shift_bound(s1, c1, 1 / n, 0.0, e_y)
    expect = (1 - n / math.sqrt(n * (n + cap_a + cap_b))) * 2 * cap_a / (cap_a + cap_b)
    assert gap == pytest.approx(expect, rel=1e-12)


def test_erlangc_display_value():
    r = math.sqrt(1 / 3)
    assert BD.erlangc_display_bound(5, 3.0, 1.0) == pytest.approx(
        0.5 * r * (23 + 13 * (2 + r))
    )
    assert BD.erlangc_display_bound(5, 3.0, 1.0) <= 31 * r
    with pytest.raises(ParameterError):
        BD.erlangc_display_bound(2, 5.0, 1.0)


def test_report_serialization_and_schema(std_normal):
    import jsonschema

    law, ws, fac = _binomial_setup(std_normal)
    rep = BD.wasserstein_bound(law, std_normal, ws, fac).with_oracle(0.1)
    doc = json.loads(BD.report_to_json(rep))
    jsonschema.validate(doc, SCHEMAS["bound_report"])
    row = BD.report_to_csv_row(rep)
    assert len(row) == len(BD.REPORT_CSV_HEADER)
    assert rep.ratio == rep.bound / 0.1


def test_clt_negative_binomial_constant():
    # per-summand constant (2 - t) / sqrt(l (1 - t)) for NB summands
    ell, t = 4, 0.45
    law = D.make_discrete("negative_binomial", n=ell, t=t, tail_tol=1e-13)
    rep = BD.clt_bound(law, 9)
    expect = (2 - t) / math.sqrt(ell * (1 - t)) / math.sqrt(9)
    assert rep.bound == pytest.approx(expect, rel=1e-7)


def test_builder_bound_mesh_scaling():
    # bound(delta/2) <= bound(delta) and bound(delta)/delta settles at the
    # first-order constant as the mesh shrinks
    from steinw1 import builder as BU

    target = targets.make_target("exponential", rate=1.0)
    tau = targets.stein_kernel_weight(target)
    fac = F.closed_form_factors(target, "stein_kernel")
    prev = None
    for delta in (0.2, 0.1, 0.05, 0.025):
        law = BU.build_discrete(target, tau, BU.UniformGrid(0.0, delta))
        ws = B.compute_weights(law, target, tau)
        rep = BD.wasserstein_bound(law, target, ws, fac)
        if prev is not None:
            assert rep.bound <= prev
        assert abs(rep.bound / delta - fac.c0) <= 0.05 * fac.c0
        prev = rep.bound
