import math

import pytest

from steinw1 import catalog
from steinw1.errors import ParameterError


ALL_CASES = [
    ("binomial", {"n": 10, "t": 0.4}),
    ("poisson", {"lam": 1.5}),
    ("negative_binomial", {"n": 4, "t": 0.5}),
    ("hypergeometric", {"N": 60, "n": 12, "r": 20}),
    ("discrete_uniform", {"n": 8}),
    ("geometric", {"t": 0.6, "rate": 2.0}),
    ("nb_gamma", {"n": 3, "beta": 2.0, "t": 1.0}),
    ("bernoulli_laplace", {"l": 10}),
    ("polya", {"alpha": 1.0, "beta": 2.0, "m": 1.0, "n": 25}),
    ("semicircle_fulman", {"n": 12}),
    ("moran", {"a": 2.0, "b": 3.0, "n": 30}),
    ("miw", {"n": 15}),
    ("erlangc", {"n": 4, "lam": 2.0, "mu": 1.0}),
]


@pytest.mark.parametrize("name,params", ALL_CASES)
def test_every_case_runs_and_is_sound(name, params):
    res = catalog.run_case(name, params, with_oracle=True)
    assert res.report.bound > 0
    assert res.report.oracle_w1 <= res.report.bound + 1e-7
    assert res.report.bound == pytest.approx(
        math.fsum(res.report.term_breakdown.values()), abs=1e-15
    )


def test_clt_case_with_exact_convolution_oracle():
    res = catalog.run_case(
        "clt", {"summand": "binomial", "copies": 40, "n": 1, "t": 0.3}, with_oracle=True
    )
    assert res.report.theorem == "clt_T37"
    assert res.report.bound == pytest.approx(1 / math.sqrt(40 * 0.3 * 0.7), rel=1e-12)
    assert res.report.oracle_w1 <= res.report.bound
    assert "goldstein_comparison" in res.report.diagnostics


def test_clt_uniform_summand_case():
    res = catalog.run_case(
        "clt", {"summand": "discrete_uniform", "copies": 10, "n": 6}, with_oracle=True
    )
    ell = 3
    expect = math.sqrt(3) * (4 + ell + ell**2) / (math.sqrt(ell + ell**2) * (2 + 4 * ell))
    assert res.report.bound == pytest.approx(expect / math.sqrt(10), rel=1e-12)
    assert res.report.oracle_w1 <= res.report.bound


def test_unknown_case():
    with pytest.raises(ParameterError):
        catalog.run_case("nope", {})


def test_miw_small_uses_assembled_bound():
    res = catalog.run_case("miw", {"n": 15})
    assert "gap_telescoped_bound" in res.report.diagnostics
    assert res.report.bound == pytest.approx(
        res.report.diagnostics["assembled_bound"], rel=1e-12
    )


def test_erlangc_atomwise_refined_below_display():
    res = catalog.run_case("erlangc", {"n": 5, "lam": 3.0, "mu": 1.0})
    atomwise = res.report.diagnostics["atomwise_refined_bound"]
    assert atomwise <= res.report.bound
    assert atomwise > 0


def test_lipschitz_gap_below_oracle_across_catalog():
    from steinw1.oracle import exact_w1, lipschitz_gap

    for name, params in [
        ("binomial", {"n": 10, "t": 0.4}),
        ("geometric", {"t": 0.6, "rate": 2.0}),
        ("polya", {"alpha": 1.0, "beta": 2.0, "m": 1.0, "n": 25}),
        ("semicircle_fulman", {"n": 12}),
    ]:
        res = catalog.run_case(name, params)
        gap = lipschitz_gap(res.law, res.target, probe_count=32)
        assert gap <= exact_w1(res.law, res.target) + 1e-8
