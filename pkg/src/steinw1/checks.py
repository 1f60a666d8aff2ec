"""Fast self-checks behind the ``check`` CLI command.

A reduced-scale mirror of the full acceptance suite (tests/): closed-form
weight regressions on the mass-bearing support, bound-number arithmetic,
standardization residuals, factor constants, and two quick oracle
soundness runs. Everything here is deterministic and finishes in seconds.
"""

from __future__ import annotations

import math

import numpy as np

from steinw1 import bespoke, catalog, factors, oracle, targets

__all__ = ["run_checks", "CHECKS"]


def _weights_match(case, params, family_cf, cf_params):
    r = catalog.run_case(case, params)
    cf = bespoke.closed_form_weights(family_cf, cf_params, n_atoms=len(r.law))
    env = bespoke.weight_noise_envelope(r.law, r.target, r.weight)
    excess = np.abs(r.weights.values - cf.values) - 256.0 * env
    dev = float(np.max(excess))
    return dev <= 1e-9, f"max dev beyond noise envelope {dev:.2e}"


def check_weight_regressions():
    cases = [
        ("binomial", {"n": 20, "t": 0.3}, "binomial", {"n": 20}),
        ("poisson", {"lam": 2.0}, "poisson", {}),
        ("geometric", {"t": 0.75, "rate": 1.0}, "geometric", {"t": 0.75}),
        ("bernoulli_laplace", {"l": 25}, "bernoulli_laplace", {"l": 25}),
        ("miw", {"n": 20}, "miw", {"n": 20}),
        ("erlangc", {"n": 5, "lam": 3.0, "mu": 1.0}, "erlangC_stationary", {}),
    ]
    for case, params, fam, cfp in cases:
        ok, detail = _weights_match(case, params, fam, cfp)
        if not ok:
            return False, f"{case}: {detail}"
    return True, f"{len(cases)} families"


def check_bound_numbers():
    b0, b1 = factors.beta_b0b1(2.0, 3.0)
    expected = {
        ("geometric", ("t", 0.75), ("rate", 1.0)): 3 * 0.75 / (2 * math.sqrt(0.25)),
        ("bernoulli_laplace", ("l", 25)): 3 * math.sqrt(2) / math.sqrt(50) + 3 / 50,
        ("nb_gamma", ("n", 5), ("beta", 1.0), ("t", 2.0)): 2 / math.sqrt(6),
        ("hypergeometric", ("N", 100), ("n", 20), ("r", 30)): math.sqrt(
            100**2 * 99 / (20 * 30 * 80 * 70)
        ),
        ("polya", ("alpha", 2.0), ("beta", 3.0), ("m", 1.0), ("n", 40)): (1 + (b0 + b1) / 2)
        / math.sqrt(40 * 45),
        ("semicircle_fulman", ("n", 30)): 5 / math.sqrt(868),
        ("erlangc", ("n", 5), ("lam", 3.0), ("mu", 1.0)): 0.5
        * math.sqrt(1 / 3)
        * (23 + 13 * (2 + math.sqrt(1 / 3))),
    }
    worst = 0.0
    for key, val in expected.items():
        name, *pairs = key
        r = catalog.run_case(name, dict(pairs))
        worst = max(worst, abs(r.report.bound - val) / val)
    return worst <= 1e-9, f"worst rel dev {worst:.2e}"


def check_conditions_residuals():
    worst = 0.0
    for name, params in [
        ("binomial", {"n": 20, "t": 0.3}),
        ("poisson", {"lam": 2.0}),
        ("polya", {"alpha": 2.0, "beta": 3.0, "m": 1.0, "n": 40}),
        ("erlangc", {"n": 5, "lam": 3.0, "mu": 1.0}),
    ]:
        r = catalog.run_case(name, params)
        from steinw1.discretes import check_conditions

        rep = check_conditions(r.law, r.target, r.weight)
        worst = max(worst, abs(rep.e_score), abs(rep.e_xsw))
    return worst <= 1e-8, f"worst residual {worst:.2e}"


def check_factor_constants():
    spec = factors.GridSpec(n_interior=20_000)
    for lam in (0.5, 1.0, 2.0):
        t = targets.make_target("exponential", rate=lam)
        v = factors.numeric_fprime_bound(t, spec)
        if not (lam - 1e-6 * lam <= v <= lam):
            return False, f"exp({lam}) sup {v}"
    if sum(factors.beta_b0b1(1.5, 1.5)) != 8.0:
        return False, "b0+b1 at (3/2, 3/2)"
    f = factors.closed_form_factors(targets.make_target("normal"), "constant_one")
    if (f.c0, f.c1) != (1.0, 0.0):
        return False, "normal factors"
    for fam, kw in [("exponential", {"rate": 1.0}), ("beta", {"alpha": 2.0, "beta": 2.0})]:
        t = targets.make_target(fam, **kw)
        v = factors.kernel_deriv_proxy_sup(t, spec)
        if v > 2 + 1e-6:
            return False, f"{fam} proxy {v}"
    return True, "exp sups, b0b1, normal pair, proxies"


def check_oracle_soundness():
    for name, params in [
        ("binomial", {"n": 25, "t": 0.5}),
        ("geometric", {"t": 0.75, "rate": 1.0}),
    ]:
        r = catalog.run_case(name, params, with_oracle=True)
        if not r.report.oracle_w1 <= r.report.bound + 1e-7:
            return False, f"{name}: oracle {r.report.oracle_w1} > bound {r.report.bound}"
    return True, "2 cases"


def check_third_moment():
    from steinw1.discretes import make_discrete

    lhs, rhs = bespoke.third_moment_identity(make_discrete("binomial", n=4, t=0.5))
    ok = abs(lhs - 0.5) <= 1e-9 and abs(rhs - 0.5) <= 1e-9
    return ok, f"lhs {lhs:.12f}, rhs {rhs:.12f}"


def check_builder():
    from steinw1.builder import UniformGrid, build_discrete

    t = targets.make_target("exponential", rate=1.0)
    w = targets.stein_kernel_weight(t)
    law = build_discrete(t, w, UniformGrid(0.0, 0.1))
    w1 = oracle.exact_w1(law, t)
    return w1 <= 1.5 * 0.1, f"w1 {w1:.5f} vs 0.15"


CHECKS = [
    ("closed-form weight regressions", check_weight_regressions),
    ("bound-number arithmetic", check_bound_numbers),
    ("standardization residuals", check_conditions_residuals),
    ("factor constants and suprema", check_factor_constants),
    ("oracle soundness", check_oracle_soundness),
    ("third-moment identity", check_third_moment),
    ("builder convergence", check_builder),
]


def run_checks():
    """Run every quick check; returns a list of (name, passed, detail)."""
    results = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashed check is a failed check
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append((name, ok, detail))
    return results
