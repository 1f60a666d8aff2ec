"""Tuned discrete-derivative weight sequences.

The weights pi solve the transpose system ((Delta^pi)^t (w p))_i / p_i = -s_i
row by row; equivalently the forward recurrence

    pi_i w_i p_i = pi_{i-1} w_{i-1} p_{i-1} + w_i p_i - (x_i - x_{i-1}) * sum_{j<i} s_j p_j

with pi_0 = 1. This module computes them (recurrence, tabulated closed
forms, and an independent linear-system solve), applies the associated
discrete Stein operator, and runs the sufficient sign tests for
0 <= pi <= 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from steinw1 import _kernels
from steinw1.discretes import DiscreteLaw, check_conditions, moments, score_on_points
from steinw1.errors import ConditionError, NoClosedFormError, ParameterError, SingularSystemError
from steinw1.targets import ContinuousTarget, WeightFunction

__all__ = [
    "WeightSequence",
    "SteinApplication",
    "compute_weights",
    "residual",
    "closed_form_weights",
    "apply_stein_operator",
    "check_range_sufficient",
    "third_moment_identity",
    "clt_weights_expectation",
    "brute_force_weights",
    "composed_sum_weights",
    "gaussian_lattice_weights",
    "weights_to_csv",
    "weights_to_json",
]

RANGE_TOL = 1e-10


@dataclass(frozen=True)
class WeightSequence:
    """Weight sequence aligned with a discrete law, plus diagnostics."""

    values: np.ndarray
    in_unit_interval: bool
    max_residual: float | None
    source: str  # recurrence | closed_form | linear_solve | clt_composition
    diagnostics: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))


@dataclass(frozen=True)
class SteinApplication:
    """Pointwise operator values and their expectation under the law."""

    values: np.ndarray
    expectation: float


def _in_unit(pi, noise=None):
    """Range flag with tolerance RANGE_TOL plus any provable numeric noise
    (computed weights at negligible-mass atoms carry amplified rounding)."""
    tol = RANGE_TOL if noise is None else RANGE_TOL + 256.0 * noise
    return bool(np.all(pi >= -tol) & np.all(pi <= 1.0 + tol))


def _row_defects(law: DiscreteLaw, pi, s, w):
    """Defects (Delta^pi)^t(wp)_i + s_i p_i of every evaluable row.

    For a truncated countable support the final finite-form row is not part
    of the system being solved; it is dropped here and reported separately.
    """
    d = _kernels.delta_t_wp(law.points, law.masses, w, pi) + s * law.masses
    if law.truncation is not None and d.size > 1:
        return d[:-1], float(d[-1])
    return d, None


def _normalized_max(defects, s, p):
    scale = np.maximum(1.0, np.abs(s * p)[: defects.size])
    return float(np.max(np.abs(defects) / scale)) if defects.size else 0.0


def compute_weights(
    law: DiscreteLaw,
    target: ContinuousTarget,
    weight: WeightFunction,
    *,
    condition_tol: float = 1e-8,
    allow_condition_failure: bool = False,
) -> WeightSequence:
    """Weight sequence by the forward recurrence (compensated summation).

    Requires the standardization identities to hold at ``condition_tol``
    unless ``allow_condition_failure`` is set, in which case the residuals
    are carried in the diagnostics for downstream slack accounting.
    """
    report = check_conditions(law, target, weight, tol=condition_tol)
    if not report.passed and not allow_condition_failure:
        raise ConditionError(
            f"standardization residuals {report.rel_score:.3e}, {report.rel_xsw:.3e} "
            f"exceed {condition_tol}; standardize the law or pass allow_condition_failure"
        )
    s, w = score_on_points(target, weight, law.points)
    try:
        pi = _kernels.bespoke_pi(law.points, law.masses, w, s)
    except ZeroDivisionError as exc:
        raise SingularSystemError(str(exc)) from None
    defects, edge = _row_defects(law, pi, s, w)
    diagnostics = {
        "condition_rel_score": report.rel_score,
        "condition_rel_xsw": report.rel_xsw,
        "condition_passed": report.passed,
    }
    if edge is not None:
        diagnostics["edge_row_defect"] = edge
        with np.errstate(over="ignore", invalid="ignore"):
            v = pi * w * law.masses
            if abs(v[-2]) > 0 and np.isfinite(v[-1] / v[-2]):
                diagnostics["tail_ratio"] = float(v[-1] / v[-2])
    return WeightSequence(
        values=pi,
        in_unit_interval=_in_unit(pi, weight_noise_envelope(law, target, weight)),
        max_residual=_normalized_max(defects, s, law.masses),
        source="recurrence",
        diagnostics=diagnostics,
    )


def weight_noise_envelope(
    law: DiscreteLaw, target: ContinuousTarget, weight: WeightFunction
) -> np.ndarray:
    """Per-atom representation-noise bound for any weight solver.

    The weight at atom i is a prefix sum of terms (x_j - x_i) s_j p_j + w_j p_j
    divided by w_i p_i; rounding the masses alone perturbs it by about
    eps * sum_j (|x_j - x_i||s_j| + |w_j|) p_j / (w_i p_i), independently of
    the algorithm. Comparisons against closed forms are meaningful only up
    to a small multiple of this envelope (it is negligible except at atoms
    of negligible mass).
    """
    s, w = score_on_points(target, weight, law.points)
    x, p = law.points, law.masses
    a = np.cumsum(np.abs(s) * p)
    b = np.cumsum(x * np.abs(s) * p)
    c = np.cumsum(np.abs(w) * p)
    num = x * a - b + c
    den = np.abs(w * p)
    den[0] = max(den[0], np.max(den) * 1e-300 + 1e-300)  # atom 0 weight is definitional
    eps = np.finfo(float).eps
    out = eps * num / den
    out[0] = 0.0
    return out


def residual(
    law: DiscreteLaw,
    weights: WeightSequence | np.ndarray,
    target: ContinuousTarget,
    weight: WeightFunction,
) -> float:
    """max_i |row_i(pi) + s_i p_i| / max(1, |s_i p_i|) over evaluable rows."""
    pi = weights.values if isinstance(weights, WeightSequence) else np.asarray(weights, float)
    if pi.shape != law.points.shape:
        raise ParameterError("weights are not aligned with the law's support")
    s, w = score_on_points(target, weight, law.points)
    defects, _ = _row_defects(law, pi, s, w)
    return _normalized_max(defects, s, law.masses)


# ---------------------------------------------------------------------------
# closed forms


def _cf_binomial(p, n_atoms):
    n = int(p["n"])
    i = np.arange(n + 1)
    return (n - i) / n


def _cf_poisson(p, n_atoms):
    _need_length(n_atoms, "poisson")
    return np.ones(n_atoms)


def _cf_negative_binomial(p, n_atoms):
    _need_length(n_atoms, "negative_binomial")
    n = int(p["n"])
    return 1.0 + np.arange(n_atoms) / n


def _cf_geometric(p, n_atoms):
    _need_length(n_atoms, "geometric")
    t = float(p["t"])
    c = math.sqrt(1.0 - t) - (1.0 - t)
    i = np.arange(n_atoms)
    return (1.0 + i) * c / (t * i + c)


def _cf_nb_gamma(p, n_atoms):
    _need_length(n_atoms, "nb_gamma")
    n = int(p["n"])
    beta = float(p["beta"])
    t = float(p["t"])
    c = math.sqrt(t * (beta + t)) - t
    i = np.arange(n_atoms)
    return (n + i) * c / (beta * i + n * c)


def _cf_hypergeometric(p, n_atoms):
    cap_n, n, r = int(p["N"]), int(p["n"]), int(p["r"])
    i = np.arange(n + 1)
    return (n - i) * (r - i) * (cap_n * i + (cap_n - n) * (cap_n - r)) / (
        n * r * (cap_n - n) * (cap_n - r)
    )


def _cf_discrete_uniform(p, n_atoms):
    n = int(p["n"])
    i = np.arange(n + 1)
    return (i + 1.0) * (n - i) * (n - 2.0 * (i - 1.0)) / (n * (n + 2.0))


def _cf_polya(p, n_atoms):
    a = p["alpha"] / p["m"]
    b = p["beta"] / p["m"]
    n = int(p["n"])
    i = np.arange(n + 1, dtype=float)
    root = math.sqrt(n * (a + b + n))
    num = (i + a) * (n - i) * (b * (b + n - root) + a * (b - n + root))
    den = (a * (n - i) + b * (root - i)) * (b * i + a * (i - n + root))
    return num / den


def _cf_bernoulli_laplace(p, n_atoms):
    ell = int(p["l"])
    i = np.arange(ell + 1)
    return (ell - i) * (i + 1.0) / (ell * (2.0 * i + 1.0))


def _cf_semicircle(p, n_atoms):
    n = int(p["n"])
    i = np.arange(1, n)
    return -(2.0 * i + 1.0) * (n - i - 1.0) / (4.0 * i * i - 4.0 * i * n + n + 2.0)


def _cf_miw(p, n_atoms):
    n = int(p["n"])
    return 1.0 - np.arange(n) / (n - 1.0)


def _cf_erlangc(p, n_atoms):
    _need_length(n_atoms, "erlangC_stationary")
    return np.ones(n_atoms)


def _need_length(n_atoms, family):
    if n_atoms is None:
        raise ParameterError(f"{family} has countable support; pass the retained length")


_CLOSED_FORMS = {
    "binomial": _cf_binomial,
    "poisson": _cf_poisson,
    "negative_binomial": _cf_negative_binomial,
    "geometric": _cf_geometric,
    "nb_gamma": _cf_nb_gamma,
    "hypergeometric": _cf_hypergeometric,
    "discrete_uniform": _cf_discrete_uniform,
    "polya": _cf_polya,
    "bernoulli_laplace": _cf_bernoulli_laplace,
    "semicircle_fulman": _cf_semicircle,
    "miw": _cf_miw,
    "erlangC_stationary": _cf_erlangc,
}


def closed_form_weights(family: str, params: Mapping, n_atoms: int | None = None) -> WeightSequence:
    """Tabulated closed-form weight sequences for the application catalog.

    ``n_atoms`` fixes the retained length for countable supports. Families
    without a tabulated closed form (e.g. moran) raise ``NoClosedFormError``.
    """
    if family not in _CLOSED_FORMS:
        raise NoClosedFormError(f"no closed-form weights for family {family!r}")
    pi = np.asarray(_CLOSED_FORMS[family](dict(params), n_atoms), dtype=float)
    return WeightSequence(
        values=pi,
        in_unit_interval=_in_unit(pi),
        max_residual=None,
        source="closed_form",
    )


# ---------------------------------------------------------------------------
# operator application


def apply_stein_operator(
    law: DiscreteLaw,
    weights: WeightSequence | np.ndarray,
    weight: WeightFunction,
    f_values,
) -> SteinApplication:
    """Apply the discrete weighted Stein operator to ``f_values``.

    (T f)_i = w_i (Delta^pi f)_i - ((Delta^pi)^t(wp))_i / p_i * f_i, with
    expectation sum_i p_i (T f)_i (zero for bounded f when the weights
    solve the system).
    """
    pi = weights.values if isinstance(weights, WeightSequence) else np.asarray(weights, float)
    f = np.asarray(f_values, dtype=float)
    if f.shape != law.points.shape or pi.shape != law.points.shape:
        raise ParameterError("f_values/weights are not aligned with the support")
    x, p = law.points, law.masses
    w = np.asarray(weight.w(x), dtype=float)
    n = x.size
    dpi = np.zeros(n)
    if n > 1:
        dm = np.diff(x)
        fwd = np.zeros(n)
        bwd = np.zeros(n)
        fwd[:-1] = (f[1:] - f[:-1]) / dm
        bwd[1:] = (f[1:] - f[:-1]) / dm
        dpi = pi * fwd + (1.0 - pi) * bwd
    d = _kernels.delta_t_wp(x, p, w, pi)
    tf = w * dpi - d / p * f
    return SteinApplication(values=tf, expectation=math.fsum(tf * p))


# ---------------------------------------------------------------------------
# sufficient sign conditions for 0 <= pi <= 1


def _sign_pattern(values, pattern, tol):
    """True when the strict signs of ``values`` (zeros are wildcards) fit
    the run pattern, e.g. '-+' = nonpositive then nonnegative."""
    signs = [1 if v > tol else -1 if v < -tol else 0 for v in values]
    state = 0
    for sgn in signs:
        if sgn == 0:
            continue
        want = 1 if pattern[state] == "+" else -1
        while sgn != want:
            state += 1
            if state >= len(pattern):
                return False
            want = 1 if pattern[state] == "+" else -1
    return True


def check_range_sufficient(
    law: DiscreteLaw, target: ContinuousTarget, weight: WeightFunction
) -> str:
    """Sign-based sufficient test for 0 <= pi <= 1 on a finite support.

    Returns ``proved_in_[0,1]`` when an upper and a lower sufficient
    condition both match, ``proved_violation`` when direct enumeration
    finds a weight outside [0, 1] (tolerance 1e-10), ``inconclusive``
    otherwise. Zeros count as satisfying either sign.
    """
    if law.truncation is not None:
        raise ParameterError("sign tests require a finite support")
    s, w = score_on_points(target, weight, law.points)
    p = law.masses
    x = law.points
    n = x.size
    if n < 3:
        pi = _kernels.bespoke_pi(x, p, w, s)
        noise = weight_noise_envelope(law, target, weight)
        return "proved_in_[0,1]" if _in_unit(pi, noise) else "proved_violation"
    dm = np.diff(x)  # dm[i] = delta_{i+1} = x_{i+1} - x_i
    sp_cum = np.cumsum(s * p)  # sum_{j<=i} s_j p_j
    v = w * p
    scale = float(np.max(np.abs(v)) + np.max(np.abs(s * p)))
    tol = 1e-12 * max(1.0, scale)

    # upper bound pi <= 1
    c_up = v[:-1] - dm * sp_cum[:-1]  # i = 0..n-2
    d_up = v[1:-1] / dm[1:] - v[:-2] / dm[:-1] - (s * p)[1:-1]  # i = 1..n-2
    up1 = _sign_pattern(c_up, "-+", tol)
    end_up_first = w[0] <= dm[0] * s[0] + tol
    up2 = end_up_first and (v[-2] <= -dm[-1] * (s * p)[-1] + tol) and _sign_pattern(d_up, "-+", tol)
    up3 = end_up_first and (v[-2] >= -dm[-1] * (s * p)[-1] - tol) and _sign_pattern(d_up, "-+-", tol)
    upper_ok = up1 or up2 or up3

    # lower bound pi >= 0
    c_lo = v[1:] - dm * sp_cum[:-1]  # i = 1..n-1: p_i w_i - delta_i sum_{j<i} s_j p_j
    d_lo = v[2:] / dm[1:] - v[1:-1] / dm[:-1] - (s * p)[1:-1]  # i = 1..n-2
    lo1 = _sign_pattern(c_lo, "+-", tol)
    end_lo_first = w[-1] <= -dm[-1] * s[-1] + tol
    lo2 = end_lo_first and (v[1] <= dm[0] * (s * p)[0] + tol) and _sign_pattern(d_lo, "-+", tol)
    lo3 = end_lo_first and (v[1] >= dm[0] * (s * p)[0] - tol) and _sign_pattern(d_lo, "+-+", tol)
    lower_ok = lo1 or lo2 or lo3

    if upper_ok and lower_ok:
        return "proved_in_[0,1]"
    pi = _kernels.bespoke_pi(x, p, w, s)
    if not _in_unit(pi, weight_noise_envelope(law, target, weight)):
        return "proved_violation"
    return "inconclusive"


# ---------------------------------------------------------------------------
# identities and compositions for Gaussian-target weights


def gaussian_lattice_weights(law: DiscreteLaw) -> np.ndarray:
    """Standard-normal-target weights of an integer-lattice law, computed
    on the law's own (unstandardized) support."""
    x = law.points
    if x.size > 1 and np.max(np.abs(np.diff(x) - 1.0)) > 1e-12:
        raise ParameterError("expected a unit-spaced integer lattice support")
    mean, var, _ = moments(law)
    if var <= 0:
        raise ParameterError("law must have positive variance")
    sd = math.sqrt(var)
    xs = (x - mean) / sd
    return _kernels.bespoke_pi(xs, law.masses, np.ones_like(xs), -xs)


def third_moment_identity(law: DiscreteLaw):
    """Both sides of E[pi(Y)] = (1 + E[(Y-mean)^3]/Var[Y]) / 2 for
    Gaussian-target weights on a finite integer lattice."""
    pi = gaussian_lattice_weights(law)
    _, var, third = moments(law)
    lhs = math.fsum(pi * law.masses)
    rhs = 0.5 * (1.0 + third / var)
    return lhs, rhs


def clt_weights_expectation(summand_law: DiscreteLaw) -> float:
    """E[|pi(X1)| + |1 - pi(X1)|] for the standardized summand with
    Gaussian-target weights (the per-summand factor of the CLT bound)."""
    pi = gaussian_lattice_weights(summand_law)
    return math.fsum((np.abs(pi) + np.abs(1.0 - pi)) * summand_law.masses)


def composed_sum_weights(laws: Sequence[DiscreteLaw]):
    """Weights for a standardized sum of independent integer-lattice laws
    via exhaustive conditional expectations (small instances only).

    Returns ``(sum_law, WeightSequence)`` where the weight at each atom of
    the sum is the variance-weighted conditional mixture of the summand
    weights. Exact enumeration: meant for testing, not production scale.
    """
    if not laws:
        raise ParameterError("need at least one summand")
    pis = [gaussian_lattice_weights(law) for law in laws]
    stats = [moments(law) for law in laws]
    s2 = math.fsum(v for _, v, _ in stats)
    mu_total = math.fsum(m for m, _, _ in stats)
    s = math.sqrt(s2)

    grids = np.meshgrid(*[law.points for law in laws], indexing="ij")
    probs = np.meshgrid(*[law.masses for law in laws], indexing="ij")
    joint = np.ones_like(grids[0])
    for pr in probs:
        joint = joint * pr
    total = np.zeros_like(grids[0])
    for g in grids:
        total = total + g
    keys = np.round(total - total.min()).astype(np.int64).ravel()
    nkeys = int(keys.max()) + 1
    p_sum = np.bincount(keys, weights=joint.ravel(), minlength=nkeys)
    mix = np.zeros(nkeys)
    for j, law in enumerate(laws):
        pij = pis[j][np.searchsorted(law.points, grids[j].ravel())]
        contrib = np.bincount(keys, weights=(joint.ravel() * pij), minlength=nkeys)
        _, vj, _ = stats[j]
        mix += vj / s2 * contrib
    keep = p_sum > 0
    values = np.arange(nkeys)[keep] + total.min()
    masses = p_sum[keep]
    masses = masses / math.fsum(masses)
    pi_sum = mix[keep] / p_sum[keep]
    sum_law = DiscreteLaw(points=(values - mu_total) / s, masses=masses, family="custom")
    return sum_law, WeightSequence(
        values=pi_sum,
        in_unit_interval=_in_unit(pi_sum),
        max_residual=None,
        source="clt_composition",
    )


# ---------------------------------------------------------------------------
# independent linear-system oracle


def brute_force_weights(
    law: DiscreteLaw,
    target: ContinuousTarget,
    weight: WeightFunction,
    *,
    condition_tol: float = 1e-8,
) -> WeightSequence:
    """Solve the transpose system directly by least squares.

    Assembles every evaluable row plus the normalization pi_0 = 1 and uses
    a dense lstsq; this is the independent oracle for the recurrence path.
    """
    report = check_conditions(law, target, weight, tol=condition_tol)
    if not report.passed:
        raise ConditionError("standardization residuals exceed tolerance")
    s, w = score_on_points(target, weight, law.points)
    x, p = law.points, law.masses
    v = w * p
    if np.any(v[1:] == 0):
        raise SingularSystemError("w*p vanishes at an interior atom")
    n = x.size
    truncated = law.truncation is not None
    nrows = (n if truncated else n + 1) + 1
    a = np.zeros((nrows, n))
    b = np.zeros(nrows)
    dm = np.diff(x)
    a[0, 0] = -v[0] / dm[0]
    a[0, 1] = v[1] / dm[0]
    b[0] = -s[0] * p[0] + v[1] / dm[0]
    for i in range(1, n - 1):
        a[i, i - 1] = v[i - 1] / dm[i - 1]
        a[i, i] = -v[i] * (1.0 / dm[i - 1] + 1.0 / dm[i])
        a[i, i + 1] = v[i + 1] / dm[i]
        b[i] = -s[i] * p[i] - v[i] / dm[i - 1] + v[i + 1] / dm[i]
    if not truncated:
        a[n - 1, n - 2] = v[n - 2] / dm[-1]
        a[n - 1, n - 1] = -v[n - 1] / dm[-1]
        b[n - 1] = -s[n - 1] * p[n - 1] - v[n - 1] / dm[-1]
    norm_row = nrows - 1
    row_scale = float(np.max(np.abs(a)))
    a[norm_row, 0] = row_scale
    b[norm_row] = row_scale
    pi, *_ = np.linalg.lstsq(a, b, rcond=None)
    defects, _ = _row_defects(law, pi, s, w)
    return WeightSequence(
        values=pi,
        in_unit_interval=_in_unit(pi, weight_noise_envelope(law, target, weight)),
        max_residual=_normalized_max(defects, s, p),
        source="linear_solve",
    )


# ---------------------------------------------------------------------------
# serialization


def weights_to_csv(law: DiscreteLaw, weights: WeightSequence) -> str:
    import csv
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "point", "mass", "weight"])
    for i, (x, p, pi) in enumerate(zip(law.points, law.masses, weights.values)):
        writer.writerow([i, repr(float(x)), repr(float(p)), repr(float(pi))])
    return buf.getvalue()


def weights_to_json(law: DiscreteLaw, weights: WeightSequence) -> str:
    doc = {
        "points": law.points.tolist(),
        "masses": law.masses.tolist(),
        "weights": weights.values.tolist(),
        "in_unit_interval": weights.in_unit_interval,
        "max_residual": weights.max_residual,
        "source": weights.source,
        "diagnostics": {k: v for k, v in weights.diagnostics.items()},
    }
    return json.dumps(doc, sort_keys=True)
