"""Finite (possibly tail-truncated) discrete laws on ordered real supports.

The catalog covers the discrete families used by the applications:
classical lattice laws, urn and Markov-chain stationary laws, the
interacting-worlds point set, and the M/M/n queue. Countable supports are
truncated where the cumulative tail drops below ``tail_tol`` and the
dropped mass is recorded so downstream reports can carry it as additive
slack.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Mapping

import numpy as np
from scipy import special as sp

from steinw1.errors import ParameterError, TruncationError
from steinw1.targets import ContinuousTarget, WeightFunction

__all__ = [
    "DiscreteLaw",
    "Truncation",
    "Standardized",
    "ConditionReport",
    "make_discrete",
    "standardize",
    "moments",
    "check_conditions",
    "score_on_points",
    "law_to_json",
    "law_from_json",
    "law_to_csv",
]

MAX_ATOMS = 10**7


@dataclass(frozen=True)
class Truncation:
    """Record of a dropped countable tail (original, pre-normalization units)."""

    cut_index: int
    tail_mass: float
    tail_first_moment: float  # sum over dropped atoms of (x_j - x_cut) p_j
    next_gap: float  # gap from the last retained atom to the first dropped one


@dataclass(frozen=True)
class DiscreteLaw:
    """Ordered support points with strictly positive masses summing to one."""

    points: np.ndarray
    masses: np.ndarray
    family: str = "custom"
    params: Mapping = field(default_factory=dict)
    truncation: Truncation | None = None
    exact_mean: float | None = None
    exact_variance: float | None = None

    def __post_init__(self):
        pts = np.ascontiguousarray(self.points, dtype=float)
        ms = np.ascontiguousarray(self.masses, dtype=float)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "masses", ms)
        if pts.ndim != 1 or ms.shape != pts.shape or pts.size == 0:
            raise ParameterError("points and masses must be equal-length 1-d arrays")
        if np.any(np.diff(pts) <= 0):
            raise ParameterError("support points must be strictly increasing")
        if np.any(ms <= 0):
            raise ParameterError("all masses must be strictly positive")
        total = math.fsum(ms)
        if abs(total - 1.0) > 1e-12:
            raise ParameterError(f"masses sum to {total}, expected 1 within 1e-12")

    def __len__(self):
        return self.points.size

    @property
    def span(self):
        return float(self.points[-1] - self.points[0])

    def affine(self, scale: float, shift: float) -> DiscreteLaw:
        """Apply x -> scale*x + shift (scale > 0); moment and truncation
        metadata are transformed consistently."""
        if scale <= 0:
            raise ParameterError("affine scale must be positive")
        trunc = self.truncation
        if trunc is not None:
            trunc = replace(
                trunc,
                tail_first_moment=trunc.tail_first_moment * scale,
                next_gap=trunc.next_gap * scale,
            )
        return DiscreteLaw(
            points=self.points * scale + shift,
            masses=self.masses,
            family=self.family,
            params=self.params,
            truncation=trunc,
            exact_mean=None if self.exact_mean is None else scale * self.exact_mean + shift,
            exact_variance=None if self.exact_variance is None else scale**2 * self.exact_variance,
        )


@dataclass(frozen=True)
class Standardized:
    """Result of :func:`standardize`: the mapped law and the affine map."""

    law: DiscreteLaw
    scale: float
    shift: float


@dataclass(frozen=True)
class ConditionReport:
    """Residuals of the two standardization identities E[s(X)] = 0 and
    E[X s(X) + w(X)] = 0, plus diagnostics."""

    e_score: float
    e_xsw: float
    rel_score: float
    rel_xsw: float
    passed: bool
    tol: float
    mean_gap: float | None = None
    var_gap: float | None = None
    lattice_necessary: bool | None = None


# ---------------------------------------------------------------------------
# mass functions


def _finite_from_log(log_m):
    log_m = np.asarray(log_m, dtype=float)
    m = np.exp(log_m - np.max(log_m))
    return m / math.fsum(m)


def _truncate_countable(logpmf_block, ratio_bound, spacing, tail_tol):
    """Truncate a countable lattice law where the relative tail mass drops
    below ``tail_tol``.

    ``logpmf_block(i0, i1)`` returns (possibly unnormalized) log-masses for
    indices [i0, i1); ``ratio_bound(i)`` is an upper bound on the mass
    ratios p_{j+1}/p_j for all j >= i, so the dropped tail past index i is
    at most p_i * r / (1 - r). All bookkeeping is in log space; the
    retained masses are exponentiated and renormalized at the end.
    """
    if not (0 < tail_tol <= 1e-6):
        raise ParameterError("tail_tol must lie in (0, 1e-6]")
    block = 1024
    log_tol = math.log(tail_tol)
    logs = []
    log_cum = -math.inf
    prev_lm = math.inf  # so index 0 never looks "past the mode"
    i = 0
    cut = None
    while cut is None:
        lm = logpmf_block(i, i + block)
        for k in range(lm.size):
            log_cum = np.logaddexp(log_cum, lm[k])
            idx = i + k
            if idx >= 1 and lm[k] <= prev_lm:
                r = ratio_bound(idx)
                if 0.0 <= r < 1.0:
                    log_rem = lm[k] + math.log(r) - math.log1p(-r)
                    if log_rem <= log_tol + log_cum:
                        cut = idx
                        logs.append(lm[: k + 1])
                        break
            prev_lm = lm[k]
        else:
            logs.append(lm)
            i += block
            if i > MAX_ATOMS:
                raise TruncationError(
                    f"tail truncation needs more than {MAX_ATOMS} atoms at tol {tail_tol}"
                )
    log_m = np.concatenate(logs)
    offset = float(np.max(log_m))
    scaled = np.exp(log_m - offset)
    retained = math.fsum(scaled)

    # measure the dropped tail in the same scaling, with a geometric
    # extrapolation once explicit terms are negligible
    tail_sum = 0.0
    tail_mom = 0.0
    j = cut + 1
    for _ in range(64):
        lm = logpmf_block(j, j + block)
        m = np.exp(lm - offset)
        tail_sum += math.fsum(m)
        tail_mom += math.fsum(m * (np.arange(j, j + block) - cut) * spacing)
        j += block
        if m[-1] < max(tail_sum, 1e-300) * 1e-9:
            r = ratio_bound(j - 1)
            if 0.0 <= r < 1.0:
                geo = m[-1] * r / (1.0 - r)
                tail_sum += geo
                tail_mom += geo * (j - 1 - cut) * spacing + m[-1] * r / (1.0 - r) ** 2 * spacing
            break
    total = retained + tail_sum
    trunc = Truncation(
        cut_index=cut,
        tail_mass=tail_sum / total,
        tail_first_moment=tail_mom / total,
        next_gap=spacing,
    )
    return scaled / retained, trunc


def _binomial(params, tail_tol):
    n = int(params["n"])
    t = float(params["t"])
    if n < 1 or params["n"] != n:
        raise ParameterError("binomial requires integer n >= 1")
    if not 0 < t < 1:
        raise ParameterError("binomial requires t in (0, 1)")
    i = np.arange(n + 1)
    log_m = (
        sp.gammaln(n + 1)
        - sp.gammaln(i + 1)
        - sp.gammaln(n - i + 1)
        + i * math.log(t)
        + (n - i) * math.log1p(-t)
    )
    return i.astype(float), _finite_from_log(log_m), n * t, n * t * (1 - t), None


def _poisson(params, tail_tol):
    lam = float(params["lam"])
    if lam <= 0:
        raise ParameterError("poisson requires lam > 0")

    def block(i0, i1):
        i = np.arange(i0, i1)
        return i * math.log(lam) - lam - sp.gammaln(i + 1)

    masses, trunc = _truncate_countable(block, lambda i: lam / (i + 1.0), 1.0, tail_tol)
    return np.arange(masses.size, dtype=float), masses, lam, lam, trunc


def _geometric(params, tail_tol):
    t = float(params["t"])
    if not 0 < t < 1:
        raise ParameterError("geometric requires t in (0, 1)")

    def block(i0, i1):
        i = np.arange(i0, i1)
        return math.log(t) + i * math.log1p(-t)

    masses, trunc = _truncate_countable(block, lambda i: 1.0 - t, 1.0, tail_tol)
    mean = (1 - t) / t
    return np.arange(masses.size, dtype=float), masses, mean, (1 - t) / t**2, trunc


def _negative_binomial(params, tail_tol):
    n = int(params["n"])
    t = float(params["t"])
    if n < 1 or params["n"] != n:
        raise ParameterError("negative_binomial requires integer n >= 1")
    if not 0 < t < 1:
        raise ParameterError("negative_binomial requires t in (0, 1)")

    def block(i0, i1):
        i = np.arange(i0, i1)
        return (
            sp.gammaln(n + i)
            - sp.gammaln(n)
            - sp.gammaln(i + 1)
            + n * math.log(t)
            + i * math.log1p(-t)
        )

    # mass ratio (n+i)/(i+1) * (1-t) decreases toward (1-t)
    masses, trunc = _truncate_countable(
        block, lambda i: min((n + i) / (i + 1.0) * (1.0 - t), 1.0), 1.0, tail_tol
    )
    mean = n * (1 - t) / t
    return np.arange(masses.size, dtype=float), masses, mean, n * (1 - t) / t**2, trunc


def _hypergeometric(params, tail_tol):
    cap_n = int(params["N"])
    n = int(params["n"])
    r = int(params["r"])
    if min(cap_n, n, r) < 1:
        raise ParameterError("hypergeometric requires positive integer N, n, r")
    if r < n:
        raise ParameterError("hypergeometric requires r >= n")
    if cap_n <= n + r:
        raise ParameterError("hypergeometric requires N > n + r")
    i = np.arange(n + 1)

    def logc(a, b):
        return sp.gammaln(a + 1) - sp.gammaln(b + 1) - sp.gammaln(a - b + 1)

    log_m = logc(n, i) + logc(cap_n - n, r - i) - logc(cap_n, r)
    mean = n * r / cap_n
    var = n * r * (cap_n - r) * (cap_n - n) / ((cap_n - 1) * cap_n**2)
    return i.astype(float), _finite_from_log(log_m), mean, var, None


def _discrete_uniform(params, tail_tol):
    n = int(params["n"])
    if n < 1 or params["n"] != n:
        raise ParameterError("discrete_uniform requires integer n >= 1")
    i = np.arange(n + 1, dtype=float)
    m = np.full(n + 1, 1.0 / (n + 1))
    return i, m / math.fsum(m), n / 2.0, ((n + 1.0) ** 2 - 1.0) / 12.0, None


def _polya(params, tail_tol):
    alpha = float(params["alpha"])
    beta = float(params["beta"])
    m_par = float(params["m"])
    n = int(params["n"])
    if alpha <= 0 or beta <= 0 or m_par <= 0:
        raise ParameterError("polya requires alpha, beta, m > 0")
    if n < 1 or params["n"] != n:
        raise ParameterError("polya requires integer n >= 1")
    a = alpha / m_par
    b = beta / m_par
    i = np.arange(n + 1)
    log_m = (
        sp.gammaln(n + 1)
        - sp.gammaln(i + 1)
        - sp.gammaln(n - i + 1)
        + sp.betaln(a + i, b + n - i)
        - sp.betaln(a, b)
    )
    s = a + b
    mean = n * a / s
    var = n * a * b * (s + n) / (s * s * (s + 1.0))
    return i.astype(float), _finite_from_log(log_m), mean, var, None


def _bernoulli_laplace(params, tail_tol):
    ell = int(params["l"])
    if ell < 1 or params["l"] != ell:
        raise ParameterError("bernoulli_laplace requires integer l >= 1")
    i = np.arange(ell + 1)
    log_c = sp.gammaln(2 * ell + 1) - sp.gammaln(ell - i + 1) - sp.gammaln(ell + i + 1)
    log_center = sp.gammaln(2 * ell + 1) - 2 * sp.gammaln(ell + 1)
    hi = np.exp(log_c - log_center)
    lo = np.zeros(ell + 1)
    log_c1 = sp.gammaln(2 * ell + 1) - sp.gammaln(ell - i[:-1]) - sp.gammaln(ell + i[:-1] + 2)
    lo[:-1] = np.exp(log_c1 - log_center)
    masses = hi - lo
    points = i * (i + 1.0) / ell
    trunc = None
    if masses[-1] <= 1e-280:
        # extreme eigenvalue masses underflow for large l (well before the
        # double floor the weights at such atoms are pure noise); the
        # dropped tail mass is exactly the telescoped coefficient ratio
        cut = int(np.max(np.nonzero(masses > 1e-280)[0]))
        tail = float(np.exp(log_c[cut + 1] - log_center))
        tail_mom = float(np.sum(masses[cut + 1 :] * (points[cut + 1 :] - points[cut])))
        trunc = Truncation(
            cut_index=cut,
            tail_mass=tail,
            tail_first_moment=tail_mom + tail * (points[-1] - points[cut]),
            next_gap=float(points[cut + 1] - points[cut]),
        )
        points = points[: cut + 1]
        masses = masses[: cut + 1]
    if np.any(masses <= 0.0):
        raise ParameterError("eigenvalue masses lost positivity away from the tail")
    return points, masses / math.fsum(masses), 1.0, 1.0, trunc


def _moran(params, tail_tol):
    a = float(params["a"])
    b = float(params["b"])
    n = int(params["n"])
    if a <= 0 or b <= 0:
        raise ParameterError("moran requires a, b > 0")
    if n < 1 or params["n"] != n or 2 * n <= a + b:
        raise ParameterError("moran requires integer n with 2n > a + b")
    cap_a = 2 * n * a / (2 * n - a - b)
    cap_b = 2 * n * (2 * n - a) / (2 * n - a - b)
    i = np.arange(2 * n + 1)
    log_m = (
        sp.gammaln(2 * n + 1)
        - sp.gammaln(i + 1)
        - sp.gammaln(2 * n - i + 1)
        + sp.gammaln(i + cap_a)
        + sp.gammaln(cap_b - i)
    )
    mean = 2 * n * a / (a + b)
    var = 8 * n**3 * a * b / ((a + b) ** 2 * (2 * n * (a + b + 1) - a - b))
    return i.astype(float), _finite_from_log(log_m), mean, var, None


def _semicircle(params, tail_tol):
    n = int(params["n"])
    if n < 3 or params["n"] != n:
        raise ParameterError("semicircle_fulman requires integer n >= 3")
    # prefix[k] = sum_{j=1}^{k} log((2j+1)/(2j))
    j = np.arange(1, n)
    prefix = np.concatenate([[0.0], np.cumsum(np.log((2 * j + 1.0) / (2 * j)))])
    i = np.arange(1, n)
    log_m = prefix[i - 1] + prefix[n - i - 1]
    mean = n / 2.0
    var = (n**2 - n - 2.0) / 16.0
    return i.astype(float), _finite_from_log(log_m), mean, var, None


def _miw(params, tail_tol):
    from steinw1.builder import miw_points  # deferred: builder depends on this module

    n = int(params["n"])
    pts = miw_points(n)
    masses = np.full(n, 1.0 / n)
    return pts, masses / math.fsum(masses), 0.0, (n - 1.0) / n, None


def _erlangc_stationary(params, tail_tol):
    n = int(params["n"])
    lam = float(params["lam"])
    mu = float(params["mu"])
    if n < 1 or params["n"] != n:
        raise ParameterError("erlangC_stationary requires integer n >= 1")
    if lam <= 0 or mu <= 0 or lam >= mu * n:
        raise ParameterError("erlangC_stationary requires lam, mu > 0 and lam < mu*n")
    rho = math.log(lam / mu)

    def block(i0, i1):
        i = np.arange(i0, i1)
        low = i * rho - sp.gammaln(i + 1)
        high = i * rho - (i - n) * math.log(n) - sp.gammaln(n + 1)
        return np.where(i <= n, low, high)

    spacing = math.sqrt(mu / lam)
    masses, trunc = _truncate_countable(
        block, lambda i: lam / (mu * min(i + 1.0, n)), spacing, tail_tol
    )
    idx = np.arange(masses.size, dtype=float)
    points = spacing * (idx - lam / mu)
    return points, masses, None, None, trunc


def _custom_law(params, tail_tol):
    pts = np.asarray(params["points"], dtype=float)
    ms = np.asarray(params["masses"], dtype=float)
    ms = ms / math.fsum(ms)
    return pts, ms, params.get("mean"), params.get("variance"), None


_FAMILIES = {
    "binomial": _binomial,
    "poisson": _poisson,
    "negative_binomial": _negative_binomial,
    "geometric": _geometric,
    "hypergeometric": _hypergeometric,
    "discrete_uniform": _discrete_uniform,
    "polya": _polya,
    "bernoulli_laplace": _bernoulli_laplace,
    "moran": _moran,
    "semicircle_fulman": _semicircle,
    "miw": _miw,
    "erlangC_stationary": _erlangc_stationary,
    "custom": _custom_law,
}

#: finite integer-lattice families: range ell and raw (mean, var) closures
#: for the Gaussian-target necessary condition Var[Y] <= min(E[Y], l - E[Y])
_LATTICE_RAW = {
    "binomial": lambda p: (int(p["n"]), p["n"] * p["t"], p["n"] * p["t"] * (1 - p["t"])),
    "hypergeometric": lambda p: (
        int(p["n"]),
        p["n"] * p["r"] / p["N"],
        p["n"] * p["r"] * (p["N"] - p["r"]) * (p["N"] - p["n"]) / ((p["N"] - 1) * p["N"] ** 2),
    ),
    "discrete_uniform": lambda p: (int(p["n"]), p["n"] / 2.0, ((p["n"] + 1.0) ** 2 - 1) / 12.0),
    "polya": lambda p: (
        int(p["n"]),
        p["n"] * (p["alpha"] / p["m"]) / ((p["alpha"] + p["beta"]) / p["m"]),
        p["n"]
        * (p["alpha"] / p["m"])
        * (p["beta"] / p["m"])
        * ((p["alpha"] + p["beta"]) / p["m"] + p["n"])
        / (((p["alpha"] + p["beta"]) / p["m"]) ** 2 * ((p["alpha"] + p["beta"]) / p["m"] + 1)),
    ),
}


def make_discrete(family: str, params: Mapping | None = None, tail_tol: float = 1e-12, **kw) -> DiscreteLaw:
    """Build a catalog law; countable supports are truncated at ``tail_tol``.

    Masses are computed in log space and renormalized; the dropped tail
    (mass, first moment past the cut, lattice gap) is recorded on the law.
    """
    if family not in _FAMILIES:
        raise ParameterError(f"unknown discrete family {family!r}")
    merged = dict(params or {})
    merged.update(kw)
    points, masses, mean, var, trunc = _FAMILIES[family](merged, tail_tol)
    return DiscreteLaw(
        points=points,
        masses=masses,
        family=family,
        params=merged,
        truncation=trunc,
        exact_mean=mean,
        exact_variance=var,
    )


# ---------------------------------------------------------------------------
# operations


def moments(law: DiscreteLaw):
    """(mean, variance, third central moment) as compensated finite sums."""
    x = law.points
    p = law.masses
    mean = math.fsum(x * p)
    d = x - mean
    var = math.fsum(d * d * p)
    third = math.fsum(d * d * d * p)
    return mean, var, third


def standardize(law: DiscreteLaw, target: ContinuousTarget) -> Standardized:
    """Affine map X = sqrt(Var Z) (Y - E[Y]) / sqrt(Var Y) + E[Z].

    Uses the family's closed-form moments when recorded (so that tail
    truncation does not perturb the map), empirical compensated sums
    otherwise.
    """
    if target.variance is None or not math.isfinite(target.variance):
        raise ParameterError("standardize requires a target with finite variance")
    m_y = law.exact_mean
    v_y = law.exact_variance
    if m_y is None or v_y is None:
        m_y, v_y, _ = moments(law)
    if v_y <= 0:
        raise ParameterError("cannot standardize a zero-variance law")
    scale = math.sqrt(target.variance / v_y)
    shift = target.mean - scale * m_y
    return Standardized(law=law.affine(scale, shift), scale=scale, shift=shift)


def score_on_points(target: ContinuousTarget, weight: WeightFunction, points):
    """Score s and weight w evaluated on a support (closure points allowed)."""
    x = np.asarray(points, dtype=float)
    w = np.asarray(weight.w(x), dtype=float)
    if weight.kind == "stein_kernel":
        s = target.mean - x
    else:
        s = np.asarray(weight.w_prime(x), dtype=float) + w * np.asarray(
            target.logpdf_grad(x), dtype=float
        )
    return s, w


def check_conditions(
    law: DiscreteLaw,
    target: ContinuousTarget,
    weight: WeightFunction,
    tol: float = 1e-8,
) -> ConditionReport:
    """Residuals of E[s(X)] = 0 and E[X s(X) + w(X)] = 0.

    Relative residuals are measured against the corresponding absolute
    sums (floored at 1). For IP targets with the Stein-kernel weight the
    mean/variance mismatches are reported too, and for integer-lattice
    laws against a normal target the necessary range condition
    Var[Y] <= min(E[Y], l - E[Y]) is flagged (reported, never asserted).
    """
    s, w = score_on_points(target, weight, law.points)
    p = law.masses
    x = law.points
    e_score = math.fsum(s * p)
    e_xsw = math.fsum((x * s + w) * p)
    rel_score = abs(e_score) / max(1.0, math.fsum(np.abs(s) * p))
    rel_xsw = abs(e_xsw) / max(1.0, math.fsum(np.abs(x * s + w) * p))
    passed = rel_score <= tol and rel_xsw <= tol

    mean_gap = var_gap = None
    if target.ip_coeffs is not None and weight.kind == "stein_kernel":
        m, v, _ = moments(law)
        mean_gap = abs(m - target.mean)
        var_gap = abs(v - target.variance) if target.variance is not None else None

    lattice = None
    if target.family == "normal" and law.family in _LATTICE_RAW:
        ell, m_y, v_y = _LATTICE_RAW[law.family](law.params)
        lattice = v_y <= min(m_y, ell - m_y) + 1e-12

    return ConditionReport(
        e_score=e_score,
        e_xsw=e_xsw,
        rel_score=rel_score,
        rel_xsw=rel_xsw,
        passed=passed,
        tol=tol,
        mean_gap=mean_gap,
        var_gap=var_gap,
        lattice_necessary=lattice,
    )


def convolve_iid(law: DiscreteLaw, n: int, floor: float = 1e-300) -> DiscreteLaw:
    """Exact n-fold iid convolution of a unit-lattice law (repeated squaring).

    Masses below ``floor`` at the extreme ends are dropped and recorded as
    truncation. Intended for oracle paths at moderate n.
    """
    if n < 1:
        raise ParameterError("need n >= 1")
    x = law.points
    if x.size > 1 and np.max(np.abs(np.diff(x) - 1.0)) > 1e-12:
        raise ParameterError("iid convolution expects a unit-spaced lattice law")
    base = law.masses.copy()
    acc = None
    shift_acc = 0.0
    shift_base = float(x[0])
    power = n
    while power:
        if power & 1:
            acc = base.copy() if acc is None else np.convolve(acc, base)
            shift_acc += shift_base
        power >>= 1
        if power:
            base = np.convolve(base, base)
            shift_base *= 2.0
    total_before = math.fsum(acc)
    keep = acc > floor
    first = int(np.argmax(keep))
    last = len(acc) - int(np.argmax(keep[::-1])) - 1
    acc = acc[first : last + 1]
    dropped = total_before - math.fsum(acc)
    pts = shift_acc + first + np.arange(acc.size, dtype=float)
    trunc = None
    if dropped > 0:
        trunc = Truncation(cut_index=last, tail_mass=max(dropped, 0.0),
                           tail_first_moment=0.0, next_gap=1.0)
    return DiscreteLaw(
        points=pts,
        masses=acc / math.fsum(acc),
        family="custom",
        params={"iid_of": law.family, "n": n},
        truncation=trunc,
    )


# ---------------------------------------------------------------------------
# serialization


def law_to_json(law: DiscreteLaw) -> str:
    doc = {
        "family": law.family,
        "params": {k: v for k, v in law.params.items() if isinstance(v, (int, float, str))},
        "points": law.points.tolist(),
        "masses": law.masses.tolist(),
        "truncation": None
        if law.truncation is None
        else {
            "cut_index": law.truncation.cut_index,
            "tail_mass": law.truncation.tail_mass,
            "tail_first_moment": law.truncation.tail_first_moment,
            "next_gap": law.truncation.next_gap,
        },
    }
    return json.dumps(doc, sort_keys=True)


def law_from_json(text: str) -> DiscreteLaw:
    doc = json.loads(text)
    trunc = doc.get("truncation")
    return DiscreteLaw(
        points=np.asarray(doc["points"], dtype=float),
        masses=np.asarray(doc["masses"], dtype=float),
        family=doc.get("family", "custom"),
        params=doc.get("params", {}),
        truncation=None if trunc is None else Truncation(**trunc),
    )


def law_to_csv(law: DiscreteLaw) -> str:
    import csv
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["point", "mass"])
    for x, p in zip(law.points, law.masses):
        writer.writerow([repr(float(x)), repr(float(p))])
    return buf.getvalue()
