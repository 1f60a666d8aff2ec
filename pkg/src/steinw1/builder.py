"""Discrete laws built to converge to a continuous target at rate O(mesh).

The mass recurrence makes the tuned weight sequence degenerate (1 at the
first atom, 0 elsewhere), so the W1 bound collapses to the first-order
constant times the mesh. Also hosts the interacting-worlds point set,
whose gaps satisfy x_{i+1} - x_i = -1 / sum_{j<=i} x_j with zero total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from steinw1.discretes import DiscreteLaw, Truncation, score_on_points
from steinw1.errors import InfeasibleGridError, ParameterError, TruncationError
from steinw1.targets import ContinuousTarget, WeightFunction

__all__ = ["UniformGrid", "build_discrete", "solve_ip_grid", "miw_points"]

MAX_ATOMS = 10**7


@dataclass(frozen=True)
class UniformGrid:
    """Uniform mesh start + i*delta; count=None runs until the mass tail
    drops below the truncation tolerance."""

    start: float
    delta: float
    count: int | None = None

    def __post_init__(self):
        if self.delta <= 0:
            raise ParameterError("grid delta must be positive")


def _feasibility(x, s, w, finite, endpoint_tol=1e-9):
    d1 = x[1] - x[0]
    if d1 * s[0] < w[0] - endpoint_tol * max(1.0, abs(w[0])):
        raise InfeasibleGridError(
            f"delta_1*s_0 >= w_0 fails at index 0: {d1 * s[0]:.6g} < {w[0]:.6g}"
        )
    dm = np.diff(x)
    bad = np.nonzero(w[1:] + dm * s[1:] < -endpoint_tol)[0]
    if bad.size:
        i = int(bad[0]) + 1
        raise InfeasibleGridError(
            f"w_i + delta_i*s_i >= 0 fails at index {i}: "
            f"{w[i] + dm[i - 1] * s[i]:.6g}"
        )
    if finite:
        resid = w[-1] + dm[-1] * s[-1]
        if abs(resid) > endpoint_tol * max(1.0, abs(w[-1])):
            raise InfeasibleGridError(
                f"endpoint equation w_l = -delta_l*s_l fails: residual {resid:.6g}"
            )


def _log_ratio_chain(x, s, w):
    """log(p_i / p_0) for i >= 1 from the three-part mass recurrence."""
    n = x.size
    lt = np.empty(n)
    lt[0] = 0.0
    d1 = x[1] - x[0]
    r1 = (d1 * s[0] - w[0]) / w[1]
    if r1 <= 0:
        raise InfeasibleGridError("first mass ratio is nonpositive; grid too coarse at the edge")
    lt[1] = math.log(r1)
    if n == 2:
        return lt
    d2 = x[2] - x[1]
    # p_2 w_2 d1/d2 = (w_1 + d1 s_1) p_1 + w_0 p_0, all terms nonnegative
    t_a = (w[1] + d1 * s[1]) * math.exp(lt[1])
    val = t_a + w[0]
    if val <= 0:
        raise InfeasibleGridError("second mass vanishes; grid infeasible at index 2")
    lt[2] = math.log(val * d2 / (d1 * w[2]))
    for i in range(3, n):
        di = x[i] - x[i - 1]
        dprev = x[i - 1] - x[i - 2]
        ratio = di / w[i] * (w[i - 1] / dprev + s[i - 1])
        if ratio <= 0:
            raise InfeasibleGridError(f"mass ratio nonpositive at index {i}")
        lt[i] = lt[i - 1] + math.log(ratio)
    return lt


def build_discrete(
    target: ContinuousTarget,
    weight: WeightFunction,
    grid,
    *,
    tail_tol: float = 1e-12,
) -> DiscreteLaw:
    """Discrete law on the given grid whose masses follow the convergence
    recurrence.

    ``grid`` is either an ordered array of points in the support closure
    or a :class:`UniformGrid` (count=None truncates the countable chain
    once the geometric remainder falls below ``tail_tol``). Feasibility
    violations are errors naming the condition and index. Mass ratios are
    chained in log space and normalized at the end (the recurrence only
    constrains ratios).
    """
    if isinstance(grid, UniformGrid) and grid.count is None:
        return _build_infinite(target, weight, grid, tail_tol)
    if isinstance(grid, UniformGrid):
        x = grid.start + grid.delta * np.arange(grid.count)
    else:
        x = np.asarray(grid, dtype=float)
    if x.ndim != 1 or x.size < 2 or np.any(np.diff(x) <= 0):
        raise ParameterError("grid must be an increasing 1-d array with >= 2 points")
    s, w = score_on_points(target, weight, x)
    _feasibility(x, s, w, finite=True)
    lt = _log_ratio_chain(x, s, w)
    m = np.exp(lt - np.max(lt))
    m /= math.fsum(m)
    return DiscreteLaw(points=x, masses=m, family="builder", params={"target": target.family})


def _build_infinite(target, weight, grid, tail_tol):
    block = 512
    xs = [grid.start]
    count = 1
    # grow the grid until the chained ratio certifies a small geometric tail
    lt_parts = []
    last_lt = 0.0
    max_lt = 0.0
    cum_scaled = None
    while True:
        hi = count + block
        if hi > MAX_ATOMS:
            raise TruncationError("builder grid exceeded the atom cap; masses may not be summable")
        x = grid.start + grid.delta * np.arange(0, hi)
        s, w = score_on_points(target, weight, x)
        _feasibility(x, s, w, finite=False)
        lt = _log_ratio_chain(x, s, w)
        max_lt = float(np.max(lt))
        scaled = np.exp(lt - max_lt)
        cum = math.fsum(scaled)
        r = scaled[-1] / scaled[-2]
        if r < 1.0:
            rem = scaled[-1] * r / (1.0 - r)
            if rem <= tail_tol * cum:
                # trim to the earliest cut honoring the tolerance
                suffix = np.cumsum(scaled[::-1])[::-1]
                total = cum + rem
                ok = np.nonzero(np.concatenate([suffix[1:], [0.0]]) + rem <= tail_tol * total)[0]
                cut = max(int(ok[0]), 2) if ok.size else hi - 1
                dropped = float(suffix[cut + 1]) + rem if cut + 1 < hi else rem
                idx = np.arange(cut + 1, hi)
                tail_mom = float(
                    math.fsum((idx - cut) * grid.delta * scaled[cut + 1 :])
                    + rem * (hi - 1 - cut) * grid.delta
                    + scaled[-1] * (r / (1.0 - r) ** 2) * grid.delta
                )
                keep = scaled[: cut + 1]
                trunc = Truncation(
                    cut_index=cut,
                    tail_mass=dropped / total,
                    tail_first_moment=tail_mom / total,
                    next_gap=grid.delta,
                )
                return DiscreteLaw(
                    points=x[: cut + 1],
                    masses=keep / math.fsum(keep),
                    family="builder",
                    params={"target": target.family},
                    truncation=trunc,
                )
        count = hi


def solve_ip_grid(target: ContinuousTarget, ell: int | None = None):
    """Mesh selection for IP targets with a finite left endpoint.

    Finite support: given the atom count minus one (``ell``), bisect the
    mesh so the endpoint equation tau(a + delta*ell) =
    -delta*(mean - a - delta*ell) holds; returns (delta, ell). Unbounded
    support: returns the largest feasible uniform mesh
    inf -tau/(mean - x) over (mean, b), which requires the kernel's
    quadratic coefficient below 1.
    """
    if target.ip_coeffs is None:
        raise ParameterError("solve_ip_grid requires an Integrated Pearson target")
    a, b = target.support
    if not math.isfinite(a):
        raise ParameterError("solve_ip_grid requires a finite left endpoint")
    a2, a1, a0 = target.ip_coeffs
    m = target.mean
    if ell is not None:
        if not math.isfinite(b):
            raise ParameterError("pass ell only for targets with a finite right endpoint")

        def g(delta):
            end = a + delta * ell
            return float(target.tau(end)) + delta * (m - end)

        lo = (m - a) / ell
        hi = (b - a) / ell
        f_lo, f_hi = g(lo * (1 + 1e-14)), g(hi * (1 - 1e-14))
        if not (f_lo > 0 > f_hi):
            raise ParameterError("no sign change for the endpoint equation; check ell")
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if g(mid) > 0:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-16 * hi:
                break
        return 0.5 * (lo + hi), ell
    if not math.isinf(b):
        raise ParameterError("unbounded mode requires b = +inf; pass ell for finite targets")
    if a2 >= 1.0:
        raise ParameterError(
            f"quadratic kernel coefficient {a2} >= 1: no positive uniform mesh is feasible"
        )
    if a2 <= 0.0:
        # -tau/(mean-x) decreases to the linear coefficient
        return a1
    disc = (a2 * m) ** 2 + a2 * (a1 * m + a0)
    x_star = m + math.sqrt(disc) / a2
    return float(target.tau(x_star)) / (x_star - m)


def miw_points(n: int) -> np.ndarray:
    """The zero-sum point configuration with gaps -1/(prefix sum).

    Found by shooting on the first point with bisection until the total
    vanishes (within 1e-12); trajectories whose prefix sums cross zero
    early diverge to +inf and count as positive-sum shots.
    """
    if n < 3:
        raise ParameterError("the point set needs n >= 3")

    def total(x1):
        pts = [x1]
        run = x1
        for _ in range(n - 1):
            if run >= 0:
                return math.inf, None
            nxt = pts[-1] - 1.0 / run
            pts.append(nxt)
            run += nxt
        return run, pts

    lo = -2.0 - math.sqrt(2.0 * (1.0 + math.log(max(n, 3))))
    hi = -1e-9
    t_lo, _ = total(lo)
    widen = 0
    while t_lo > 0:
        lo *= 2.0
        t_lo, _ = total(lo)
        widen += 1
        if widen > 60:
            raise ParameterError(f"bisection bracket failure on [{lo}, {hi}]")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        t_mid, _ = total(mid)
        if t_mid > 0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-17 * max(1.0, abs(lo)):
            break
    best, pts = total(lo)
    if pts is None or abs(best) > 1e-12:
        # fall back to the other bracket edge before giving up
        best_hi, pts_hi = total(hi)
        if pts_hi is not None and abs(best_hi) < abs(best):
            pts = pts_hi
            best = best_hi
    if pts is None or abs(best) > 1e-12:
        raise ParameterError(
            f"shooting did not converge: residual {best:.3e} on bracket [{lo}, {hi}]"
        )
    out = np.asarray(pts)
    if np.any(np.diff(out) <= 0):
        raise ParameterError("constructed points are not strictly increasing")
    return out
