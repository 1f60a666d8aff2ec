"""Stein factors: the constants multiplying the mesh moments in the W1 bounds.

Closed-form constants are tabulated for the pairs the applications use
(normal with unit weight, exponential/gamma/beta with the Stein-kernel
weight); everything else goes through grid suprema of the Gamma-integral
envelopes, reported as estimates and never silently conflated with the
rigorous constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from steinw1.discretes import DiscreteLaw
from steinw1.errors import DivergentSupError, NoClosedFormError, ParameterError
from steinw1.targets import ContinuousTarget

__all__ = [
    "SteinFactors",
    "GridSpec",
    "closed_form_factors",
    "beta_b0b1",
    "numeric_fprime_bound",
    "kernel_deriv_proxy_sup",
    "numeric_factors",
    "piecewise_factors",
    "build_grid",
    "factors_to_json",
]


@dataclass(frozen=True)
class SteinFactors:
    """First/second-order constants with provenance.

    ``c0`` multiplies the first mesh moment, ``c1`` the second;
    ``c_combined`` is the single constant of the combined-form bound.
    Piecewise sequences (per support interval) serve the refined bound.
    """

    c0: float
    c1: float
    c_combined: float | None = None
    piecewise_c0: np.ndarray | None = None
    piecewise_c1: np.ndarray | None = None
    provenance: str = "closed_form"  # closed_form | numeric_sup | literature_constant
    meta: Mapping = field(default_factory=dict)


@dataclass(frozen=True)
class GridSpec:
    """Grid for numeric suprema: Chebyshev interior points (through the
    t = x/(1+|x|) map on unbounded sides) plus geometric refinement near
    finite endpoints."""

    n_interior: int = 100_000
    edge_window: float = 1e-6
    edge_floor: float = 1e-9
    edge_points: int = 48
    tail_sigmas: float = 40.0


def beta_b0b1(alpha: float, beta: float):
    """Piecewise constants (b0, b1) for beta-target Stein-equation bounds.

    Piecewise in the two shape parameters; values on the branch boundary
    (alpha or beta equal to 2) route to the <= 2 branch so every
    denominator stays nonzero.
    """
    if alpha <= 0 or beta <= 0:
        raise ParameterError("beta_b0b1 requires alpha, beta > 0")
    a, b = float(alpha), float(beta)
    if a <= 2 and b <= 2:
        b0 = 4.0 * max(abs(a - 1.0), abs(b - 1.0))
        b1 = 4.0 * (1.0 + max(a, b) / (a + b))
    elif a > 2 and b <= 2:
        b0 = (a + b - 2.0) * max((a - 1.0) / (a - 2.0) ** 2, abs(b - 1.0) / b**2)
        b1 = (a + b - 2.0) ** 2 / min(a - 2.0, b) ** 2 + 2.0 * max(a / (a - 2.0), 1.0)
    elif a <= 2 and b > 2:
        b0 = (a + b - 2.0) * max(abs(a - 1.0) / a**2, (b - 1.0) / (b - 2.0) ** 2)
        b1 = (a + b - 2.0) ** 2 / min(a, b - 2.0) ** 2 + 2.0 * max(1.0, b / (b - 2.0))
    else:
        b0 = (a + b - 2.0) * max(1.0 / (a - 1.0), 1.0 / (b - 1.0))
        b1 = (a + b - 2.0) ** 2 / min(a - 1.0, b - 1.0) ** 2 + 2.0 * max(
            a / (a - 1.0), b / (b - 1.0)
        )
    return b0, b1


def closed_form_factors(target: ContinuousTarget, weight_kind: str) -> SteinFactors:
    """Tabulated constants for the supported (target, weight) pairs.

    normal x unit weight -> (1, 0); exponential x kernel -> (3/2, 0),
    independent of the rate; gamma x kernel -> (2, 0); beta x kernel ->
    the b0/b1-based pair with the alpha,beta < 1 refinement. Untabulated
    pairs raise and point to the numeric path.
    """
    fam = target.family
    if fam == "normal" and weight_kind in ("constant_one", "stein_kernel"):
        if abs(target.params.get("sd", 1.0) - 1.0) > 1e-14:
            raise NoClosedFormError(
                "closed-form normal factors are tabulated for unit sd; "
                "use numeric_fprime_bound for scaled normals"
            )
        return SteinFactors(c0=1.0, c1=0.0, c_combined=1.0)
    if fam == "exponential" and weight_kind == "stein_kernel":
        return SteinFactors(c0=1.5, c1=0.0, c_combined=1.5)
    if fam == "gamma" and weight_kind == "stein_kernel":
        return SteinFactors(c0=2.0, c1=0.0, c_combined=None)
    if fam == "beta" and weight_kind == "stein_kernel":
        a = target.params["alpha"]
        b = target.params["beta"]
        b0, b1 = beta_b0b1(a, b)
        if a < 1 and b < 1:
            c0 = 1.0 + 1.0 / (1.0 + min(a, b))
        else:
            c0 = 1.0 + (b0 + b1) / 2.0
        return SteinFactors(
            c0=c0,
            c1=(b0 + b1) / 3.0,
            c_combined=1.0 + (b0 + b1) / 2.0,
            meta={"b0": b0, "b1": b1},
        )
    raise NoClosedFormError(
        f"no tabulated factors for ({fam}, {weight_kind}); use the numeric path"
    )


def build_grid(target: ContinuousTarget, spec: GridSpec | None = None) -> np.ndarray:
    """Evaluation grid on the open support per the GridSpec layout."""
    spec = spec or GridSpec()
    a, b = target.support
    sc = target.scale()
    lo = a if math.isfinite(a) else target.mean - spec.tail_sigmas * sc
    hi = b if math.isfinite(b) else target.mean + spec.tail_sigmas * sc

    def fwd(x):
        return x / (1.0 + abs(x))

    def inv(t):
        return t / (1.0 - np.abs(t))

    k = np.arange(1, spec.n_interior + 1)
    t = np.cos((2 * k - 1) * np.pi / (2 * spec.n_interior))
    ts = fwd(lo) + (fwd(hi) - fwd(lo)) * (t + 1.0) / 2.0
    xs = inv(ts)
    pieces = [xs]
    if math.isfinite(a):
        pieces.append(a + np.geomspace(spec.edge_floor, spec.edge_window, spec.edge_points))
    if math.isfinite(b):
        pieces.append(b - np.geomspace(spec.edge_floor, spec.edge_window, spec.edge_points))
    grid = np.unique(np.concatenate(pieces))
    return grid[(grid > a) & (grid < b)]


def _gamma_closed(target, xs):
    qt = target.pdf(xs) * target.tau(xs)
    idbar = target.mean - xs
    g1 = qt - idbar * target.cdf(xs)
    g2 = qt + idbar * target.sf(xs)
    return g1, g2


def _gamma_edge_safe(target, xs, window):
    """Gamma pair with cancellation-free evaluation near finite endpoints.

    Inside ``window`` of a finite endpoint the closed form q*tau -/+
    (mean-x)*F is a difference of nearly equal quantities; there the
    one-sided integral is taken by quadrature of a positive integrand
    (relative-accurate) and the other leg recovered from
    Gamma2 - Gamma1 = mean - x.
    """
    from steinw1.quadrature import integrate

    g1, g2 = _gamma_closed(target, xs)
    a, b = target.support
    if math.isfinite(a):
        for idx in np.nonzero(xs - a <= window)[0]:
            x = float(xs[idx])
            v = integrate(
                lambda t: float(target.cdf(t)), a, x,
                tol=max(1e-300, float(target.cdf(x)) * (x - a) * 1e-13),
            )
            g1[idx] = v
            g2[idx] = v + (target.mean - x)
    if math.isfinite(b):
        for idx in np.nonzero(b - xs <= window)[0]:
            x = float(xs[idx])
            v = integrate(
                lambda t: float(target.sf(t)), x, b,
                tol=max(1e-300, float(target.sf(x)) * (b - x) * 1e-13),
            )
            g2[idx] = v
            g1[idx] = v + (x - target.mean)
    return g1, g2


def numeric_fprime_bound(target: ContinuousTarget, grid_spec: GridSpec | None = None) -> float:
    """Grid supremum of 2*Gamma1*Gamma2 / (q tau^2), the derivative envelope
    of the Stein-equation solutions.

    Finite endpoints where the kernel vanishes are handled by the local
    expansion limit 2*(mean - a) / ((k+1)(k+2) tau'(a)^2) with k the
    density edge exponent (and symmetrically at b); the returned value is
    the max of grid and endpoint evaluations. Divergence on the grid is
    an error, never clipped.
    """
    if target.ip_coeffs is None:
        raise ParameterError("numeric_fprime_bound requires a quadratic Stein kernel")
    spec = grid_spec or GridSpec()
    xs = build_grid(target, spec)
    q = target.pdf(xs)
    tau = target.tau(xs)
    mask = (q > 1e-280) & (tau > 0)
    xs, q, tau = xs[mask], q[mask], tau[mask]
    g1, g2 = _gamma_edge_safe(target, xs, spec.edge_window)
    vals = 2.0 * g1 * g2 / (q * tau * tau)
    vals = vals[np.isfinite(vals)]
    if vals.size == 0:
        raise DivergentSupError("no finite grid values for the derivative envelope")
    sup = float(np.max(vals))
    if sup > 1e12:
        raise DivergentSupError(f"derivative envelope diverges on the grid (sup {sup:.3e})")
    a, b = target.support
    ka, kb = target.edge_exponents
    if math.isfinite(a) and ka is not None and ka > -1:
        tp = float(target.tau_prime(a))
        sup = max(sup, 2.0 * (target.mean - a) / ((ka + 1.0) * (ka + 2.0) * tp * tp))
    if math.isfinite(b) and kb is not None and kb > -1:
        tp = float(target.tau_prime(b))
        sup = max(sup, 2.0 * (b - target.mean) / ((kb + 1.0) * (kb + 2.0) * tp * tp))
    return sup


def kernel_deriv_proxy_sup(target: ContinuousTarget, grid_spec: GridSpec | None = None) -> float:
    """Grid supremum of the Gamma-form envelope of |(f_h' tau)'|.

    For IP targets on finite/semi-finite supports (and centered ones on
    the line) this stays at 2; the value is a numeric estimate used by
    validation, provenance numeric_sup. The grid keeps a margin of
    1e-3 * scale from finite endpoints: the raw expression there is a
    difference of diverging terms (its limit is the interior value), so
    closer points measure only roundoff.
    """
    if target.ip_coeffs is None:
        raise ParameterError("kernel_deriv_proxy_sup requires a quadratic Stein kernel")
    spec = grid_spec or GridSpec()
    a, b = target.support
    margin = 1e-3 * target.scale()
    from steinw1.quadrature import chebyshev_points

    lo = a + margin if math.isfinite(a) else target.mean - spec.tail_sigmas * target.scale()
    hi = b - margin if math.isfinite(b) else target.mean + spec.tail_sigmas * target.scale()
    xs = chebyshev_points(lo, hi, spec.n_interior)
    q = target.pdf(xs)
    tau = target.tau(xs)
    mask = (q > 1e-280) & (tau > 0)
    xs, q, tau = xs[mask], q[mask], tau[mask]
    g1, _ = _gamma_closed(target, xs)
    idbar = target.mean - xs
    sf = target.sf(xs)
    a_expr = idbar / tau + idbar**2 * sf / (q * tau * tau) + sf / (q * tau)
    vals = np.abs(a_expr) * g1 + np.abs(1.0 - a_expr * g1) + 1.0
    vals = vals[np.isfinite(vals)]
    if vals.size == 0:
        raise DivergentSupError("no finite grid values for the kernel-derivative proxy")
    return float(np.max(vals))


def numeric_factors(target: ContinuousTarget, grid_spec: GridSpec | None = None) -> SteinFactors:
    """Grid-estimated factor set for the kernel weight of an IP target.

    Combines the pointwise derivative envelope with the kernel-derivative
    proxy: c0 = (sup |tau' f'| + sup |(f' tau)'|)/2 and
    c1 = sup|f'| * |tau''| / 6. These are estimates (provenance
    numeric_sup, grid size recorded), never substitutes for the tabulated
    rigorous constants.
    """
    if target.ip_coeffs is None:
        raise ParameterError("numeric_factors requires a quadratic Stein kernel")
    spec = grid_spec or GridSpec()
    xs = build_grid(target, spec)
    q = target.pdf(xs)
    tau = target.tau(xs)
    mask = (q > 1e-280) & (tau > 0)
    xs, q, tau = xs[mask], q[mask], tau[mask]
    g1, g2 = _gamma_edge_safe(target, xs, spec.edge_window)
    envelope = 2.0 * g1 * g2 / (q * tau * tau)
    envelope = np.where(np.isfinite(envelope), envelope, 0.0)
    a2 = target.ip_coeffs[0]
    wp = np.abs(target.tau_prime(xs))
    sup_wf = float(np.max(wp * envelope))
    sup_f = numeric_fprime_bound(target, spec)
    proxy = kernel_deriv_proxy_sup(target, spec)
    c0 = 0.5 * (sup_wf + proxy)
    c1 = sup_f * abs(2.0 * a2) / 6.0
    return SteinFactors(
        c0=c0,
        c1=c1,
        c_combined=0.5 * (sup_f * float(np.max(wp)) + proxy),
        provenance="numeric_sup",
        meta={"grid_points": int(xs.size), "sup_fprime": sup_f, "sup_kernel_deriv": proxy},
    )


def piecewise_factors(
    law: DiscreteLaw,
    fpp_bound: Callable[[float], float],
    weight_const: float,
) -> SteinFactors:
    """Per-interval first-order constants for a constant weight.

    With w constant the interval constant reduces to w/2 times the local
    supremum of the injected |f''| bound (sampled at interval endpoints
    and midpoint; the bound functions used here are monotone steps).
    Index i covers [x_{i-1}, x_i]; entries 0 and l+1 are the boundary
    conventions (the latter replaced by the beyond-cut interval for
    truncated supports).
    """
    if weight_const is None or weight_const <= 0:
        raise ParameterError("piecewise factors require a positive constant weight")
    x = law.points
    n = x.size
    c0 = np.zeros(n + 1)

    def local_sup(u, v):
        return max(fpp_bound(u), fpp_bound(0.5 * (u + v)), fpp_bound(v))

    for i in range(1, n):
        c0[i] = 0.5 * weight_const * local_sup(x[i - 1], x[i])
    if law.truncation is not None:
        gap = law.truncation.next_gap
        c0[n] = 0.5 * weight_const * local_sup(x[-1], x[-1] + gap)
    return SteinFactors(
        c0=float(np.max(c0)),
        c1=0.0,
        piecewise_c0=c0,
        piecewise_c1=np.zeros(n + 1),
        provenance="literature_constant",
        meta={"weight_const": weight_const},
    )


def factors_to_json(f: SteinFactors) -> str:
    import json

    doc = {
        "c0": f.c0,
        "c1": f.c1,
        "c_combined": f.c_combined,
        "piecewise_c0": None if f.piecewise_c0 is None else list(map(float, f.piecewise_c0)),
        "piecewise_c1": None if f.piecewise_c1 is None else list(map(float, f.piecewise_c1)),
        "provenance": f.provenance,
        "meta": {k: v for k, v in f.meta.items()},
    }
    return json.dumps(doc, sort_keys=True)
