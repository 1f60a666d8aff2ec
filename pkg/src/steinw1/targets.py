"""Continuous target distributions.

A :class:`ContinuousTarget` bundles the density, CDF/survival function,
moments, and (when the law is Integrated Pearson) the quadratic Stein
kernel ``tau(x) = alpha*x^2 + beta*x + gamma``. All callables accept
scalars or numpy arrays and targets are immutable after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np
from scipy import special as sp

from steinw1.errors import ParameterError, SupportError
from steinw1.quadrature import central_diff, integrate

__all__ = [
    "ContinuousTarget",
    "WeightFunction",
    "make_target",
    "stein_kernel_weight",
    "constant_weight",
    "eval_score",
    "gamma12",
    "validate_target",
]

_SQRT2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class ContinuousTarget:
    """Continuous law on an interval with the primitives used downstream.

    Attributes
    ----------
    family : str
        One of ``normal, exponential, gamma, beta, student, erlangC_limit,
        custom``.
    params : mapping
        Family parameters as passed to :func:`make_target`.
    support : (float, float)
        Open interior (a, b); either side may be infinite.
    mean, variance : float
        Moments; ``variance`` may be ``None`` (heavy-tailed custom/student).
    ip_coeffs : (float, float, float) or None
        Coefficients of the quadratic Stein kernel when the law is
        Integrated Pearson.
    edge_exponents : (float or None, float or None)
        Local density exponent k at each finite endpoint (q ~ c|x-e|^k),
        used for endpoint limits of numeric suprema.
    """

    family: str
    params: Mapping
    support: tuple
    mean: float
    variance: float | None
    ip_coeffs: tuple | None
    edge_exponents: tuple = (None, None)
    _pdf: Callable = field(repr=False, default=None)
    _cdf: Callable = field(repr=False, default=None)
    _sf: Callable = field(repr=False, default=None)
    _logpdf_grad: Callable = field(repr=False, default=None)

    def pdf(self, x):
        return self._pdf(np.asarray(x, dtype=float))

    def cdf(self, x):
        return self._cdf(np.asarray(x, dtype=float))

    def sf(self, x):
        return self._sf(np.asarray(x, dtype=float))

    def logpdf_grad(self, x):
        return self._logpdf_grad(np.asarray(x, dtype=float))

    def tau(self, x):
        """Stein kernel; quadratic for IP laws, quadrature otherwise."""
        x = np.asarray(x, dtype=float)
        if self.ip_coeffs is not None:
            a, b, c = self.ip_coeffs
            return a * x * x + b * x + c
        return self._tau_numeric(x)

    def tau_prime(self, x):
        x = np.asarray(x, dtype=float)
        if self.ip_coeffs is not None:
            a, b, _ = self.ip_coeffs
            return 2.0 * a * x + b
        h = 1e-6 * self.scale()
        return np.vectorize(lambda t: central_diff(lambda u: float(self.tau(u)), t, h))(x)

    def _tau_numeric(self, x):
        m = self.mean
        _, hi = self.support

        def one(t):
            q = float(self._pdf(t))
            if q <= 0.0:
                return 0.0
            val = integrate(lambda u: (u - m) * self._pdf(u), t, hi, tol=1e-12)
            return val / q

        return np.vectorize(one)(x) if np.ndim(x) else one(float(x))

    def scale(self):
        """Characteristic length used for steps and grid construction."""
        if self.variance is not None and self.variance > 0:
            return math.sqrt(self.variance)
        a, b = self.support
        if math.isfinite(a) and math.isfinite(b):
            return b - a
        return 1.0

    def contains(self, x):
        a, b = self.support
        return a < x < b


@dataclass(frozen=True)
class WeightFunction:
    """Twice-differentiable positive weight w on the target's support."""

    w: Callable
    w_prime: Callable
    w_second: Callable
    kind: str  # stein_kernel | constant_one | custom
    constant_value: float | None = None


def stein_kernel_weight(target: ContinuousTarget) -> WeightFunction:
    """Weight w = tau_q, the natural choice for IP targets."""
    if target.ip_coeffs is not None:
        a, b, c = target.ip_coeffs

        return WeightFunction(
            w=lambda x: a * np.asarray(x, float) ** 2 + b * np.asarray(x, float) + c,
            w_prime=lambda x: 2.0 * a * np.asarray(x, float) + b,
            w_second=lambda x: np.full_like(np.asarray(x, dtype=float), 2.0 * a),
            kind="stein_kernel",
        )
    h = 1e-6 * target.scale()
    return WeightFunction(
        w=target.tau,
        w_prime=target.tau_prime,
        w_second=lambda x: np.vectorize(
            lambda t: central_diff(lambda u: float(target.tau_prime(u)), t, h)
        )(x),
        kind="stein_kernel",
    )


def constant_weight(value: float = 1.0) -> WeightFunction:
    if value <= 0:
        raise ParameterError("constant weight must be positive")
    return WeightFunction(
        w=lambda x: np.full_like(np.asarray(x, dtype=float), value),
        w_prime=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        w_second=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        kind="constant_one" if value == 1.0 else "custom",
        constant_value=float(value),
    )


def _require(cond, msg):
    if not cond:
        raise ParameterError(msg)


def _normal(params):
    m = float(params.get("mean", 0.0))
    sd = float(params.get("sd", 1.0))
    _require(sd > 0, "normal requires sd > 0")
    return ContinuousTarget(
        family="normal",
        params={"mean": m, "sd": sd},
        support=(-math.inf, math.inf),
        mean=m,
        variance=sd * sd,
        ip_coeffs=(0.0, 0.0, sd * sd),
        _pdf=lambda x: np.exp(-0.5 * ((x - m) / sd) ** 2) / (sd * _SQRT2PI),
        _cdf=lambda x: sp.ndtr((x - m) / sd),
        _sf=lambda x: sp.ndtr(-(x - m) / sd),
        _logpdf_grad=lambda x: -(x - m) / (sd * sd),
    )


def _exponential(params):
    lam = float(params.get("rate", params.get("lam", 1.0)))
    _require(lam > 0, "exponential requires rate > 0")
    return ContinuousTarget(
        family="exponential",
        params={"rate": lam},
        support=(0.0, math.inf),
        mean=1.0 / lam,
        variance=1.0 / lam**2,
        ip_coeffs=(0.0, 1.0 / lam, 0.0),
        edge_exponents=(0.0, None),
        _pdf=lambda x: np.where(x > 0, lam * np.exp(-lam * np.maximum(x, 0.0)), 0.0),
        _cdf=lambda x: np.where(x > 0, -np.expm1(-lam * np.maximum(x, 0.0)), 0.0),
        _sf=lambda x: np.where(x > 0, np.exp(-lam * np.maximum(x, 0.0)), 1.0),
        _logpdf_grad=lambda x: np.full_like(np.asarray(x, dtype=float), -lam),
    )


def _gamma(params):
    alpha = float(params["alpha"])
    beta = float(params["beta"])
    _require(alpha > 0 and beta > 0, "gamma requires alpha > 0 and beta > 0")
    lg = sp.gammaln(alpha)

    def pdf(x):
        x = np.maximum(x, 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            lp = alpha * math.log(beta) + (alpha - 1.0) * np.log(x) - beta * x - lg
            out = np.where(x > 0, np.exp(lp), 0.0)
        return out

    return ContinuousTarget(
        family="gamma",
        params={"alpha": alpha, "beta": beta},
        support=(0.0, math.inf),
        mean=alpha / beta,
        variance=alpha / beta**2,
        ip_coeffs=(0.0, 1.0 / beta, 0.0),
        edge_exponents=(alpha - 1.0, None),
        _pdf=pdf,
        _cdf=lambda x: sp.gammainc(alpha, beta * np.maximum(x, 0.0)),
        _sf=lambda x: sp.gammaincc(alpha, beta * np.maximum(x, 0.0)),
        _logpdf_grad=lambda x: (alpha - 1.0) / x - beta,
    )


def _beta(params):
    alpha = float(params["alpha"])
    beta = float(params["beta"])
    _require(alpha > 0 and beta > 0, "beta requires alpha > 0 and beta > 0")
    lb = sp.betaln(alpha, beta)

    def pdf(x):
        x = np.clip(x, 0.0, 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            lp = (alpha - 1.0) * np.log(x) + (beta - 1.0) * np.log1p(-x) - lb
            out = np.where((x > 0) & (x < 1), np.exp(lp), 0.0)
        return out

    s = alpha + beta
    return ContinuousTarget(
        family="beta",
        params={"alpha": alpha, "beta": beta},
        support=(0.0, 1.0),
        mean=alpha / s,
        variance=alpha * beta / (s * s * (s + 1.0)),
        ip_coeffs=(-1.0 / s, 1.0 / s, 0.0),
        edge_exponents=(alpha - 1.0, beta - 1.0),
        _pdf=pdf,
        _cdf=lambda x: sp.betainc(alpha, beta, np.clip(x, 0.0, 1.0)),
        _sf=lambda x: sp.betaincc(alpha, beta, np.clip(x, 0.0, 1.0)),
        _logpdf_grad=lambda x: (alpha - 1.0) / x - (beta - 1.0) / (1.0 - x),
    )


def _student(params):
    df = float(params["df"])
    _require(df > 1, "student requires df > 1 (finite mean)")
    lc = sp.gammaln((df + 1.0) / 2.0) - sp.gammaln(df / 2.0) - 0.5 * math.log(df * math.pi)
    return ContinuousTarget(
        family="student",
        params={"df": df},
        support=(-math.inf, math.inf),
        mean=0.0,
        variance=df / (df - 2.0) if df > 2 else None,
        ip_coeffs=(1.0 / (df - 1.0), 0.0, df / (df - 1.0)),
        _pdf=lambda x: np.exp(lc - 0.5 * (df + 1.0) * np.log1p(x * x / df)),
        _cdf=lambda x: sp.stdtr(df, x),
        _sf=lambda x: sp.stdtr(df, -x),
        _logpdf_grad=lambda x: -(df + 1.0) * x / (df + x * x),
    )


def _erlangc_limit(params):
    n = int(params["n"])
    lam = float(params["lam"])
    mu = float(params["mu"])
    _require(n >= 1 and n == params["n"], "erlangC_limit requires integer n >= 1")
    _require(lam > 0 and mu > 0, "erlangC_limit requires lam > 0 and mu > 0")
    _require(lam < mu * n, "erlangC_limit requires lam < mu*n (stability)")
    # Drift b(x) = -mu*min(x, kappa) is piecewise linear, so the density is
    # Gaussian left of the kink and exponential right of it.
    kappa = math.sqrt(mu / lam) * (n - lam / mu)

    def raw(x):
        x = np.asarray(x, dtype=float)
        left = np.exp(-0.5 * np.minimum(x, kappa) ** 2)
        right = np.exp(-0.5 * kappa * kappa - kappa * np.maximum(x - kappa, 0.0))
        return np.where(x <= kappa, left, right)

    z = integrate(lambda t: float(raw(t)), -math.inf, kappa, tol=1e-13) + integrate(
        lambda t: float(raw(t)), kappa, math.inf, tol=1e-13
    )
    c = 1.0 / z
    ek = math.exp(-0.5 * kappa * kappa)
    cdf_kappa = c * _SQRT2PI * sp.ndtr(kappa)

    def cdf(x):
        x = np.asarray(x, dtype=float)
        lo = c * _SQRT2PI * sp.ndtr(np.minimum(x, kappa))
        hi = cdf_kappa + c * ek * -np.expm1(-kappa * np.maximum(x - kappa, 0.0)) / kappa
        return np.where(x <= kappa, lo, hi)

    def sf(x):
        x = np.asarray(x, dtype=float)
        hi = c * ek * np.exp(-kappa * np.maximum(x - kappa, 0.0)) / kappa
        return np.where(x <= kappa, 1.0 - c * _SQRT2PI * sp.ndtr(np.minimum(x, kappa)), hi)

    mean = c * ek / (kappa * kappa)
    var = integrate(lambda t: (t - mean) ** 2 * c * float(raw(t)), -math.inf, math.inf, tol=1e-11)
    return ContinuousTarget(
        family="erlangC_limit",
        params={"n": n, "lam": lam, "mu": mu},
        support=(-math.inf, math.inf),
        mean=mean,
        variance=var,
        ip_coeffs=None,
        _pdf=lambda x: c * raw(x),
        _cdf=cdf,
        _sf=sf,
        _logpdf_grad=lambda x: -np.minimum(np.asarray(x, dtype=float), kappa),
    )


def _custom(params):
    from steinw1.quadrature import integrate_err

    pdf = params["pdf"]
    a, b = params["support"]
    a, b = float(a), float(b)
    _require(a < b, "custom support must satisfy a < b")
    z, z_err = integrate_err(lambda t: float(pdf(t)), a, b, tol=1e-11)
    if not (math.isfinite(z) and z > 0 and z_err <= 1e-6 * max(1.0, abs(z))):
        raise ParameterError("custom density is not normalizable over its support")

    def npdf(x):
        x = np.asarray(x, dtype=float)
        vals = np.vectorize(lambda t: float(pdf(t)) / z if a < t < b else 0.0)(x)
        return vals

    cdf_user = params.get("cdf")
    if cdf_user is not None:
        ncdf = lambda x: np.vectorize(lambda t: float(cdf_user(t)))(x)  # noqa: E731
        nsf = lambda x: 1.0 - ncdf(x)  # noqa: E731
    else:
        ncdf = lambda x: np.vectorize(  # noqa: E731
            lambda t: integrate(lambda u: float(npdf(u)), a, min(t, b), tol=1e-11) if t > a else 0.0
        )(x)
        nsf = lambda x: np.vectorize(  # noqa: E731
            lambda t: integrate(lambda u: float(npdf(u)), max(t, a), b, tol=1e-11) if t < b else 0.0
        )(x)

    mean = params.get("mean")
    if mean is None:
        mean = integrate(lambda t: t * float(npdf(t)), a, b, tol=1e-11)
    if not math.isfinite(mean):
        raise ParameterError("custom density has no finite mean")
    var = params.get("variance")
    if var is None:
        var = integrate(lambda t: (t - mean) ** 2 * float(npdf(t)), a, b, tol=1e-10)
        if not math.isfinite(var):
            var = None

    hstep = 1e-6 * max(1.0, abs(b - a)) if math.isfinite(b - a) else 1e-6

    def lgrad(x):
        return np.vectorize(
            lambda t: central_diff(lambda u: math.log(max(float(npdf(u)), 1e-300)), t, hstep)
        )(x)

    tgt = ContinuousTarget(
        family="custom",
        params={"support": (a, b)},
        support=(a, b),
        mean=float(mean),
        variance=var,
        ip_coeffs=params.get("ip_coeffs"),
        _pdf=npdf,
        _cdf=ncdf,
        _sf=nsf,
        _logpdf_grad=lgrad,
    )
    validate_target(tgt)
    return tgt


_FACTORIES = {
    "normal": _normal,
    "exponential": _exponential,
    "gamma": _gamma,
    "beta": _beta,
    "student": _student,
    "erlangC_limit": _erlangc_limit,
    "custom": _custom,
}


def make_target(family: str, params: Mapping | None = None, **kw) -> ContinuousTarget:
    """Construct a continuous target law.

    Parameters may be given as a mapping or as keywords. Families:
    ``normal(mean, sd)``, ``exponential(rate)``, ``gamma(alpha, beta)``,
    ``beta(alpha, beta)``, ``student(df)``, ``erlangC_limit(n, lam, mu)``,
    ``custom(pdf, support, [cdf, mean, variance, ip_coeffs])``.
    """
    if family not in _FACTORIES:
        raise ParameterError(f"unknown target family {family!r}")
    merged = dict(params or {})
    merged.update(kw)
    return _FACTORIES[family](merged)


def validate_target(target: ContinuousTarget, n_grid: int = 50, rtol: float = 1e-8):
    """Numeric sanity checks: positivity, CDF normalization, moment and
    Stein-kernel consistency at interior grid points. Raises on failure."""
    a, b = target.support
    lo = a if math.isfinite(a) else target.mean - 5 * target.scale()
    hi = b if math.isfinite(b) else target.mean + 5 * target.scale()
    xs = lo + (hi - lo) * (np.arange(1, n_grid + 1) / (n_grid + 1))
    q = target.pdf(xs)
    if np.any(q <= 0):
        raise ParameterError("density is not strictly positive on the interior")
    f = target.cdf(xs)
    if np.any(np.diff(f) < -1e-12):
        raise ParameterError("CDF is not nondecreasing")
    if math.isfinite(a) and abs(float(target.cdf(a - 1e-9 * max(1.0, hi - lo)))) > 1e-7:
        raise ParameterError("CDF does not vanish at the left endpoint")
    m_quad = integrate(lambda t: t * float(target.pdf(t)), a, b, tol=1e-10)
    if abs(m_quad - target.mean) > rtol * max(1.0, abs(target.mean)):
        raise ParameterError(
            f"stated mean {target.mean} disagrees with quadrature {m_quad}"
        )
    if target.ip_coeffs is not None:
        al, be, ga = target.ip_coeffs
        quad = al * xs**2 + be * xs + ga
        direct = np.array(
            [
                integrate(
                    lambda u: (u - target.mean) * float(target.pdf(u)),
                    t,
                    b,
                    tol=max(1e-300, 1e-9 * qt * target.scale()),
                )
                for t, qt in zip(xs, q)
            ]
        ) / q
        rel = np.abs(direct - quad) / np.maximum(1e-12, np.abs(quad))
        if np.max(rel) > 1e-6:
            raise ParameterError("quadratic Stein kernel disagrees with its integral form")


def eval_score(target: ContinuousTarget, weight: WeightFunction, x):
    """Score s(x) = w'(x) + w(x) * (log q)'(x) of the weighted operator.

    With the Stein-kernel weight this is mean - x exactly, evaluated on
    the closed-form path (no quadrature).
    """
    arr = np.asarray(x, dtype=float)
    a, b = target.support
    if np.any(arr <= a) or np.any(arr >= b):
        raise SupportError(f"score evaluation outside open support ({a}, {b})")
    if weight.kind == "stein_kernel":
        return target.mean - arr
    return weight.w_prime(arr) + weight.w(arr) * target.logpdf_grad(arr)


def gamma12(target: ContinuousTarget, x):
    """Partial CDF integrals Gamma1(x) = int_a^x F, Gamma2(x) = int_x^b (1-F).

    Uses the closed forms q*tau -/+ (mean-x)*(F or survival) when the
    Stein kernel is available in quadratic form, quadrature otherwise.
    """
    a, b = target.support
    if not math.isfinite(target.mean):
        raise ParameterError("Gamma integrals require a finite mean")
    xf = float(x) if np.ndim(x) == 0 else np.asarray(x, dtype=float)
    if target.ip_coeffs is not None:
        qt = target.pdf(xf) * target.tau(xf)
        idbar = target.mean - xf
        g1 = qt - idbar * target.cdf(xf)
        g2 = qt + idbar * target.sf(xf)
        return g1, g2
    g1 = integrate(lambda t: float(target.cdf(t)), a, xf, tol=1e-10)
    g2 = integrate(lambda t: float(target.sf(t)), xf, b, tol=1e-10)
    return g1, g2
