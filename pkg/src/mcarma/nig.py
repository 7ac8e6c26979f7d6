"""Normal inverse Gaussian distribution algebra.

Density, moments, sampling, maximum-likelihood fitting, goodness of fit, and
the closure operations (affine scaling, convolution, linear mixing) used to
restrict and recover the idiosyncratic error laws of the estimated model.

Parameterization: NIG(a, b, delta, mu) with tail heaviness a > |b| >= 0,
asymmetry b, scale delta > 0 and location mu.  gamma = sqrt(a^2 - b^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize, special

from .errors import FitError, RestrictionError, ValidationError

__all__ = [
    "NigParams",
    "MixRestriction",
    "nig_pdf",
    "nig_logpdf",
    "nig_cdf",
    "nig_mean",
    "nig_variance",
    "nig_scale",
    "nig_convolve",
    "mix_through_loadings",
    "nig_sample",
    "nig_fit",
    "ks_test",
]


@dataclass(frozen=True)
class NigParams:
    a: float
    b: float
    delta: float
    mu: float

    def __post_init__(self):
        if not (self.a > abs(self.b) >= 0.0):
            raise ValidationError(f"require a > |b| >= 0, got a={self.a}, b={self.b}")
        if not self.delta > 0.0:
            raise ValidationError(f"require delta > 0, got {self.delta}")
        for name in ("a", "b", "delta", "mu"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} must be finite")

    @property
    def gamma(self) -> float:
        return math.sqrt(self.a * self.a - self.b * self.b)


@dataclass(frozen=True)
class MixRestriction:
    """Common (a, b) ratios required for a loading row to mix NIG laws."""

    common_a: float
    common_b: float
    loadings: tuple


def nig_logpdf(x, p: NigParams):
    """Log density, stable in the far tails (scaled Bessel function)."""
    x = np.asarray(x, dtype=float)
    dx = x - p.mu
    s = np.hypot(p.delta, dx)
    # K1(a s) = k1e(a s) exp(-a s)
    return (
        math.log(p.a * p.delta / math.pi)
        + p.delta * p.gamma
        + p.b * dx
        - p.a * s
        + np.log(special.k1e(p.a * s))
        - np.log(s)
    )


def nig_pdf(x, p: NigParams):
    """Density of NIG(a, b, delta, mu); integrates to one."""
    return np.exp(nig_logpdf(x, p))


def nig_mean(p: NigParams) -> float:
    return p.mu + p.delta * p.b / p.gamma


def nig_variance(p: NigParams) -> float:
    return p.delta * p.a ** 2 / p.gamma ** 3


def nig_cdf(x, p: NigParams):
    """CDF by quadrature of the density (no closed form is used).

    Scalar inputs use adaptive quadrature; array inputs integrate the density
    piecewise between sorted points with fixed-order Gauss-Legendre panels on
    top of an adaptive left-tail integral.
    """
    scalar = np.isscalar(x)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    order = np.argsort(xs)
    sorted_x = xs[order]
    lo = sorted_x[0]
    tail, _ = integrate.quad(lambda t: nig_pdf(t, p), -np.inf, lo, limit=200)
    nodes, weights = np.polynomial.legendre.leggauss(16)
    vals = np.empty_like(sorted_x)
    vals[0] = tail
    if len(sorted_x) > 1:
        a_ = sorted_x[:-1]
        b_ = sorted_x[1:]
        half = 0.5 * (b_ - a_)
        mid = 0.5 * (a_ + b_)
        pts = mid[:, None] + half[:, None] * nodes[None, :]
        panel = (nig_pdf(pts.ravel(), p).reshape(pts.shape) * weights[None, :]).sum(axis=1) * half
        vals[1:] = tail + np.cumsum(panel)
    out = np.empty_like(vals)
    out[order] = np.clip(vals, 0.0, 1.0)
    return float(out[0]) if scalar else out


def nig_scale(c: float, p: NigParams) -> NigParams:
    """Law of c * X for X ~ NIG(a, b, delta, mu): (a/|c|, b/c, |c| delta, c mu)."""
    if c == 0:
        raise ValidationError("scale factor must be nonzero")
    return NigParams(a=p.a / abs(c), b=p.b / c, delta=abs(c) * p.delta, mu=c * p.mu)


def nig_convolve(ps, rel_tol: float = 1e-9) -> NigParams:
    """Law of the sum of independent NIG variables sharing (a, b).

    Requires all laws to share a and b (relative tolerance rel_tol); the sum
    is NIG(a, b, sum delta_r, sum mu_r).
    """
    ps = list(ps)
    if not ps:
        raise ValidationError("need at least one law")
    a0, b0 = ps[0].a, ps[0].b
    for i, q in enumerate(ps[1:], start=2):
        if abs(q.a - a0) > rel_tol * max(1.0, abs(a0)):
            raise RestrictionError(f"law {i}: tail heaviness {q.a} != {a0}")
        if abs(q.b - b0) > rel_tol * max(1.0, abs(b0)):
            raise RestrictionError(f"law {i}: asymmetry {q.b} != {b0}")
    return NigParams(a=a0, b=b0, delta=sum(q.delta for q in ps), mu=sum(q.mu for q in ps))


def mix_through_loadings(row, ps, rel_tol: float = 1e-9) -> NigParams:
    """Law of sum_r w_r * L_r for independent NIG channels L_r.

    Valid only under the compatibility restrictions a_r/|w_r| = a and
    b_r/w_r = b across all channels with nonzero loading; the mixed law is
    then NIG(a, b, sum |w_r| delta_r, sum w_r mu_r).  Violations raise
    RestrictionError naming the offending channel (1-based).
    """
    row = np.asarray(row, dtype=float)
    ps = list(ps)
    if row.ndim != 1 or len(ps) != row.size:
        raise ValidationError("loading row and channel list must have equal length")
    active = [(r, w, q) for r, (w, q) in enumerate(zip(row, ps), start=1) if w != 0.0]
    if not active:
        raise ValidationError("loading row is identically zero")
    r0, w0, q0 = active[0]
    a = q0.a / abs(w0)
    b = q0.b / w0
    for r, w, q in active[1:]:
        if abs(q.a / abs(w) - a) > rel_tol * max(1.0, abs(a)):
            raise RestrictionError(
                f"channel {r}: tail ratio a_r/|w_r| = {q.a / abs(w):.6g} differs from {a:.6g}"
            )
        if abs(q.b / w - b) > rel_tol * max(1.0, abs(b)):
            raise RestrictionError(
                f"channel {r}: asymmetry ratio b_r/w_r = {q.b / w:.6g} differs from {b:.6g}"
            )
    delta = sum(abs(w) * q.delta for _, w, q in active)
    mu = sum(w * q.mu for _, w, q in active)
    return NigParams(a=a, b=b, delta=delta, mu=mu)


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def nig_sample(p: NigParams, n: int, seed) -> np.ndarray:
    """n i.i.d. draws via inverse-Gaussian subordination.

    V ~ IG(mean = delta/gamma, shape = delta^2), X | V ~ N(mu + b V, V).
    Reproducible: a fixed integer seed yields a bit-identical stream.
    """
    if n < 1:
        raise ValidationError(f"need n >= 1, got {n}")
    rng = _as_rng(seed)
    v = rng.wald(p.delta / p.gamma, p.delta ** 2, size=n)
    return p.mu + p.b * v + np.sqrt(v) * rng.standard_normal(n)


def _moment_start(x: np.ndarray) -> tuple[float, float, float, float]:
    m = float(np.mean(x))
    v = float(np.var(x))
    sd = math.sqrt(v)
    z = (x - m) / sd
    skew = float(np.mean(z ** 3))
    exkurt = float(np.mean(z ** 4)) - 3.0
    # zeta = delta*gamma from skewness/kurtosis; fall back to symmetric start
    denom = exkurt - 4.0 * skew ** 2 / 3.0
    if denom <= 1e-6:
        zeta, rho = 3.0, 0.0
    else:
        zeta = 3.0 / denom
        rho = skew * math.sqrt(zeta) / 3.0
        rho = max(-0.95, min(0.95, rho))
    gamma = math.sqrt(zeta / (v * (1.0 - rho * rho)))
    delta = zeta / gamma
    a = gamma / math.sqrt(1.0 - rho * rho)
    b = rho * a
    mu = m - delta * b / gamma
    return a, b, delta, mu


def nig_fit(samples, maxiter: int = 4000) -> NigParams:
    """Maximum-likelihood fit, moment-matching start, simplex refinement.

    The search runs over the unconstrained parameterization
    (log gamma, b, log delta, mu) with a = hypot(gamma, b), which enforces
    a > |b| and delta > 0 throughout.
    """
    x = np.asarray(samples, dtype=float).ravel()
    if x.size < 100:
        raise ValidationError(f"need at least 100 samples, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise ValidationError("samples contain non-finite values")
    if np.var(x) < 1e-14 * max(1.0, abs(float(np.mean(x)))) ** 2:
        raise FitError("degenerate (near-constant) sample")

    a0, b0, d0, mu0 = _moment_start(x)
    g0 = math.sqrt(max(a0 * a0 - b0 * b0, 1e-12))
    theta0 = np.array([math.log(g0), b0, math.log(d0), mu0])

    def negloglik(theta):
        lg, b, ld, mu = theta
        if abs(lg) > 30 or abs(ld) > 30 or abs(b) > 1e6:
            return 1e12
        gamma = math.exp(lg)
        delta = math.exp(ld)
        a = math.hypot(gamma, b)
        p = NigParams(a=a, b=b, delta=delta, mu=mu)
        ll = nig_logpdf(x, p)
        if not np.all(np.isfinite(ll)):
            return 1e12
        return -float(np.sum(ll))

    res = optimize.minimize(
        negloglik, theta0, method="Nelder-Mead",
        options={"maxiter": maxiter, "xatol": 1e-10, "fatol": 1e-10},
    )
    if not np.all(np.isfinite(res.x)) or res.fun >= 1e12:
        raise FitError(f"NIG fit did not converge: {res.message} (fun={res.fun})")
    lg, b, ld, mu = res.x
    gamma = math.exp(lg)
    delta = math.exp(ld)
    return NigParams(a=math.hypot(gamma, b), b=float(b), delta=float(delta), mu=float(mu))


def ks_test(samples, p: NigParams) -> tuple[float, float]:
    """Kolmogorov-Smirnov statistic against NIG(p) and its asymptotic p-value.

    The statistic is the sup-distance between the empirical CDF and the
    fitted CDF (computed by quadrature of the density); the p-value uses the
    asymptotic Kolmogorov distribution at sqrt(n) scaling.
    """
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    n = x.size
    if n < 1:
        raise ValidationError("empty sample")
    cdf = nig_cdf(x, p)
    ecdf_hi = np.arange(1, n + 1) / n
    ecdf_lo = np.arange(0, n) / n
    d = float(max(np.max(ecdf_hi - cdf), np.max(cdf - ecdf_lo)))
    pval = float(special.kolmogorov(math.sqrt(n) * d))
    return d, pval
