"""Estimation pipeline: seasonality, VAR least squares, volatility, residual
laws and the error-loading solver.

The five stages mirror the fitting procedure for daily two-dimensional data:

1. least-squares seasonal fit (level, trend, ten harmonic pairs),
2. VAR(p) by per-equation OLS on the deseasonalized series (no intercept),
3. empirical day-of-year variance of the residuals,
4. volatility curve: three truncated Fourier segments on sqrt(daily
   variance), glued with sigmoids; residuals are rescaled by it and NIG laws
   fitted per dimension,
5. inverse transformation of the VAR coefficients and the error-loading
   solve beta beta' = Sigma under the equal-scale restriction.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .errors import (
    FitError,
    PipelineError,
    ShapeError,
    SolverError,
    ValidationError,
)
from .model import (
    McarmaCoefficients,
    ModelOrders,
    StationarityReport,
    VarmaRepresentation,
    assemble_companion,
    mcarma_stationarity,
    var_stationarity,
)
from .nig import NigParams, ks_test, nig_fit
from .transform import closed_form_p4d2, inverse_transform_mcar

__all__ = [
    "SeasonalityCoefficients",
    "VolatilitySegment",
    "VolatilitySpec",
    "VarFit",
    "BetaSolution",
    "FittedMcarModel",
    "PipelineConfig",
    "fit_seasonality",
    "fit_var_ols",
    "empirical_daily_variance",
    "fit_volatility",
    "solve_beta",
    "fit_mcar_pipeline",
]

N_HARMONICS = 10
YEAR_DAYS = 365


@dataclass(frozen=True)
class SeasonalityCoefficients:
    """Per-dimension coefficient rows (c_0, c_1, c_2..c_21).

    c_0 is the level, c_1 the linear trend per day, and the remaining ten
    cosine/sine pairs weight harmonics cos(j pi t / 365), sin(j pi t / 365)
    for j = 1..10 (periods 730/j days).  t counts days from the series start.
    """

    coeffs: np.ndarray  # (d, 22)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim != 2 or c.shape[1] != 2 * N_HARMONICS + 2:
            raise ShapeError(f"expected (d, {2 * N_HARMONICS + 2}) coefficients, got {c.shape}")
        object.__setattr__(self, "coeffs", c)

    @property
    def dims(self) -> int:
        return self.coeffs.shape[0]

    def evaluate(self, t) -> np.ndarray:
        """Seasonal level at day offsets t; returns shape (len(t), d)."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        X = seasonal_design(t)
        return X @ self.coeffs.T


def seasonal_design(t: np.ndarray) -> np.ndarray:
    """Design matrix [1, t, cos(j pi t/365), sin(j pi t/365), j=1..10]."""
    t = np.asarray(t, dtype=float)
    cols = [np.ones_like(t), t]
    for j in range(1, N_HARMONICS + 1):
        w = j * math.pi / YEAR_DAYS
        cols.append(np.cos(w * t))
        cols.append(np.sin(w * t))
    return np.column_stack(cols)


def fit_seasonality(series: np.ndarray, t=None) -> tuple[SeasonalityCoefficients, np.ndarray]:
    """OLS seasonal fit; returns coefficients and the residual series.

    series: (n, d) daily values (Feb-29 entries removed upstream); t defaults
    to 0..n-1.  Requires at least two years of data.
    """
    y = np.asarray(series, dtype=float)
    if y.ndim == 1:
        y = y[:, None]
    n = y.shape[0]
    if n < 2 * YEAR_DAYS:
        raise ValidationError(f"need at least {2 * YEAR_DAYS} daily values, got {n}")
    t = np.arange(n, dtype=float) if t is None else np.asarray(t, dtype=float)
    X = seasonal_design(t)
    spread = np.max(y, axis=0) - np.min(y, axis=0)
    if np.all(np.abs(y) < 1e-300):
        zero = SeasonalityCoefficients(np.zeros((y.shape[1], 2 * N_HARMONICS + 2)))
        return zero, y.copy()
    if np.any(spread < 1e-12 * np.maximum(1.0, np.abs(y).max(axis=0))):
        raise FitError("constant series: harmonic coefficients are not identifiable")
    coef, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < X.shape[1]:
        raise FitError(f"seasonal design rank deficient: rank {rank} < {X.shape[1]}")
    resid = y - X @ coef
    return SeasonalityCoefficients(coef.T), resid


@dataclass(frozen=True)
class VarFit:
    """Per-equation OLS fit of a VAR(p): representation, t-values, residuals."""

    representation: VarmaRepresentation
    t_values: tuple          # p blocks of (d, d) t-statistics
    residuals: np.ndarray    # (n - p, d)
    sigma_hat: np.ndarray    # (d, d) residual covariance
    intercept: np.ndarray | None = None
    intercept_t: np.ndarray | None = None


def fit_var_ols(series: np.ndarray, p: int, intercept: bool = False) -> VarFit:
    """VAR(p) by equation-by-equation least squares.

    Deseasonalized data is assumed, so the intercept defaults to off.
    t-values use the standard OLS covariance estimator per equation.
    """
    y = np.asarray(series, dtype=float)
    if y.ndim != 2:
        raise ShapeError("series must be 2-dimensional (n, d)")
    n, d = y.shape
    if p < 1:
        raise ValidationError("p must be >= 1")
    if n <= 10 * p * d:
        raise ValidationError(f"need more than {10 * p * d} observations, got {n}")
    lags = [y[p - j: n - j] for j in range(1, p + 1)]
    X = np.concatenate(lags, axis=1)             # (n-p, p*d), lag-1 block first
    if intercept:
        X = np.concatenate([np.ones((X.shape[0], 1)), X], axis=1)
    Y = y[p:]
    XtX = X.T @ X
    try:
        XtX_inv = np.linalg.inv(XtX)
    except np.linalg.LinAlgError as exc:
        raise FitError(f"singular design matrix: {exc}") from exc
    coef = XtX_inv @ (X.T @ Y)                   # (k, d)
    resid = Y - X @ coef
    dof = X.shape[0] - X.shape[1]
    if dof < 1:
        raise FitError("non-positive degrees of freedom")
    s2 = np.sum(resid ** 2, axis=0) / dof        # (d,)
    se = np.sqrt(np.outer(np.diag(XtX_inv), s2))  # (k, d)
    tvals = coef / se
    off = 1 if intercept else 0
    phi_blocks = tuple(coef[off + (j - 1) * d: off + j * d, :].T for j in range(1, p + 1))
    t_blocks = tuple(tvals[off + (j - 1) * d: off + j * d, :].T for j in range(1, p + 1))
    orders = ModelOrders(p=p, q=0, d=d, m=d)
    rep = VarmaRepresentation(orders=orders, step=1.0, phi_blocks=phi_blocks,
                              noise_loadings={0: np.eye(d)})
    sigma_hat = (resid.T @ resid) / resid.shape[0]
    return VarFit(
        representation=rep,
        t_values=t_blocks,
        residuals=resid,
        sigma_hat=sigma_hat,
        intercept=coef[0] if intercept else None,
        intercept_t=tvals[0] if intercept else None,
    )


def empirical_daily_variance(residuals: np.ndarray, day_of_year: np.ndarray) -> np.ndarray:
    """Mean squared residual for each day of the (365-day) year.

    residuals: (n, d); day_of_year: (n,) integers in 1..365.  Requires every
    day bucket to be populated (at least two years of residuals).
    """
    r = np.asarray(residuals, dtype=float)
    if r.ndim == 1:
        r = r[:, None]
    doy = np.asarray(day_of_year)
    if doy.shape[0] != r.shape[0]:
        raise ShapeError("residuals and day index must have equal length")
    if doy.min() < 1 or doy.max() > YEAR_DAYS:
        raise ValidationError("day_of_year entries must lie in 1..365")
    counts = np.bincount(doy - 1, minlength=YEAR_DAYS)
    empty = np.nonzero(counts == 0)[0]
    if empty.size:
        raise ValidationError(f"no residuals for day {empty[0] + 1} of the year")
    out = np.empty((YEAR_DAYS, r.shape[1]))
    for k in range(r.shape[1]):
        sums = np.bincount(doy - 1, weights=r[:, k] ** 2, minlength=YEAR_DAYS)
        out[:, k] = sums / counts
    return out


@dataclass(frozen=True)
class VolatilitySegment:
    """One truncated Fourier series w(t) = d0 + sum_j d_{2j-1} cos + d_{2j} sin.

    frequency f scales the harmonic arguments f j pi t / 365; the segment is
    fitted on `interval` = (first_day, last_day), inclusive.
    """

    frequency: float
    n_harmonics: int
    interval: tuple
    coeffs: np.ndarray  # (1 + 2*n_harmonics,)

    def evaluate(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.full_like(t, self.coeffs[0], dtype=float)
        for j in range(1, self.n_harmonics + 1):
            w = self.frequency * j * math.pi / YEAR_DAYS
            out = out + self.coeffs[2 * j - 1] * np.cos(w * t) + self.coeffs[2 * j] * np.sin(w * t)
        return out


def _sigmoid(x, a, b):
    return 1.0 / (1.0 + np.exp(-(x - a) / b))


@dataclass(frozen=True)
class VolatilitySpec:
    """Per-dimension three-segment volatility with sigmoid gluing.

    segments[k] holds the three VolatilitySegment objects of dimension k;
    glue holds two (shift, scale) pairs: the first connects segments 1 and 2,
    the second connects the result with segment 3.
    """

    segments: tuple          # (d, 3) nested tuples of VolatilitySegment
    glue: tuple              # ((a1, b1), (a2, b2))

    @property
    def dims(self) -> int:
        return len(self.segments)

    def evaluate_day(self, day) -> np.ndarray:
        """sigma_k(day) for day-of-year values in [1, 366); shape (len(day), d)."""
        day = np.atleast_1d(np.asarray(day, dtype=float))
        (a1, b1), (a2, b2) = self.glue
        w12 = _sigmoid(day, a1, b1)
        w23 = _sigmoid(day, a2, b2)
        out = np.empty((day.size, self.dims))
        for k, segs in enumerate(self.segments):
            g1 = segs[0].evaluate(day)
            g2 = segs[1].evaluate(day)
            g3 = segs[2].evaluate(day)
            inner = (1.0 - w12) * g1 + w12 * g2
            out[:, k] = (1.0 - w23) * inner + w23 * g3
        return out


DEFAULT_SEGMENTS = (
    ((0.44, 2), (2.0, 2), (0.44, 2)),
    ((0.30, 2), (0.50, 3), (0.05, 4)),
)
DEFAULT_INTERVALS = ((1, 120), (121, 304), (305, 365))
DEFAULT_GLUE = ((120.0, 2.0), (303.0, 5.0))


def fit_volatility(daily_variance: np.ndarray, segments=None, glue=DEFAULT_GLUE,
                   intervals=DEFAULT_INTERVALS) -> VolatilitySpec:
    """Least-squares Fourier fit of sqrt(daily variance), segment by segment.

    segments: per dimension, three (frequency, n_harmonics) pairs; defaults
    follow the two-dimensional temperature/wind setup and are recycled for
    further dimensions.  The blended curve must be positive on the daily
    grid; the first offending day is reported otherwise.
    """
    v = np.asarray(daily_variance, dtype=float)
    if v.ndim == 1:
        v = v[:, None]
    if v.shape[0] != YEAR_DAYS:
        raise ShapeError(f"daily variance must have {YEAR_DAYS} rows, got {v.shape[0]}")
    if np.any(v < 0):
        raise ValidationError("daily variance must be non-negative")
    d = v.shape[1]
    if segments is None:
        segments = tuple(DEFAULT_SEGMENTS[min(k, len(DEFAULT_SEGMENTS) - 1)] for k in range(d))
    days = np.arange(1, YEAR_DAYS + 1, dtype=float)
    target = np.sqrt(v)
    all_segs = []
    for k in range(d):
        segs_k = []
        for (f, nh), (lo, hi) in zip(segments[k], intervals):
            mask = (days >= lo) & (days <= hi)
            tt = days[mask]
            cols = [np.ones_like(tt)]
            for j in range(1, nh + 1):
                w = f * j * math.pi / YEAR_DAYS
                cols.append(np.cos(w * tt))
                cols.append(np.sin(w * tt))
            X = np.column_stack(cols)
            # low-frequency segments on short windows are near-collinear;
            # the minimum-norm least-squares curve is still well defined
            coef, _, _, _ = np.linalg.lstsq(X, target[mask, k], rcond=None)
            if not np.all(np.isfinite(coef)):
                raise FitError(f"volatility segment fit failed (dim {k + 1}, f={f})")
            segs_k.append(VolatilitySegment(frequency=f, n_harmonics=nh,
                                            interval=(lo, hi), coeffs=coef))
        all_segs.append(tuple(segs_k))
    spec = VolatilitySpec(segments=tuple(all_segs), glue=tuple(glue))
    sig = spec.evaluate_day(days)
    bad = np.nonzero(sig <= 0.0)
    if bad[0].size:
        day_idx = int(days[bad[0][0]])
        raise FitError(f"blended volatility non-positive at day {day_idx} (dim {int(bad[1][0]) + 1})")
    return spec


@dataclass(frozen=True)
class BetaSolution:
    """Error-loading solve: beta beta' = Sigma under the equal-scale restriction."""

    c_delta: float
    beta: np.ndarray
    branch: tuple
    restriction_values: tuple    # (delta_1/sqrt(2 S11), delta_2/sqrt(2 S22))
    offdiag_squares: tuple       # (beta_12^2, beta_21^2)
    delta_hat: tuple             # recovered (|b_k1|+|b_k2|) C_delta per row
    delta_rel_errors: tuple
    consistency_residual: float


def solve_beta(sigma_hat: np.ndarray, delta1: float, delta2: float,
               c_max_factor: float = 10.0, grid_points: int = 4000) -> BetaSolution:
    """Solve beta beta' = Sigma with equal idiosyncratic scales.

    For a candidate common scale C, the off-diagonals come from the quadratic
    (+-delta +- sqrt(2 Sigma_kk C^2 - delta_k^2)) / (2C) (all sign branches),
    the diagonals from the row norms, and C is root-found on the off-diagonal
    consistency equation beta_11 beta_21 + beta_12 beta_22 = Sigma_12 over
    [max_k delta_k / sqrt(2 Sigma_kk), c_max_factor * max(delta)].  Admissible
    roots must satisfy the restriction groups C > 0, C >= delta_k /
    sqrt(2 Sigma_kk) and Sigma_11 >= beta_21^2, Sigma_22 >= beta_12^2; the
    smallest admissible C wins, ties broken by smallest off-diagonal size.
    Limited to two driving channels (d = m = 2).
    """
    S = np.asarray(sigma_hat, dtype=float)
    if S.shape != (2, 2):
        raise ValidationError("solve_beta is defined for two driving channels only (2x2 covariance)")
    if abs(S[0, 1] - S[1, 0]) > 1e-10 * max(1.0, abs(S[0, 1])):
        raise ValidationError("covariance matrix must be symmetric")
    if S[0, 0] <= 0 or S[1, 1] <= 0 or np.linalg.det(S) <= 0:
        raise ValidationError("covariance matrix must be positive definite")
    if delta1 <= 0 or delta2 <= 0:
        raise ValidationError("scale parameters must be positive")

    lo = max(delta1 / math.sqrt(2 * S[0, 0]), delta2 / math.sqrt(2 * S[1, 1]))
    hi = c_max_factor * max(delta1, delta2)
    if hi <= lo:
        raise SolverError("empty feasible range for the common scale")
    grid = np.linspace(lo * (1 + 1e-12), hi, grid_points)

    def offdiag(C, Skk, delta, sd, sr):
        disc = 2.0 * Skk * C * C - delta * delta
        if disc < 0:
            return None
        return (sd * delta + sr * math.sqrt(disc)) / (2.0 * C)

    branches = list(itertools.product(itertools.product((1, -1), repeat=2), repeat=2))
    roots = []
    residual_report = []
    for br in branches:
        (sd1, sr1), (sd2, sr2) = br

        def residual(C):
            b12 = offdiag(C, S[0, 0], delta1, sd1, sr1)
            b21 = offdiag(C, S[1, 1], delta2, sd2, sr2)
            if b12 is None or b21 is None:
                return np.nan
            if b12 * b12 > S[0, 0] or b21 * b21 > S[1, 1]:
                return np.nan
            b11 = math.sqrt(S[0, 0] - b12 * b12)
            b22 = math.sqrt(S[1, 1] - b21 * b21)
            return b11 * b21 + b12 * b22 - S[0, 1]

        vals = np.array([residual(C) for C in grid])
        finite = np.isfinite(vals)
        crossing = finite[:-1] & finite[1:] & (vals[:-1] * vals[1:] <= 0.0)
        hit = np.nonzero(crossing)[0]
        if hit.size == 0:
            idx = np.nonzero(finite)[0]
            if idx.size:
                residual_report.append((br, float(np.min(np.abs(vals[idx])))))
            continue
        for i in hit:
            try:
                root = optimize.brentq(residual, grid[i], grid[i + 1], xtol=1e-13, rtol=1e-14)
            except ValueError:
                continue
            b12 = offdiag(root, S[0, 0], delta1, sd1, sr1)
            b21 = offdiag(root, S[1, 1], delta2, sd2, sr2)
            if b12 is None or b21 is None:
                continue
            # restriction group 3
            if b21 * b21 > S[0, 0] or b12 * b12 > S[1, 1]:
                continue
            b11 = math.sqrt(S[0, 0] - b12 * b12)
            b22 = math.sqrt(S[1, 1] - b21 * b21)
            beta = np.array([[b11, b12], [b21, b22]])
            roots.append((root, abs(b12) + abs(b21), br, beta))

    if not roots:
        lines = ", ".join(f"{br}: min|res|={r:.3g}" for br, r in residual_report[:8])
        raise SolverError(f"no sign branch admits an admissible root; branch residuals: {lines}")

    roots.sort(key=lambda t: (t[0], t[1]))
    c_star, _, branch, beta = roots[0]
    delta_hat = (
        (abs(beta[0, 0]) + abs(beta[0, 1])) * c_star,
        (abs(beta[1, 0]) + abs(beta[1, 1])) * c_star,
    )
    rel = (abs(delta_hat[0] - delta1) / delta1, abs(delta_hat[1] - delta2) / delta2)
    res = float(beta[0, 0] * beta[1, 0] + beta[0, 1] * beta[1, 1] - S[0, 1])
    return BetaSolution(
        c_delta=float(c_star),
        beta=beta,
        branch=branch,
        restriction_values=(delta1 / math.sqrt(2 * S[0, 0]), delta2 / math.sqrt(2 * S[1, 1])),
        offdiag_squares=(float(beta[0, 1] ** 2), float(beta[1, 0] ** 2)),
        delta_hat=delta_hat,
        delta_rel_errors=rel,
        consistency_residual=res,
    )


@dataclass(frozen=True)
class FittedMcarModel:
    """Everything the extended pure-AR model needs, plus fit diagnostics."""

    orders: ModelOrders
    seasonality: SeasonalityCoefficients
    volatility: VolatilitySpec
    mcar_coefficients: McarmaCoefficients
    residual_laws: tuple                # per-dimension NigParams
    beta: np.ndarray                    # d x m error loading
    c_delta: float
    sigma_hat: np.ndarray
    diagnostics: dict = field(default_factory=dict)


@dataclass(frozen=True)
class PipelineConfig:
    p: int = 4
    intercept: bool = False
    paper_mode: bool = False
    segments: tuple | None = None
    glue: tuple = DEFAULT_GLUE
    intervals: tuple = DEFAULT_INTERVALS
    force_phi_blocks: tuple | None = None

    def __post_init__(self):
        if self.p < 1:
            raise ValidationError(f"p must be >= 1, got {self.p}")


def fit_mcar_pipeline(series: np.ndarray, day_of_year: np.ndarray,
                      config: PipelineConfig = PipelineConfig()) -> FittedMcarModel:
    """Run the five estimation stages on aligned daily data.

    series: (n, d) raw daily values; day_of_year: (n,) ints in 1..365.
    Stage failures re-raise as PipelineError labelled with the stage name.
    """
    y = np.asarray(series, dtype=float)
    if y.ndim != 2:
        raise ShapeError("series must be (n, d)")
    n, d = y.shape
    doy = np.asarray(day_of_year)

    def stage(name, fn):
        try:
            return fn()
        except PipelineError:
            raise
        except Exception as exc:
            raise PipelineError(name, str(exc)) from exc

    seasonality, desea = stage("seasonality", lambda: fit_seasonality(y))

    if config.force_phi_blocks is not None:
        phi = tuple(np.asarray(b, dtype=float) for b in config.force_phi_blocks)
        orders = ModelOrders(p=len(phi), q=0, d=d, m=d)
        rep = VarmaRepresentation(orders=orders, step=1.0, phi_blocks=phi,
                                  noise_loadings={0: np.eye(d)})
        var_fit = VarFit(representation=rep, t_values=tuple(np.zeros((d, d)) for _ in phi),
                         residuals=np.zeros((2 * YEAR_DAYS, d)), sigma_hat=np.eye(d))
        residuals = None
    else:
        var_fit = stage("var", lambda: fit_var_ols(desea, config.p, intercept=config.intercept))
        residuals = var_fit.residuals

    if residuals is not None:
        doy_resid = doy[config.p:]
        daily_var = stage("daily-variance",
                          lambda: empirical_daily_variance(residuals, doy_resid))
        volatility = stage("volatility",
                           lambda: fit_volatility(daily_var, segments=config.segments,
                                                  glue=config.glue, intervals=config.intervals))
        sig = volatility.evaluate_day(doy_resid)
        scaled = residuals / sig
        laws = []
        ks = []
        for k in range(d):
            law = stage("nig-fit", lambda k=k: nig_fit(scaled[:, k]))
            laws.append(law)
            ks.append(stage("nig-fit", lambda k=k, law=law: ks_test(scaled[:, k], law)))
        sigma_hat = np.atleast_2d(np.cov(scaled.T, bias=False))
    else:
        daily_var = None
        volatility = stage("volatility", lambda: fit_volatility(np.ones((YEAR_DAYS, d)),
                                                                segments=config.segments,
                                                                glue=config.glue,
                                                                intervals=config.intervals))
        laws = [NigParams(a=1.0, b=0.0, delta=1.0, mu=0.0) for _ in range(d)]
        ks = [(float("nan"), float("nan"))] * d
        sigma_hat = np.eye(d)

    rep = var_fit.representation
    if config.paper_mode:
        if rep.orders.p != 4 or d != 2:
            raise PipelineError("mcar", "paper mode requires p = 4 and d = 2")
        alpha_table = stage("mcar", lambda: closed_form_p4d2(
            [np.asarray(b, dtype=float) for b in rep.phi_blocks]))
        # the published closed forms tabulate the negated drift blocks
        A_blocks = tuple(-a for a in alpha_table)
    else:
        coeffs0 = stage("mcar", lambda: inverse_transform_mcar(rep))
        A_blocks = coeffs0.A_blocks

    if d == 2:
        beta_sol = stage("beta", lambda: solve_beta(sigma_hat, laws[0].delta, laws[1].delta))
        beta = beta_sol.beta
        c_delta = beta_sol.c_delta
        beta_diag = {
            "c_delta": c_delta,
            "beta": beta.tolist(),
            "branch": beta_sol.branch,
            "restriction_values": beta_sol.restriction_values,
            "offdiag_squares": beta_sol.offdiag_squares,
            "delta_rel_errors": beta_sol.delta_rel_errors,
        }
    else:
        beta = np.eye(d)
        c_delta = float(np.mean([q.delta for q in laws]))
        beta_diag = {"note": "error-loading solve is defined for two channels only; identity used"}

    orders = ModelOrders(p=rep.orders.p, q=0, d=d, m=d)
    coeffs = McarmaCoefficients(orders=orders, A_blocks=A_blocks, B_blocks=(beta,))

    cont_report = stage("stationarity", lambda: mcarma_stationarity(assemble_companion(coeffs)))
    disc_report = stage("stationarity", lambda: var_stationarity(rep))

    diagnostics = {
        "t_values": [b.tolist() for b in var_fit.t_values],
        "ks": [{"statistic": s, "p_value": p} for s, p in ks],
        "beta": beta_diag,
        "continuous_eigenvalues": _eig_list(cont_report),
        "discrete_eigenvalues": _eig_list(disc_report),
        "continuous_stationary": cont_report.is_stationary,
        "discrete_stationary": disc_report.is_stationary,
        # negated drift blocks = companion bottom row, the convention some
        # published coefficient tables use for display
        "mcar_blocks_table_convention": [(-np.asarray(a, dtype=float)).tolist() for a in A_blocks],
    }
    residual_laws = tuple(
        NigParams(a=q.a, b=q.b, delta=q.delta, mu=q.mu) for q in laws
    )
    return FittedMcarModel(
        orders=orders,
        seasonality=seasonality,
        volatility=volatility,
        mcar_coefficients=coeffs,
        residual_laws=residual_laws,
        beta=beta,
        c_delta=c_delta,
        sigma_hat=sigma_hat,
        diagnostics=diagnostics,
    )


def _eig_list(report: StationarityReport):
    return [{"re": float(z.real), "im": float(z.imag), "modulus": float(abs(z))}
            for z in report.eigenvalues]
