"""Euler simulation of jump diffusions and of the companion state space.

Small jumps (|z| < eps) are replaced by an independent Brownian term with
matched variance G^2(eps); the remaining jumps form a compound Poisson
process sampled from the tabulated tail density.  The strong-error harness
couples every (h, eps) cell to a single fine reference: coarse grids consume
sums of the reference's Gaussian increments, and jumps falling below a cell's
threshold are rerouted into an extra shared Gaussian stream carrying variance
G^2(eps_cell) - G^2(eps_ref).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericError, ValidationError
from .levy import JumpCell, JumpSpec, nig_levy_measure
from .model import CompanionSystem, mcarma_stationarity
from .nig import NigParams, nig_mean

__all__ = [
    "DiffusionSpec",
    "PathSet",
    "NigDriver",
    "euler_step",
    "simulate_jump_diffusion",
    "simulate_mcarma",
    "simulate_extended_mcar",
    "strong_error_experiment",
    "ErrorTable",
]


@dataclass
class DiffusionSpec:
    """Coefficient functions of a jump diffusion with separable jump term.

    drift, diffusion and eta map (t, x) -> array like x, where x has shape
    (n_paths, dim); the driving Brownian motions and the jump channel are
    one-dimensional.  `lipschitz` holds declared (unchecked) regularity
    constants; they are documentation only.
    """

    drift: object
    diffusion: object
    eta: object
    x0: np.ndarray
    lipschitz: dict = field(default_factory=dict)

    def __post_init__(self):
        self.x0 = np.atleast_1d(np.asarray(self.x0, dtype=float))

    @property
    def dim(self) -> int:
        return self.x0.size


@dataclass(frozen=True)
class PathSet:
    """Simulated paths on an equidistant grid covering [0, T]."""

    times: np.ndarray            # (N+1,)
    values: np.ndarray           # (n_paths, N+1, dim)
    seed: object
    h: float
    T: float


def _steps(T: float, h: float) -> int:
    n = T / h
    n_int = round(n)
    if abs(n - n_int) > 1e-9 or n_int < 1:
        raise ValidationError(f"grid must cover [0, T] exactly: T={T}, h={h}")
    return int(n_int)


def euler_step(state, t, h, spec: DiffusionSpec, jumps: JumpSpec | None, dW, dB, jump_g_sum):
    """One Euler step with small-jump Gaussian substitution.

    state + drift h + diffusion dW + G(eps) eta dB + eta (sum g(z_j) - mean_g h),
    where the jump sum runs over compound-Poisson arrivals with |z| >= eps in
    the step and mean_g h is their compensator.
    """
    x = np.asarray(state, dtype=float)
    dW = np.asarray(dW, dtype=float)
    out = x + spec.drift(t, x) * h + spec.diffusion(t, x) * dW[..., None]
    if jumps is not None:
        cell = jumps.cell()
        eta = spec.eta(t, x)
        out = out + cell.g_eps * eta * np.asarray(dB)[..., None]
        comp = np.asarray(jump_g_sum, dtype=float) - cell.mean_g * h
        out = out + eta * comp[..., None]
    if not np.all(np.isfinite(out)):
        raise NumericError(f"state blew up at t={t}")
    return out


def _bin_jumps(path_id, times, g_sizes, n_paths, n_steps, h):
    idx = np.minimum((times / h).astype(np.int64), n_steps - 1)
    flat = path_id * n_steps + idx
    return np.bincount(flat, weights=g_sizes, minlength=n_paths * n_steps).reshape(n_paths, n_steps)


def simulate_jump_diffusion(spec: DiffusionSpec, jumps: JumpSpec | None, h: float, T: float,
                            n_paths: int, seed) -> PathSet:
    """Euler paths of a jump diffusion with small-jump substitution."""
    if n_paths < 1:
        raise ValidationError("n_paths must be >= 1")
    n = _steps(T, h)
    rng = np.random.default_rng(seed)
    dim = spec.dim
    X = np.broadcast_to(spec.x0, (n_paths, dim)).copy()
    out = np.empty((n_paths, n + 1, dim))
    out[:, 0] = X
    sqh = math.sqrt(h)
    if jumps is not None:
        cell = jumps.cell()
        counts = rng.poisson(cell.intensity * T, size=n_paths)
        total = int(counts.sum())
        sizes = cell.sample(rng, total)
        times = rng.random(total) * T
        path_id = np.repeat(np.arange(n_paths), counts)
        jump_sums = _bin_jumps(path_id, times, np.asarray(jumps._g(sizes), dtype=float),
                               n_paths, n, h)
    else:
        jump_sums = None
    for i in range(n):
        t = i * h
        dW = rng.standard_normal(n_paths) * sqh
        dB = rng.standard_normal(n_paths) * sqh if jumps is not None else 0.0
        js = jump_sums[:, i] if jumps is not None else 0.0
        try:
            X = euler_step(X, t, h, spec, jumps, dW, dB, js)
        except NumericError as exc:
            raise NumericError(f"{exc} (step {i})") from exc
        out[:, i + 1] = X
    times_grid = np.arange(n + 1) * h
    return PathSet(times=times_grid, values=out, seed=seed, h=h, T=T)


@dataclass
class NigDriver:
    """One NIG-driven noise channel with truncation threshold eps.

    Precomputes, per threshold, the small-jump standard deviation G(eps), the
    large-jump intensity and the adjusted drift
    alpha_hat = E[L(1)] - int_{|z|>=eps} z nu(dz), so that the simulated
    channel L(t) = alpha_hat t + G(eps) B(t) + (uncompensated jumps) matches
    the NIG mean and variance exactly.
    """

    params: NigParams
    epsilon: float = 0.1

    def __post_init__(self):
        self.spec = JumpSpec(measure=nig_levy_measure(self.params), epsilon=self.epsilon)
        self.cell: JumpCell = self.spec.cell()
        self.alpha_hat = nig_mean(self.params) - self.cell.mean_g

    def increments(self, rng: np.random.Generator, n_paths: int, n_steps: int, h: float) -> np.ndarray:
        """(n_paths, n_steps) array of channel increments over steps of size h."""
        sqh = math.sqrt(h)
        inc = self.alpha_hat * h + self.cell.g_eps * sqh * rng.standard_normal((n_paths, n_steps))
        counts = rng.poisson(self.cell.intensity * h * n_steps, size=n_paths)
        total = int(counts.sum())
        if total:
            sizes = self.cell.sample(rng, total)
            times = rng.random(total) * (h * n_steps)
            path_id = np.repeat(np.arange(n_paths), counts)
            inc += _bin_jumps(path_id, times, sizes, n_paths, n_steps, h)
        return inc


def simulate_mcarma(sys: CompanionSystem, drivers, h: float, T: float, n_paths: int, seed,
                    x0=None, keep_state: bool = False) -> PathSet:
    """Euler paths of the companion state space driven by NIG channels.

    drivers: one NigDriver per noise channel (length m).  Returns the
    observed component Y = C X; pass keep_state=True for full state paths.
    Warns when the drift matrix is not stationary.
    """
    o = sys.orders
    if len(drivers) != o.m:
        raise ValidationError(f"need {o.m} drivers, got {len(drivers)}")
    if n_paths < 1:
        raise ValidationError("n_paths must be >= 1")
    n = _steps(T, h)
    report = mcarma_stationarity(sys)
    if not report.is_stationary:
        warnings.warn("drift matrix is not stationary; paths may diverge", RuntimeWarning)
    rng = np.random.default_rng(seed)
    pd_ = o.p * o.d
    X = np.zeros((n_paths, pd_)) if x0 is None else np.broadcast_to(
        np.asarray(x0, dtype=float), (n_paths, pd_)).copy()
    dim_out = pd_ if keep_state else o.d
    out = np.empty((n_paths, n + 1, dim_out))
    out[:, 0] = X if keep_state else X[:, :o.d]
    dL = np.empty((n_paths, n, o.m))
    for r, drv in enumerate(drivers):
        dL[:, :, r] = drv.increments(rng, n_paths, n, h)
    A_T = sys.A.T
    beta_T = sys.beta.T
    for i in range(n):
        X = X + h * (X @ A_T) + dL[:, i, :] @ beta_T
        if not np.all(np.isfinite(X)):
            raise NumericError(f"state blew up at step {i}")
        out[:, i + 1] = X if keep_state else X[:, :o.d]
    return PathSet(times=np.arange(n + 1) * h, values=out, seed=seed, h=h, T=T)


def simulate_extended_mcar(model, h: float, T: float, n_paths: int, seed,
                           driver_laws=None, epsilon: float = 0.05,
                           start_day: float = 0.0) -> PathSet:
    """Paths of the seasonal, volatility-modulated pure-AR model.

    model is a fitted model object carrying mcar_coefficients (q = 0),
    seasonality, volatility, beta and c_delta.  The observation adds the
    seasonal level, and the noise loading row is scaled by the volatility at
    the left endpoint of each step:

        Y(t) = Lambda(t) + X_1(t),
        dX_p = [-A_p ... -A_1] X dt + sigma(t-) o (B_0 dL(t)).

    Driving channels default to symmetric unit-variance NIG laws with the
    fitted common scale c_delta; pass driver_laws to override.
    """
    from .model import assemble_companion  # local import keeps module deps acyclic

    coeffs = model.mcar_coefficients
    o = coeffs.orders
    if o.q != 0:
        raise ValidationError("extended model requires q = 0")
    if n_paths < 1:
        raise ValidationError("n_paths must be >= 1")
    n = _steps(T, h)
    sys = assemble_companion(coeffs)
    if driver_laws is None:
        c_delta = float(model.c_delta)
        driver_laws = [NigParams(a=c_delta, b=0.0, delta=c_delta, mu=0.0) for _ in range(o.m)]
    drivers = [NigDriver(params=q, epsilon=epsilon) for q in driver_laws]
    B0 = np.asarray(coeffs.B_blocks[0], dtype=float)
    rng = np.random.default_rng(seed)
    pd_, d = o.p * o.d, o.d
    X = np.zeros((n_paths, pd_))
    out = np.empty((n_paths, n + 1, d))
    step_days = start_day + np.arange(n) * h
    lam_grid = model.seasonality.evaluate(start_day + np.arange(n + 1) * h)   # (n+1, d)
    sig_grid = model.volatility.evaluate_day(_day_of_year(step_days))         # (n, d)
    dL = np.empty((n_paths, n, o.m))
    for r, drv in enumerate(drivers):
        dL[:, :, r] = drv.increments(rng, n_paths, n, h)
    out[:, 0] = lam_grid[0] + X[:, :d]
    A_T = sys.A.T
    for i in range(n):
        noise = (dL[:, i, :] @ B0.T) * sig_grid[i]      # (n_paths, d), row-wise sigma
        X = X + h * (X @ A_T)
        X[:, -d:] += noise
        if not np.all(np.isfinite(X)):
            raise NumericError(f"state blew up at step {i}")
        out[:, i + 1] = lam_grid[i + 1] + X[:, :d]
    return PathSet(times=np.arange(n + 1) * h, values=out, seed=seed, h=h, T=T)


def _day_of_year(t):
    """Map model time in days to the [1, 366) day-of-year coordinate."""
    return np.mod(np.asarray(t, dtype=float), 365.0) + 1.0


@dataclass(frozen=True)
class ErrorTable:
    """Strong-error estimates per (h, eps) cell plus fitted log-log slopes."""

    rows: tuple                  # dicts: h, epsilon, error_L2_sup, n_paths, seed
    slope_h: float | None
    slope_g: float | None
    g_values: dict               # epsilon -> G(epsilon)
    reference_h: float
    reference_epsilon: float | None


def strong_error_experiment(spec: DiffusionSpec, jumps: JumpSpec | None, h_list, n_paths: int,
                            seed, T: float = 1.0, epsilon_list=None,
                            ref_refine: int = 4) -> ErrorTable:
    """Coupled Monte Carlo estimate of strong sup-errors over (h, eps) cells.

    All cells share the reference's Brownian increments (coarse steps sum the
    fine ones) and a single jump stream drawn at the smallest threshold;
    jumps below a cell's own threshold contribute an extra shared Gaussian
    with variance G^2(eps_cell) - G^2(eps_min).  Reported per cell:
    || sup_t |Z_ref(t) - Z_cell(t)| ||_2 over the cell grid.
    """
    if n_paths < 100:
        raise ValidationError(f"need at least 100 paths, got {n_paths}")
    h_list = sorted(set(float(h) for h in h_list), reverse=True)
    if not h_list:
        raise ValidationError("empty h list")
    h_min = h_list[-1]
    for h in h_list:
        _steps(T, h)
        ratio = h / h_min
        if abs(ratio - round(ratio)) > 1e-9 or (round(ratio) & (round(ratio) - 1)):
            if round(ratio) != 1:
                raise ValidationError(f"h values must be dyadic refinements: {h} vs {h_min}")
    if ref_refine < 1 or (ref_refine & (ref_refine - 1)):
        raise ValidationError("ref_refine must be a power of two")
    h_ref = h_min / ref_refine
    n_ref = _steps(T, h_ref)

    use_jumps = jumps is not None
    if use_jumps:
        eps_list = sorted(set(float(e) for e in (epsilon_list or [jumps.epsilon])))
        eps_min = eps_list[0]
        cells = {e: jumps.cell(e) for e in eps_list}
        ref_cell = jumps.cell(eps_min)
    else:
        eps_list = [None]
        eps_min = None

    rng = np.random.default_rng(seed)
    sq_ref = math.sqrt(h_ref)
    dW = rng.standard_normal((n_paths, n_ref)) * sq_ref
    if use_jumps:
        dB1 = rng.standard_normal((n_paths, n_ref)) * sq_ref
        dB2 = rng.standard_normal((n_paths, n_ref)) * sq_ref
        counts = rng.poisson(ref_cell.intensity * T, size=n_paths)
        total = int(counts.sum())
        sizes = ref_cell.sample(rng, total)
        jtimes = rng.random(total) * T
        jpath = np.repeat(np.arange(n_paths), counts)
        gsizes = np.asarray(jumps._g(sizes), dtype=float)

    def run_grid(h: float, eps, extra_sd: float):
        """Euler paths on step h; returns states at all its grid points."""
        n = _steps(T, h)
        k = round(h / h_ref)
        seg = np.arange(0, n_ref, k)
        dW_c = np.add.reduceat(dW, seg, axis=1)
        if use_jumps:
            dB1_c = np.add.reduceat(dB1, seg, axis=1)
            dB2_c = np.add.reduceat(dB2, seg, axis=1)
            cell = cells[eps] if eps is not None else None
            mask = np.abs(sizes) >= eps
            jsum = _bin_jumps(jpath[mask], jtimes[mask], gsizes[mask], n_paths, n, h)
        X = np.broadcast_to(spec.x0, (n_paths, spec.dim)).copy()
        states = np.empty((n_paths, n + 1, spec.dim))
        states[:, 0] = X
        for i in range(n):
            t = i * h
            x = X
            out = x + spec.drift(t, x) * h + spec.diffusion(t, x) * dW_c[:, i][:, None]
            if use_jumps:
                eta = spec.eta(t, x)
                gauss = ref_cell.g_eps * dB1_c[:, i] + extra_sd * dB2_c[:, i]
                comp = jsum[:, i] - cell.mean_g * h
                out = out + eta * (gauss + comp)[:, None]
            if not np.all(np.isfinite(out)):
                raise NumericError(f"state blew up at step {i} (h={h}, eps={eps})")
            X = out
            states[:, i + 1] = X
        return states

    ref_states = run_grid(h_ref, eps_min, 0.0)

    rows = []
    for h in h_list:
        k = round(h / h_ref)
        for eps in eps_list:
            if use_jumps:
                extra_var = cells[eps].g2 - ref_cell.g2
                extra_sd = math.sqrt(max(extra_var, 0.0))
            else:
                extra_sd = 0.0
            states = run_grid(h, eps, extra_sd)
            ref_sub = ref_states[:, ::k, :]
            diff = np.linalg.norm(states - ref_sub, axis=2)
            sup = diff.max(axis=1)
            err = float(np.sqrt(np.mean(sup ** 2)))
            rows.append({
                "h": h,
                "epsilon": eps,
                "error_L2_sup": err,
                "n_paths": n_paths,
                "seed": seed,
            })

    def fit_slope(pairs):
        pairs = [(x, e) for x, e in pairs if e > 0.0]
        if len(pairs) < 2:
            return None
        lx = np.log([x for x, _ in pairs])
        le = np.log([e for _, e in pairs])
        return float(np.polyfit(lx, le, 1)[0])

    slope_h = fit_slope([(r["h"], r["error_L2_sup"]) for r in rows if r["epsilon"] == eps_list[0]])
    if use_jumps and len(eps_list) > 1:
        gvals = {e: math.sqrt(cells[e].g2) for e in eps_list}
        slope_g = fit_slope([(gvals[r["epsilon"]], r["error_L2_sup"])
                             for r in rows if r["h"] == h_min and r["epsilon"] != eps_min])
    else:
        gvals = {e: math.sqrt(cells[e].g2) for e in eps_list} if use_jumps else {}
        slope_g = None

    return ErrorTable(rows=tuple(rows), slope_h=slope_h, slope_g=slope_g, g_values=gvals,
                      reference_h=h_ref, reference_epsilon=eps_min)
