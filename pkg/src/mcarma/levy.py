"""One-dimensional Levy measures, truncation quantities and tail sampling.

A jump specification pairs a Levy measure with a jump-size map g and a
truncation threshold epsilon.  For each epsilon the simulation needs three
numbers (cached per threshold):

    G^2(eps)   = integral of g^2 over |z| < eps      (small-jump variance)
    intensity  = nu({|z| >= eps})                    (compound-Poisson rate)
    mean_g     = integral of g over |z| >= eps       (compensator / drift)

plus an inverse-CDF sampler for the normalized tail density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special

from .errors import MeasureError, ValidationError
from .nig import NigParams

__all__ = [
    "LevyMeasure1D",
    "JumpSpec",
    "JumpCell",
    "nig_levy_measure",
    "power_law_measure",
    "g_squared",
]

_QUAD_OPTS = dict(limit=200, epsabs=1e-12, epsrel=1e-10)


@dataclass(frozen=True)
class LevyMeasure1D:
    """Evaluable Levy density on a support interval (origin excluded).

    density(z) must accept numpy arrays and is never evaluated at exactly 0.
    `tail_decay` is an optional exponential decay rate used to truncate the
    sampling table for infinite supports.
    """

    density: object
    support: tuple = (-np.inf, np.inf)
    tail_decay: float = 1.0
    name: str = "levy-measure"

    def _halves(self):
        lo, hi = self.support
        out = []
        if lo < 0:
            out.append((lo, min(hi, 0.0)))
        if hi > 0:
            out.append((max(lo, 0.0), hi))
        return out

    def integral(self, f, lo: float, hi: float) -> float:
        """Adaptive quadrature of f(z) * density(z) over [lo, hi] (no origin inside)."""
        if hi <= lo:
            return 0.0
        val, _ = integrate.quad(lambda z: f(z) * float(self.density(z)), lo, hi, **_QUAD_OPTS)
        return val


def nig_levy_measure(p: NigParams) -> LevyMeasure1D:
    """Levy density of the NIG law: (delta a / pi) exp(b z) K1(a|z|) / |z|.

    The second moment of this measure equals the NIG variance (pure-jump
    process); the mass is infinite at the origin.
    """

    def density(z):
        z = np.asarray(z, dtype=float)
        az = p.a * np.abs(z)
        return (p.delta * p.a / math.pi) * special.k1e(az) * np.exp(p.b * z - az) / np.abs(z)

    return LevyMeasure1D(
        density=density,
        support=(-np.inf, np.inf),
        tail_decay=max(p.a - abs(p.b), 1e-6),
        name=f"nig(a={p.a:g}, b={p.b:g}, delta={p.delta:g})",
    )


def power_law_measure(c: float = 0.5, alpha: float = 1.5, upper: float = 1.0) -> LevyMeasure1D:
    """One-sided power-law density c * z^(-alpha) on (0, upper].

    The default (c, alpha) = (1/2, 3/2) gives G^2(eps) = eps^(3/2)/3 for the
    identity jump map, a closed form used by the convergence checks.
    """
    if alpha >= 3.0:
        raise ValidationError("alpha >= 3 has no finite second moment near zero")

    def density(z):
        z = np.asarray(z, dtype=float)
        return c * z ** (-alpha)

    return LevyMeasure1D(density=density, support=(0.0, upper), name=f"power(c={c:g}, alpha={alpha:g})")


@dataclass(frozen=True)
class JumpCell:
    """Truncation quantities for one (measure, g, epsilon) combination."""

    epsilon: float
    g2: float              # G^2(eps)
    intensity: float       # nu(|z| >= eps)
    mean_g: float          # int_{|z|>=eps} g dnu
    neg_mass: float
    pos_mass: float
    neg_table: tuple       # (z grid descending in |z|? -> stored ascending, cdf)
    pos_table: tuple

    @property
    def g_eps(self) -> float:
        return math.sqrt(self.g2)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """n tail jump sizes by inverse CDF on the tabulated density."""
        if n == 0:
            return np.empty(0)
        total = self.neg_mass + self.pos_mass
        pick_pos = rng.random(n) < (self.pos_mass / total)
        out = np.empty(n)
        u = rng.random(n)
        for positive, table in ((True, self.pos_table), (False, self.neg_table)):
            mask = pick_pos == positive
            if table is None:
                if np.any(mask):
                    raise MeasureError("no mass on the requested side")
                continue
            grid, cdf = table
            out[mask] = np.interp(u[mask] * cdf[-1], cdf, grid)
        return out


def _side_table(measure: LevyMeasure1D, lo: float, hi: float, n_points: int = 1024):
    """Log-spaced inverse-CDF table for one side of the tail, or None if empty.

    The grid runs outward in |z| from the threshold; the paired cdf array is
    ascending, so linear inverse-CDF interpolation works on either side.
    """
    if hi <= lo:
        return None, 0.0
    sign = 1.0 if lo > 0 else -1.0
    a_abs, b_abs = (lo, hi) if sign > 0 else (-hi, -lo)
    if not math.isfinite(b_abs):
        # truncate where the exponential tail is negligible
        b_abs = a_abs + (745.0 + math.log1p(a_abs)) / measure.tail_decay
    grid_abs = np.geomspace(a_abs, b_abs, n_points)
    nodes, weights = np.polynomial.legendre.leggauss(8)
    a_ = grid_abs[:-1]
    b_ = grid_abs[1:]
    half = 0.5 * (b_ - a_)
    mid = 0.5 * (a_ + b_)
    pts = (mid[:, None] + half[:, None] * nodes[None, :]) * sign
    dens = measure.density(pts.ravel()).reshape(pts.shape)
    panel = (dens * weights[None, :]).sum(axis=1) * half
    cdf = np.concatenate([[0.0], np.cumsum(panel)])
    mass = float(cdf[-1])
    if mass <= 0.0:
        return None, 0.0
    return (grid_abs * sign, cdf), mass


@dataclass
class JumpSpec:
    """Levy measure + separable jump-size map g + truncation threshold.

    Construction verifies the finite-variance condition (G^2(inf) < inf) by
    quadrature; violations raise MeasureError.  Cells for thresholds other
    than `epsilon` are built on demand and cached.
    """

    measure: LevyMeasure1D
    epsilon: float = 0.1
    g: object = None  # callable z -> g(z); identity when None
    _cells: dict = field(default_factory=dict, repr=False, compare=False)
    g2_inf: float = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not (0.0 < self.epsilon <= 1.0):
            raise ValidationError(f"epsilon must be in (0, 1], got {self.epsilon}")
        gf = self.g if self.g is not None else (lambda z: z)
        try:
            total = 0.0
            for lo, hi in self.measure._halves():
                total += self.measure.integral(lambda z: float(np.asarray(gf(z)) ** 2), lo, hi)
        except Exception as exc:
            raise MeasureError(f"G^2(inf) quadrature failed: {exc}") from exc
        if not math.isfinite(total):
            raise MeasureError("finite-variance condition violated: G^2(inf) diverges")
        self.g2_inf = total

    def _g(self, z):
        return z if self.g is None else self.g(z)

    def cell(self, eps: float | None = None) -> JumpCell:
        eps = self.epsilon if eps is None else float(eps)
        if not (0.0 < eps <= 1.0):
            raise ValidationError(f"epsilon must be in (0, 1], got {eps}")
        hit = self._cells.get(eps)
        if hit is not None:
            return hit
        gf = self._g
        m = self.measure
        lo, hi = m.support
        g2 = 0.0
        if lo < 0:
            g2 += m.integral(lambda z: float(np.asarray(gf(z)) ** 2), max(lo, -eps), 0.0)
        if hi > 0:
            g2 += m.integral(lambda z: float(np.asarray(gf(z)) ** 2), 0.0, min(hi, eps))
        if not math.isfinite(g2):
            raise MeasureError(f"G^2({eps}) diverges; finite-variance condition violated")
        intensity = 0.0
        mean_g = 0.0
        if lo < -eps:
            intensity += m.integral(lambda z: 1.0, lo, -eps)
            mean_g += m.integral(lambda z: float(gf(z)), lo, -eps)
        if hi > eps:
            intensity += m.integral(lambda z: 1.0, eps, hi)
            mean_g += m.integral(lambda z: float(gf(z)), eps, hi)
        neg_table, neg_mass = _side_table(m, lo, -eps) if lo < -eps else (None, 0.0)
        pos_table, pos_mass = _side_table(m, eps, hi) if hi > eps else (None, 0.0)
        cell = JumpCell(
            epsilon=eps, g2=g2, intensity=intensity, mean_g=mean_g,
            neg_mass=neg_mass, pos_mass=pos_mass,
            neg_table=neg_table, pos_table=pos_table,
        )
        self._cells[eps] = cell
        return cell


def g_squared(spec: JumpSpec, epsilon: float) -> float:
    """Small-jump variance G^2(eps); monotone in eps and vanishing at 0."""
    return spec.cell(epsilon).g2
