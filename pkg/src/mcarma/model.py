"""Model orders, coefficient blocks and the companion state space.

The continuous-time model is the Ornstein-Uhlenbeck type system

    dX(t) = A X(t) dt + beta dL(t),      Y(t) = C X(t),

with A the pd x pd companion block matrix (identity super-diagonal blocks,
bottom block row [-A_p ... -A_1]), beta the pd x m stack produced by the
moving-average recursion, and C = [I_d, 0, ..., 0].  The discrete analogue is
a VAR(MA) whose companion form F certifies stationarity through its spectral
radius.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import NumericError, ShapeError, ValidationError

__all__ = [
    "ModelOrders",
    "McarmaCoefficients",
    "CompanionSystem",
    "VarmaRepresentation",
    "IndexClassification",
    "StationarityReport",
    "assemble_companion",
    "beta_stack_blocks",
    "classify_index",
    "recursive_parameter",
    "mcarma_stationarity",
    "var_stationarity",
    "perturb_blocks",
]


@dataclass(frozen=True)
class ModelOrders:
    """Integer quadruple (p, q, d, m) governing every shape in the system.

    p : autoregressive lag order, p >= 1
    q : moving-average order, 0 <= q < p
    d : system dimension, d >= 1
    m : driving-noise dimension, m >= 1
    """

    p: int
    q: int
    d: int
    m: int

    def __post_init__(self):
        for name in ("p", "d", "m"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ValidationError(f"{name} must be a positive integer, got {v!r}")
        if not isinstance(self.q, int) or self.q < 0:
            raise ValidationError(f"q must be a non-negative integer, got {self.q!r}")
        if self.q >= self.p:
            raise ValidationError(f"require p > q, got p={self.p}, q={self.q}")


def _as_block(x, rows: int, cols: int, what: str, index: int) -> np.ndarray:
    a = np.asarray(x)
    if a.shape != (rows, cols):
        raise ShapeError(f"{what}[{index}] has shape {a.shape}, expected {(rows, cols)}")
    if a.dtype == object:
        return a
    a = a.astype(float)
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{what}[{index}] contains non-finite values")
    return a


@dataclass(frozen=True)
class McarmaCoefficients:
    """Autoregressive blocks A_1..A_p (d x d) and moving-average blocks B_0..B_q (d x m).

    Blocks may hold floats or exact scalars (e.g. Fraction); exact blocks are
    kept as object arrays so the transformation relation can be evaluated in
    rational arithmetic.
    """

    orders: ModelOrders
    A_blocks: tuple = field(default=())
    B_blocks: tuple = field(default=())

    def __post_init__(self):
        o = self.orders
        if len(self.A_blocks) != o.p:
            raise ShapeError(f"expected {o.p} A-blocks, got {len(self.A_blocks)}")
        if len(self.B_blocks) != o.q + 1:
            raise ShapeError(f"expected {o.q + 1} B-blocks, got {len(self.B_blocks)}")
        A = tuple(_as_block(a, o.d, o.d, "A_blocks", j) for j, a in enumerate(self.A_blocks))
        B = tuple(_as_block(b, o.d, o.m, "B_blocks", j) for j, b in enumerate(self.B_blocks))
        object.__setattr__(self, "A_blocks", A)
        object.__setattr__(self, "B_blocks", B)

    @property
    def exact(self) -> bool:
        return any(a.dtype == object for a in self.A_blocks + self.B_blocks)


@dataclass(frozen=True)
class CompanionSystem:
    """Assembled state space (A, beta, C) of the continuous-time model."""

    orders: ModelOrders
    A: np.ndarray      # pd x pd
    beta: np.ndarray   # pd x m
    C: np.ndarray      # d x pd


@dataclass(frozen=True)
class VarmaRepresentation:
    """Discrete representation: x(t+ph) on lags t+(p-1)h ... t plus noise terms.

    phi_blocks are the lag coefficient matrices phi_1..phi_p (phi_j applies to
    x(t+(p-j)h)).  noise_loadings maps an increment offset j in {0,..,p-1} to
    the d x m matrix applied to dL(t+jh); a pure-AR representation has a
    single offset-0 loading.
    """

    orders: ModelOrders
    step: float
    phi_blocks: tuple
    noise_loadings: dict

    def __post_init__(self):
        o = self.orders
        if isinstance(self.step, Fraction):
            if not (0 < self.step <= 1):
                raise ValidationError(f"step must be in (0, 1], got {self.step}")
        else:
            s = float(self.step)
            if not (0 < s <= 1):
                raise ValidationError(f"step must be in (0, 1], got {s}")
        if len(self.phi_blocks) != o.p:
            raise ShapeError(f"expected {o.p} phi-blocks, got {len(self.phi_blocks)}")
        ph = tuple(_as_block(b, o.d, o.d, "phi_blocks", j) for j, b in enumerate(self.phi_blocks))
        object.__setattr__(self, "phi_blocks", ph)
        nl = {}
        for off, mat in self.noise_loadings.items():
            off = int(off)
            if not (0 <= off <= o.p - 1):
                raise ValidationError(f"noise offset {off} outside 0..{o.p - 1}")
            nl[off] = _as_block(mat, o.d, o.m, "noise_loadings", off)
        object.__setattr__(self, "noise_loadings", nl)


@dataclass(frozen=True)
class IndexClassification:
    """Placement of a one-dimensional SDE index inside the block system."""

    sde_index: int
    block: int
    collection: str  # "solution" | "recursive" | "autoregressive"


@dataclass(frozen=True)
class StationarityReport:
    """Eigenvalues plus the strict stationarity verdict.

    For the continuous model `is_stationary` means all real parts < 0; for a
    discrete representation it means all moduli < 1.  No tolerance band is
    applied: callers see the raw eigenvalues and can apply their own margin.
    """

    eigenvalues: np.ndarray
    moduli: np.ndarray
    is_stationary: bool
    kind: str  # "continuous" | "discrete"


def beta_stack_blocks(coeffs: McarmaCoefficients):
    """Blocks beta_1..beta_p of the noise-loading stack.

    Evaluates, for kappa = q down to 0,

        beta_{p-kappa} = -[ sum_{i=1}^{p-kappa-1} A_i beta_{p-kappa-i} - B_{q-kappa} ],

    with beta_{p-kappa} = 0 for kappa outside {0,..,q}.  Works elementwise so
    exact (Fraction) coefficient blocks stay exact.
    """
    o = coeffs.orders
    zero = Fraction(0) if coeffs.exact else 0.0
    blocks = [None] * (o.p + 1)  # 1-based: blocks[l] = beta_l
    for l in range(1, o.p + 1):
        kappa = o.p - l
        if kappa > o.q:
            blocks[l] = np.full((o.d, o.m), zero, dtype=object if coeffs.exact else float)
            continue
        acc = np.array(coeffs.B_blocks[o.q - kappa], dtype=object if coeffs.exact else float, copy=True)
        for i in range(1, l):  # i = 1 .. p-kappa-1
            contrib = _matmul(coeffs.A_blocks[i - 1], blocks[l - i], exact=coeffs.exact)
            acc = acc - contrib
        blocks[l] = acc
    return blocks[1:]


def _matmul(a: np.ndarray, b: np.ndarray, exact: bool) -> np.ndarray:
    if not exact:
        return np.asarray(a, dtype=float) @ np.asarray(b, dtype=float)
    rows, inner = a.shape
    cols = b.shape[1]
    out = np.empty((rows, cols), dtype=object)
    for r in range(rows):
        for c in range(cols):
            out[r, c] = sum(a[r, k] * b[k, c] for k in range(inner))
    return out


def assemble_companion(coeffs: McarmaCoefficients) -> CompanionSystem:
    """Assemble (A, beta, C) from the coefficient blocks.

    The top-right (p-1)d x (p-1)d region of A is a block super-diagonal of
    d-dimensional identities, the bottom block row is [-A_p ... -A_1], and the
    first (p-q-1)d rows of beta are structurally zero.
    """
    o = coeffs.orders
    pd_, d, m = o.p * o.d, o.d, o.m
    A = np.zeros((pd_, pd_))
    for l in range(o.p - 1):
        A[l * d:(l + 1) * d, (l + 1) * d:(l + 2) * d] = np.eye(d)
    for j in range(1, o.p + 1):  # block column p-j holds -A_j
        col = o.p - j
        A[(o.p - 1) * d:, col * d:(col + 1) * d] = -np.asarray(coeffs.A_blocks[j - 1], dtype=float)
    stack = beta_stack_blocks(coeffs)
    beta = np.vstack([np.asarray(b, dtype=float) for b in stack])
    C = np.zeros((d, pd_))
    C[:, :d] = np.eye(d)
    return CompanionSystem(orders=o, A=A, beta=beta, C=C)


def classify_index(i: int, orders: ModelOrders) -> IndexClassification:
    """Classify SDE index i into its block and collection.

    Block 1 is the solution collection, blocks 2..p-1 the recursive
    collection and block p the autoregressive collection.  For p = 1 the
    single block is classified as autoregressive (the last-index rule wins).
    """
    pd_ = orders.p * orders.d
    if not (1 <= i <= pd_):
        raise ValidationError(f"index {i} outside 1..{pd_}")
    block = (i - 1) // orders.d + 1
    if block == orders.p:
        coll = "autoregressive"
    elif block == 1:
        coll = "solution"
    else:
        coll = "recursive"
    return IndexClassification(sde_index=i, block=block, collection=coll)


def recursive_parameter(i: int, l: int, k: int, orders: ModelOrders) -> int:
    """Index bookkeeping device Q_i^(l) = (l - i) d + k.

    Valid for 1 <= k <= d, 1 <= l <= p, 1 <= i <= l, with i > 1 required when
    l = p.  Satisfies the shift identity Q_i^(l) = Q_{i+1}^(l) + d.
    """
    if not (1 <= k <= orders.d):
        raise ValidationError(f"k={k} outside 1..{orders.d}")
    if not (1 <= l <= orders.p):
        raise ValidationError(f"l={l} outside 1..{orders.p}")
    if not (1 <= i <= l):
        raise ValidationError(f"i={i} outside 1..{l}")
    if l == orders.p and i == 1:
        raise ValidationError("i must exceed 1 when l = p")
    return (l - i) * orders.d + k


def mcarma_stationarity(sys: CompanionSystem) -> StationarityReport:
    """Eigenvalues of A and the strict negative-real-part verdict."""
    A = np.asarray(sys.A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeError(f"A must be square, got shape {A.shape}")
    try:
        ev = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigen-solver failed: {exc}") from exc
    ev = ev[np.lexsort((ev.imag, ev.real))]
    return StationarityReport(
        eigenvalues=ev,
        moduli=np.abs(ev),
        is_stationary=bool(np.all(ev.real < 0.0)),
        kind="continuous",
    )


def var_stationarity(rep: VarmaRepresentation) -> StationarityReport:
    """Spectrum of the discrete companion F (bottom row [phi_p ... phi_1])."""
    o = rep.orders
    pd_, d = o.p * o.d, o.d
    F = np.zeros((pd_, pd_))
    for l in range(o.p - 1):
        F[l * d:(l + 1) * d, (l + 1) * d:(l + 2) * d] = np.eye(d)
    for j in range(1, o.p + 1):
        col = o.p - j
        F[(o.p - 1) * d:, col * d:(col + 1) * d] = np.asarray(rep.phi_blocks[j - 1], dtype=float)
    try:
        ev = np.linalg.eigvals(F)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigen-solver failed: {exc}") from exc
    ev = ev[np.lexsort((ev.imag, ev.real))]
    moduli = np.abs(ev)
    return StationarityReport(
        eigenvalues=ev,
        moduli=moduli,
        is_stationary=bool(np.all(moduli < 1.0)),
        kind="discrete",
    )


def perturb_blocks(coeffs: McarmaCoefficients, rho: float, mode: str = "all-entries") -> McarmaCoefficients:
    """Return a copy with every A_j perturbed by rho.

    mode "all-entries" adds rho to every entry of each A_j; mode "diagonal"
    adds rho only to diagonal entries.  B-blocks are untouched.
    """
    d = coeffs.orders.d
    if mode == "all-entries":
        bump = rho * np.ones((d, d))
    elif mode == "diagonal":
        bump = rho * np.eye(d)
    else:
        raise ValidationError(f"unknown perturbation mode {mode!r}")
    A = tuple(np.asarray(a, dtype=float) + bump for a in coeffs.A_blocks)
    return McarmaCoefficients(orders=coeffs.orders, A_blocks=A, B_blocks=coeffs.B_blocks)
