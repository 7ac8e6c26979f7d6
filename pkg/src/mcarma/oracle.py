"""Exact substitution oracle for the discrete representation.

Mechanizes the backwards recursive elimination of the Euler-discretized block
system, in exact rational arithmetic, and solves for the highest-lag observed
term.  This is the independent reference against which `forward_transform` is
validated: the two must agree term by term, exactly.

Coefficient entries may be Fractions (numeric oracle runs) or `Poly` atoms
(fully symbolic runs); the substitution code only relies on ring arithmetic.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import NumericError, ValidationError
from .linforms import LinearForm, Poly
from .model import McarmaCoefficients, ModelOrders, beta_stack_blocks
from .transform import exactify_coefficients

__all__ = ["symbolic_oracle", "symbolic_coefficients"]

_MAX_TERMS = 500_000


def symbolic_coefficients(orders: ModelOrders) -> McarmaCoefficients:
    """Coefficient blocks populated with named symbols.

    A-block entries become atoms ("alpha", j, row, col) and B-block entries
    ("B", kappa_index, row, col); useful for fully symbolic oracle runs.
    """
    p, q, d, m = orders.p, orders.q, orders.d, orders.m
    A = []
    for j in range(1, p + 1):
        blk = np.empty((d, d), dtype=object)
        for r in range(d):
            for c in range(d):
                blk[r, c] = Poly.atom(("alpha", j, r + 1, c + 1))
        A.append(blk)
    B = []
    for i in range(q + 1):
        blk = np.empty((d, m), dtype=object)
        for r in range(d):
            for c in range(m):
                blk[r, c] = Poly.atom(("B", i, r + 1, c + 1))
        B.append(blk)
    return McarmaCoefficients(orders=orders, A_blocks=tuple(A), B_blocks=tuple(B))


def symbolic_oracle(coeffs: McarmaCoefficients, h, k: int | None = None):
    """Literal backwards recursive substitution of the Euler-discretized system.

    Starting from the autoregressive block, every auxiliary state is replaced
    through the block recursion

        x_{l+1}(t+jh) = (x_l(t+(j+1)h) - x_l(t+jh) - beta_l dL(t+jh)) / h

    until only observed states x_s(t+jh) and increments dL_r(t+jh) remain;
    the resulting identity is solved for x_k(t+ph).  Returns the LinearForm
    for dimension k, or a dict {k: LinearForm} when k is None.

    Limited to p <= 6, d <= 3 (combinatorial growth).
    """
    o = coeffs.orders
    if o.p > 6 or o.d > 3:
        raise ValidationError(f"oracle limited to p <= 6, d <= 3, got p={o.p}, d={o.d}")
    h = Fraction(h)
    if not (0 < h <= 1):
        raise ValidationError(f"step must be in (0, 1], got {h}")
    if not coeffs.exact:
        coeffs = exactify_coefficients(coeffs)
    stack = beta_stack_blocks(coeffs)  # stack[l-1] = beta_l block (d x m)
    p, d, m = o.p, o.d, o.m
    inv_h = 1 / h

    memo: dict = {}

    def reduce_state(l: int, kk: int, j: int) -> LinearForm:
        """x in block l, dimension kk, at offset j, reduced to block-1 terms."""
        key = (l, kk, j)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if l == 1:
            form = LinearForm({("x", kk, j): Fraction(1)})
        else:
            form = reduce_state(l - 1, kk, j + 1) - reduce_state(l - 1, kk, j)
            for r in range(1, m + 1):
                c = stack[l - 2][kk - 1, r - 1]
                form.add_term(("dL", r, j), -c)
            form = form.scale(inv_h)
        if len(form) > _MAX_TERMS:
            raise NumericError("oracle recursion budget exceeded")
        memo[key] = form
        return form

    def solve_dimension(k: int) -> LinearForm:
        lhs = reduce_state(p, k, 1) - reduce_state(p, k, 0)
        rhs = LinearForm()
        for l in range(1, p + 1):
            Aj = coeffs.A_blocks[p - l]  # A_{p-l+1}
            for s in range(1, d + 1):
                a = Aj[k - 1, s - 1]
                rhs = rhs + reduce_state(l, s, 0).scale(-h * a)
        for r in range(1, m + 1):
            rhs.add_term(("dL", r, 0), stack[p - 1][k - 1, r - 1])
        eq = lhs - rhs  # == 0
        top = ("x", k, p)
        c = eq[top]
        if isinstance(c, Poly):
            # A and beta never multiply the highest-lag term: c is 1/h^(p-1).
            if len(c.terms) != 1 or () not in c.terms:
                raise NumericError("highest-lag coefficient is not a constant; cannot solve")
            c = c.terms[()]
        if c == 0:
            raise NumericError("degenerate elimination: highest-lag term vanished")
        return eq.drop(top).scale(Fraction(-1) / c)

    if k is not None:
        if not (1 <= k <= d):
            raise ValidationError(f"k={k} outside 1..{d}")
        return solve_dimension(k)
    return {kk: solve_dimension(kk) for kk in range(1, d + 1)}
