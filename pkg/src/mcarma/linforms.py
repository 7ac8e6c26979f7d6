"""Exact linear forms over state and noise-increment terms.

A LinearForm maps term keys to coefficients:

    ("x", s, j)   -> coefficient of x_s(t + j h)      (state dimension s)
    ("dL", r, j)  -> coefficient of dL_r(t + j h)     (noise channel r)

Coefficients are exact rationals (Fraction) in oracle mode, or small
polynomials (Poly) in named symbols when the coefficient blocks themselves
are symbolic.  No floating point enters these objects, so equality is exact.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = ["Poly", "LinearForm"]

_Scalar = (int, Fraction)


class Poly:
    """Polynomial over hashable atoms with Fraction coefficients.

    Atoms are arbitrary hashable labels, e.g. ("alpha", j, r, c).  Monomials
    are sorted tuples of atoms.  Supports +, -, *, division by exact scalars,
    and exact substitution of atom values.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = dict(terms or {})
        self._prune()

    @classmethod
    def atom(cls, label) -> "Poly":
        return cls({(label,): Fraction(1)})

    @classmethod
    def const(cls, c) -> "Poly":
        c = Fraction(c)
        return cls({(): c} if c else {})

    def _prune(self):
        self.terms = {m: c for m, c in self.terms.items() if c != 0}

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        if isinstance(other, _Scalar):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, Poly) else Poly.const(-Fraction(other)))

    def __rsub__(self, other):
        return Poly.const(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, _Scalar):
            c = Fraction(other)
            return Poly({m: v * c for m, v in self.terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(sorted(m1 + m2))
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _Scalar):
            c = Fraction(other)
            return Poly({m: v / c for m, v in self.terms.items()})
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, _Scalar):
            other = Poly.const(other)
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def subs(self, values: dict) -> Fraction:
        """Evaluate with exact atom values; every atom must be covered."""
        total = Fraction(0)
        for m, c in self.terms.items():
            prod = c
            for a in m:
                prod *= Fraction(values[a])
            total += prod
        return total

    def __repr__(self):
        if self.is_zero:
            return "Poly(0)"
        bits = []
        for m, c in sorted(self.terms.items(), key=lambda t: (len(t[0]), str(t[0]))):
            mono = "*".join(str(a) for a in m) or "1"
            bits.append(f"{c}*{mono}")
        return "Poly(" + " + ".join(bits) + ")"


def _is_zero(c) -> bool:
    if isinstance(c, Poly):
        return c.is_zero
    return c == 0


class LinearForm:
    """Sparse linear combination of x_s(t+jh) and dL_r(t+jh) terms."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {}
        for key, c in (coeffs or {}).items():
            if not _is_zero(c):
                self.coeffs[key] = c

    def copy(self) -> "LinearForm":
        return LinearForm(self.coeffs)

    def add_term(self, key, c):
        if _is_zero(c):
            return
        cur = self.coeffs.get(key)
        new = c if cur is None else cur + c
        if _is_zero(new):
            self.coeffs.pop(key, None)
        else:
            self.coeffs[key] = new

    def __add__(self, other: "LinearForm") -> "LinearForm":
        out = self.copy()
        for key, c in other.coeffs.items():
            out.add_term(key, c)
        return out

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return self + other.scale(-1)

    def scale(self, c) -> "LinearForm":
        if _is_zero(c):
            return LinearForm()
        return LinearForm({k: v * c for k, v in self.coeffs.items()})

    def drop(self, key) -> "LinearForm":
        out = self.copy()
        out.coeffs.pop(key, None)
        return out

    def __getitem__(self, key):
        return self.coeffs.get(key, Fraction(0))

    def __eq__(self, other):
        return isinstance(other, LinearForm) and self.coeffs == other.coeffs

    def __len__(self):
        return len(self.coeffs)

    def state_offsets(self):
        return sorted(j for (kind, _, j) in self.coeffs if kind == "x")

    def noise_offsets(self):
        return sorted(j for (kind, _, j) in self.coeffs if kind == "dL")

    def __repr__(self):
        parts = [f"{key}: {c}" for key, c in sorted(self.coeffs.items(), key=lambda t: (t[0][0], t[0][2], t[0][1]))]
        return "LinearForm{" + ", ".join(parts) + "}"
