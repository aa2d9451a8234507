"""Exact multivariate polynomials over the integers.

A polynomial in n variables is a mapping from exponent tuples of length n
to nonzero integer coefficients.  This is deliberately minimal: the graded
ring layer only needs ring operations, weighted degrees, and homogeneous
splitting, all with exact arithmetic.
"""

from __future__ import annotations

from fractions import Fraction


class IntPoly:
    """Integer polynomial keyed by exponent tuples of fixed arity."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        self.terms: dict[tuple[int, ...], int] = {}
        if terms:
            for mono, coeff in terms.items():
                if coeff:
                    if len(mono) != nvars:
                        raise ValueError("exponent tuple arity mismatch")
                    self.terms[tuple(mono)] = coeff

    @classmethod
    def zero(cls, nvars: int) -> "IntPoly":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, c: int) -> "IntPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int, power: int = 1) -> "IntPoly":
        mono = [0] * nvars
        mono[i] = power
        return cls(nvars, {tuple(mono): 1})

    @classmethod
    def monomial(cls, mono: tuple[int, ...], coeff: int = 1) -> "IntPoly":
        return cls(len(mono), {tuple(mono): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "IntPoly"):
        if self.nvars != other.nvars:
            raise ValueError("mixing polynomials of different arity")

    def __add__(self, other: "IntPoly") -> "IntPoly":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            c2 = out.get(m, 0) + c
            if c2:
                out[m] = c2
            else:
                out.pop(m, None)
        return IntPoly(self.nvars, out)

    def __neg__(self) -> "IntPoly":
        return IntPoly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + (-other)

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        self._check(other)
        out: dict[tuple[int, ...], int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                c = out.get(m, 0) + c1 * c2
                if c:
                    out[m] = c
                else:
                    out.pop(m, None)
        return IntPoly(self.nvars, out)

    def scale(self, c: int) -> "IntPoly":
        if c == 0:
            return IntPoly.zero(self.nvars)
        return IntPoly(self.nvars, {m: c * k for m, k in self.terms.items()})

    def __pow__(self, e: int) -> "IntPoly":
        if e < 0:
            raise ValueError("negative power")
        out = IntPoly.constant(self.nvars, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other) -> bool:
        return (isinstance(other, IntPoly) and self.nvars == other.nvars
                and self.terms == other.terms)

    def monomial_degree(self, mono: tuple[int, ...], weights) -> Fraction:
        return sum((Fraction(w) * e for w, e in zip(weights, mono)),
                   Fraction(0))

    def degrees(self, weights) -> set[Fraction]:
        return {self.monomial_degree(m, weights) for m in self.terms}

    def is_homogeneous(self, weights) -> bool:
        return len(self.degrees(weights)) <= 1

    def homogeneous_degree(self, weights) -> Fraction | None:
        """Degree when homogeneous and nonzero, else None."""
        degs = self.degrees(weights)
        return next(iter(degs)) if len(degs) == 1 else None

    def split_homogeneous(self, weights) -> dict[Fraction, "IntPoly"]:
        out: dict[Fraction, IntPoly] = {}
        for m, c in self.terms.items():
            d = self.monomial_degree(m, weights)
            out.setdefault(d, IntPoly(self.nvars))
            out[d].terms[m] = c
        return out

    def render(self, names) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, coeff in sorted(self.terms.items()):
            parts.append(render_term(coeff, mono, names))
        text = parts[0]
        for p in parts[1:]:
            text += " - " + p[1:] if p.startswith("-") else " + " + p
        return text

    def __repr__(self) -> str:
        return f"IntPoly({self.nvars}, {self.terms})"


def render_term(coeff: int, mono, names) -> str:
    """Render one monomial term like ``-2*h*t^2``."""
    factors = []
    for name, e in zip(names, mono):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    if not factors:
        return str(coeff)
    body = "*".join(factors)
    if coeff == 1:
        return body
    if coeff == -1:
        return "-" + body
    return f"{coeff}*{body}"
