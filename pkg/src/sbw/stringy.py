"""Sectors, ages, and the stringy multiplication of a weighted blowup.

A twisted sector is indexed by an injective homomorphism from a group of
roots of unity into the multiplicative group, encoded as a reduced
fraction (r, c) with argument c/r.  A sector is present exactly when r
divides one of the center weights; its ring is the quotient of A*(Y)[t]
by the product of the Euler-class factors of the weights r divides.  The
trivial sector carries the blowup Chow ring itself.

The product is polynomial multiplication inside A*(Y, X)[t] followed by
multiplication with the correction polynomial: the product of the
Euler-class factors attached to the integers a (the weights and -1)
whose argument pair sums to at least one full turn.  The factor at -1 is
-t; it is what pushes products of inverse sectors back into the ambient
ring.  Products landing in absent sectors vanish.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .blowup import (
    BlowupInstance,
    ConsistencyError,
    PairElement,
    PairPoly,
    PairRing,
    TPoly,
)
from .graded import BasedGradedRing, Element, GradedError, build, embed
from .poly import IntPoly


class EmptySectorError(GradedError):
    """The sector index does not divide any center weight."""


@dataclass(frozen=True, order=True)
class SectorId:
    """An injective character of order r with argument c/r in [0, 1)."""

    r: int
    c: int

    def __post_init__(self):
        if self.r <= 0:
            raise ValueError("sector order must be positive")
        if not 0 <= self.c < self.r:
            raise ValueError("sector numerator must lie in [0, r)")
        if self.r == 1:
            if self.c != 0:
                raise ValueError("the order-1 sector is (1, 0)")
        elif gcd(self.c, self.r) != 1:
            raise ValueError("sector fraction must be reduced (injectivity)")

    @property
    def trivial(self) -> bool:
        return self.r == 1

    @property
    def arg(self) -> Fraction:
        return Fraction(self.c, self.r)

    def inverse(self) -> "SectorId":
        return SectorId(self.r, (-self.c) % self.r)

    def render(self) -> str:
        return f"({self.r},{self.c})"


TRIVIAL_SECTOR = SectorId(1, 0)


def sector_from_arg(a: Fraction) -> SectorId:
    a = Fraction(a) % 1
    return SectorId(a.denominator, a.numerator)


def arg_pow(zeta: SectorId, a: int) -> Fraction:
    """Argument of the a-th power: ((a c) mod r) / r."""
    return Fraction((a * zeta.c) % zeta.r, zeta.r)


def sector_mul(zeta: SectorId, eta: SectorId) -> SectorId:
    """Index of the product character: reduced (arg + arg) mod 1."""
    return sector_from_arg(zeta.arg + eta.arg)


def power_is_trivial(zeta: SectorId, a: int) -> bool:
    return a % zeta.r == 0


class StringyRing:
    """The stringy Chow ring of a weighted blowup instance."""

    def __init__(self, inst: BlowupInstance):
        self.inst = inst
        self.sectors = self.enumerate_sectors()
        self.L = lcm(1, *(z.r for z in self.sectors))
        self._rings: dict[SectorId, BasedGradedRing] = {}

    # -- sector bookkeeping -------------------------------------------------

    def enumerate_sectors(self) -> list[SectorId]:
        """The trivial sector plus every (r, c) with r > 1 dividing a weight."""
        out = [TRIVIAL_SECTOR]
        orders = sorted({r for b in self.inst.weights
                         for r in range(2, b + 1) if b % r == 0})
        for r in orders:
            for c in range(1, r):
                if gcd(c, r) == 1:
                    out.append(SectorId(r, c))
        return out

    def is_empty(self, zeta: SectorId) -> bool:
        if zeta.trivial:
            return False
        return not any(b % zeta.r == 0 for b in self.inst.weights)

    def age(self, zeta: SectorId) -> Fraction:
        """Grading shift of the sector: arg of the inverse plus the codim-
        weighted arguments of the powers at the moving weights."""
        if zeta.trivial:
            return Fraction(0)
        if self.is_empty(zeta):
            raise EmptySectorError(f"sector {zeta.render()} is empty")
        total = arg_pow(zeta, -1)
        for ideal in self.inst.ideals:
            if not power_is_trivial(zeta, ideal.weight):
                total += ideal.codim * arg_pow(zeta, ideal.weight)
        return total

    def sector_ring(self, zeta: SectorId) -> BasedGradedRing:
        """A*(Y)[t] modulo the Euler factors of the weights r divides."""
        if zeta.trivial:
            raise GradedError("the trivial sector carries the blowup ring")
        if self.is_empty(zeta):
            raise EmptySectorError(f"sector {zeta.render()} is empty")
        if zeta not in self._rings:
            rel = TPoly.one(self.inst.AY)
            for a in sorted({b for b in self.inst.weights if b % zeta.r == 0}):
                rel = rel * self.inst.e_poly(a)
            pres = self.inst.AY.pres.extended("t", 1, [rel.to_intpoly()])
            self._rings[zeta] = build(pres)
        return self._rings[zeta]

    def pair_ring(self) -> PairRing:
        return self.inst.blowup_ring()

    def restrict_to_sector(self, zeta: SectorId, x: PairElement) -> Element:
        """Restriction of an ambient class to a twisted sector's ring."""
        ring = self.sector_ring(zeta)
        out = ring.zero()
        for d in x.comps:
            tp, beta = x.ring.to_parts(d, x.comps[d])
            for n, e in tp.coeffs.items():
                out = out + embed(e, ring, power=n)
            ib = self.inst.pull.apply(beta)
            if not ib.is_zero():
                out = out + embed(ib, ring, power=0)
        return out

    # -- classes -------------------------------------------------------------

    def _make(self, terms: dict) -> "StringyClass":
        return StringyClass(self,
                            {z: e for z, e in terms.items() if not e.is_zero()})

    def zero(self) -> "StringyClass":
        return StringyClass(self, {})

    def unit(self) -> "StringyClass":
        return StringyClass(self, {TRIVIAL_SECTOR: self.pair_ring().one()})

    def sector_unit(self, zeta: SectorId) -> "StringyClass":
        """The fundamental class of a sector, written 1 e_zeta."""
        if zeta.trivial:
            return self.unit()
        return StringyClass(self, {zeta: self.sector_ring(zeta).one()})

    def single(self, zeta: SectorId, elem) -> "StringyClass":
        return self._make({zeta: elem})

    def from_pair(self, x: PairElement) -> "StringyClass":
        return self._make({TRIVIAL_SECTOR: x})

    # -- the product ----------------------------------------------------------

    def c_poly(self, zeta: SectorId, eta: SectorId) -> TPoly:
        """Correction polynomial over A*(Y): the product of the Euler
        factors at integers a with a nontrivial power pair whose arguments
        sum to at least 1."""
        out = None
        for a in sorted(set(self.inst.weights)) + [-1]:
            if power_is_trivial(zeta, a) and power_is_trivial(eta, a):
                continue
            if arg_pow(zeta, a) + arg_pow(eta, a) >= 1:
                f = self.inst.e_poly(a)
                out = f if out is None else out * f
        return out if out is not None else TPoly.one(self.inst.AY)

    def _c_pair(self, zeta: SectorId, eta: SectorId) -> PairPoly:
        """The correction as an element of A*(Y, X)[t]; the empty product
        is the true identity (unit on the A*(X) side)."""
        out = None
        for a in sorted(set(self.inst.weights)) + [-1]:
            if power_is_trivial(zeta, a) and power_is_trivial(eta, a):
                continue
            if arg_pow(zeta, a) + arg_pow(eta, a) >= 1:
                f = self.inst.e_poly(a)
                out = f if out is None else out * f
        if out is None:
            return PairPoly.identity(self.inst.AY, self.inst.AX)
        return PairPoly(out, self.inst.AX.zero())

    def as_pair_poly(self, zeta: SectorId, elem) -> PairPoly:
        """A polynomial representative in A*(Y, X)[t] of a sector element."""
        if zeta.trivial:
            ring: PairRing = self.pair_ring()
            tp = TPoly(self.inst.AY)
            x = self.inst.AX.zero()
            for d, vec in elem.comps.items():
                tpd, xd = ring.to_parts(d, vec)
                tp = tp + tpd
                x = x + xd
            return PairPoly(tp, x)
        ring = self.sector_ring(zeta)
        tp = TPoly(self.inst.AY)
        for tick, vec in elem.comps.items():
            monos = ring.monomials(tick)
            for i, cval in enumerate(vec):
                if cval:
                    mono, n = monos[i][:-1], monos[i][-1]
                    coeff = self.inst.AY.from_poly(IntPoly.monomial(mono, cval))
                    tp = tp + TPoly(self.inst.AY, {n: coeff})
        return PairPoly(tp, self.inst.AX.zero())

    def _reduce_into_sector(self, tau: SectorId, w: PairPoly):
        """Reduce a representative into the target sector's ring."""
        if tau.trivial:
            if not w.y.coeff(0).is_zero():
                raise ConsistencyError(
                    "product representative has an A*(Y) constant term in "
                    "the untwisted sector")
            return self._pair_from_poly(w)
        if not w.x.is_zero():
            raise ConsistencyError(
                "twisted-sector representative carries an A*(X) part")
        ring = self.sector_ring(tau)
        out = ring.zero()
        for n, e in w.y.coeffs.items():
            out = out + embed(e, ring, power=n)
        return out

    def _pair_from_poly(self, w: PairPoly) -> PairElement:
        ring = self.pair_ring()
        per_degree: dict[int, TPoly] = {}
        for n, e in w.y.coeffs.items():
            for tick in e.comps:
                d = tick + n
                part = TPoly(self.inst.AY,
                             {n: self.inst.AY.element_at(tick, e.comps[tick])})
                per_degree[d] = per_degree.get(d, TPoly(self.inst.AY)) + part
        out = ring.zero()
        for d, tp in per_degree.items():
            out = out + ring.from_parts(d, tp, self.inst.AX.zero())
        for tick, vec in w.x.comps.items():
            out = out + ring.from_parts(tick, TPoly(self.inst.AY),
                                        self.inst.AX.element_at(tick, vec))
        return out

    def star(self, x: "StringyClass", y: "StringyClass") -> "StringyClass":
        """The stringy product, extended bilinearly over sector pairs."""
        terms: dict[SectorId, object] = {}
        for zeta, xe in x.terms.items():
            a = self.as_pair_poly(zeta, xe)
            for eta, ye in y.terms.items():
                tau = sector_mul(zeta, eta)
                if self.is_empty(tau):
                    continue
                b = self.as_pair_poly(eta, ye)
                w = a.mul(b, self.inst.pull).mul(self._c_pair(zeta, eta),
                                                 self.inst.pull)
                reduced = self._reduce_into_sector(tau, w)
                if tau in terms:
                    terms[tau] = terms[tau] + reduced
                else:
                    terms[tau] = reduced
        return self._make(terms)

    # -- grading and tables ----------------------------------------------------

    def stringy_degree(self, x: "StringyClass") -> Fraction | None:
        """Common grading of a homogeneous class; None if mixed or zero."""
        degs = set()
        for zeta, e in x.terms.items():
            d = e.degree()
            if d is None:
                return None
            degs.add(d + self.age(zeta))
        if len(degs) != 1:
            return None
        return next(iter(degs))

    def generators_up_to(self, d_cap: Fraction) -> list[tuple]:
        """Canonical stringy generators (sector, class, stringy degree)
        of stringy degree at most d_cap."""
        d_cap = Fraction(d_cap)
        out = []
        pair = self.pair_ring()
        for d in range(int(min(self.inst.d_max, d_cap)) + 1):
            for v in pair.piece(d).canonical_generators():
                out.append((TRIVIAL_SECTOR,
                            self.from_pair(pair.element_at(d, v)),
                            Fraction(d)))
        for zeta in self.sectors:
            if zeta.trivial:
                continue
            ring = self.sector_ring(zeta)
            age = self.age(zeta)
            for tick in range(ring.D + 1):
                sd = Fraction(tick, ring.L) + age
                if sd > d_cap or Fraction(tick, ring.L) > self.inst.d_max:
                    continue
                for v in ring.piece(tick).canonical_generators():
                    out.append((zeta,
                                self.single(zeta, ring.element_at(tick, v)),
                                sd))
        out.sort(key=lambda g: (g[2], g[0]))
        return out

    def multiplication_table(self, d_cap=None) -> "MultiplicationTable":
        """Star products of all pairs of canonical generators whose
        stringy degrees fit under the cap."""
        if d_cap is None:
            d_cap = self.inst.d_max
        d_cap = Fraction(d_cap)
        gens = self.generators_up_to(d_cap)
        products = {}
        for i, (_, gi, di) in enumerate(gens):
            for j, (_, gj, dj) in enumerate(gens):
                if di + dj <= self.inst.d_max:
                    products[(i, j)] = self.star(gi, gj)
        return MultiplicationTable(self, gens, products)


@dataclass
class MultiplicationTable:
    parent: StringyRing
    generators: list[tuple]
    products: dict[tuple[int, int], "StringyClass"]

    def is_symmetric(self) -> bool:
        return all(self.products[(i, j)] == self.products[(j, i)]
                   for (i, j) in self.products if (j, i) in self.products)


class StringyClass:
    """A finitely supported assignment of sector ring elements."""

    __slots__ = ("parent", "terms")

    def __init__(self, parent: StringyRing, terms: dict):
        self.parent = parent
        self.terms = terms

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "StringyClass"):
        if self.parent is not other.parent:
            raise GradedError("stringy classes of different rings")

    def __add__(self, other: "StringyClass") -> "StringyClass":
        self._check(other)
        terms = dict(self.terms)
        for z, e in other.terms.items():
            terms[z] = terms[z] + e if z in terms else e
        return self.parent._make(terms)

    def __neg__(self) -> "StringyClass":
        return self.parent._make({z: -e for z, e in self.terms.items()})

    def __sub__(self, other: "StringyClass") -> "StringyClass":
        return self + (-other)

    def scale(self, c: int) -> "StringyClass":
        return self.parent._make({z: e.scale(c) for z, e in self.terms.items()})

    def star(self, other: "StringyClass") -> "StringyClass":
        return self.parent.star(self, other)

    def __eq__(self, other) -> bool:
        return (isinstance(other, StringyClass)
                and self.parent is other.parent and self.terms == other.terms)

    def sector(self, zeta: SectorId):
        return self.terms.get(zeta)

    def degree(self) -> Fraction | None:
        return self.parent.stringy_degree(self)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for z in sorted(self.terms):
            e = self.terms[z]
            body = e.render()
            if z.trivial:
                parts.append(f"({body}) e_1")
            else:
                parts.append(f"({body}) e_{z.render()}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"<stringy {self.render()}>"
