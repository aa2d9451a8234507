"""Classical intersection rings of a weighted blowup.

Given finite presentations of the Chow rings of the ambient variety X and
of the blowup center Y, the restriction map, the pushforward, and the
center data (one ideal per weight entry, with the Chern classes of its
conormal-dual bundle and its fundamental class), this module builds:

* the equivariant Euler-class polynomials of the weight summands of the
  normal sheaf (``e_poly``) and their product (``total_P``),
* the Chow ring of the exceptional divisor, a truncated quotient of
  A*(Y)[t],
* the Chow ring of the blowup itself as the pair module
  A*(Y)[t]*t (+) A*(X) modulo the gluing lattice, together with the
  restriction, pushforward, and pullback calculus relating the two.

``t`` denotes the first Chern class of the conormal bundle of the
exceptional divisor, so ``-t`` is the divisor's fundamental class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .graded import (
    BasedGradedRing,
    DegreePiece,
    DegreeOverflowError,
    Element,
    GradedError,
    ModuleMap,
    RingMap,
    RingPresentation,
    build,
    embed,
)
from .poly import IntPoly, render_term


class ValidationError(Exception):
    """Input data violates a structural identity; carries the witness."""


class ConsistencyError(Exception):
    """An identity the theory guarantees failed; indicates corrupt input."""


def element_to_poly(x: Element) -> IntPoly:
    """The canonical polynomial representative of a ring element."""
    ring = x.ring
    nvars = len(ring.pres.gens)
    out = IntPoly(nvars)
    for t, v in x.comps.items():
        monos = ring.monomials(t)
        for i, c in enumerate(v):
            if c:
                out = out + IntPoly.monomial(monos[i], c)
    return out


class TPoly:
    """A polynomial in t whose coefficients live in a fixed graded ring."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: BasedGradedRing, coeffs=None):
        self.ring = ring
        self.coeffs: dict[int, Element] = {}
        if coeffs:
            for n, e in coeffs.items():
                if not e.is_zero():
                    self.coeffs[n] = e

    @classmethod
    def constant(cls, e: Element) -> "TPoly":
        return cls(e.ring, {0: e})

    @classmethod
    def one(cls, ring: BasedGradedRing) -> "TPoly":
        return cls(ring, {0: ring.one()})

    @classmethod
    def t_power(cls, ring: BasedGradedRing, n: int, c: int = 1) -> "TPoly":
        return cls(ring, {n: ring.one().scale(c)})

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, n: int) -> Element:
        return self.coeffs.get(n, self.ring.zero())

    def __add__(self, other: "TPoly") -> "TPoly":
        out = dict(self.coeffs)
        for n, e in other.coeffs.items():
            out[n] = out[n] + e if n in out else e
        return TPoly(self.ring, out)

    def __neg__(self) -> "TPoly":
        return TPoly(self.ring, {n: -e for n, e in self.coeffs.items()})

    def __sub__(self, other: "TPoly") -> "TPoly":
        return self + (-other)

    def __mul__(self, other: "TPoly") -> "TPoly":
        out: dict[int, Element] = {}
        for n1, e1 in self.coeffs.items():
            for n2, e2 in other.coeffs.items():
                n = n1 + n2
                p = e1 * e2
                out[n] = out[n] + p if n in out else p
        return TPoly(self.ring, out)

    def scale_element(self, e: Element) -> "TPoly":
        return TPoly(self.ring, {n: c * e for n, c in self.coeffs.items()})

    def shift(self, k: int) -> "TPoly":
        return TPoly(self.ring, {n + k: e for n, e in self.coeffs.items()})

    def homogeneous_degree(self) -> Fraction | None:
        degs = {Fraction(n) + e.degree() for n, e in self.coeffs.items()
                if e.degree() is not None}
        if any(not e.is_homogeneous() for e in self.coeffs.values()):
            return None
        return next(iter(degs)) if len(degs) == 1 else None

    def __eq__(self, other) -> bool:
        return (isinstance(other, TPoly) and self.ring is other.ring
                and self.coeffs == other.coeffs)

    def render(self, tname: str = "t") -> str:
        if not self.coeffs:
            return "0"
        names = self.ring.pres.names()
        parts = []
        for n in sorted(self.coeffs):
            elem = self.coeffs[n]
            for tick in sorted(elem.comps):
                monos = self.ring.monomials(tick)
                for i, c in enumerate(elem.comps[tick]):
                    if c:
                        parts.append(render_term(c, monos[i] + (n,),
                                                 names + [tname]))
        text = parts[0]
        for p in parts[1:]:
            text += " - " + p[1:] if p.startswith("-") else " + " + p
        return text

    def to_intpoly(self) -> IntPoly:
        """Polynomial in (ring generators, t), for use in presentations."""
        nvars = len(self.ring.pres.gens)
        out = IntPoly(nvars + 1)
        for n, e in self.coeffs.items():
            p = element_to_poly(e)
            out = out + IntPoly(nvars + 1,
                                {m + (n,): c for m, c in p.terms.items()})
        return out


class PairPoly:
    """An element of A*(Y, X)[t]: a t-polynomial over A*(Y) plus an
    A*(X) constant, multiplied by the rule
    (q1, b1)(q2, b2) = (q1 q2 + q1 i^* b2 + q2 i^* b1, b1 b2)."""

    __slots__ = ("y", "x")

    def __init__(self, y: TPoly, x: Element):
        self.y = y
        self.x = x

    @classmethod
    def identity(cls, ay: BasedGradedRing, ax: BasedGradedRing) -> "PairPoly":
        return cls(TPoly(ay), ax.one())

    def mul(self, other: "PairPoly", pull: RingMap) -> "PairPoly":
        y = self.y * other.y
        if not other.x.is_zero():
            y = y + self.y.scale_element(pull.apply(other.x))
        if not self.x.is_zero():
            y = y + other.y.scale_element(pull.apply(self.x))
        return PairPoly(y, self.x * other.x)

    def scale(self, c: int) -> "PairPoly":
        return PairPoly(TPoly(self.y.ring,
                              {n: e.scale(c) for n, e in self.y.coeffs.items()}),
                        self.x.scale(c))


@dataclass
class CenterIdeal:
    """One summand (J, b) of the blowup center data."""

    name: str
    weight: int
    codim: int
    chern: list[Element]        # c_1 .. c_r of (J/J^2)^dual, in A*(Y)
    fundamental: Element        # [V(J)] in A^r(X)

    def euler_poly(self, ay: BasedGradedRing) -> TPoly:
        """c_r + b t c_{r-1} + ... + b^r t^r, the equivariant Euler class."""
        coeffs: dict[int, Element] = {}
        for j in range(self.codim + 1):
            c = ay.one() if j == self.codim else self.chern[self.codim - 1 - j]
            coeffs[j] = c.scale(self.weight ** j)
        return TPoly(ay, coeffs)


@dataclass
class BlowupInstance:
    """A weighted blowup described by exact Chow data.

    ``pull`` is the restriction A*(X) -> A*(Y); ``push`` is the
    pushforward A*(Y) -> A^{*+c}(X) where c is the codimension of the
    center.  ``total_class`` is the fundamental class of the center in
    A^c(X); when omitted it defaults to the product of the ideals'
    fundamental classes.
    """

    AX: BasedGradedRing
    AY: BasedGradedRing
    pull: RingMap
    push: ModuleMap
    ideals: list[CenterIdeal]
    total_class: Element | None = None
    _exceptional: BasedGradedRing | None = field(default=None, repr=False)
    _pair_ring: "PairRing | None" = field(default=None, repr=False)

    def __post_init__(self):
        if self.total_class is None:
            cls = self.AX.one()
            for ideal in self.ideals:
                cls = cls * ideal.fundamental
            self.total_class = cls

    # -- basic data ----------------------------------------------------

    @property
    def d_max(self) -> Fraction:
        return self.AX.pres.d_max

    @property
    def codim(self) -> int:
        return sum(i.codim for i in self.ideals)

    @property
    def weights(self) -> list[int]:
        return [i.weight for i in self.ideals]

    def e_poly(self, a: int) -> TPoly:
        """Euler-class factor attached to the integer a.

        Weight summands give their equivariant top Chern class (ideals
        sharing a weight are merged multiplicatively); a = -1 gives -t;
        every other integer gives 1.
        """
        if a == -1:
            return TPoly.t_power(self.AY, 1, -1)
        parts = [i for i in self.ideals if i.weight == a]
        if a <= 0 or not parts:
            return TPoly.one(self.AY)
        out = TPoly.one(self.AY)
        for ideal in parts:
            out = out * ideal.euler_poly(self.AY)
        return out

    def total_P(self) -> TPoly:
        """Product of the weight factors: the equivariant top Chern class
        of the whole weighted normal sheaf."""
        out = TPoly.one(self.AY)
        for a in sorted(set(self.weights)):
            out = out * self.e_poly(a)
        return out

    # -- validation ------------------------------------------------------

    def validate(self):
        """Run all structural consistency checks; raise on the first failure."""
        if not self.ideals:
            raise ValidationError("center data must contain at least one ideal")
        if self.AX.L != 1 or self.AY.L != 1:
            raise ValidationError("classical rings must be integer-graded")
        if self.AX.pres.d_max != self.AY.pres.d_max:
            raise ValidationError("A*(X) and A*(Y) must share d_max")
        c = self.codim
        if self.push.shift != c:
            raise ValidationError(
                f"pushforward shift {self.push.shift} != total codimension {c}")
        for ideal in self.ideals:
            if ideal.weight <= 0 or ideal.codim <= 0:
                raise ValidationError(
                    f"ideal {ideal.name}: weight and codimension must be positive")
            if len(ideal.chern) != ideal.codim:
                raise ValidationError(
                    f"ideal {ideal.name}: expected {ideal.codim} Chern classes")
            for j, cls in enumerate(ideal.chern, start=1):
                if not cls.is_zero() and cls.degree() != j:
                    raise ValidationError(
                        f"ideal {ideal.name}: c_{j} has degree {cls.degree()}")
            f = ideal.fundamental
            if not f.is_zero() and f.degree() != ideal.codim:
                raise ValidationError(
                    f"ideal {ideal.name}: fundamental class degree "
                    f"{f.degree()} != codimension {ideal.codim}")
            if self.pull.apply(f) != ideal.chern[-1]:
                raise ValidationError(
                    f"ideal {ideal.name}: top Chern class is not the "
                    "restriction of the fundamental class")
        y_cls = self.total_class
        if not y_cls.is_zero() and y_cls.degree() != c:
            raise ValidationError(
                f"center class degree {y_cls.degree()} != codimension {c}")
        p0 = self.total_P().coeff(0)
        if self.pull.apply(y_cls) != p0:
            raise ValidationError(
                "restriction of the center class does not equal the "
                "product of top Chern classes")
        if self.push.apply(self.AY.one()) != y_cls:
            raise ValidationError(
                "pushforward of the unit does not equal the center class")
        self._validate_projection_formula()

    def _validate_projection_formula(self):
        D = self.AX.D
        c = self.codim
        for ta in range(self.AY.D + 1):
            alphas = [self.AY.element_at(ta, v)
                      for v in self.AY.piece(ta).canonical_generators()]
            if not alphas:
                continue
            for tb in range(D - c - ta + 1):
                for vb in self.AX.piece(tb).canonical_generators():
                    beta = self.AX.element_at(tb, vb)
                    for alpha in alphas:
                        lhs = self.push.apply(alpha * self.pull.apply(beta))
                        rhs = self.push.apply(alpha) * beta
                        if lhs != rhs:
                            raise ValidationError(
                                "projection formula fails for "
                                f"(alpha={alpha.render()}, beta={beta.render()})")

    # -- derived rings -----------------------------------------------------

    def exceptional_ring(self) -> BasedGradedRing:
        """A*(Y)[t] modulo the total Euler-class polynomial."""
        if self._exceptional is None:
            rel = self.total_P().to_intpoly()
            pres = self.AY.pres.extended("t", 1, [rel])
            self._exceptional = build(pres)
        return self._exceptional

    def blowup_ring(self) -> "PairRing":
        if self._pair_ring is None:
            self._pair_ring = PairRing(self)
        return self._pair_ring

    # -- restriction / pushforward / pullback calculus ---------------------

    def restrict_j(self, x: "PairElement") -> Element:
        """Restriction to the exceptional divisor: (q, beta) |-> [q + i^* beta]."""
        E = self.exceptional_ring()
        out = E.zero()
        for d in x.comps:
            tp, beta = x.ring.to_parts(d, x.comps[d])
            for n, e in tp.coeffs.items():
                out = out + embed(e, E, power=n)
            ib = self.pull.apply(beta)
            if not ib.is_zero():
                out = out + embed(ib, E, power=0)
        return out

    def push_j(self, y: Element) -> "PairElement":
        """Pushforward from the exceptional divisor: multiplication by -t."""
        E = self.exceptional_ring()
        if y.ring is not E:
            raise GradedError("push_j expects an exceptional-ring element")
        ring = self.blowup_ring()
        out = ring.zero()
        for tick, v in y.comps.items():
            monos = E.monomials(tick)
            tp = TPoly(self.AY)
            for i, c in enumerate(v):
                if c:
                    mono, n = monos[i][:-1], monos[i][-1]
                    elem = self.AY.from_poly(IntPoly.monomial(mono, c))
                    tp = tp + TPoly(self.AY, {n: elem})
            shifted = (-tp).shift(1)
            out = out + ring.from_parts(tick + 1, shifted, self.AX.zero())
        return out

    def pull_f(self, beta: Element) -> "PairElement":
        """Pullback from the base: beta |-> (0, beta)."""
        ring = self.blowup_ring()
        out = ring.zero()
        for tick, v in beta.comps.items():
            out = out + ring.from_parts(tick, TPoly(self.AY),
                                        self.AX.element_at(tick, v))
        return out

    def fundamental_class_exceptional(self) -> "PairElement":
        """The class of the exceptional divisor, which is -t."""
        ring = self.blowup_ring()
        return ring.from_parts(1, TPoly.t_power(self.AY, 1, -1), self.AX.zero())

    def restriction_is_surjective(self) -> dict[Fraction, bool]:
        """Degreewise surjectivity of restriction to the exceptional divisor."""
        E = self.exceptional_ring()
        ring = self.blowup_ring()
        out: dict[Fraction, bool] = {}
        for d in range(int(self.d_max) + 1):
            rows = []
            piece = ring.piece(d)
            target = E.piece(d)
            for i in range(piece.n):
                basis = ring.element_at(d, [1 if k == i else 0
                                            for k in range(piece.n)])
                img = self.restrict_j(basis)
                rows.append(img.component(d) if not img.is_zero()
                            else [0] * target.n)
            out[Fraction(d)] = target.is_full_image(rows)
        return out

    def classic_equivalence_report(self) -> "ClassicReport":
        """Degreewise surjectivity of i^* and of j^*, which must agree."""
        i_surj = self.pull.is_surjective()
        j_surj = self.restriction_is_surjective()
        degrees = sorted(set(i_surj) & set(j_surj))
        mismatches = [d for d in degrees if i_surj[d] != j_surj[d]]
        if mismatches:
            raise ConsistencyError(
                "restriction surjectivity verdicts disagree in degrees "
                f"{mismatches}")
        report = ClassicReport(
            i_surjective={d: i_surj[d] for d in degrees},
            j_surjective={d: j_surj[d] for d in degrees},
            first_failure=next((d for d in degrees if not i_surj[d]), None),
        )
        return report


@dataclass
class ClassicReport:
    i_surjective: dict[Fraction, bool]
    j_surjective: dict[Fraction, bool]
    first_failure: Fraction | None

    @property
    def surjective(self) -> bool:
        return self.first_failure is None


class PairRing:
    """A*(X) of the blowup: pairs (q, beta) with q in A*(Y)[t] t and beta
    in A*(X), modulo the gluing lattice tying t-polynomials over the
    center to pushforwards, with its t-ideal closure."""

    def __init__(self, inst: BlowupInstance):
        self.inst = inst
        self.AX, self.AY = inst.AX, inst.AY
        self.D = int(inst.d_max)
        self.c = inst.codim
        self.P = inst.total_P()
        self.P0 = TPoly.constant(self.P.coeff(0))
        self.PmP0 = self.P - self.P0
        self._layout: dict[int, tuple] = {}
        self._pieces: dict[int, DegreePiece] = {}

    # Layout: per degree d, Y-side blocks (one per t-power) then X-monomials.
    def layout(self, d: int):
        if d not in self._layout:
            blocks = []
            pos = 0
            for n in range(1, d + 1):
                monos = self.AY.monomials(d - n)
                blocks.append((n, d - n, pos, len(monos)))
                pos += len(monos)
            xstart = pos
            xmonos = self.AX.monomials(d)
            labels = []
            ynames = self.AY.pres.names()
            for n, ay_tick, _, _ in blocks:
                for m in self.AY.monomials(ay_tick):
                    labels.append(render_term(1, m + (n,), ynames + ["t"]))
            xnames = self.AX.pres.names()
            for m in xmonos:
                labels.append(render_term(1, m, xnames))
            self._layout[d] = (blocks, xstart, len(xmonos), labels)
        return self._layout[d]

    def dim_raw(self, d: int) -> int:
        blocks, xstart, nx, _ = self.layout(d)
        return xstart + nx

    def piece(self, d: int) -> DegreePiece:
        if d < 0 or d > self.D:
            raise GradedError(f"degree {d} outside [0, {self.D}]")
        if d not in self._pieces:
            blocks, xstart, nx, labels = self.layout(d)
            rows: list[list[int]] = []
            total = xstart + nx
            # Structural relations of A*(Y), one copy per t-power.
            for n, ay_tick, pos, width in blocks:
                for r in self.AY.piece(ay_tick).rel_rows:
                    if any(r):
                        row = [0] * total
                        row[pos:pos + width] = r
                        rows.append(row)
            # Structural relations of A*(X).
            for r in self.AX.piece(d).rel_rows:
                if any(r):
                    row = [0] * total
                    row[xstart:] = r
                    rows.append(row)
            # Gluing: ((P - P(0)) a, push(a)) for a running over the
            # degree-(d - c) monomials of A*(Y).
            if d >= self.c:
                for m in self.AY.monomials(d - self.c):
                    alpha = self.AY.from_poly(IntPoly.monomial(m))
                    row = self._embed_tpoly(d, self.PmP0.scale_element(alpha))
                    img = self.inst.push.apply(alpha)
                    xv = img.component(d) if not img.is_zero() else [0] * nx
                    row[xstart:] = [a + b for a, b in zip(row[xstart:], xv)]
                    rows.append(row)
                # t-ideal closure: t^n * m * P for n >= 1.
                for n in range(1, d - self.c + 1):
                    for m in self.AY.monomials(d - self.c - n):
                        alpha = self.AY.from_poly(IntPoly.monomial(m))
                        tp = self.P.scale_element(alpha).shift(n)
                        rows.append(self._embed_tpoly(d, tp))
            self._pieces[d] = DegreePiece(labels, rows)
        return self._pieces[d]

    def _embed_tpoly(self, d: int, tp: TPoly) -> list[int]:
        blocks, xstart, nx, _ = self.layout(d)
        total = xstart + nx
        row = [0] * total
        index = {n: (pos, ay_tick) for n, ay_tick, pos, _ in blocks}
        for n, e in tp.coeffs.items():
            if e.is_zero():
                continue
            if n not in index:
                raise GradedError(
                    f"t-power {n} outside the degree-{d} layout")
            pos, ay_tick = index[n]
            v = e.component(ay_tick)
            for i, cval in enumerate(v):
                row[pos + i] += cval
        return row

    # -- elements -----------------------------------------------------------

    def _make(self, comps: dict[int, list[int]]) -> "PairElement":
        clean = {}
        for d, v in comps.items():
            v = self.piece(d).reduce(v)
            if any(v):
                clean[d] = v
        return PairElement(self, clean)

    def zero(self) -> "PairElement":
        return PairElement(self, {})

    def one(self) -> "PairElement":
        return self.from_parts(0, TPoly(self.AY), self.AX.one())

    def from_parts(self, d: int, tp: TPoly, x: Element) -> "PairElement":
        """Homogeneous pair of degree d from a zero-constant t-polynomial
        over A*(Y) and an A*(X) component."""
        if not tp.coeff(0).is_zero():
            raise GradedError(
                "the t-polynomial part of a pair must have zero constant term")
        if d > self.D:
            raise DegreeOverflowError(
                f"pair degree {d} exceeds d_max = {self.D}")
        blocks, xstart, nx, _ = self.layout(d)
        row = self._embed_tpoly(d, tp)
        if not x.is_zero():
            xv = x.component(d)
            row[xstart:] = [a + b for a, b in zip(row[xstart:], xv)]
        return self._make({d: row})

    def element_at(self, d: int, coords: list[int]) -> "PairElement":
        return self._make({d: list(coords)})

    def to_parts(self, d: int, vec: list[int]) -> tuple[TPoly, Element]:
        blocks, xstart, nx, _ = self.layout(d)
        coeffs: dict[int, Element] = {}
        for n, ay_tick, pos, width in blocks:
            if width:
                e = self.AY.element_at(ay_tick, vec[pos:pos + width])
                if not e.is_zero():
                    coeffs[n] = e
        x = self.AX.element_at(d, vec[xstart:]) if nx else self.AX.zero()
        return TPoly(self.AY, coeffs), x

    def piece_invariants(self, d: int):
        return self.piece(d).invariants()

    def canonical_generators(self, d: int) -> list["PairElement"]:
        return [self.element_at(d, v)
                for v in self.piece(d).canonical_generators()]


class PairElement:
    """An element of the blowup Chow ring in canonical reduced form."""

    __slots__ = ("ring", "comps")

    def __init__(self, ring: PairRing, comps: dict[int, list[int]]):
        self.ring = ring
        self.comps = comps

    def is_zero(self) -> bool:
        return not self.comps

    def _check(self, other: "PairElement"):
        if self.ring is not other.ring:
            raise GradedError("pair elements of different rings")

    def __add__(self, other: "PairElement") -> "PairElement":
        self._check(other)
        comps = {d: list(v) for d, v in self.comps.items()}
        for d, v in other.comps.items():
            if d in comps:
                comps[d] = [a + b for a, b in zip(comps[d], v)]
            else:
                comps[d] = list(v)
        return self.ring._make(comps)

    def __neg__(self) -> "PairElement":
        return self.ring._make(
            {d: [-x for x in v] for d, v in self.comps.items()})

    def __sub__(self, other: "PairElement") -> "PairElement":
        return self + (-other)

    def scale(self, c: int) -> "PairElement":
        if c == 0:
            return self.ring.zero()
        return self.ring._make(
            {d: [c * x for x in v] for d, v in self.comps.items()})

    def __mul__(self, other: "PairElement") -> "PairElement":
        self._check(other)
        ring = self.ring
        pull = ring.inst.pull
        out = ring.zero()
        for d1, v1 in self.comps.items():
            p1 = PairPoly(*ring.to_parts(d1, v1))
            for d2, v2 in other.comps.items():
                if d1 + d2 > ring.D:
                    raise DegreeOverflowError(
                        f"pair product degree {d1 + d2} exceeds d_max")
                p2 = PairPoly(*ring.to_parts(d2, v2))
                w = p1.mul(p2, pull)
                out = out + ring.from_parts(d1 + d2, w.y, w.x)
        return out

    def __eq__(self, other) -> bool:
        return (isinstance(other, PairElement) and self.ring is other.ring
                and self.comps == other.comps)

    def __hash__(self):
        return hash(tuple(sorted((d, tuple(v)) for d, v in self.comps.items())))

    def is_homogeneous(self) -> bool:
        return len(self.comps) <= 1

    def degree(self) -> Fraction | None:
        if len(self.comps) != 1:
            return None
        return Fraction(next(iter(self.comps)))

    def component(self, d: int) -> list[int]:
        return list(self.comps.get(d, [0] * self.ring.dim_raw(d)))

    def render(self) -> str:
        if not self.comps:
            return "(0, 0)"
        qs, xs = [], []
        for d in sorted(self.comps):
            tp, x = self.ring.to_parts(d, self.comps[d])
            if not tp.is_zero():
                qs.append(tp.render())
            if not x.is_zero():
                xs.append(x.render())
        return f"({' + '.join(qs) if qs else '0'}, {' + '.join(xs) if xs else '0'})"

    def __repr__(self) -> str:
        return f"<pair {self.render()}>"
