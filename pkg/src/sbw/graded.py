"""Degree-truncated canonical forms for finitely presented graded Z-algebras.

A ring is presented by generators of positive (possibly fractional) degree
and homogeneous integer polynomial relations.  Because every generator has
positive degree, each graded piece below the truncation bound is spanned by
finitely many monomials, and the ideal's piece in that degree is spanned by
monomial multiples of the relations.  Hermite reduction of the resulting
relation lattice gives unique canonical representatives per degree; Smith
form gives the invariant-factor presentation of each piece.  Torsion is
handled exactly, which is the whole point: rings like Z[t]/(2t^2) carry
nonzero torsion in every degree.

Degrees live in (1/L)Z for a per-ring denominator L; internally a degree d
is the integer "tick" d*L.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .poly import IntPoly, render_term
from .zlin import (
    IntMatrix,
    _smith_with_transforms,
    cokernel,
    hnf_rows,
    left_kernel_rows,
    reduce_mod_rows,
    solve_integer,
)


class GradedError(Exception):
    pass


class PresentationError(GradedError):
    pass


class DegreeOverflowError(GradedError):
    """A nonzero homogeneous component exceeds the truncation bound."""


@dataclass
class RingPresentation:
    """Generators with positive degrees plus homogeneous integer relations."""

    gens: list[tuple[str, Fraction]]
    relations: list[IntPoly] = field(default_factory=list)
    d_max: Fraction = Fraction(0)
    denominator: int | None = None

    def weights(self) -> list[Fraction]:
        return [d for _, d in self.gens]

    def names(self) -> list[str]:
        return [n for n, _ in self.gens]

    def extended(self, name: str, degree, extra_relations=None) -> "RingPresentation":
        """Presentation with one more generator appended.

        Old relations are reinterpreted in the larger variable set; the
        extra relations must already use the larger arity.
        """
        n = len(self.gens)
        lifted = [IntPoly(n + 1, {m + (0,): c for m, c in r.terms.items()})
                  for r in self.relations]
        return RingPresentation(
            gens=self.gens + [(name, Fraction(degree))],
            relations=lifted + list(extra_relations or []),
            d_max=self.d_max,
            denominator=self.denominator,
        )


class DegreePiece:
    """One graded piece: a monomial span modulo a relation lattice."""

    def __init__(self, labels: list[str], rel_rows: list[list[int]]):
        self.labels = labels
        self.n = len(labels)
        self.rel_rows = rel_rows
        self._hnf = None
        self._abgroup = None
        self._can_gens = None

    @property
    def hnf(self) -> list[list[int]]:
        if self._hnf is None:
            self._hnf = hnf_rows(self.rel_rows, self.n)
        return self._hnf

    def reduce(self, v: list[int]) -> list[int]:
        return reduce_mod_rows(v, self.hnf)

    def is_zero_class(self, v: list[int]) -> bool:
        return not any(self.reduce(v))

    def abgroup(self):
        if self._abgroup is None:
            rel_cols = IntMatrix.from_rows(self.rel_rows, self.n).transpose()
            self._abgroup = cokernel(rel_cols)
        return self._abgroup

    def invariants(self) -> tuple[int, tuple[int, ...]]:
        return self.abgroup().invariants()

    def canonical_generators(self) -> list[list[int]]:
        """Vectors whose classes generate the piece (torsion then free)."""
        if self._can_gens is None:
            rel_cols = IntMatrix.from_rows(self.rel_rows, self.n).transpose()
            U, D, _, Uinv, _ = _smith_with_transforms(rel_cols)
            k = rel_cols.cols
            gens = []
            for i in range(self.n):
                d = D.data[i][i] if i < min(self.n, k) else 0
                if d == 1:
                    continue
                v = self.reduce([Uinv.data[r][i] for r in range(self.n)])
                if any(v):
                    gens.append(v)
            self._can_gens = gens
        return self._can_gens

    def is_full_image(self, rows: list[list[int]]) -> bool:
        """Whether ``rows`` plus the relation lattice span all of Z^n."""
        if self.n == 0:
            return True
        H = hnf_rows(list(rows) + self.rel_rows, self.n)
        if len(H) != self.n:
            return False
        return all(H[i][j] == (1 if i == j else 0)
                   for i in range(self.n) for j in range(self.n))


def _monomials(ticks: list[int], d: int, i: int, memo) -> list[tuple[int, ...]]:
    if i == len(ticks):
        return [()] if d == 0 else []
    key = (d, i)
    if key not in memo:
        out = []
        w = ticks[i]
        for e in range(d // w + 1):
            for rest in _monomials(ticks, d - e * w, i + 1, memo):
                out.append((e,) + rest)
        memo[key] = out
    return memo[key]


class BasedGradedRing:
    """A graded ring with per-degree canonical normal forms up to d_max."""

    def __init__(self, pres: RingPresentation):
        if any(isinstance(d, float) for _, d in pres.gens):
            raise PresentationError("generator degrees must be exact rationals")
        pres = RingPresentation(
            gens=[(n, Fraction(d)) for n, d in pres.gens],
            relations=list(pres.relations),
            d_max=Fraction(pres.d_max),
            denominator=pres.denominator,
        )
        names = pres.names()
        if len(set(names)) != len(names):
            raise PresentationError("duplicate generator names")
        for n, d in pres.gens:
            if d <= 0:
                raise PresentationError(f"generator {n} has degree {d} <= 0")
        L = pres.denominator or lcm(1, *(d.denominator for _, d in pres.gens))
        for _, d in pres.gens:
            if (d * L).denominator != 1:
                raise PresentationError(
                    f"degree {d} not in (1/{L})Z")
        if (pres.d_max * L).denominator != 1:
            raise PresentationError("d_max must lie on the degree grid")
        self.pres = pres
        self.L = L
        self.ticks = [int(d * L) for _, d in pres.gens]
        self.D = int(pres.d_max * L)
        if self.D < 0:
            raise PresentationError("d_max must be nonnegative")
        weights = pres.weights()
        self.active_relations: list[tuple[IntPoly, int]] = []
        for r in pres.relations:
            if r.is_zero():
                continue
            if r.nvars != len(pres.gens):
                raise PresentationError("relation arity mismatch")
            deg = r.homogeneous_degree(weights)
            if deg is None:
                raise PresentationError(
                    f"relation {r.render(names)} is not homogeneous")
            if deg == 0:
                raise PresentationError(
                    f"relation {r.render(names)} lives in degree 0")
            if deg <= pres.d_max:
                self.active_relations.append((r, int(deg * L)))
            # Relations above d_max cannot touch any computed piece.
        self._memo: dict = {}
        self._mono_index: dict[int, dict[tuple[int, ...], int]] = {}
        self._pieces: dict[int, DegreePiece] = {}

    # -- structure ---------------------------------------------------------

    def monomials(self, tick: int) -> list[tuple[int, ...]]:
        return _monomials(self.ticks, tick, 0, self._memo)

    def mono_index(self, tick: int) -> dict[tuple[int, ...], int]:
        if tick not in self._mono_index:
            self._mono_index[tick] = {m: i for i, m
                                      in enumerate(self.monomials(tick))}
        return self._mono_index[tick]

    def piece(self, tick: int) -> DegreePiece:
        if tick < 0 or tick > self.D:
            raise GradedError(f"tick {tick} outside [0, {self.D}]")
        if tick not in self._pieces:
            monos = self.monomials(tick)
            index = self.mono_index(tick)
            rows = []
            names = self.pres.names()
            for r, rtick in self.active_relations:
                for m in self.monomials(tick - rtick):
                    vec = [0] * len(monos)
                    for rm, c in r.terms.items():
                        prod = tuple(a + b for a, b in zip(rm, m))
                        vec[index[prod]] += c
                    rows.append(vec)
            labels = [render_term(1, m, names) for m in monos]
            self._pieces[tick] = DegreePiece(labels, rows)
        return self._pieces[tick]

    def degree_of_tick(self, tick: int) -> Fraction:
        return Fraction(tick, self.L)

    def tick_of_degree(self, d) -> int:
        t = Fraction(d) * self.L
        if t.denominator != 1:
            raise GradedError(f"degree {d} not on the (1/{self.L})Z grid")
        return int(t)

    def piece_invariants(self, d) -> tuple[int, tuple[int, ...]]:
        return self.piece(self.tick_of_degree(d)).invariants()

    # -- elements ----------------------------------------------------------

    def _make(self, comps: dict[int, list[int]]) -> "Element":
        clean = {}
        for t, v in comps.items():
            v = self.piece(t).reduce(v)
            if any(v):
                clean[t] = v
        return Element(self, clean)

    def zero(self) -> "Element":
        return Element(self, {})

    def one(self) -> "Element":
        return self.from_poly(IntPoly.constant(len(self.pres.gens), 1))

    def generator(self, i: int) -> "Element":
        return self.from_poly(IntPoly.variable(len(self.pres.gens), i))

    def generator_by_name(self, name: str) -> "Element":
        return self.generator(self.pres.names().index(name))

    def from_poly(self, p: IntPoly) -> "Element":
        if p.nvars != len(self.pres.gens):
            raise GradedError("polynomial arity mismatch")
        comps: dict[int, list[int]] = {}
        for m, c in p.terms.items():
            tick = sum(e * t for e, t in zip(m, self.ticks))
            if tick > self.D:
                raise DegreeOverflowError(
                    f"monomial of degree {Fraction(tick, self.L)} exceeds "
                    f"d_max = {self.pres.d_max}")
            comps.setdefault(tick, [0] * len(self.monomials(tick)))
            comps[tick][self.mono_index(tick)[m]] += c
        return self._make(comps)

    def element_at(self, tick: int, coords: list[int]) -> "Element":
        return self._make({tick: list(coords)})


def build(pres: RingPresentation) -> BasedGradedRing:
    """Construct the per-degree canonical form of a presented graded ring."""
    return BasedGradedRing(pres)


class Element:
    """A ring element stored as canonical coordinates per graded piece."""

    __slots__ = ("ring", "comps")

    def __init__(self, ring: BasedGradedRing, comps: dict[int, list[int]]):
        self.ring = ring
        self.comps = comps

    def is_zero(self) -> bool:
        return not self.comps

    def _check(self, other: "Element"):
        if self.ring is not other.ring:
            raise GradedError("elements of different rings")

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        comps = {t: list(v) for t, v in self.comps.items()}
        for t, v in other.comps.items():
            if t in comps:
                comps[t] = [a + b for a, b in zip(comps[t], v)]
            else:
                comps[t] = list(v)
        return self.ring._make(comps)

    def __neg__(self) -> "Element":
        return self.ring._make(
            {t: [-x for x in v] for t, v in self.comps.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, c: int) -> "Element":
        if c == 0:
            return self.ring.zero()
        return self.ring._make(
            {t: [c * x for x in v] for t, v in self.comps.items()})

    def __mul__(self, other: "Element") -> "Element":
        self._check(other)
        ring = self.ring
        out: dict[int, list[int]] = {}
        for t1, v1 in self.comps.items():
            m1 = ring.monomials(t1)
            for t2, v2 in other.comps.items():
                t = t1 + t2
                if t > ring.D:
                    raise DegreeOverflowError(
                        f"product component of degree "
                        f"{Fraction(t, ring.L)} exceeds d_max")
                m2 = ring.monomials(t2)
                index = ring.mono_index(t)
                vec = out.setdefault(t, [0] * len(ring.monomials(t)))
                for i, a in enumerate(v1):
                    if not a:
                        continue
                    for j, b in enumerate(v2):
                        if not b:
                            continue
                        prod = tuple(x + y for x, y in zip(m1[i], m2[j]))
                        vec[index[prod]] += a * b
        return ring._make(out)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Element) and self.ring is other.ring
                and self.comps == other.comps)

    def __hash__(self):
        return hash(tuple(sorted((t, tuple(v)) for t, v in self.comps.items())))

    def is_homogeneous(self) -> bool:
        return len(self.comps) <= 1

    def degree(self) -> Fraction | None:
        """Degree of a nonzero homogeneous element, else None."""
        if len(self.comps) != 1:
            return None
        return Fraction(next(iter(self.comps)), self.ring.L)

    def component(self, tick: int) -> list[int]:
        return list(self.comps.get(tick, [0] * len(self.ring.monomials(tick))))

    def render(self) -> str:
        if not self.comps:
            return "0"
        names = self.ring.pres.names()
        parts = []
        for t in sorted(self.comps):
            monos = self.ring.monomials(t)
            for i, c in enumerate(self.comps[t]):
                if c:
                    parts.append(render_term(c, monos[i], names))
        text = parts[0]
        for p in parts[1:]:
            text += " - " + p[1:] if p.startswith("-") else " + " + p
        return text

    def __repr__(self) -> str:
        return f"<{self.render()}>"


class GradedMorphism:
    """Common interface of ring maps and degree-shifting module maps."""

    source: BasedGradedRing
    target: BasedGradedRing
    shift: Fraction

    def matrix_rows_at(self, src_tick: int) -> list[list[int]]:
        raise NotImplementedError

    def target_tick(self, src_tick: int) -> int:
        d = Fraction(src_tick, self.source.L) + self.shift
        return self.target.tick_of_degree(d)

    def apply(self, x: Element) -> Element:
        if x.ring is not self.source:
            raise GradedError("element not in the source ring")
        comps: dict[int, list[int]] = {}
        for t, v in x.comps.items():
            tt = self.target_tick(t)
            if tt > self.target.D:
                raise DegreeOverflowError(
                    "image degree exceeds the target truncation")
            rows = self.matrix_rows_at(t)
            n2 = len(self.target.monomials(tt))
            vec = comps.setdefault(tt, [0] * n2)
            for i, a in enumerate(v):
                if a:
                    for j in range(n2):
                        vec[j] += a * rows[i][j]
        return self.target._make(comps)

    def kernel_in_degree(self, d) -> list[Element]:
        """Generators of the degree-d kernel subgroup of the induced map."""
        src = self.source
        t = src.tick_of_degree(d)
        piece = src.piece(t)
        n = piece.n
        if n == 0:
            return []
        tt = self.target_tick(t)
        if tt > self.target.D:
            raise GradedError("kernel degree exceeds the target truncation")
        tgt_piece = self.target.piece(tt)
        A = self.matrix_rows_at(t)
        stacked = [list(r) for r in A] + [list(r) for r in tgt_piece.rel_rows]
        kernel_vs = [u[:n] for u in left_kernel_rows(stacked, tgt_piece.n)] \
            if stacked else [list(e) for e in IntMatrix.identity(n).data]
        rows = hnf_rows(kernel_vs + [list(r) for r in piece.rel_rows], n)
        out = []
        for v in rows:
            v = piece.reduce(v)
            if any(v):
                out.append(src.element_at(t, v))
        return out

    def is_surjective(self) -> dict[Fraction, bool]:
        """Per-degree surjectivity onto the target, over the target grid."""
        out: dict[Fraction, bool] = {}
        for tt in range(self.target.D + 1):
            d_tgt = Fraction(tt, self.target.L)
            d_src = d_tgt - self.shift
            rows: list[list[int]] = []
            if d_src >= 0:
                st = Fraction(d_src) * self.source.L
                if st.denominator == 1 and int(st) <= self.source.D:
                    rows = self.matrix_rows_at(int(st))
            out[d_tgt] = self.target.piece(tt).is_full_image(rows)
        return out


class RingMap(GradedMorphism):
    """A graded ring homomorphism given by generator images."""

    def __init__(self, source: BasedGradedRing, target: BasedGradedRing,
                 images: list[Element], validate: bool = True):
        if len(images) != len(source.pres.gens):
            raise GradedError("one image per source generator required")
        self.source, self.target = source, target
        self.shift = Fraction(0)
        for (name, d), img in zip(source.pres.gens, images):
            if not img.is_zero() and img.degree() != d:
                raise GradedError(
                    f"image of {name} must be homogeneous of degree {d}")
        self.images = images
        self._mono_cache: dict[tuple[int, ...], Element] = {}
        self._matrix_cache: dict[int, list[list[int]]] = {}
        if validate:
            names = source.pres.names()
            for r, _ in source.active_relations:
                if not self.eval_poly(r).is_zero():
                    raise GradedError(
                        f"relation {r.render(names)} does not map to zero")

    def eval_poly(self, p: IntPoly) -> Element:
        out = self.target.zero()
        for m, c in p.terms.items():
            out = out + self.mono_image(m).scale(c)
        return out

    def mono_image(self, mono: tuple[int, ...]) -> Element:
        if mono not in self._mono_cache:
            out = self.target.one()
            for i, e in enumerate(mono):
                for _ in range(e):
                    out = out * self.images[i]
            self._mono_cache[mono] = out
        return self._mono_cache[mono]

    def matrix_rows_at(self, src_tick: int) -> list[list[int]]:
        if src_tick not in self._matrix_cache:
            tt = self.target_tick(src_tick)
            n2 = len(self.target.monomials(tt))
            rows = []
            for m in self.source.monomials(src_tick):
                img = self.mono_image(m)
                rows.append(img.component(tt) if not img.is_zero()
                            else [0] * n2)
            self._matrix_cache[src_tick] = rows
        return self._matrix_cache[src_tick]

    def apply(self, x: Element) -> Element:
        if x.ring is not self.source:
            raise GradedError("element not in the source ring")
        out = self.target.zero()
        for t, v in x.comps.items():
            monos = self.source.monomials(t)
            for i, c in enumerate(v):
                if c:
                    out = out + self.mono_image(monos[i]).scale(c)
        return out


def identity_map(ring: BasedGradedRing) -> RingMap:
    return RingMap(ring, ring,
                   [ring.generator(i) for i in range(len(ring.pres.gens))],
                   validate=False)


class ModuleMap(GradedMorphism):
    """An additive degree-shifting map given by per-degree matrices."""

    def __init__(self, source: BasedGradedRing, target: BasedGradedRing,
                 shift, matrices: dict[int, list[list[int]]],
                 validate: bool = True):
        self.source, self.target = source, target
        self.shift = Fraction(shift)
        if self.shift < 0:
            raise GradedError("module maps must have nonnegative shift")
        self.matrices = matrices
        if validate:
            for t, rows in matrices.items():
                piece = source.piece(t)
                if len(rows) != piece.n:
                    raise GradedError(
                        f"matrix at degree {source.degree_of_tick(t)} has "
                        f"{len(rows)} rows, expected {piece.n}")
                tt = self.target_tick(t)
                tgt = self.target.piece(tt)
                for r in piece.rel_rows:
                    img = [0] * tgt.n
                    for i, a in enumerate(r):
                        if a:
                            for j in range(tgt.n):
                                img[j] += a * rows[i][j]
                    if not tgt.is_zero_class(img):
                        raise GradedError(
                            f"matrix at degree {source.degree_of_tick(t)} "
                            "does not kill the relation lattice")

    def matrix_rows_at(self, src_tick: int) -> list[list[int]]:
        if src_tick in self.matrices:
            return self.matrices[src_tick]
        n = len(self.source.monomials(src_tick))
        n2 = len(self.target.monomials(self.target_tick(src_tick)))
        src_zero = self.source.piece(src_tick).is_full_image([])
        tgt_zero = self.target.piece(self.target_tick(src_tick)).is_full_image([])
        if not src_zero and not tgt_zero:
            raise GradedError(
                f"no matrix provided at source degree "
                f"{self.source.degree_of_tick(src_tick)}")
        return [[0] * n2 for _ in range(n)]


def module_map_from_rules(source: BasedGradedRing, target: BasedGradedRing,
                          shift, pairs: list[tuple[Element, Element]],
                          max_source_degree=None) -> ModuleMap:
    """Build a module map from (source element, image) samples.

    For every source degree whose piece is nonzero (up to the bound), the
    samples of that degree together with the relation lattice must span
    the piece; the matrix on the monomial basis is then solved for by
    integer linear algebra.  Inconsistent samples are rejected.
    """
    shift = Fraction(shift)
    by_tick: dict[int, list[tuple[list[int], list[int]]]] = {}
    for x, y in pairs:
        if x.is_zero():
            raise GradedError("zero source element in a map rule")
        if not x.is_homogeneous() or not y.is_homogeneous():
            raise GradedError("map rules must be homogeneous")
        t = next(iter(x.comps))
        if not y.is_zero() and y.degree() != x.degree() + shift:
            raise GradedError(
                f"rule image degree {y.degree()} != source degree "
                f"{x.degree()} + shift {shift}")
        tt = target.tick_of_degree(x.degree() + shift)
        by_tick.setdefault(t, []).append(
            (x.component(t), y.component(tt) if not y.is_zero()
             else [0] * len(target.monomials(tt))))

    if max_source_degree is None:
        max_source_degree = source.pres.d_max
    matrices: dict[int, list[list[int]]] = {}
    for t in range(source.D + 1):
        d = source.degree_of_tick(t)
        if d > max_source_degree or d + shift > target.pres.d_max:
            continue
        piece = source.piece(t)
        if piece.n == 0:
            matrices[t] = []
            continue
        tt = target.tick_of_degree(d + shift)
        tgt_piece = target.piece(tt)
        rules = by_tick.get(t, [])
        V = [v for v, _ in rules]
        W = [w for _, w in rules]
        R = [list(r) for r in piece.rel_rows]
        if not piece.is_full_image(V):
            raise GradedError(
                f"map rules do not span the source in degree {d}")
        # Well-definedness: integer relations among the samples (and the
        # source relations) must map into the target relation lattice.
        stacked = V + R
        for u in (left_kernel_rows(stacked, piece.n) if stacked else []):
            img = [0] * tgt_piece.n
            for c, w in zip(u[:len(V)], W):
                for j in range(tgt_piece.n):
                    img[j] += c * w[j]
            if not tgt_piece.is_zero_class(img):
                raise GradedError(
                    f"map rules are inconsistent in degree {d}")
        M = IntMatrix.from_rows(stacked, piece.n).transpose()
        rows = []
        for j in range(piece.n):
            e = [1 if i == j else 0 for i in range(piece.n)]
            sol = solve_integer(M, e)
            if sol is None:
                raise GradedError(
                    f"map rules do not span the source in degree {d}")
            img = [0] * tgt_piece.n
            for c, w in zip(sol[:len(V)], W):
                for jj in range(tgt_piece.n):
                    img[jj] += c * w[jj]
            rows.append(tgt_piece.reduce(img))
        matrices[t] = rows
    return ModuleMap(source, target, shift, matrices)


def embed(x: Element, target: BasedGradedRing, power: int = 0) -> Element:
    """Reinterpret ``x`` in an extension ring with one appended generator.

    The target's generators must be the source's generators plus one final
    variable; the image is x times (last variable)^power.
    """
    src = x.ring
    if [g for g in target.pres.gens[:-1]] != [g for g in src.pres.gens]:
        raise GradedError("target is not a one-variable extension")
    comps: dict[int, list[int]] = {}
    step = target.ticks[-1] * power
    for t, v in x.comps.items():
        d = src.degree_of_tick(t)
        tt = target.tick_of_degree(d) + step
        if tt > target.D:
            raise DegreeOverflowError("embedding exceeds target truncation")
        monos = src.monomials(t)
        index = target.mono_index(tt)
        vec = comps.setdefault(tt, [0] * len(target.monomials(tt)))
        for i, c in enumerate(v):
            if c:
                vec[index[monos[i] + (power,)]] += c
    return target._make(comps)
