"""Tests for sectors, ages, and the stringy product."""

from fractions import Fraction

import pytest

from instances import plane_conic_w2, plane_line_w2, plane_point, root_stack
from sbw.blowup import TPoly
from sbw.stringy import (
    TRIVIAL_SECTOR,
    EmptySectorError,
    SectorId,
    StringyRing,
    arg_pow,
    sector_from_arg,
    sector_mul,
)


def S(r, c):
    return SectorId(r, c)


def test_sector_id_validation():
    assert S(1, 0).trivial
    assert S(3, 2).arg == Fraction(2, 3)
    with pytest.raises(ValueError):
        S(4, 2)  # not reduced
    with pytest.raises(ValueError):
        S(3, 3)  # out of range


def test_enumerate_sectors_weight3():
    st = StringyRing(root_stack(3))
    assert st.sectors == [S(1, 0), S(3, 1), S(3, 2)]


def test_enumerate_sectors_weight1():
    st = StringyRing(plane_point((1, 1)))
    assert st.sectors == [S(1, 0)]


def test_enumerate_sectors_weights_2_4():
    st = StringyRing(plane_point((2, 4)))
    assert st.sectors == [S(1, 0), S(2, 1), S(4, 1), S(4, 3)]


def test_arg_pow():
    assert arg_pow(S(4, 3), 2) == Fraction(1, 2)
    assert arg_pow(S(3, 1), -1) == Fraction(2, 3)
    assert arg_pow(S(3, 2), 0) == 0
    assert arg_pow(S(1, 0), 5) == 0


def test_sector_mul():
    assert sector_mul(S(2, 1), S(3, 1)) == S(6, 5)
    assert sector_mul(S(2, 1), S(2, 1)) == S(1, 0)
    assert sector_mul(S(3, 1), S(3, 1)) == S(3, 2)
    assert sector_mul(TRIVIAL_SECTOR, S(3, 2)) == S(3, 2)


def test_age_root_stack():
    for b in (2, 3):
        st = StringyRing(root_stack(b))
        for n in range(1, b):
            zeta = sector_from_arg(Fraction(n, b))
            assert st.age(zeta) == Fraction(b - n, b)
    assert StringyRing(root_stack(3)).age(S(3, 1)) == Fraction(2, 3)


def test_age_weighted_point():
    st = StringyRing(plane_point((1, 2)))
    assert st.age(S(2, 1)) == 1
    assert st.age(TRIVIAL_SECTOR) == 0


def test_age_empty_sector_errors():
    st = StringyRing(plane_point((1, 2)))
    with pytest.raises(EmptySectorError):
        st.age(S(5, 1))


def test_sector_ring_is_exceptional_for_root_stack():
    inst = root_stack(3)
    st = StringyRing(inst)
    ring = st.sector_ring(S(3, 1))
    for d in range(5):
        assert ring.piece_invariants(d) == \
            inst.exceptional_ring().piece_invariants(d)


def test_sector_ring_weighted_point():
    st = StringyRing(plane_point((1, 2)))
    ring = st.sector_ring(S(2, 1))
    # Z[t]/(2t): torsion Z/2 in every positive degree.
    assert ring.piece_invariants(0) == (1, ())
    for d in range(1, 5):
        assert ring.piece_invariants(d) == (0, (2,))


def test_c_poly_trivial_left_factor():
    st = StringyRing(plane_point((1, 2)))
    for eta in st.sectors:
        cp = st.c_poly(TRIVIAL_SECTOR, eta)
        assert cp == TPoly.one(st.inst.AY)


def test_c_poly_root_stack_direct_labeling():
    # For the inclusion character (argument 1/3), the inverse arguments sum
    # to 4/3 >= 1, so the only qualifying factor is -t.
    st = StringyRing(root_stack(3))
    cp = st.c_poly(S(3, 1), S(3, 1))
    assert cp == TPoly.t_power(st.inst.AY, 1, -1)
    # For the square (argument 2/3) nothing qualifies.
    assert st.c_poly(S(3, 2), S(3, 2)) == TPoly.one(st.inst.AY)


def test_c_poly_weighted_point():
    st = StringyRing(plane_point((1, 2)))
    cp = st.c_poly(S(2, 1), S(2, 1))
    # Factors at a = -1 (gives -t) and a = 1 (gives t): product -t^2.
    assert cp == TPoly.t_power(st.inst.AY, 2, -1)


def test_c_poly_symmetry():
    st = StringyRing(plane_point((2, 4)))
    for z in st.sectors:
        for e in st.sectors:
            assert st.c_poly(z, e) == st.c_poly(e, z)


def test_star_unit():
    for inst in (root_stack(3), plane_point((1, 2)), plane_line_w2()):
        st = StringyRing(inst)
        one = st.unit()
        for _, g, _ in st.generators_up_to(st.inst.d_max):
            assert one.star(g) == g
            assert g.star(one) == g


def golden_root_stack_product(st, b, n1, n2):
    """Expected product of sector units per the root-stack closed form."""
    tau_arg = Fraction(n1 + n2, b) % 1
    tau = sector_from_arg(tau_arg)
    if 0 < n1 + n2 <= b and n1 > 0 and n2 > 0:
        if tau.trivial:
            return st.from_pair(st.inst.fundamental_class_exceptional())
        ring = st.sector_ring(tau)
        return st.single(tau, ring.generator_by_name("t").scale(-1))
    return st.sector_unit(tau)


def test_star_root_stack_golden():
    for b in (2, 3):
        st = StringyRing(root_stack(b))
        for n1 in range(1, b):
            for n2 in range(1, b):
                z1 = sector_from_arg(Fraction(n1, b))
                z2 = sector_from_arg(Fraction(n2, b))
                got = st.sector_unit(z1).star(st.sector_unit(z2))
                assert got == golden_root_stack_product(st, b, n1, n2), \
                    (b, n1, n2)


def test_star_weighted_point():
    st = StringyRing(plane_point((1, 2)))
    got = st.sector_unit(S(2, 1)).star(st.sector_unit(S(2, 1)))
    pair = st.pair_ring()
    expected = st.from_pair(pair.from_parts(
        2, TPoly.t_power(st.inst.AY, 2, -1), st.inst.AX.zero()))
    assert got == expected
    assert not got.is_zero()


def test_star_empty_sector_annihilates():
    st = StringyRing(plane_point((2, 3)))
    got = st.sector_unit(S(2, 1)).star(st.sector_unit(S(3, 1)))
    assert got.is_zero()


def test_star_sector_bookkeeping():
    st = StringyRing(plane_point((2, 4)))
    for z in st.sectors:
        for e in st.sectors:
            prod = st.sector_unit(z).star(st.sector_unit(e))
            tau = sector_mul(z, e)
            if st.is_empty(tau):
                assert prod.is_zero()
            else:
                assert set(prod.terms) <= {tau}


def test_star_commutative_and_associative():
    for inst in (root_stack(3), plane_point((1, 2)), plane_line_w2()):
        st = StringyRing(inst)
        gens = st.generators_up_to(st.inst.d_max)
        for _, x, dx in gens:
            for _, y, dy in gens:
                if dx + dy <= st.inst.d_max:
                    assert x.star(y) == y.star(x)
        for _, x, dx in gens:
            for _, y, dy in gens:
                for _, z, dz in gens:
                    if dx + dy + dz <= st.inst.d_max:
                        assert (x.star(y)).star(z) == x.star(y.star(z))


def test_star_grading():
    for inst in (root_stack(3), plane_point((1, 2)), plane_conic_w2()):
        st = StringyRing(inst)
        gens = st.generators_up_to(st.inst.d_max)
        for _, x, dx in gens:
            for _, y, dy in gens:
                if dx + dy <= st.inst.d_max:
                    p = x.star(y)
                    if not p.is_zero():
                        assert p.degree() == dx + dy


def test_ambient_closedness_precheck():
    # (alpha e_1) * e_zeta equals the sector restriction of alpha.
    for inst in (plane_line_w2(), plane_conic_w2(), plane_point((1, 2))):
        st = StringyRing(inst)
        pair = st.pair_ring()
        for zeta in st.sectors:
            if zeta.trivial:
                continue
            for d in range(int(inst.d_max) + 1):
                for v in pair.piece(d).canonical_generators():
                    alpha = pair.element_at(d, v)
                    lhs = st.from_pair(alpha).star(st.sector_unit(zeta))
                    expected = st.single(zeta,
                                         st.restrict_to_sector(zeta, alpha))
                    assert lhs == expected


def test_stringy_degree():
    st = StringyRing(root_stack(3))
    assert st.unit().degree() == 0
    t_e1 = st.from_pair(st.inst.fundamental_class_exceptional().scale(-1))
    assert t_e1.degree() == 1
    assert st.sector_unit(S(3, 1)).degree() == Fraction(2, 3)
    mixed = st.unit() + st.sector_unit(S(3, 1))
    assert mixed.degree() is None


def test_multiplication_table_root_stack_b2():
    st = StringyRing(root_stack(2))
    table = st.multiplication_table(2)
    assert table.is_symmetric()
    zeta = S(2, 1)
    idx = [i for i, (z, g, d) in enumerate(table.generators)
           if z == zeta and d == st.age(zeta)]
    assert len(idx) == 1
    i = idx[0]
    prod = table.products[(i, i)]
    assert prod == st.from_pair(st.inst.fundamental_class_exceptional())


def test_multiplication_table_weight1_is_classical():
    st = StringyRing(plane_point((1, 1)))
    table = st.multiplication_table(st.inst.d_max)
    assert all(z.trivial for z, _, _ in table.generators)
    for prod in table.products.values():
        assert set(prod.terms) <= {TRIVIAL_SECTOR}
