"""Tests for the classical blowup Chow ring layer."""

from fractions import Fraction

import pytest

from instances import (
    plane_conic_w2,
    plane_line_w2,
    plane_point,
    root_stack,
)
from sbw.blowup import (
    BlowupInstance,
    CenterIdeal,
    TPoly,
    ValidationError,
)
from sbw.graded import RingMap, module_map_from_rules


def tpoly_coeff_ints(tp: TPoly) -> dict:
    """Flatten a TPoly over a zero-generator ring into {power: int}."""
    out = {}
    for n, e in tp.coeffs.items():
        out[n] = e.comps[0][0]
    return out


def test_e_poly_point_weight2():
    inst = plane_point((1, 2))
    e2 = inst.e_poly(2)
    assert e2.coeff(0).is_zero()
    assert e2.coeff(1) == inst.AY.one().scale(2)


def test_e_poly_conventions():
    inst = plane_point((1, 2))
    em1 = inst.e_poly(-1)
    assert em1.coeff(1) == inst.AY.one().scale(-1)
    assert em1.coeff(0).is_zero()
    e5 = inst.e_poly(5)
    assert e5.coeff(0) == inst.AY.one()
    assert len(e5.coeffs) == 1
    e0 = inst.e_poly(0)
    assert e0.coeff(0) == inst.AY.one()


def test_e_poly_merges_equal_weights():
    inst = plane_point((1, 1))
    e1 = inst.e_poly(1)
    # Two weight-1 ideals with vanishing Chern classes: t * t = t^2.
    assert e1.coeff(2) == inst.AY.one()
    assert e1.coeff(1).is_zero() and e1.coeff(0).is_zero()


def test_total_P():
    assert tpoly_coeff_ints(plane_point((1, 2)).total_P()) == {2: 2}
    assert tpoly_coeff_ints(root_stack(3).total_P()) == {1: 3}
    line = plane_line_w2()
    P = line.total_P()
    assert P.coeff(0) == line.AY.generator(0)
    assert P.coeff(1) == line.AY.one().scale(2)


def test_exceptional_ring_point_w12():
    E = plane_point((1, 2)).exceptional_ring()
    assert E.piece_invariants(0) == (1, ())
    assert E.piece_invariants(1) == (1, ())
    assert E.piece_invariants(2) == (0, (2,))
    assert E.piece_invariants(3) == (0, (2,))


def test_exceptional_ring_ordinary_blowup():
    E = plane_point((1, 1)).exceptional_ring()
    assert E.piece_invariants(0) == (1, ())
    assert E.piece_invariants(1) == (1, ())
    assert E.piece_invariants(2) == (0, ())


def test_exceptional_ring_line_w2():
    E = plane_line_w2().exceptional_ring()
    assert E.piece_invariants(1) == (1, ())


def test_blowup_ring_ordinary_point():
    ring = plane_point((1, 1)).blowup_ring()
    assert ring.piece_invariants(0) == (1, ())
    assert ring.piece_invariants(1) == (2, ())
    assert ring.piece_invariants(2) == (1, ())
    assert ring.piece_invariants(3) == (0, ())
    assert ring.piece_invariants(4) == (0, ())


def test_blowup_ring_classical_identities():
    # Ordinary blowup of a point in the plane: E * f^*H = 0, E^2 = -f^*[pt].
    inst = plane_point((1, 1))
    H = inst.AX.generator(0)
    E = inst.fundamental_class_exceptional()
    fH = inst.pull_f(H)
    assert (E * fH).is_zero()
    assert E * E == inst.pull_f(H * H).scale(-1)


def test_blowup_ring_weighted_self_intersection():
    # Weights (1, 2): 2 E^2 = -f^*[pt], with E^2 itself not of that form.
    inst = plane_point((1, 2))
    E = inst.fundamental_class_exceptional()
    pt = inst.pull_f(inst.AX.generator(0) * inst.AX.generator(0))
    assert (E * E).scale(2) == -pt
    assert E * E != -pt


def test_blowup_ring_root_stack():
    for b in (2, 3):
        ring = root_stack(b).blowup_ring()
        assert ring.piece_invariants(0) == (1, ())
        for d in range(1, 5):
            assert ring.piece_invariants(d) == (0, (b,))


def test_pair_unit():
    ring = plane_line_w2().blowup_ring()
    one = ring.one()
    for gens_deg in range(3):
        for x in ring.canonical_generators(gens_deg):
            assert one * x == x


def test_restrict_j_examples():
    inst = root_stack(3)
    ring = inst.blowup_ring()
    # (3t, 0) restricts to [3t] = 0 in Z[t]/(3t).
    x = ring.from_parts(1, TPoly.t_power(inst.AY, 1, 3), inst.AX.zero())
    assert x.is_zero() or inst.restrict_j(x).is_zero()
    assert inst.restrict_j(ring.from_parts(
        1, TPoly.t_power(inst.AY, 1, 1), inst.AX.zero())) \
        == inst.exceptional_ring().generator_by_name("t")


def test_restriction_of_pullback():
    inst = plane_line_w2()
    H = inst.AX.generator(0)
    E = inst.exceptional_ring()
    # (0, H) restricts to [i^*H] = [h].
    assert inst.restrict_j(inst.pull_f(H)) == E.generator_by_name("h")


def test_push_j_unit_is_fundamental_class():
    for make in (lambda: root_stack(3), lambda: plane_point((1, 2))):
        inst = make()
        E = inst.exceptional_ring()
        assert inst.push_j(E.one()) == inst.fundamental_class_exceptional()
        assert inst.push_j(E.zero()).is_zero()


def test_push_j_weighted_point():
    inst = plane_point((1, 2))
    E = inst.exceptional_ring()
    t = E.generator_by_name("t")
    img = inst.push_j(t)
    expected = inst.blowup_ring().from_parts(
        2, TPoly.t_power(inst.AY, 2, -1), inst.AX.zero())
    assert img == expected


def test_self_intersection_invariant():
    # restrict(push(y)) = -t * y on every per-degree canonical generator.
    for inst in (root_stack(2), plane_point((1, 2)), plane_line_w2(),
                 plane_conic_w2()):
        E = inst.exceptional_ring()
        t = E.generator_by_name("t")
        for tick in range(E.D):
            for v in E.piece(tick).canonical_generators():
                y = E.element_at(tick, v)
                assert inst.restrict_j(inst.push_j(y)) == -(t * y)


def test_restrict_j_is_ring_map():
    for inst in (plane_line_w2(), plane_conic_w2(), plane_point((1, 2))):
        ring = inst.blowup_ring()
        gens = []
        for d in range(int(inst.d_max) + 1):
            gens.extend(ring.canonical_generators(d))
        for x in gens:
            for y in gens:
                if x.degree() + y.degree() <= inst.d_max:
                    assert inst.restrict_j(x * y) == \
                        inst.restrict_j(x) * inst.restrict_j(y)


def test_pull_f_is_ring_map():
    inst = plane_line_w2()
    H = inst.AX.generator(0)
    assert inst.pull_f(inst.AX.one()) == inst.blowup_ring().one()
    assert inst.pull_f(H) * inst.pull_f(H) == inst.pull_f(H * H)


def test_classic_equivalence_line():
    report = plane_line_w2().classic_equivalence_report()
    assert report.surjective
    assert all(report.i_surjective.values())
    assert all(report.j_surjective.values())


def test_classic_equivalence_conic():
    report = plane_conic_w2().classic_equivalence_report()
    assert not report.surjective
    assert report.first_failure == 1
    assert report.i_surjective[Fraction(1)] is False
    assert report.j_surjective[Fraction(1)] is False
    assert report.i_surjective[Fraction(0)] is True


def test_classic_equivalence_point():
    report = plane_point((1, 2)).classic_equivalence_report()
    assert report.surjective


def test_validation_rejects_bad_projection_formula():
    from instances import _line_ring, _plane_ring

    AX = _plane_ring(4)
    AY = _line_ring(4)
    H, h = AX.generator(0), AY.generator(0)
    pull = RingMap(AX, AY, [h])
    # Pushing the unit to zero breaks i_*(1 * i^*H) = i_*(1) * H.
    push = module_map_from_rules(AY, AX, 1,
                                 [(AY.one(), AX.zero()), (h, H * H)])
    ideal = CenterIdeal("J", weight=2, codim=1, chern=[h], fundamental=H)
    inst = BlowupInstance(AX, AY, pull, push, [ideal], total_class=AX.zero())
    with pytest.raises(ValidationError):
        inst.validate()


def test_validation_rejects_chern_mismatch():
    from instances import _line_ring, _plane_ring

    AX = _plane_ring(4)
    AY = _line_ring(4, name="p")
    H, p = AX.generator(0), AY.generator(0)
    pull = RingMap(AX, AY, [p.scale(2)])
    push = module_map_from_rules(AY, AX, 1,
                                 [(AY.one(), H.scale(2)), (p, H * H)])
    ideal = CenterIdeal("J", weight=2, codim=1,
                        chern=[p.scale(3)], fundamental=H.scale(2))
    inst = BlowupInstance(AX, AY, pull, push, [ideal],
                          total_class=H.scale(2))
    with pytest.raises(ValidationError) as err:
        inst.validate()
    assert "Chern" in str(err.value) or "restriction" in str(err.value)


def test_weights_all_one_degeneration():
    # With all weights 1 the pair ring matches the ordinary blowup of the
    # plane in a point: ranks 1, 2, 1 and the classical relations.
    inst = plane_point((1, 1))
    ring = inst.blowup_ring()
    assert [ring.piece_invariants(d)[0] for d in range(3)] == [1, 2, 1]
    assert all(ring.piece_invariants(d)[1] == () for d in range(5))
