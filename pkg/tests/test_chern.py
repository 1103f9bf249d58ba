import random
from fractions import Fraction

import pytest

from scrollflex.chern import (FormalBundle, GradedClass, GradedRing,
                              GradedVariable, bundle_from_classes, direct_sum,
                              dual, series_inverse, sym_power, tensor,
                              tensor_line, trivial_bundle)
from scrollflex.errors import (InvalidInputError, ResourceLimitError,
                               RingMismatchError)


def ring_b(truncation=3):
    return GradedRing([GradedVariable("b1", 1), GradedVariable("b2", 2),
                       GradedVariable("b3", 3)], truncation)


def surface_ring(truncation=2):
    return GradedRing([GradedVariable("c1", 1), GradedVariable("c2", 2),
                       GradedVariable("v1", 1), GradedVariable("v2", 2)],
                      truncation)


# -- series inverse -----------------------------------------------------------


def test_inverse_of_one_is_one():
    ring = ring_b()
    assert ring.one().series_inverse() == ring.one()


def test_inverse_rank3_closed_form():
    ring = ring_b()
    b1, b2, b3 = (ring.variable(n) for n in ("b1", "b2", "b3"))
    inv = (ring.one() + b1 + b2 + b3).series_inverse()
    assert inv == ring.one() - b1 + (b1 ** 2 - b2) + (-(b1 ** 3) + 2 * b1 * b2 - b3)


def test_inverse_of_binomial_series():
    # coefficients of (1 - L)^(-3) are binom(j + 2, 2): 1, 3, 6, 10, 15
    ring = GradedRing([GradedVariable("L", 1)], 4)
    L = ring.variable("L")
    inv = ((ring.one() - L) ** 3).series_inverse()
    assert [inv.coefficient([j]) for j in range(5)] == [1, 3, 6, 10, 15]


def test_inverse_requires_unit_constant_term():
    ring = ring_b()
    with pytest.raises(InvalidInputError):
        (2 * ring.one()).series_inverse()
    with pytest.raises(InvalidInputError):
        ring.variable("b1").series_inverse()


# -- dual ----------------------------------------------------------------------


def test_dual_trivial_bundle():
    ring = ring_b()
    e = trivial_bundle(ring, 4)
    assert dual(e) == e


def test_dual_inverse_matches_surface_expansion():
    ring = surface_ring()
    v1, v2 = ring.variable("v1"), ring.variable("v2")
    V = bundle_from_classes(2, [v1, v2])
    assert dual(V).total_chern.series_inverse() == ring.one() + v1 + (v1 ** 2 - v2)


def test_dual_is_involution_on_random_bundles():
    rng = random.Random(7)
    ring = ring_b(4)
    for _ in range(25):
        rank = rng.randint(1, 4)
        cls = ring.one()
        for name in ("b1", "b2", "b3"):
            cls = cls + ring.variable(name) * rng.randint(-3, 3)
        e = FormalBundle(rank, cls)
        assert dual(dual(e)) == e


# -- tensor by a line class -----------------------------------------------------


def test_tensor_line_identity():
    ring = surface_ring()
    e = bundle_from_classes(2, [ring.variable("c1"), ring.variable("c2")])
    assert tensor_line(e, ring.zero(), 1) == e
    assert tensor_line(e, ring.zero(), -1) == e


def test_tensor_line_rejects_inhomogeneous():
    ring = surface_ring()
    e = trivial_bundle(ring, 2)
    with pytest.raises(InvalidInputError):
        tensor_line(e, ring.one() + ring.variable("c1"), -1)
    with pytest.raises(InvalidInputError):
        tensor_line(e, ring.variable("c1"), 2)


def test_twisted_square_tangent_surface():
    # rank-3 twist by the dual hyperplane class on a threefold scroll
    ring = GradedRing([GradedVariable("L", 1),
                       GradedVariable("C1", 1, "base"),
                       GradedVariable("C2", 2, "base")], 3, {"base": 2})
    L, C1, C2 = (ring.variable(n) for n in ("L", "C1", "C2"))
    s2 = bundle_from_classes(3, [3 * C1, 2 * C1 ** 2 + 4 * C2, ring.zero()])
    twisted = tensor_line(s2, L, -1)
    expected = (ring.one() + (3 * C1 - 3 * L)
                + (2 * C1 ** 2 + 4 * C2 - 6 * C1 * L + 3 * L ** 2)
                - ((2 * C1 ** 2 + 4 * C2) * L - 3 * C1 * L ** 2 + L ** 3))
    assert twisted.total_chern == expected


def test_twisted_square_tangent_threefold():
    ring = GradedRing([GradedVariable("L", 1),
                       GradedVariable("C1", 1, "base"),
                       GradedVariable("C2", 2, "base"),
                       GradedVariable("C3", 3, "base")], 4, {"base": 3})
    L, C1, C2, C3 = (ring.variable(n) for n in ("L", "C1", "C2", "C3"))
    s2 = bundle_from_classes(
        6, [4 * C1, 5 * (C1 ** 2 + C2), 2 * C1 ** 3 + 11 * C1 * C2 + 7 * C3])
    twisted = tensor_line(s2, L, -1)
    assert twisted.chern(1) == 4 * C1 - 6 * L
    assert twisted.chern(2) == 5 * (C1 ** 2 + C2) - 20 * C1 * L + 15 * L ** 2
    assert twisted.chern(3) == (2 * C1 ** 3 + 11 * C1 * C2 + 7 * C3
                                - 20 * (C1 ** 2 + C2) * L + 40 * C1 * L ** 2
                                - 20 * L ** 3)
    assert twisted.chern(4) == (-3 * (2 * C1 ** 3 + 11 * C1 * C2 + 7 * C3) * L
                                + 30 * (C1 ** 2 + C2) * L ** 2
                                - 40 * C1 * L ** 3 + 15 * L ** 4)


# -- tensor products -------------------------------------------------------------


def test_tensor_surface_components():
    # dual(V) (x) T_Y over a surface, rank V = n - 1
    for n in (3, 4, 5):
        ring = surface_ring()
        c1, c2, v1, v2 = (ring.variable(s) for s in ("c1", "c2", "v1", "v2"))
        classes = [v1, v2] + [ring.zero()] * (n - 3)
        V = bundle_from_classes(n - 1, classes)
        T = bundle_from_classes(2, [c1, c2])
        W = tensor(dual(V), T)
        assert W.chern(1) == -2 * v1 + (n - 1) * c1
        from math import comb
        assert W.chern(2) == (v1 ** 2 + 2 * v2 - (2 * n - 3) * v1 * c1
                              + comb(n - 1, 2) * c1 ** 2 + (n - 1) * c2)


def test_tensor_threefold_components():
    ring = GradedRing([GradedVariable("c1", 1), GradedVariable("c2", 2),
                       GradedVariable("c3", 3), GradedVariable("v1", 1),
                       GradedVariable("v2", 2)], 3)
    c1, c2, c3, v1, v2 = (ring.variable(s) for s in ("c1", "c2", "c3", "v1", "v2"))
    W = tensor(dual(bundle_from_classes(2, [v1, v2])),
               bundle_from_classes(3, [c1, c2, c3]))
    assert W.chern(1) == -3 * v1 + 2 * c1
    assert W.chern(2) == 3 * v1 ** 2 + 3 * v2 - 5 * c1 * v1 + c1 ** 2 + 2 * c2
    assert W.chern(3) == (-(v1 ** 3) - 6 * v1 * v2 + 4 * c1 * (v1 ** 2 + v2)
                          - (2 * c1 ** 2 + 4 * c2) * v1 + 2 * c1 * c2 + 2 * c3)


def test_tensor_of_lines_adds_first_chern():
    ring = surface_ring()
    a = bundle_from_classes(1, [ring.variable("c1")])
    b = bundle_from_classes(1, [ring.variable("v1")])
    assert tensor(a, b).chern(1) == ring.variable("c1") + ring.variable("v1")


def test_tensor_with_trivial_line_is_identity():
    ring = surface_ring()
    e = bundle_from_classes(2, [ring.variable("v1"), ring.variable("v2")])
    assert tensor(e, trivial_bundle(ring, 1)) == e


def test_tensor_matches_tensor_line_for_rank_one():
    ring = surface_ring()
    e = bundle_from_classes(2, [ring.variable("v1"), ring.variable("v2")])
    line = bundle_from_classes(1, [ring.variable("c1")])
    assert tensor(e, line).total_chern == tensor_line(e, ring.variable("c1"), 1).total_chern


def test_tensor_rank_guard():
    ring = surface_ring()
    with pytest.raises(ResourceLimitError):
        tensor(trivial_bundle(ring, 9), trivial_bundle(ring, 9))


# -- symmetric powers --------------------------------------------------------------


def test_sym_power_identity():
    ring = surface_ring()
    e = bundle_from_classes(2, [ring.variable("c1"), ring.variable("c2")])
    assert sym_power(e, 1) == e


def test_sym_square_rank2():
    ring = surface_ring()
    c1, c2 = ring.variable("c1"), ring.variable("c2")
    s2 = sym_power(bundle_from_classes(2, [c1, c2]), 2)
    assert s2.rank == 3
    assert s2.total_chern == ring.one() + 3 * c1 + (2 * c1 ** 2 + 4 * c2)


def test_sym_square_rank3():
    ring = GradedRing([GradedVariable("c1", 1), GradedVariable("c2", 2),
                       GradedVariable("c3", 3)], 3)
    c1, c2, c3 = (ring.variable(s) for s in ("c1", "c2", "c3"))
    s2 = sym_power(bundle_from_classes(3, [c1, c2, c3]), 2)
    assert s2.rank == 6
    assert s2.total_chern == (ring.one() + 4 * c1 + 5 * (c1 ** 2 + c2)
                              + 2 * c1 ** 3 + 11 * c1 * c2 + 7 * c3)


def test_sym_rank_guard():
    ring = surface_ring()
    with pytest.raises(ResourceLimitError):
        sym_power(trivial_bundle(ring, 5), 4)  # rank binom(8, 4) = 70 > 64


# -- structural invariants ------------------------------------------------------------


def test_whitney_additivity():
    ring = surface_ring()
    a = bundle_from_classes(2, [ring.variable("c1"), ring.variable("c2")])
    b = bundle_from_classes(1, [ring.variable("v1")])
    s = direct_sum(a, b)
    assert s.rank == 3
    assert s.total_chern == a.total_chern * b.total_chern


def test_ring_mismatch_raises():
    r1 = surface_ring()
    r2 = surface_ring(truncation=3)
    with pytest.raises(RingMismatchError):
        r1.variable("c1") + r2.variable("c1")
    with pytest.raises(RingMismatchError):
        r1.variable("c1") * r2.variable("c1")


def test_degree_of_zero_is_undefined_marker():
    ring = surface_ring()
    assert ring.zero().degree() is None
    assert ring.one().degree() == 0
    assert ring.variable("c2").degree() == 2


def test_truncation_applies_to_products():
    ring = surface_ring(truncation=2)
    c1 = ring.variable("c1")
    assert (c1 ** 3).is_zero()


def test_sector_caps_kill_base_overflow():
    ring = GradedRing([GradedVariable("L", 1),
                       GradedVariable("C1", 1, "base")], 3, {"base": 2})
    C1 = ring.variable("C1")
    L = ring.variable("L")
    assert (C1 ** 3).is_zero()
    assert not (C1 ** 2 * L).is_zero()


def test_serialization_round_trip():
    ring = GradedRing([GradedVariable("L", 1),
                       GradedVariable("C1", 1, "base")], 3, {"base": 2})
    cls = 3 * ring.variable("L") - ring.variable("C1") * Fraction(5, 2)
    again = GradedClass.from_payload(cls.to_payload())
    assert again == cls
    assert again.ring == ring


def test_substitute_homogeneity_enforced():
    ring = surface_ring()
    target = surface_ring()
    with pytest.raises(InvalidInputError):
        ring.variable("c2").substitute(target, {"c2": target.variable("c1")})


def test_canonical_string_order():
    ring = GradedRing([GradedVariable("L", 1),
                       GradedVariable("C1", 1, "base"),
                       GradedVariable("V1", 1, "base")], 3, {"base": 2})
    L, C1, V1 = (ring.variable(n) for n in ("L", "C1", "V1"))
    cls = 3 * L + 3 * V1 - 5 * C1
    assert str(cls) == "3*L - 5*C1 + 3*V1"


def test_every_stored_term_respects_the_grading():
    rng = random.Random(33)
    ring = GradedRing([GradedVariable("L", 1),
                       GradedVariable("C1", 1, "base"),
                       GradedVariable("C2", 2, "base")], 4, {"base": 2})
    classes = [ring.one(), ring.variable("L") + ring.variable("C1"),
               ring.variable("C2") - 2 * ring.variable("L") ** 2]
    for _ in range(50):
        a, b = rng.choice(classes), rng.choice(classes)
        out = rng.choice([a + b, a * b, a - b, a ** 2])
        classes.append(out)
        for exps in out.terms:
            assert ring.admits(exps)
            assert out.terms[exps] != 0
