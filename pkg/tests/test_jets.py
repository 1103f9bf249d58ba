import json
from fractions import Fraction
from math import comb

import pytest

from scrollflex import jets
from scrollflex.errors import InvalidInputError, ResourceLimitError
from scrollflex.exactpoly import Poly
from scrollflex.jets import (BUNDLED_PROBES, JetProbeSpec, bundled_minor_report,
                             generic_jet_rank, inflection_equations,
                             jet_matrix, multi_indices, probe_rank,
                             product_rank_identity, segre_product_spec,
                             symbolic_jet_matrix, symbolic_jet_rank)


def test_multi_index_count_and_order():
    idx = multi_indices(2, 2)
    assert idx == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    assert len(multi_indices(3, 2)) == comb(5, 2)


def test_row_count_matches_binomial():
    for name in ("segre-2-1", "p1-cube", "bordiga"):
        spec = BUNDLED_PROBES[name].build()
        rows = symbolic_jet_matrix(spec)
        assert len(rows) == comb(spec.dimension + spec.order, spec.order)


def test_constants_only_jet_rank_is_one():
    spec = JetProbeSpec(("u1",), (Poly.const(("u1",), 1),
                                  Poly.const(("u1",), 3)), 1)
    assert generic_jet_rank(spec) == 1


def test_jet_matrix_exact_point():
    spec = BUNDLED_PROBES["segre-1-1"].build()
    matrix = jet_matrix(spec, (Fraction(1, 2), Fraction(1, 3)))
    # order 0 row is the coordinate vector itself
    assert matrix[0] == [1, Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)]


@pytest.mark.parametrize("name", sorted(BUNDLED_PROBES))
def test_bundled_probe_ranks(name):
    probe = BUNDLED_PROBES[name]
    assert generic_jet_rank(probe.build()) == probe.expected_rank


def test_symbolic_rank_certifies_sampled_rank():
    for name in ("segre-2-1", "two-summand-plane-scroll", "cubic-surface-scroll"):
        spec = BUNDLED_PROBES[name].build()
        assert symbolic_jet_rank(spec) == BUNDLED_PROBES[name].expected_rank


def test_pure_fiber_rows_vanish_on_scroll_charts():
    # charts linear in the fiber variables have zero rows for pure
    # fiber derivatives of order >= 2
    spec = BUNDLED_PROBES["segre-2-1"].build()
    rows = symbolic_jet_matrix(spec)
    idx = multi_indices(spec.dimension, spec.order)
    fiber = spec.variables.index("t1")
    for alpha, row in zip(idx, rows):
        if alpha[fiber] >= 2 and sum(alpha) == alpha[fiber]:
            assert all(entry.is_zero() for entry in row)


def test_minor_content_plane_scroll():
    report = bundled_minor_report("two-summand-plane-scroll", 9)
    v = Poly.variable(report.content.vars, "v")
    assert report.content == v ** 3
    assert report.reduced_locus == "v = 0"


def test_minor_content_cubic_scroll():
    report = bundled_minor_report("cubic-surface-scroll", 5)
    v = Poly.variable(report.content.vars, "v")
    assert report.content == v


def test_minor_content_bordiga_divisible_by_y():
    report = bundled_minor_report("bordiga", 9)
    y = Poly.variable(("x", "y", "w"), "y")
    assert report.nonzero_minors == 100
    assert all(m.is_zero() or m.divisible_by(y) for m in report.minors)
    exps = dict(zip(report.content.vars, report.content.monomial_content()))
    assert exps["y"] >= 1


def test_minor_size_guard():
    spec = BUNDLED_PROBES["segre-2-1"].build()
    with pytest.raises(InvalidInputError):
        inflection_equations(spec, 12)


def test_minor_count_guard():
    spec = BUNDLED_PROBES["p1-fifth"].build()
    with pytest.raises(ResourceLimitError):
        inflection_equations(spec, 12)


def test_product_identity_veronese():
    check = product_rank_identity(jets.veronese_chart(), 1)
    assert check.holds and check.direct == 9


def test_product_identity_cubic_scroll_base():
    check = product_rank_identity(jets.f1_cubic_chart(), 1)
    assert check.holds and check.direct == 8


@pytest.mark.parametrize("degree,order", [(3, 2), (3, 3), (4, 2), (4, 3)])
def test_product_identity_rational_curves(degree, order):
    base = jets.rational_normal_curve_chart(degree, order=order)
    check = product_rank_identity(base, 1)
    assert check.holds
    assert check.direct == 2 * order + 1


def test_segre_product_spec_shape():
    base = jets.veronese_chart()
    product = segre_product_spec(base, 2)
    assert len(product.coordinates) == 3 * len(base.coordinates)
    assert product.dimension == base.dimension + 2


def test_spec_payload_round_trip(tmp_path):
    spec = BUNDLED_PROBES["segre-2-1"].build()
    payload = spec.to_payload()
    again = JetProbeSpec.from_payload(json.loads(json.dumps(payload)))
    assert again == spec
    path = tmp_path / "probe.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    assert JetProbeSpec.load(path) == spec


def test_spec_validation():
    with pytest.raises(InvalidInputError):
        JetProbeSpec(("u1",), (), 2)
    with pytest.raises(InvalidInputError):
        JetProbeSpec(("u1",), (Poly.const(("u1",), 1),), 0)
    with pytest.raises(InvalidInputError):
        JetProbeSpec(("u1",), (Poly.zero(("u1",)),), 2)
    with pytest.warns(UserWarning):
        JetProbeSpec(("u1",), (Poly.variable(("u1",), "u1"),), 2)


def test_probe_rank_report_fields():
    scan = probe_rank(BUNDLED_PROBES["segre-1-1"].build())
    assert scan.rank == 4
    assert len(scan.per_trial) == scan.spec.trials
    assert scan.rows == comb(2 + 2, 2)
    assert max(scan.per_trial) == scan.rank
    payload = scan.to_payload()
    assert payload["rank"] == 4


def test_seed_reproducibility():
    spec = BUNDLED_PROBES["flag-threefold"].build()
    assert probe_rank(spec).per_trial == probe_rank(spec).per_trial


def test_point_rank_never_exceeds_generic_rank():
    import random

    rng = random.Random(5)
    for name in ("segre-2-1", "flag-threefold", "two-summand-plane-scroll"):
        spec = BUNDLED_PROBES[name].build()
        generic = generic_jet_rank(spec)
        for _ in range(5):
            point = tuple(Fraction(rng.randint(-20, 20), rng.randint(1, 7))
                          for _ in spec.variables)
            from scrollflex.linalg import rank_rational

            assert rank_rational(jet_matrix(spec, point)) <= generic
