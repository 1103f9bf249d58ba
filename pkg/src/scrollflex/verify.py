"""Full regression table: engine output against every transcribed form.

Each check is a pure function returning (ok, detail).  ``run_checks``
executes them (concurrently; results are reported in sorted order) and is
the backing for both the command-line ``verify`` command and the
acceptance test suite.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Callable

from . import formulas, jets, scans
from .exactpoly import Poly
from .scroll import (BASE_PRESETS, ScrollSetup, degree_class,
                     degree_of_inflection, graded_to_poly, inflection_class,
                     max_rank, scroll_ring, symbolic_degree, total_chern_E_k)


@dataclass
class CheckResult:
    identifier: str
    ok: bool
    detail: str

    def row(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'}  {self.identifier}  {self.detail}"


Check = tuple[str, Callable[[], tuple[bool, str]]]


def _eq(got, want) -> tuple[bool, str]:
    if got == want:
        return True, f"= {got}"
    return False, f"got {got}, want {want}"


# -- engine-vs-record comparisons ---------------------------------------------


def _setup_for_codim(n: int, m: int, k: int, ell: int) -> ScrollSetup:
    return ScrollSetup(n, m, k, max_rank(n, m, k) - 2 + ell)


def _check_threefold_class(part):
    def run():
        ring = scroll_ring(3, 2)
        got = inflection_class(_setup_for_codim(3, 2, 2, part), ring)
        return _eq(got, formulas.threefold_surface_class(part, ring))
    return run


def _check_fourfold_class(codim):
    def run():
        ring = scroll_ring(4, 3)
        got = inflection_class(_setup_for_codim(4, 3, 2, codim), ring)
        return _eq(got, formulas.fourfold_threefold_class(codim, ring))
    return run


def _check_divisor_class(n, m):
    def run():
        ring = scroll_ring(n, m)
        got = inflection_class(_setup_for_codim(n, m, 2, 1), ring)
        return _eq(got, formulas.divisor_class(n, m, ring))
    return run


def _surface_degree_engine(N) -> Poly:
    cls = degree_class(_setup_for_codim(3, 2, 2, N - 8 + 1))
    return graded_to_poly(cls, formulas.SURFACE_VARS)


def _check_surface_degree(N):
    def run():
        got = _surface_degree_engine(N)
        want = formulas.surface_degree(N).subs(formulas.degree_substitution_m2())
        return _eq(got, want)
    return run


def _check_fourfold_degree(codim):
    def run():
        cls = degree_class(_setup_for_codim(4, 3, 2, codim))
        got = graded_to_poly(cls, formulas.FOURFOLD_VARS)
        want = formulas.fourfold_degree(codim).subs(
            formulas.degree_substitution_m3_r2())
        return _eq(got, want)
    return run


def _check_p2_specialization():
    vars = ("d", "v")
    d, v = Poly.variables(vars)
    got = symbolic_degree(_setup_for_codim(3, 2, 2, 2),
                          BASE_PRESETS["p2"].assignments(), ("v", "y"))
    got = got.subs({"y": v * v - d, "v": v}, vars=vars)
    return _eq(got, formulas.p2_specialization_n9())


def _check_k3_form():
    got = symbolic_degree(_setup_for_codim(3, 2, 2, 2),
                          BASE_PRESETS["k3"].assignments(), ("d", "g2"))
    return _eq(got, formulas.k3_form())


def _check_projection_remark():
    # residual class 3L - C1 dotted with L^2 over a product scroll with both
    # summands the base hyperplane bundle: v1 = 2H, v2 = H^2, c1 = -K
    from .scroll import chern_wu_reduce, pushforward, hyperplane_class

    ring = scroll_ring(3, 2)
    residual = 3 * hyperplane_class(ring) - ring.variable("C1")
    cls = pushforward(residual * hyperplane_class(ring) ** 2, 2)
    vars = ("h2", "hk", "d")
    h2, hk, d = Poly.variables(vars)
    assignments = {"v1^2": h2 * 4, "v2": h2, "c1*v1": hk * -2,
                   "c1^2": Poly.zero(vars), "c2": Poly.zero(vars)}
    from .scroll import evaluate_symbolic
    got = evaluate_symbolic(cls, assignments, vars)
    want = formulas.projection_remark().subs({"d": h2 * 3, "hk": hk}, vars=vars)
    return _eq(got, want)


@lru_cache(maxsize=None)
def _abelian_inverse(m: int, n: int, k: int):
    ring = scroll_ring(n, m)
    zero_base = {
        name: (ring.zero() if name.startswith("C") else ring.variable(name))
        for name in ring.names
    }
    setup = ScrollSetup(n, m, k, max_rank(n, m, k) - 1)
    total = total_chern_E_k(setup, ring).substitute(ring, zero_base)
    return ring, total.series_inverse()


def _check_abelian_class(m, n, k):
    def run():
        import warnings

        ring, inverse = _abelian_inverse(m, n, k)
        for ell in range(1, n + 1):
            got = inverse.homogeneous_part(ell)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")  # ell < m drops terms by design
                want = formulas.abelian_class(m, k, ell, ring)
            if got != want:
                return False, f"ell={ell}: got {got}, want {want}"
        return True, f"all codimensions 1..{n} match"
    return run


def _check_abelian_degree(n, k):
    def run():
        for ell in range(1, n + 1):
            setup = _setup_for_codim(n, 2, k, ell)
            got = symbolic_degree(setup, BASE_PRESETS["abelian-surface"].assignments(),
                                  ("d", "g2"))
            want = formulas.abelian_surface_degree(k, ell)
            if got != want:
                return False, f"ell={ell}: got {got}, want {want}"
        return True, f"all codimensions 1..{n} match"
    return run


def _check_example4(k, p):
    def run():
        want = formulas.abelian_example4_degree(k)
        data = BASE_PRESETS["abelian-surface"].numerical(d=3 * p, g2=4 * p)
        setup = _setup_for_codim(3, 2, k, 3)
        got = degree_of_inflection(setup, data).value
        return _eq(got, want)
    return run


def _check_veronese_projection():
    data = BASE_PRESETS["p2"].numerical(v=4, y=4)
    got = degree_of_inflection(ScrollSetup(3, 2, 2, 10), data).value
    return _eq(got, 6)


def _check_k3_number():
    data = BASE_PRESETS["k3"].numerical(d=7, g2=8)
    got = degree_of_inflection(ScrollSetup(3, 2, 2, 9), data).value
    return _eq(got, 15)


def _check_exception_case1():
    data = BASE_PRESETS["p2"].numerical(v=3, y=2)
    setup = ScrollSetup(3, 2, 2, 8)
    res = degree_of_inflection(setup, data)
    d = data.assignments["v1^2"] - data.assignments["v2"]
    want = formulas.thm_details_exception_degree(1)
    return _eq((d, res.value), want)


def _check_exception_case2():
    for y in (4, 5, 6):
        data = BASE_PRESETS["p2"].numerical(v=4, y=y)
        got = degree_of_inflection(ScrollSetup(3, 2, 2, 8), data).value
        d = 16 - y
        want = formulas.thm_details_exception_degree(2, d=d)
        if got != want:
            return False, f"c2={y}: got {got}, want {want}"
    return True, "degree 3d - 12 on the quartic-determinant plane family"


def _check_exception_case3():
    vars = ("q", "f", "g")
    q, f, g = Poly.variables(vars)
    assignments = {
        "c1^2": (1 - q) * 8, "c2": (1 - q) * 4,
        "c1*v1": f * 2 + g * 2 - q * 4 + 4,
        "v1^2": f * 4 + g * 4, "v2": f + g,
    }
    got = symbolic_degree(ScrollSetup(3, 2, 2, 8), assignments, vars)
    d = f * 3 + g * 3
    want = formulas.thm_details_exception_degree(3).subs(
        {"d": d, "q": q, "f": f, "g": g}, vars=vars)
    return _eq(got, want)


def _check_exception_case4():
    vars = ("q", "f", "A", "M")
    q, f, A, M = Poly.variables(vars)
    assignments = {
        "c1^2": (1 - q) * 8, "c2": (1 - q) * 4,
        "c1*v1": f * 3 + A * 2 + M * 2 - q * 6 + 6,
        "v1^2": f * 9 + A * 6 + M * 6, "v2": f * 2 + A + M * 2,
    }
    got = symbolic_degree(ScrollSetup(3, 2, 2, 8), assignments, vars)
    d = f * 7 + A * 5 + M * 4
    want = formulas.thm_details_exception_degree(4).subs(
        {"d": d, "q": q, "f": f, "A": A, "M": M}, vars=vars)
    return _eq(got, want)


def _check_example5_class():
    # specialize the divisor-case class to the two-summand plane scroll:
    # C1 -> 3H, V1 -> 3H, and the negative section is L - 2H
    from .chern import GradedRing, GradedVariable

    ring = scroll_ring(3, 2)
    cls = inflection_class(ScrollSetup(3, 2, 2, 8), ring)
    target = GradedRing([GradedVariable("L", 1),
                         GradedVariable("H", 1, "base")], 3, {"base": 2})
    H = target.variable("H")
    L = target.variable("L")
    mapping = {"L": L, "C1": 3 * H, "C2": 3 * H ** 2,
               "V1": 3 * H, "V2": 2 * H ** 2}
    got = cls.substitute(target, mapping)
    return _eq(got, 3 * (L - 2 * H))


def _check_divisor_two_expressions(n):
    def run():
        first, second = formulas.divisor_degree_m2(n)
        subs = formulas.degree_substitution_m2()
        if first.subs(subs) != second.subs(subs):
            return False, "the two expressions disagree under the substitutions"
        got = _surface_degree_engine(8) if n == 3 else graded_to_poly(
            degree_class(_setup_for_codim(n, 2, 2, 1)), formulas.SURFACE_VARS)
        if got != first.subs(subs):
            return False, f"engine gives {got}, records give {first.subs(subs)}"
        return True, "both expressions match the engine"
    return run


def _check_tag13_abelian_specialization():
    template = formulas.surface_degree(10)
    zero = {"c1": Poly.zero(formulas.SURFACE_VARS),
            "c2": Poly.zero(formulas.SURFACE_VARS)}
    got = template.subs(zero)
    v1 = Poly.variable(formulas.SURFACE_VARS, "v1")
    d = Poly.variable(formulas.SURFACE_VARS, "d")
    want_abelian = formulas.abelian_surface_degree(2, 3).subs(
        {"d": d, "g2": v1 * v1}, vars=formulas.SURFACE_VARS)
    return _eq(got, want_abelian)


def _check_reduce_order_invariance():
    from .scroll import chern_wu_reduce, hyperplane_class, pushforward

    for (n, m, k, ell) in ((3, 2, 2, 2), (3, 2, 2, 3), (4, 3, 2, 3)):
        setup = _setup_for_codim(n, m, k, ell)
        ring = scroll_ring(n, m)
        cls = inflection_class(setup, ring)
        power = hyperplane_class(ring) ** (n - ell)
        r = setup.fiber_rank
        after = pushforward(cls * power, r)
        before = pushforward(chern_wu_reduce(cls, r) * power, r)
        if after != before:
            return False, f"order matters for {(n, m, k, ell)}"
    return True, "reduction before and after dotting agree"


def _check_example4_identity():
    # the quintic flex-count polynomial against the general abelian degree
    for k in (2, 3, 4, 5):
        p = (k + 1) ** 2 + 2
        quintic = formulas.abelian_example4_degree(k)
        template = formulas.abelian_surface_degree(k, 3)
        direct = template.eval_at({"d": 3 * p, "g2": 4 * p})
        if direct != quintic:
            return False, f"k={k}: {direct} vs {quintic}"
    return True, "quintic matches the abelian degree on the secant family"


# -- scans and jets -------------------------------------------------------------


def _check_scan(family, expect_survivors, expect_verdict, **params):
    def run():
        report = scans.run_family(family, **params)
        got = sorted(tuple(sorted(s.point.items())) for s in report.survivors)
        want = sorted(tuple(sorted(p.items())) for p in expect_survivors)
        if got != want:
            return False, f"survivors {got}, want {want}"
        if report.verdict != expect_verdict:
            return False, f"verdict {report.verdict!r}, want {expect_verdict!r}"
        doubled = scans.run_family(family, scale=2, **params)
        got2 = sorted(tuple(sorted(s.point.items())) for s in doubled.survivors)
        if got2 != got:
            return False, "survivor set changes when bounds are doubled"
        return True, f"verdict {report.verdict!r}, stable under doubled bounds"
    return run


def _check_fe_window(e):
    def run():
        report = scans.run_family("Fe", e=e)
        condition = scans.exceptional_condition("Fe", e=e)
        if not condition.verified:
            return False, "condition fails its substitution identity"
        for s in report.survivors:
            if s.point["a"] == 2:
                if 9 * s.point["d"] - 32 != 20 * (s.point["b"] - e):
                    return False, f"survivor {s.point} violates the relation"
            elif not s.annotation:
                return False, f"unexplained survivor {s.point}"
        if report.verdict != "exceptional condition":
            return False, f"verdict {report.verdict!r}"
        return True, f"{len(report.survivors)} windowed survivors, all on the family"
    return run


def _check_bxp1_window(q):
    def run():
        report = scans.run_family("ProductsBxP1", q=q)
        condition = scans.exceptional_condition("ProductsBxP1", q=q)
        if not condition.verified:
            return False, "condition fails its substitution identity"
        for s in report.survivors:
            if s.point["a"] != 2:
                return False, f"survivor off the a = 2 family: {s.point}"
            if 9 * s.point["d"] + 32 * (q - 1) != 20 * s.point["b"]:
                return False, f"survivor {s.point} violates the relation"
            if s.point["b"] < 5:
                return False, f"survivor {s.point} has b < 5"
        return True, f"{len(report.survivors)} windowed survivors, all on the family"
    return run


def _check_jet_rank(name):
    def run():
        probe = jets.BUNDLED_PROBES[name]
        scanres = jets.probe_rank(probe.build())
        return _eq(scanres.rank, probe.expected_rank)
    return run


def _check_plane_scroll_minors():
    report = jets.bundled_minor_report("two-summand-plane-scroll", 9)
    v3 = Poly.variable(report.content.vars, "v") ** 3
    return _eq(report.content, v3)


def _check_cubic_scroll_minors():
    report = jets.bundled_minor_report("cubic-surface-scroll", 5)
    v = Poly.variable(report.content.vars, "v")
    if report.content != v:
        return False, f"content {report.content}, want v"
    return True, "locus " + report.reduced_locus


def _check_bordiga_minors():
    report = jets.bundled_minor_report("bordiga", 9)
    y = Poly.variable(("x", "y", "w"), "y")
    bad = [m for m in report.minors if not m.is_zero() and not m.divisible_by(y)]
    if bad:
        return False, f"{len(bad)} minors are not divisible by y"
    if report.content.coefficient(report.content.monomial_content()) == 0:
        return False, "empty content"
    mono = dict(zip(report.content.vars, report.content.monomial_content()))
    if mono.get("y", 0) < 1:
        return False, f"content {report.content} has no factor y"
    return True, f"all {report.nonzero_minors} minors divisible by y; gcd {report.content}"


def _check_product_identity(name, builder, fiber_dim):
    def run():
        check = jets.product_rank_identity(builder(), fiber_dim)
        if not check.holds:
            return False, f"predicted {check.predicted}, direct {check.direct}"
        return True, f"rank {check.direct} from both sides"
    return run


def _check_jet_bound_examples():
    for name, probe in jets.BUNDLED_PROBES.items():
        spec = probe.build()
        n = spec.dimension
        rank = jets.generic_jet_rank(spec)
        if rank > comb(n + spec.order, spec.order):
            return False, f"{name}: rank exceeds the row count"
        if rank > len(spec.coordinates):
            return False, f"{name}: rank exceeds the column count"
        if probe.scroll_dims is not None:
            ns, ms = probe.scroll_dims
            if rank > max_rank(ns, ms, spec.order):
                return False, f"{name}: rank exceeds the structural bound"
    return True, "every bundled probe respects the structural rank bounds"


def build_checks() -> list[Check]:
    checks: list[Check] = []

    for part in (1, 2, 3):
        checks.append((f"class-threefold-surface-l{part}",
                       _check_threefold_class(part)))
    for codim in (2, 3, 4):
        checks.append((f"class-fourfold-threefold-l{codim}",
                       _check_fourfold_class(codim)))
    for m in range(2, 6):
        for n in range(m + 1, 7):
            checks.append((f"class-divisor-n{n}-m{m}", _check_divisor_class(n, m)))
    for N in (8, 9, 10):
        checks.append((f"degree-threefold-ambient{N}", _check_surface_degree(N)))
    for codim in (1, 2, 3, 4):
        checks.append((f"degree-fourfold-l{codim}", _check_fourfold_degree(codim)))
    checks.append(("degree-plane-ambient9", _check_p2_specialization))
    checks.append(("degree-k3-ambient9", _check_k3_form))
    checks.append(("degree-projection-residual", _check_projection_remark))

    for k in (1, 2, 3):
        checks.append((f"class-abelian-surface-k{k}",
                       _check_abelian_class(2, 4, k)))
        checks.append((f"class-abelian-threefold-k{k}",
                       _check_abelian_class(3, 5, k)))
    for k in (1, 2, 3):
        checks.append((f"degree-abelian-surface-k{k}", _check_abelian_degree(4, k)))

    checks.append(("numeric-secant-family-k2", _check_example4(2, 11)))
    checks.append(("numeric-secant-family-k3", _check_example4(3, 18)))
    checks.append(("numeric-veronese-projection", _check_veronese_projection))
    checks.append(("numeric-k3-floor", _check_k3_number))
    checks.append(("numeric-exception-case1", _check_exception_case1))
    checks.append(("numeric-exception-case2", _check_exception_case2))
    checks.append(("numeric-exception-case3", _check_exception_case3))
    checks.append(("numeric-exception-case4", _check_exception_case4))
    checks.append(("numeric-negative-section-class", _check_example5_class))

    for n in (3, 4, 5, 6):
        checks.append((f"consistency-divisor-degree-n{n}",
                       _check_divisor_two_expressions(n)))
    checks.append(("consistency-abelian-specialization",
                   _check_tag13_abelian_specialization))
    checks.append(("consistency-reduction-order", _check_reduce_order_invariance))
    checks.append(("consistency-secant-quintic", _check_example4_identity))

    checks.append(("scan-plane-ambient10",
                   _check_scan("P2_N10", [], "empty")))
    checks.append(("scan-plane-ambient9",
                   _check_scan("P2_N9", [{"v": 4, "d": 10}],
                               "empty after geometric exclusions")))
    checks.append(("scan-p3-l2",
                   _check_scan("P3", [{"x": 4, "y": 5}],
                               "empty after geometric exclusions", ell=2)))
    checks.append(("scan-p3-l3", _check_scan("P3", [], "empty", ell=3)))
    checks.append(("scan-p3-l4", _check_scan("P3", [], "empty", ell=4)))
    for ell in (2, 3, 4):
        checks.append((f"scan-quadric-l{ell}",
                       _check_scan("Q3", [], "empty", ell=ell)))
    for e in (0, 1, 2):
        checks.append((f"scan-hirzebruch-e{e}", _check_fe_window(e)))
    for q in (1, 2):
        checks.append((f"scan-product-q{q}", _check_bxp1_window(q)))

    for name in jets.BUNDLED_PROBES:
        checks.append((f"jet-rank-{name}", _check_jet_rank(name)))
    checks.append(("jet-minors-plane-scroll", _check_plane_scroll_minors))
    checks.append(("jet-minors-cubic-scroll", _check_cubic_scroll_minors))
    checks.append(("jet-minors-bordiga", _check_bordiga_minors))
    checks.append(("jet-product-veronese",
                   _check_product_identity("veronese", jets.veronese_chart, 1)))
    checks.append(("jet-product-cubic-scroll",
                   _check_product_identity("cubic-scroll", jets.f1_cubic_chart, 1)))
    checks.append(("jet-product-rational-curves", _check_rnc_products))
    checks.append(("jet-row-bound", _check_jet_bound_examples))
    return checks


def _check_rnc_products():
    for degree in (3, 4):
        for order in (2, 3):
            if order > degree:
                continue
            base = jets.rational_normal_curve_chart(degree, order=order)
            check = jets.product_rank_identity(base, 1)
            if not check.holds:
                return False, (f"degree {degree}, order {order}: predicted "
                               f"{check.predicted}, direct {check.direct}")
    return True, "identity holds on rational normal curve bases"


def run_checks(filter: str | None = None, jobs: int | None = None,
               checks: list[Check] | None = None) -> list[CheckResult]:
    selected = checks if checks is not None else build_checks()
    if filter:
        selected = [c for c in selected if filter in c[0]]
    results: dict[str, CheckResult] = {}

    def execute(item: Check) -> CheckResult:
        identifier, fn = item
        try:
            ok, detail = fn()
        except Exception as exc:  # a failing check must not kill the table
            ok, detail = False, f"error: {exc}"
        return CheckResult(identifier, ok, detail)

    with ThreadPoolExecutor(max_workers=jobs or 4) as pool:
        for result in pool.map(execute, selected):
            results[result.identifier] = result
    return [results[name] for name in sorted(results)]
