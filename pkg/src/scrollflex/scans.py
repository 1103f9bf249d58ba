"""Exhaustive integer-point scans behind the uninflectedness results.

Each family couples a degree-zero equation (transcribed where a printed
form exists, derived otherwise) with feasibility constraints and finite,
justified enumeration bounds.  Before a scan runs, the equation is
re-derived from the engine through the matching base preset and compared
with the transcription; any mismatch aborts with an internal consistency
error.  Surviving points that the source arguments exclude geometrically
are annotated, never dropped.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .errors import InternalConsistencyError, InvalidInputError
from .exactpoly import Poly
from .formulas import (degree_substitution_m2, fourfold_degree,
                       p2_specialization_n9, surface_degree)
from .scroll import BASE_PRESETS, ScrollSetup, symbolic_degree

FAMILIES = ("P2_N10", "P2_N9", "Fe", "ProductsBxP1", "P3", "Q3")

MARGIN = 5  # safety cushion over every derived enumeration bound


@dataclass(frozen=True)
class Constraint:
    name: str
    reason: str
    holds: Callable[[Mapping[str, int]], bool]


@dataclass(frozen=True)
class Bound:
    lo: int
    hi: int
    reason: str


@dataclass
class ScanProblem:
    family: str
    params: dict
    equation: Poly                      # == 0, linear in the solve variable
    sweep: tuple[str, ...]
    solve: str
    bounds: dict[str, Bound]
    constraints: tuple[Constraint, ...]
    annotate: Callable[[Mapping[str, int]], str | None]
    notes: tuple[str, ...] = ()
    exceptional: "ExceptionalCondition | None" = None

    def scaled(self, factor: int) -> "ScanProblem":
        bounds = {
            name: Bound(b.lo, b.lo + (b.hi - b.lo) * factor,
                        f"{b.reason} (scaled x{factor})")
            for name, b in self.bounds.items()
        }
        return ScanProblem(self.family, self.params, self.equation, self.sweep,
                           self.solve, bounds, self.constraints, self.annotate,
                           self.notes, self.exceptional)


@dataclass
class Survivor:
    point: dict[str, int]
    annotation: str | None = None


@dataclass
class ScanReport:
    family: str
    params: dict
    candidates: int
    survivors: list[Survivor]
    excluded: list[tuple[dict, str]]    # integer points killed by a named screen
    verdict: str
    bounds: dict[str, Bound]
    notes: tuple[str, ...]

    def to_payload(self) -> dict:
        return {
            "family": self.family,
            "params": dict(self.params),
            "candidates": self.candidates,
            "survivors": [
                {"point": s.point, "annotation": s.annotation} for s in self.survivors
            ],
            "excluded": [{"point": p, "constraint": c} for p, c in self.excluded],
            "verdict": self.verdict,
            "bounds": {k: [b.lo, b.hi, b.reason] for k, b in self.bounds.items()},
            "notes": list(self.notes),
        }


@dataclass
class ExceptionalCondition:
    """Parametric survivor family of a hyperbola scan: a = 2 plus a linear
    relation among the remaining invariants, verified by substitution."""

    family: str
    fixed: dict[str, int]
    relation: str
    side_conditions: tuple[str, ...]
    verified: bool

    def check(self, **values) -> tuple[bool, str]:
        """Feasibility screen for concrete parameter values."""
        point = {k: Fraction(v) for k, v in values.items()}
        if self.family == "Fe":
            d, e = point["d"], point.get("e", Fraction(0))
            if d % 2 != 0:
                return False, "d must be even (parity of the hyperbola)"
            if d < 10:
                return False, ("d >= 10: degree 8 is ruled out by the genus "
                               "classification")
            if (9 * d - 32) % 20 != 0:
                return False, "b = e + (9d - 32)/20 must be an integer"
            b = e + (9 * d - 32) / 20
            if b < 2 * e + 2:
                return False, "b >= 2e + 2 (ample restriction to the minimal section)"
            return True, f"b = {b}"
        if self.family == "ProductsBxP1":
            d, q = point["d"], point["q"]
            if (9 * d + 32 * (q - 1)) % 20 != 0:
                return False, "b = (9d + 32(q - 1))/20 must be an integer"
            b = (9 * d + 32 * (q - 1)) / 20
            if b < 5:
                return False, "b >= 5 (no irrational surface scroll has degree < 5)"
            return True, f"b = {b}"
        raise InvalidInputError(f"no feasibility screen for family {self.family}")

    def to_payload(self) -> dict:
        return {
            "family": self.family,
            "fixed": dict(self.fixed),
            "relation": self.relation,
            "side_conditions": list(self.side_conditions),
            "verified": self.verified,
        }


# -- helpers -------------------------------------------------------------------


def _eval_uni(coeffs, x: int) -> Fraction:
    total = Fraction(0)
    for i, c in enumerate(coeffs):
        total += c * x ** i
    return total


def _cauchy_bound(coeffs) -> int:
    lead = coeffs[-1]
    if not lead:
        raise InvalidInputError("zero leading coefficient")
    worst = max((abs(c / lead) for c in coeffs[:-1]), default=Fraction(0))
    return int(worst) + 2


def _positivity_bound(poly: Poly, var: str, lo: int, threshold) -> int:
    """Largest integer >= lo at which the eventually-negative univariate
    polynomial still reaches the threshold; lo - 1 when it never does."""
    index = poly.vars.index(var)
    deg = poly.degree_in(var)
    coeffs = [Fraction(0)] * (deg + 1)
    for exps, c in poly.terms.items():
        if sum(exps) != exps[index]:
            raise InvalidInputError(f"positivity form must be univariate in {var}")
        coeffs[exps[index]] += c
    if coeffs[-1] >= 0:
        raise InvalidInputError("positivity bound needs a negative leading term")
    shifted = list(coeffs)
    shifted[0] -= Fraction(threshold)
    hi = max(lo, _cauchy_bound(shifted))
    best = lo - 1
    for x in range(lo, hi + 1):
        if _eval_uni(coeffs, x) >= threshold:
            best = x
    return best


def _linear_coefficient(poly: Poly, name: str) -> Fraction:
    i = poly.vars.index(name)
    total = Fraction(0)
    for exps, c in poly.terms.items():
        if exps[i] == 1 and sum(exps) == 1:
            total += c
    return total


def _require_equal(label: str, *polys: Poly) -> None:
    normalized = [p.normalized() for p in polys]
    if any(p != normalized[0] for p in normalized[1:]):
        raise InternalConsistencyError(
            f"{label}: transcribed and derived degree equations disagree: "
            + " vs ".join(str(p) for p in normalized)
        )


def _monomial_key(mono: dict[str, int]) -> str:
    parts = []
    for name in sorted(mono, key=lambda s: (s[0], int(s[1:]))):
        e = mono[name]
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def _fourfold_on_preset(ell: int, preset, vars: tuple[str, ...]) -> Poly:
    """Degree-zero form A d + B y + R(x) on a threefold preset, d kept symbolic."""
    raw = fourfold_degree(ell)
    table = preset.assignments()
    x, y, d = Poly.variables(vars)
    slots = {"x": x, "y": y}
    out = Poly.zero(vars)
    for exps, coeff in raw.terms.items():
        mono = {n: e for n, e in zip(raw.vars, exps) if e}
        if mono == {"d": 1}:
            out = out + d * coeff
            continue
        key = _monomial_key(mono)
        if key not in table:
            raise InternalConsistencyError(f"preset {preset.name} lacks {key}")
        out = out + table[key].subs(slots, vars=vars) * coeff
    return out


# -- generic scan loop -----------------------------------------------------------


def _solve_linear(eq: Poly, solve: str, values: Mapping[str, int]):
    spec = eq.subs({k: Fraction(v) for k, v in values.items()})
    a = Fraction(0)
    b = Fraction(0)
    i = spec.vars.index(solve)
    for exps, c in spec.terms.items():
        if exps[i] == 0:
            b += c
        elif exps[i] == 1:
            a += c
        else:
            raise InvalidInputError(f"equation is not linear in {solve}")
    if a == 0:
        return ("any", None) if b == 0 else ("none", None)
    return ("one", -b / a)


def scan(problem: ScanProblem) -> ScanReport:
    """Enumerate every integer point within bounds and screen it."""
    sweep_ranges = []
    for name in problem.sweep:
        b = problem.bounds[name]
        sweep_ranges.append(range(b.lo, max(b.hi + 1, b.lo)))
    survivors: list[Survivor] = []
    excluded: list[tuple[dict, str]] = []
    notes = list(problem.notes)
    candidates = 0
    for combo in itertools.product(*sweep_ranges):
        values = dict(zip(problem.sweep, combo))
        candidates += 1
        kind, solved = _solve_linear(problem.equation, problem.solve, values)
        if kind == "none":
            continue
        if kind == "any":
            notes.append(f"equation degenerates at {values}: every "
                         f"{problem.solve} solves it")
            continue
        if solved.denominator != 1:
            continue
        point = dict(values)
        point[problem.solve] = int(solved)
        failed = next(
            (c for c in problem.constraints if not c.holds(point)), None)
        if failed is not None:
            excluded.append((point, f"{failed.name}: {failed.reason}"))
            continue
        survivors.append(Survivor(point, problem.annotate(point)))

    if problem.exceptional is not None:
        verdict = "exceptional condition"
    elif not survivors:
        verdict = "empty"
    elif all(s.annotation for s in survivors):
        verdict = "empty after geometric exclusions"
    else:
        verdict = "survivors listed"
    return ScanReport(problem.family, problem.params, candidates, survivors,
                      excluded, verdict, problem.bounds, tuple(notes))


# -- family builders ---------------------------------------------------------------


def _p2_n10_problem() -> ScanProblem:
    vars = ("x", "y")
    x, y = Poly.variables(vars)
    transcribed = 19 * y - (46 * x ** 2 - 297 * x + 534)
    template = surface_degree(10).subs(degree_substitution_m2())
    closed = template.subs(
        {"c1": Poly.const(vars, 3), "c2": Poly.const(vars, 3), "v1": x, "v2": y},
        vars=vars)
    engine = symbolic_degree(ScrollSetup(3, 2, 2, 10),
                             BASE_PRESETS["p2"].assignments(), ("v", "y"))
    engine = engine.subs({"v": x, "y": y}, vars=vars)
    _require_equal("P2_N10", -transcribed, closed, engine)

    # the arc: the parabola meets the region y <= x^2 - 8 only while
    # 27 x^2 - 297 x + 686 <= 0
    quad = [Fraction(686), Fraction(-297), Fraction(27)]
    hi = max((xx for xx in range(2, _cauchy_bound(quad) + 1)
              if _eval_uni(quad, xx) <= 0), default=2)
    constraints = (
        Constraint("ample-on-lines", "c1(V) restricted to a line has degree >= 2",
                   lambda p: p["x"] >= 2),
        Constraint("positive-c2", "a very ample rank-2 bundle has c2 >= 1",
                   lambda p: p["y"] >= 1),
        Constraint("degree-bound", "d = x^2 - y >= 8, one above the codimension",
                   lambda p: p["x"] ** 2 - p["y"] >= 8),
    )
    return ScanProblem(
        "P2_N10", {}, transcribed, ("x",), "y",
        {"x": Bound(2, hi + MARGIN,
                    "beyond this the parabola leaves the region y <= x^2 - 8")},
        constraints, lambda p: None,
        notes=("equation: 19y = 46x^2 - 297x + 534 on the plane, ambient 10",),
    )


def _p2_n9_problem() -> ScanProblem:
    vars = ("v", "d")
    v, d = Poly.variables(vars)
    transcribed = 3 * (d + 14) - 2 * v * (17 - 2 * v)
    closed = p2_specialization_n9().subs({}, vars=vars)
    engine = symbolic_degree(ScrollSetup(3, 2, 2, 9),
                             BASE_PRESETS["p2"].assignments(), ("v", "y"))
    engine = engine.subs({"y": v * v - d, "v": v}, vars=vars)
    _require_equal("P2_N9", transcribed, closed, engine)

    rhs = 2 * v * (17 - 2 * v)  # 3(d + 14) >= 63 once d >= 7
    hi = _positivity_bound(rhs, "v", 2, 63)
    constraints = (
        Constraint("ample-on-lines", "c1(V) restricted to a line has degree >= 2",
                   lambda p: p["v"] >= 2),
        Constraint("degree-bound", "d >= 7, one above the codimension in ambient 9",
                   lambda p: p["d"] >= 7),
        Constraint("positive-c2", "c2 = v^2 - d >= 1",
                   lambda p: p["v"] ** 2 - p["d"] >= 1),
        Constraint("c2-one-classification",
                   "c2 = 1 on the plane forces the split bundle with v = 2",
                   lambda p: not (p["v"] ** 2 - p["d"] == 1 and p["v"] != 2)),
    )

    def annotate(p):
        if (p["v"], p["d"]) == (4, 10):
            return ("Bordiga scroll (c1 = 4, c2 = 6 on the plane): its second "
                    "jet map never attains rank 9, so the standing rank "
                    "hypothesis fails")
        return None

    return ScanProblem(
        "P2_N9", {}, transcribed, ("v",), "d",
        {"v": Bound(2, hi + MARGIN,
                    "2v(17 - 2v) falls below 3(7 + 14) = 63 beyond this")},
        constraints, annotate,
        notes=("equation: 3(d + 14) = 2v(17 - 2v) on the plane, ambient 9",),
    )


def _p3_printed(ell: int, vars) -> Poly:
    x, y, d = Poly.variables(vars)
    if ell == 2:
        return 7 * d + 4 * x ** 3 - 52 * x ** 2 + 32 * y + 62 * x
    if ell == 3:
        return 6 * d + 5 * x ** 3 - 77 * x ** 2 + 36 * y + 181 * x - 143
    if ell == 4:
        return 17 * d + 17 * x ** 3 - 303 * x ** 2 + 124 * y + 969 * x - 1153
    raise InvalidInputError("codimension must be 2, 3 or 4")


def _threefold_base_problem(family: str, ell: int) -> ScanProblem:
    """Fourfold scrolls over projective 3-space or the quadric threefold."""
    if ell not in (2, 3, 4):
        raise InvalidInputError("codimension must be 2, 3 or 4 for these scans")
    preset = BASE_PRESETS["p3" if family == "P3" else "q3"]
    vars = ("x", "y", "d")
    x, y, d = Poly.variables(vars)
    d_of_xy = (x ** 3 - 2 * x * y) if family == "P3" else (2 * x ** 3 - 2 * x * y)

    derived = _fourfold_on_preset(ell, preset, vars)
    transcribed = _p3_printed(ell, vars) if family == "P3" else derived
    engine = symbolic_degree(ScrollSetup(4, 3, 2, 12 + ell),
                             preset.assignments(), ("x", "y"))
    engine = engine.subs({"x": x, "y": y}, vars=vars)
    _require_equal(f"{family} codim {ell}",
                   transcribed.subs({"d": d_of_xy}),
                   derived.subs({"d": d_of_xy}),
                   engine)

    # positivity: A d + B y = R(x) with A, B > 0 and d, y >= 1 forces R >= A + B
    coeff_d = _linear_coefficient(transcribed, "d")
    coeff_y = _linear_coefficient(transcribed, "y")
    if coeff_d <= 0 or coeff_y <= 0:
        raise InternalConsistencyError("expected positive d and y coefficients")
    rhs = -(transcribed - coeff_d * d - coeff_y * y)
    hi = _positivity_bound(rhs, "x", 2, coeff_d + coeff_y)

    which = "projective 3-space" if family == "P3" else "the quadric threefold"
    chern_wu = ((lambda p: p["x"] ** 3 - 2 * p["x"] * p["y"] >= 1)
                if family == "P3"
                else (lambda p: 2 * p["x"] ** 3 - 2 * p["x"] * p["y"] >= 1))
    constraints = (
        Constraint("ample-on-lines", "c1(V) restricted to a line has degree >= 2",
                   lambda p: p["x"] >= 2),
        Constraint("positive-c2", "a very ample rank-2 bundle has c2 >= 1",
                   lambda p: p["y"] >= 1),
        Constraint("chern-wu-positivity", "the scroll degree d must be positive",
                   chern_wu),
    )

    def annotate(p):
        if family == "P3" and ell == 2 and (p["x"], p["y"]) == (4, 5):
            return ("twist of the null correlation bundle: the linearly normal "
                    "scroll sits in ambient dimension 15 where the codimension "
                    "is 3, and a general projection always acquires inflection")
        return None

    notes = [f"degree-zero equation for codimension {ell} over {which}"]
    if family == "Q3":
        notes.append("no printed source equation exists for the quadric; the "
                     "equation is derived from the degree formulas and the "
                     "intersection lattice (h^3 = 2, one-cycles generated by "
                     "h^2/2)")
    return ScanProblem(
        family, {"ell": ell}, transcribed.subs({"d": d_of_xy}), ("x",), "y",
        {"x": Bound(2, hi + MARGIN,
                    "the positivity form falls below its floor beyond this")},
        constraints, annotate, tuple(notes),
    )


def _fe_problem(e: int) -> ScanProblem:
    if e < 0:
        raise InvalidInputError("the Hirzebruch invariant e must be >= 0")
    vars = ("a", "b", "d")
    a, b, d = Poly.variables(vars)
    transcribed = (12 * e * a ** 2 - 24 * a * b + 34 * (2 - e) * a + 68 * b
                   - (9 * d + 104))
    degree_form = (9 * d + 12 * (2 * b - a * e) * a
                   + 34 * (a * e - 2 * a - 2 * b) + 104)
    engine = symbolic_degree(ScrollSetup(3, 2, 2, 9),
                             BASE_PRESETS["fe"].assignments(e=e),
                             ("a", "b", "v2"))
    engine = engine.subs({"v2": a * (2 * b - a * e) - d, "a": a, "b": b},
                         vars=vars)
    _require_equal(f"Fe e={e}", -transcribed, degree_form, engine)

    constraints = (
        Constraint("ample-on-fibers", "a = deg V on a fiber >= 2",
                   lambda p: p["a"] >= 2),
        Constraint("ample-on-section",
                   "b - a e = deg V on the minimal section >= 2",
                   lambda p: p["b"] - p["a"] * e >= 2),
        Constraint("even-degree", "the hyperbola forces d to be even",
                   lambda p: p["d"] % 2 == 0),
        Constraint("degree-ten",
                   "d >= 10: degree 8 is ruled out by the genus classification",
                   lambda p: p["d"] >= 10),
    )

    def annotate(p):
        if p["a"] == 2:
            return "uniform type (1, 1) on fibers: 9d - 32 = 20(b - e)"
        if e == 0 and p["b"] == 2:
            return ("ruling swap on the quadric surface: exchanging the two "
                    "rulings carries this point into the a = 2 family")
        return None

    return ScanProblem(
        "Fe", {"e": e}, transcribed, ("a", "d"), "b",
        {"a": Bound(2, 12, "integer points cluster next to the vertical "
                           "asymptote a = 17/6; the window checks a wide strip"),
         "d": Bound(7, 48, "exploration window; the symbolic condition covers "
                           "every degree")},
        constraints, annotate,
        notes=("survivors form the parametric family a = 2, 9d - 32 = 20(b - e)",),
        exceptional=exceptional_condition("Fe", e=e),
    )


def _bxp1_problem(q: int) -> ScanProblem:
    if q < 1:
        raise InvalidInputError("the base curve genus q must be >= 1")
    vars = ("a", "b", "d")
    a, b, d = Poly.variables(vars)
    transcribed = (24 * a * b + 68 * (q - 1) * a - 68 * b + 9 * d
                   - 104 * (q - 1))
    degree_form = (9 * d + 24 * a * b + 68 * (q - 1) * a - 68 * b
                   + 104 * (1 - q))
    engine = symbolic_degree(ScrollSetup(3, 2, 2, 9),
                             BASE_PRESETS["bxp1"].assignments(q=q),
                             ("a", "b", "v2"))
    engine = engine.subs({"v2": 2 * a * b - d, "a": a, "b": b}, vars=vars)
    _require_equal(f"BxP1 q={q}", transcribed, degree_form, engine)

    constraints = (
        Constraint("ample-on-fibers", "a = deg V on a rational fiber >= 2",
                   lambda p: p["a"] >= 2),
        Constraint("scroll-degree-five",
                   "b >= 5: no irrational surface scroll has degree < 5",
                   lambda p: p["b"] >= 5),
        Constraint("degree-bound", "d >= 7, one above the codimension in ambient 9",
                   lambda p: p["d"] >= 7),
    )

    def annotate(p):
        if p["a"] == 2:
            return "uniform type (1, 1) on fibers: 9d + 32(q - 1) = 20b"
        return None

    return ScanProblem(
        "ProductsBxP1", {"q": q}, transcribed, ("a", "d"), "b",
        {"a": Bound(2, 12, "integer points cluster next to the vertical "
                           "asymptote a = 17/6; the window checks a wide strip"),
         "d": Bound(7, 48, "exploration window; the symbolic condition covers "
                           "every degree")},
        constraints, annotate,
        notes=("survivors form the parametric family a = 2, "
               "9d + 32(q - 1) = 20b, with b >= 5",),
        exceptional=exceptional_condition("ProductsBxP1", q=q),
    )


def build_problem(family: str, **params) -> ScanProblem:
    if family == "P2_N10":
        return _p2_n10_problem()
    if family == "P2_N9":
        return _p2_n9_problem()
    if family in ("P3", "Q3"):
        return _threefold_base_problem(family, int(params.get("ell", 4)))
    if family == "Fe":
        return _fe_problem(int(params.get("e", 0)))
    if family == "ProductsBxP1":
        return _bxp1_problem(int(params.get("q", 1)))
    raise InvalidInputError(f"unknown scan family {family!r} (have {FAMILIES})")


def run_family(family: str, scale: int = 1, **params) -> ScanReport:
    problem = build_problem(family, **params)
    if scale != 1:
        problem = problem.scaled(scale)
    return scan(problem)


def q3_scan(ell: int, scale: int = 1) -> ScanReport:
    """Scan the quadric-threefold family at the given codimension."""
    return run_family("Q3", scale=scale, ell=ell)


def exceptional_condition(family: str, **params) -> ExceptionalCondition:
    """The a = 2 linear condition of the two hyperbola families, verified
    by substituting it back into the family's degree-zero equation."""
    if family == "Fe":
        vars = ("a", "b", "d", "e")
        a, b, d, ev = Poly.variables(vars)
        hyperbola = (12 * ev * a ** 2 - 24 * a * b + 34 * (2 - ev) * a
                     + 68 * b - (9 * d + 104))
        b_value = ev + d * Fraction(9, 20) - Fraction(32, 20)
        residue = hyperbola.subs({"a": Poly.const(vars, 2), "b": b_value})
        return ExceptionalCondition(
            "Fe", {"a": 2}, "9d - 32 = 20(b - e)",
            ("d even", "d >= 10", "b - 2e >= 2"),
            residue.is_zero(),
        )
    if family == "ProductsBxP1":
        vars = ("a", "b", "d", "q")
        a, b, d, qv = Poly.variables(vars)
        hyperbola = (24 * a * b + 68 * (qv - 1) * a - 68 * b + 9 * d
                     - 104 * (qv - 1))
        b_value = d * Fraction(9, 20) + (qv - 1) * Fraction(32, 20)
        residue = hyperbola.subs({"a": Poly.const(vars, 2), "b": b_value})
        return ExceptionalCondition(
            "ProductsBxP1", {"a": 2}, "9d + 32(q - 1) = 20b",
            ("b >= 5",),
            residue.is_zero(),
        )
    raise InvalidInputError(
        f"family {family!r} has no parametric exceptional condition"
    )
