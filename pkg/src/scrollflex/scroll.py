"""Scroll-specific layer: rank bounds, degeneracy classes, pushforwards.

The ambient variety is X = P(V) -> Y with dim X = n, dim Y = m, fiber rank
r = n - m + 1, hyperplane class L, and osculation order k.  Classes on X
live in a graded ring with generators L, C_i (pullbacks of c_i(T_Y)) and
V_i (pullbacks of c_i(V)); pullback generators carry a sector cap at m, the
base dimension, since any pullback class vanishes above it.

The tautological relation sum_i (-1)^i V_i L^(r-i) = 0 drives both the
rewriting of high L-powers and the fiber integration.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence, Union

from .chern import (FormalBundle, GradedClass, GradedRing, GradedVariable,
                    bundle_from_classes, dual, sym_power, tensor, tensor_line)
from .errors import IncompleteDataError, InvalidInputError
from .exactpoly import Poly

Scalar = Union[int, Fraction]

BASE_SECTOR = "base"


def max_rank(n: int, m: int, k: int) -> int:
    """Largest generic rank a k-th jet evaluation can have on an n-fold scroll."""
    if not (1 <= m <= n):
        raise InvalidInputError(f"need 1 <= m <= n, got m={m}, n={n}")
    if k < 1:
        raise InvalidInputError("osculation order k must be >= 1")
    return (n - m) * comb(m + k - 1, k - 1) + comb(m + k, k)


def rank_breakdown(n: int, m: int, k: int) -> list[tuple[int, int]]:
    """Per-derivative-order contributions to max_rank: order h -> row count."""
    out = []
    for h in range(k + 1):
        base = comb(m - 1 + h, h)
        fiber = (n - m) * comb(m - 2 + h, h - 1) if h >= 1 else 0
        out.append((h, base + fiber))
    return out


@dataclass(frozen=True)
class ScrollSetup:
    """Discrete data of a scroll probe: dimensions, order and ambient space."""

    n: int
    m: int
    k: int
    N: int

    def __post_init__(self):
        if not (1 <= self.m < self.n):
            raise InvalidInputError(f"need 1 <= m < n, got m={self.m}, n={self.n}")
        if self.k < 1:
            raise InvalidInputError("osculation order k must be >= 1")
        if self.N < self.n:
            raise InvalidInputError("ambient dimension must be at least dim X")

    @property
    def fiber_rank(self) -> int:
        return self.n - self.m + 1

    @property
    def max_jet_rank(self) -> int:
        return max_rank(self.n, self.m, self.k)

    @property
    def codim(self) -> int:
        return self.N + 2 - self.max_jet_rank

    @property
    def range_bounds(self) -> tuple[int, int]:
        rk = self.max_jet_rank
        return (rk - 1, rk + self.n - 2)

    @property
    def in_range(self) -> bool:
        lo, hi = self.range_bounds
        return lo <= self.N <= hi


@dataclass(frozen=True)
class CodimResult:
    codim: int
    in_range: bool
    range_lo: int
    range_hi: int

    @property
    def asserted(self) -> bool:
        """Whether the degeneracy-class formula is asserted for this setup."""
        return self.in_range


def expected_codim(setup: ScrollSetup) -> CodimResult:
    lo, hi = setup.range_bounds
    return CodimResult(setup.codim, setup.in_range, lo, hi)


# -- rings and tautological bundles ----------------------------------------


def scroll_ring(n: int, m: int) -> GradedRing:
    """Ring of classes on X: L, C_1..C_m, V_1..V_min(r, m); truncation n."""
    r = n - m + 1
    variables = [GradedVariable("L", 1)]
    variables += [GradedVariable(f"C{i}", i, BASE_SECTOR) for i in range(1, m + 1)]
    variables += [GradedVariable(f"V{i}", i, BASE_SECTOR)
                  for i in range(1, min(r, m) + 1)]
    return GradedRing(variables, n, {BASE_SECTOR: m})


def base_ring(m: int, r: int) -> GradedRing:
    """Ring of classes on Y: c_1..c_m, v_1..v_min(r, m); truncation m."""
    variables = [GradedVariable(f"c{i}", i) for i in range(1, m + 1)]
    variables += [GradedVariable(f"v{i}", i) for i in range(1, min(r, m) + 1)]
    return GradedRing(variables, m)


def tangent_bundle(ring: GradedRing, m: int) -> FormalBundle:
    """pi^* T_Y as a formal bundle on the scroll ring."""
    return bundle_from_classes(m, [ring.variable(f"C{i}") for i in range(1, m + 1)])


def tautological_subsheaf_bundle(ring: GradedRing, n: int, m: int) -> FormalBundle:
    """pi^* V, where V is the pushforward of the hyperplane bundle."""
    r = n - m + 1
    classes = []
    for i in range(1, r + 1):
        name = f"V{i}"
        classes.append(ring.variable(name) if name in ring.names else ring.zero())
    return bundle_from_classes(r, classes)


def hyperplane_class(ring: GradedRing) -> GradedClass:
    return ring.variable("L")


def total_chern_E_k(setup: ScrollSetup, ring: GradedRing | None = None) -> GradedClass:
    """Total Chern class of the rank-r_k quotient governing order-k osculation.

    The product of the pulled-back factors S^(i-1)T_Y (x) dual(V) for
    i = 1..k, times S^k T_Y twisted down by the hyperplane class.
    """
    ring = ring or scroll_ring(setup.n, setup.m)
    T = tangent_bundle(ring, setup.m)
    Vd = dual(tautological_subsheaf_bundle(ring, setup.n, setup.m))
    total = ring.one()
    for i in range(1, setup.k + 1):
        factor = tensor(sym_power(T, i - 1), Vd) if i > 1 else Vd
        total = total * factor.total_chern
    last = tensor_line(sym_power(T, setup.k), hyperplane_class(ring), -1)
    return total * last.total_chern


def inflection_class(setup: ScrollSetup, ring: GradedRing | None = None) -> GradedClass:
    """Degree-codim part of the inverse total Chern class, unreduced.

    Outside the asserted range the formal degree part is still returned;
    whether it means anything is the caller's concern (check ``in_range``).
    The standing hypotheses - maximal generic jet rank and expected
    codimension of the degeneracy locus - cannot be verified here.
    """
    ring = ring or scroll_ring(setup.n, setup.m)
    ell = setup.codim
    if ell < 0 or ell > ring.truncation:
        return ring.zero()
    return total_chern_E_k(setup, ring).series_inverse().homogeneous_part(ell)


def chern_wu_reduce(x: GradedClass, r: int) -> GradedClass:
    """Rewrite L-powers >= r via L^r = sum_i (-1)^(i+1) V_i L^(r-i).

    Idempotent; the result has L-degree at most r - 1.
    """
    ring = x.ring
    li = ring.index("L")
    rule = ring.zero()
    for i in range(1, r + 1):
        name = f"V{i}"
        if name not in ring.names:
            continue
        term = ring.variable(name) * ring.variable("L") ** (r - i)
        rule = rule + (term if i % 2 == 1 else -term)
    done: dict[tuple[int, ...], Fraction] = {}
    work = dict(x.terms)
    while work:
        exps, coeff = work.popitem()
        if exps[li] < r:
            s = done.get(exps, Fraction(0)) + coeff
            if s:
                done[exps] = s
            else:
                done.pop(exps, None)
            continue
        lowered = list(exps)
        lowered[li] -= r
        rest = GradedClass(ring, {tuple(lowered): coeff})
        for e2, c2 in (rest * rule).terms.items():
            s = work.get(e2, Fraction(0)) + c2
            if s:
                work[e2] = s
            else:
                work.pop(e2, None)
    return GradedClass(ring, done)


def pushforward(x: GradedClass, r: int, target: GradedRing | None = None) -> GradedClass:
    """Fiber integration to Y: the coefficient of L^(r-1) after reduction.

    Terms of lower L-degree integrate to zero; C_i and V_i rename to their
    lowercase base counterparts.
    """
    ring = x.ring
    m = ring.sector_caps.get(BASE_SECTOR)
    if m is None:
        raise InvalidInputError("pushforward needs a scroll ring with a base sector")
    target = target or base_ring(m, r)
    reduced = chern_wu_reduce(x, r)
    li = ring.index("L")
    out: dict[tuple[int, ...], Fraction] = {}
    for exps, coeff in reduced.terms.items():
        if exps[li] != r - 1:
            continue
        t = [0] * len(target.names)
        for name, e in zip(ring.names, exps):
            if name == "L" or e == 0:
                continue
            t[target.index(name.lower())] = e
        key = tuple(t)
        out[key] = out.get(key, Fraction(0)) + coeff
    return GradedClass(target, out)


def graded_to_poly(cls: GradedClass, vars: Sequence[str] | None = None) -> Poly:
    """Forget the grading: same terms as a plain polynomial in the ring names."""
    names = tuple(vars) if vars is not None else cls.ring.names
    terms = {}
    for exps, coeff in cls.terms.items():
        t = [0] * len(names)
        for name, e in zip(cls.ring.names, exps):
            if e:
                t[names.index(name)] = e
        terms[tuple(t)] = coeff
    return Poly(names, terms)


# -- numerical and symbolic base data ---------------------------------------


def _monomial_weight(key: str) -> int:
    weight = 0
    if key.strip() == "1":
        return 0
    for factor in key.split("*"):
        name, _, power = factor.strip().partition("^")
        e = int(power) if power else 1
        if len(name) < 2 or name[0] not in "cv" or not name[1:].isdigit():
            raise InvalidInputError(f"bad base monomial {key!r}")
        weight += int(name[1:]) * e
    return weight


def canonical_monomial(key: str) -> str:
    factors: dict[str, int] = {}
    for factor in key.split("*"):
        name, _, power = factor.strip().partition("^")
        factors[name] = factors.get(name, 0) + (int(power) if power else 1)
    parts = []
    for name in sorted(factors, key=lambda s: (s[0], int(s[1:]))):
        e = factors[name]
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


@dataclass(frozen=True)
class NumericalBaseData:
    """Intersection numbers of Y paired against weight-m monomials.

    ``assignments`` maps canonical monomial strings in c_i = c_i(T_Y) and
    v_i = c_i(V) to integers.  ``divisors`` optionally carries pairing data
    for named divisor classes against the same generators.
    """

    dimension: int
    assignments: Mapping[str, int]
    divisors: Mapping[str, Mapping[str, int]] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for key, value in self.assignments.items():
            ck = canonical_monomial(key)
            if _monomial_weight(ck) != self.dimension:
                raise InvalidInputError(
                    f"monomial {key!r} does not have weight {self.dimension}"
                )
            if not isinstance(value, int):
                raise InvalidInputError(f"value for {key!r} must be an integer")
            clean[ck] = value
        object.__setattr__(self, "assignments", clean)

    def evaluate(self, cls: GradedClass) -> Fraction:
        """Pair a degree-m class on Y against the stored numbers."""
        total = Fraction(0)
        missing = []
        for exps, coeff in cls.terms.items():
            key = canonical_monomial(cls.ring.monomial_string(exps))
            if key not in self.assignments:
                missing.append(key)
                continue
            total += coeff * self.assignments[key]
        if missing:
            raise IncompleteDataError(missing)
        return total

    def to_payload(self) -> dict:
        return {
            "dimension": self.dimension,
            "assignments": dict(self.assignments),
            "divisors": {k: dict(v) for k, v in self.divisors.items()},
        }

    @classmethod
    def from_payload(cls, payload: Mapping) -> "NumericalBaseData":
        return cls(payload["dimension"], payload["assignments"],
                   payload.get("divisors", {}))


def evaluate_symbolic(cls: GradedClass,
                      assignments: Mapping[str, Union[Poly, Scalar]],
                      vars: Sequence[str]) -> Poly:
    """Pair a degree-m class against symbolic intersection values."""
    vars = tuple(vars)
    total = Poly.zero(vars)
    missing = []
    for exps, coeff in cls.terms.items():
        key = canonical_monomial(cls.ring.monomial_string(exps))
        if key not in assignments:
            missing.append(key)
            continue
        value = assignments[key]
        if not isinstance(value, Poly):
            value = Poly.const(vars, value)
        elif value.vars != vars:
            raise InvalidInputError(f"assignment for {key!r} uses foreign variables")
        total = total + value * coeff
    if missing:
        raise IncompleteDataError(missing)
    return total


@dataclass
class DegreeResult:
    value: int
    symbolic: GradedClass       # degree-m class on Y before pairing
    setup: ScrollSetup
    asserted: bool

    def __int__(self):
        return self.value


def degree_class(setup: ScrollSetup, ring: GradedRing | None = None) -> GradedClass:
    """pi_* of the degeneracy class dotted with L^(n - codim)."""
    ring = ring or scroll_ring(setup.n, setup.m)
    cls = inflection_class(setup, ring)
    power = setup.n - setup.codim
    if power < 0:
        return base_ring(setup.m, setup.fiber_rank).zero()
    dotted = cls * hyperplane_class(ring) ** power
    return pushforward(dotted, setup.fiber_rank)


def degree_of_inflection(setup: ScrollSetup, data: NumericalBaseData) -> DegreeResult:
    """Count (or degree) of the order-k degeneracy locus against base data."""
    if data.dimension != setup.m:
        raise InvalidInputError(
            f"data dimension {data.dimension} does not match m={setup.m}"
        )
    ring = scroll_ring(setup.n, setup.m)
    symbolic = degree_class(setup, ring)
    value = data.evaluate(symbolic)
    if value.denominator != 1:
        raise InvalidInputError(f"degree evaluated to a non-integer {value}")
    d = data.evaluate(pushforward(hyperplane_class(ring) ** setup.n, setup.fiber_rank))
    if d <= 0:
        warnings.warn(f"base data gives non-positive scroll degree d={d}",
                      stacklevel=2)
    return DegreeResult(int(value), symbolic, setup, setup.in_range)


def symbolic_degree(setup: ScrollSetup,
                    assignments: Mapping[str, Union[Poly, Scalar]],
                    vars: Sequence[str]) -> Poly:
    """The degree as a polynomial in symbolic intersection numbers."""
    return evaluate_symbolic(degree_class(setup), assignments, vars)


# -- bundled base presets ----------------------------------------------------


@dataclass(frozen=True)
class BasePreset:
    """A base surface/threefold with its intersection lattice filled in.

    ``slots`` are the free symbolic parameters; ``build(**values)`` returns
    monomial assignments, symbolic wherever a slot is left unset.
    """

    name: str
    dimension: int
    slots: tuple[str, ...]
    legend: str
    _builder: callable

    def assignments(self, **values) -> dict[str, Union[Poly, Fraction]]:
        """Monomial table over the still-free slots; bound slots become numbers."""
        unknown = set(values) - set(self.slots)
        if unknown:
            raise InvalidInputError(f"unknown preset parameters {sorted(unknown)}")
        free = tuple(s for s in self.slots if s not in values)
        table = {}
        for name in self.slots:
            if name in values:
                table[name] = Poly.const(free, values[name])
            else:
                table[name] = Poly.variable(free, name)
        return self._builder(table, free)

    def numerical(self, **values) -> NumericalBaseData:
        missing = [s for s in self.slots if s not in values]
        if missing:
            raise InvalidInputError(f"preset {self.name} needs values for {missing}")
        raw = self.assignments(**values)
        ints = {}
        for key, poly in raw.items():
            c = poly.constant_value()
            if c.denominator != 1:
                raise InvalidInputError(f"{key} evaluated to non-integer {c}")
            ints[key] = int(c)
        return NumericalBaseData(self.dimension, ints)


def _p2_builder(t, vars):
    v, y = t["v"], t["y"]
    one = Poly.const(vars, 1)
    return {"c1^2": one * 9, "c2": one * 3, "c1*v1": v * 3, "v1^2": v * v, "v2": y}


def _abelian_surface_builder(t, vars):
    d, g2 = t["d"], t["g2"]
    zero = Poly.zero(vars)
    return {"c1^2": zero, "c2": zero, "c1*v1": zero, "v1^2": g2, "v2": g2 - d}


def _k3_builder(t, vars):
    d, g2 = t["d"], t["g2"]
    zero = Poly.zero(vars)
    one = Poly.const(vars, 1)
    return {"c1^2": zero, "c2": one * 24, "c1*v1": zero, "v1^2": g2, "v2": g2 - d}


def _fe_builder(t, vars):
    a, b, e, v2 = t["a"], t["b"], t["e"], t["v2"]
    one = Poly.const(vars, 1)
    return {
        "c1^2": one * 8,
        "c2": one * 4,
        "c1*v1": a * 2 + b * 2 - a * e,
        "v1^2": a * (b * 2 - a * e),
        "v2": v2,
    }


def _bxp1_builder(t, vars):
    a, b, q, v2 = t["a"], t["b"], t["q"], t["v2"]
    one = Poly.const(vars, 1)
    return {
        "c1^2": (one - q) * 8,
        "c2": (one - q) * 4,
        "c1*v1": b * 2 - (q * 2 - 2) * a,
        "v1^2": a * b * 2,
        "v2": v2,
    }


def _p3_builder(t, vars):
    x, y = t["x"], t["y"]
    one = Poly.const(vars, 1)
    return {
        "c1^3": one * 64, "c1*c2": one * 24, "c3": one * 4,
        "c1^2*v1": x * 16, "c2*v1": x * 6, "c1*v1^2": x * x * 4,
        "c1*v2": y * 4, "v1^3": x ** 3, "v1*v2": x * y,
    }


def _q3_builder(t, vars):
    # hyperplane h with h^3 = 2; v1 = x h, v2 = y (h^2 / 2)
    x, y = t["x"], t["y"]
    one = Poly.const(vars, 1)
    return {
        "c1^3": one * 54, "c1*c2": one * 24, "c3": one * 4,
        "c1^2*v1": x * 18, "c2*v1": x * 8, "c1*v1^2": x * x * 6,
        "c1*v2": y * 3, "v1^3": x ** 3 * 2, "v1*v2": x * y,
    }


def _abelian_threefold_builder(t, vars):
    zero = Poly.zero(vars)
    return {
        "c1^3": zero, "c1*c2": zero, "c3": zero,
        "c1^2*v1": zero, "c2*v1": zero, "c1*v1^2": zero, "c1*v2": zero,
        "v1^3": t["v111"], "v1*v2": t["v12"], "v3": t["v3"],
    }


BASE_PRESETS: dict[str, BasePreset] = {
    "p2": BasePreset("p2", 2, ("v", "y"),
                     "v = c1(V).h on the plane, y = c2(V)", _p2_builder),
    "abelian-surface": BasePreset("abelian-surface", 2, ("d", "g2"),
                                  "d = scroll degree, g2 = 2g-2", _abelian_surface_builder),
    "k3": BasePreset("k3", 2, ("d", "g2"),
                     "d = scroll degree, g2 = 2g-2", _k3_builder),
    "fe": BasePreset("fe", 2, ("a", "b", "e", "v2"),
                     "det V = a s + b f on the Hirzebruch surface F_e, v2 = c2(V)",
                     _fe_builder),
    "bxp1": BasePreset("bxp1", 2, ("a", "b", "q", "v2"),
                       "det V = a s + b f on B x P1, q = genus of B, v2 = c2(V)",
                       _bxp1_builder),
    "p3": BasePreset("p3", 3, ("x", "y"),
                     "v1 = x h, v2 = y h^2 on projective 3-space", _p3_builder),
    "q3": BasePreset("q3", 3, ("x", "y"),
                     "v1 = x h, v2 = y (h^2/2) on the smooth quadric threefold",
                     _q3_builder),
    "abelian-threefold": BasePreset("abelian-threefold", 3, ("v111", "v12", "v3"),
                                    "v111 = v1^3, v12 = v1 v2, v3 = c3(V)",
                                    _abelian_threefold_builder),
}
