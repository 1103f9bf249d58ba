"""Jet matrices, generic ranks and local equations of inflectional loci.

A probe is a local polynomial parameterization of an embedded variety: a
list of coordinate functions in named chart variables.  The order-k jet
matrix at a point stacks all partial derivatives of order <= k (rows, in
graded-lex order of multi-indices) of every coordinate (columns).  Generic
rank is obtained by exact evaluation at random rational points; a
fraction-free symbolic mode certifies small charts over the function field.
"""

from __future__ import annotations

import itertools
import json
import random
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence

from .errors import InvalidInputError
from .exactpoly import Poly, common_divisor, parse_poly
from .linalg import iter_minors, rank_poly, rank_rational

DEFAULT_TRIALS = 8
DEFAULT_HEIGHT = 100


@dataclass(frozen=True)
class JetProbeSpec:
    """A chart to probe: variables, coordinate functions, order and sampling."""

    variables: tuple[str, ...]
    coordinates: tuple[Poly, ...]
    order: int
    trials: int = DEFAULT_TRIALS
    seed: int = 0
    height: int = DEFAULT_HEIGHT

    def __post_init__(self):
        if self.order < 1:
            raise InvalidInputError("jet order must be >= 1")
        if self.trials < 1:
            raise InvalidInputError("need at least one trial")
        if not self.coordinates:
            raise InvalidInputError("need at least one coordinate function")
        coords = tuple(
            parse_poly(c, self.variables) if isinstance(c, str) else c
            for c in self.coordinates
        )
        for c in coords:
            if c.vars != self.variables:
                raise InvalidInputError("coordinate over the wrong variables")
            if c.is_zero():
                raise InvalidInputError("coordinate functions must be nonzero")
        object.__setattr__(self, "coordinates", coords)
        object.__setattr__(self, "variables", tuple(self.variables))
        if not any(c.is_constant() for c in coords):
            # rank is still chart-invariant wherever some coordinate is a
            # unit, which covers blown-up parameterizations
            warnings.warn("no constant coordinate; chart is not normalized",
                          stacklevel=2)

    @property
    def dimension(self) -> int:
        return len(self.variables)

    def with_order(self, order: int) -> "JetProbeSpec":
        return JetProbeSpec(self.variables, self.coordinates, order,
                            self.trials, self.seed, self.height)

    def to_payload(self) -> dict:
        return {
            "variables": list(self.variables),
            "coordinates": [str(c) for c in self.coordinates],
            "order": self.order,
            "trials": self.trials,
            "seed": self.seed,
            "height": self.height,
        }

    @classmethod
    def from_payload(cls, payload) -> "JetProbeSpec":
        return cls(
            tuple(payload["variables"]),
            tuple(payload["coordinates"]),
            payload["order"],
            payload.get("trials", DEFAULT_TRIALS),
            payload.get("seed", 0),
            payload.get("height", DEFAULT_HEIGHT),
        )

    @classmethod
    def load(cls, path) -> "JetProbeSpec":
        with open(path, "r", encoding="utf-8") as handle:
            return cls.from_payload(json.load(handle))


def multi_indices(dimension: int, order: int) -> list[tuple[int, ...]]:
    """All derivative multi-indices of total order <= order, graded-lex."""
    out = []
    for total in range(order + 1):
        block = [
            exps
            for exps in itertools.product(range(total + 1), repeat=dimension)
            if sum(exps) == total
        ]
        block.sort(key=lambda e: tuple(-x for x in e))
        out.extend(tuple(e) for e in block)
    return out


def symbolic_jet_matrix(spec: JetProbeSpec) -> list[list[Poly]]:
    """Rows: derivatives of order <= k; columns: coordinate functions."""
    rows = []
    for alpha in multi_indices(spec.dimension, spec.order):
        row = []
        for coord in spec.coordinates:
            g = coord
            for name, times in zip(spec.variables, alpha):
                for _ in range(times):
                    g = g.diff(name)
                    if g.is_zero():
                        break
            row.append(g)
        rows.append(row)
    return rows


def jet_matrix(spec: JetProbeSpec, point: Sequence[Fraction]) -> list[list[Fraction]]:
    """The exact jet matrix evaluated at a rational chart point."""
    if len(point) != spec.dimension:
        raise InvalidInputError("point dimension does not match the chart")
    values = {name: Fraction(p) for name, p in zip(spec.variables, point)}
    return [
        [entry.eval_at(values) for entry in row]
        for row in symbolic_jet_matrix(spec)
    ]


def _random_point(spec: JetProbeSpec, rng: random.Random) -> tuple[Fraction, ...]:
    return tuple(
        Fraction(rng.randint(-spec.height, spec.height),
                 rng.randint(1, spec.height))
        for _ in spec.variables
    )


@dataclass
class RankScan:
    """Result of a sampled generic-rank computation."""

    spec: JetProbeSpec
    rank: int
    per_trial: tuple[int, ...]
    rows: int
    note: str = "generic rank with confidence: sampled"

    def to_payload(self) -> dict:
        return {
            "spec": self.spec.to_payload(),
            "rank": self.rank,
            "per_trial": list(self.per_trial),
            "rows": self.rows,
            "note": self.note,
        }


def probe_rank(spec: JetProbeSpec) -> RankScan:
    """Maximum jet rank over sampled rational points (lower bound for s_k)."""
    rng = random.Random(spec.seed)
    ranks = []
    for _ in range(spec.trials):
        matrix = jet_matrix(spec, _random_point(spec, rng))
        ranks.append(rank_rational(matrix))
    note = "generic rank with confidence: sampled"
    if max(ranks) == 0:
        note = "resample notice: every sample point gave the zero matrix"
    return RankScan(spec, max(ranks), tuple(ranks),
                    comb(spec.dimension + spec.order, spec.order), note)


def generic_jet_rank(spec: JetProbeSpec) -> int:
    return probe_rank(spec).rank


def symbolic_jet_rank(spec: JetProbeSpec) -> int:
    """Rank over the rational function field, fraction-free; exact but slower."""
    return rank_poly(symbolic_jet_matrix(spec))


@dataclass
class MinorReport:
    """All r x r minors of the symbolic jet matrix with their common content."""

    spec: JetProbeSpec
    size: int
    minors: list[Poly]
    content: Poly
    nonzero_minors: int

    @property
    def reduced_locus(self) -> str:
        """The support of the content, one equation per variable appearing."""
        support = [
            name for name, e in zip(self.content.vars,
                                    self.content.monomial_content()) if e
        ]
        extra = self.content.shift_down(self.content.monomial_content())
        pieces = [f"{name} = 0" for name in support]
        if not extra.is_constant():
            pieces.append(f"{extra} = 0")
        return ", ".join(pieces) if pieces else "(no common factor)"

    def to_payload(self) -> dict:
        return {
            "spec": self.spec.to_payload(),
            "size": self.size,
            "content": str(self.content),
            "nonzero_minors": self.nonzero_minors,
            "minors": [str(m) for m in self.minors],
        }


def inflection_equations(spec: JetProbeSpec, size: int) -> MinorReport:
    """Minors of order ``size`` with the common polynomial content factored out."""
    matrix = symbolic_jet_matrix(spec)
    nrows, ncols = len(matrix), len(matrix[0])
    if size > min(nrows, ncols):
        raise InvalidInputError(
            f"minor size {size} exceeds the {nrows}x{ncols} jet matrix"
        )
    minors = [value for _, value in iter_minors(matrix, size)]
    live = [m for m in minors if not m.is_zero()]
    if not live:
        content = Poly.zero(spec.coordinates[0].vars)
    else:
        content = common_divisor(live, random.Random(spec.seed))
    return MinorReport(spec, size, minors, content, len(live))


@dataclass
class ProductRankCheck:
    base_rank_low: int     # order k-1 on the base
    base_rank_high: int    # order k on the base
    predicted: int
    direct: int

    @property
    def holds(self) -> bool:
        return self.predicted == self.direct


def segre_product_spec(base: JetProbeSpec, fiber_dim: int) -> JetProbeSpec:
    """Chart of base x P^fiber_dim under the Segre embedding."""
    names = base.variables + tuple(f"t{j}" for j in range(1, fiber_dim + 1))
    lifted = [c.subs({}, vars=names) for c in base.coordinates]
    coords = list(lifted)
    for j in range(1, fiber_dim + 1):
        t = Poly.variable(names, f"t{j}")
        coords.extend(c * t for c in lifted)
    return JetProbeSpec(names, tuple(coords), base.order,
                        base.trials, base.seed, base.height)


def product_rank_identity(base: JetProbeSpec, fiber_dim: int) -> ProductRankCheck:
    """Jet rank of a product scroll from the ranks of its base.

    The k-jet rank of base x P^s equals s * (rank at order k-1) plus the
    rank at order k, and the direct probe of the product chart must agree.
    """
    if base.order < 2:
        raise InvalidInputError("the identity needs order >= 2 on the base")
    high = generic_jet_rank(base)
    low = generic_jet_rank(base.with_order(base.order - 1))
    predicted = fiber_dim * low + high
    direct = generic_jet_rank(segre_product_spec(base, fiber_dim))
    return ProductRankCheck(low, high, predicted, direct)


# -- bundled charts -----------------------------------------------------------


def _monomials_up_to(names, degree, in_names=None) -> list[Poly]:
    """1 and all monomials of degree <= degree in the chosen variables."""
    chosen = in_names if in_names is not None else names
    out = [Poly.const(names, 1)]
    for total in range(1, degree + 1):
        for combo in itertools.combinations_with_replacement(chosen, total):
            m = Poly.const(names, 1)
            for n in combo:
                m = m * Poly.variable(names, n)
            out.append(m)
    return out


def segre_chart(m: int, s: int, order: int = 2, **kw) -> JetProbeSpec:
    """P^m x P^s in its Segre embedding, affine chart."""
    names = tuple(f"u{i}" for i in range(1, m + 1)) + tuple(
        f"t{j}" for j in range(1, s + 1))
    us = [Poly.variable(names, f"u{i}") for i in range(1, m + 1)]
    ts = [Poly.variable(names, f"t{j}") for j in range(1, s + 1)]
    coords = [Poly.const(names, 1)] + us + ts + [u * t for u in us for t in ts]
    return JetProbeSpec(names, tuple(coords), order, **kw)


def p1_power_chart(n: int, order: int = 2, **kw) -> JetProbeSpec:
    """(P^1)^n in the full Segre embedding: all squarefree monomials."""
    names = tuple(f"u{i}" for i in range(1, n)) + ("t1",)
    coords = []
    for picks in itertools.product((0, 1), repeat=n):
        m = Poly.const(names, 1)
        for name, take in zip(names, picks):
            if take:
                m = m * Poly.variable(names, name)
        coords.append(m)
    return JetProbeSpec(names, tuple(coords), order, **kw)


def flag_threefold_chart(order: int = 2, **kw) -> JetProbeSpec:
    """Point-line incidence threefold in the Segre embedding of P^2 x P^2.

    Point (1 : u1 : u2), line (-u1 - t u2 : 1 : t) through it; the nine
    biproducts span the ambient hyperplane section.
    """
    names = ("u1", "u2", "t")
    u1, u2, t = Poly.variables(names)
    one = Poly.const(names, 1)
    x = [one, u1, u2]
    y = [-u1 - t * u2, one, t]
    coords = [xi * yj for xi in x for yj in y]
    return JetProbeSpec(names, tuple(coords), order, **kw)


def f1_cubic_chart(order: int = 2, **kw) -> JetProbeSpec:
    """The rational cubic surface scroll in P^4."""
    names = ("u1", "u2")
    u1, u2 = Poly.variables(names)
    one = Poly.const(names, 1)
    return JetProbeSpec(names, (one, u1, u2, u1 * u2, u1 ** 2 * u2), order, **kw)


def cubic_scroll_times_p1_chart(order: int = 2, **kw) -> JetProbeSpec:
    """The rational cubic surface scroll times P^1, Segre-embedded in P^9."""
    return segre_product_spec(f1_cubic_chart(order, **kw), 1)


def veronese_chart(order: int = 2, **kw) -> JetProbeSpec:
    """The Veronese surface in P^5."""
    names = ("u1", "u2")
    return JetProbeSpec(names, tuple(_monomials_up_to(names, 2)), order, **kw)


def rational_normal_curve_chart(degree: int, order: int = 2, **kw) -> JetProbeSpec:
    names = ("u1",)
    u = Poly.variable(names, "u1")
    coords = [u ** i for i in range(degree + 1)]
    return JetProbeSpec(names, tuple(coords), order, **kw)


def two_summand_scroll_chart(m: int, order: int = 2, **kw) -> JetProbeSpec:
    """P(O(1) + O(2)) over P^m near the negative section.

    Coordinates: the linear monomials, then v times every monomial of
    degree <= 2.  For m = 1 this is the cubic surface scroll in P^4.
    """
    names = tuple(f"u{i}" for i in range(1, m + 1)) + ("v",)
    unames = names[:-1]
    v = Poly.variable(names, "v")
    linear = [Poly.const(names, 1)] + [Poly.variable(names, u) for u in unames]
    quad = _monomials_up_to(names, 2, unames)
    coords = linear + [v * q for q in quad]
    return JetProbeSpec(names, tuple(coords), order, **kw)


def bordiga_chart(order: int = 2, **kw) -> JetProbeSpec:
    """Chart of the degree-10 threefold scroll near a fiber of the
    exceptional divisor of its blow-up model.

    Ten cubic combinations in (x, y, w), obtained from the quadrics through
    a twisted cubic after substituting z = y w.
    """
    names = ("x", "y", "w")
    coords = [
        "x^2 - y",
        "x^3 - x*y",
        "x^2*y - y^2",
        "x*y - y*w",
        "x*y^2 - y^2*w",
        "x*y^2*w - y^2*w^2",
        "x*y*w - y^2",
        "x^2*y*w - x*y^2",
        "x*y^2*w - y^3",
        "x*y^2*w^2 - y^3*w",
    ]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # chart has no constant coordinate
        return JetProbeSpec(names, tuple(coords), order, **kw)


@dataclass(frozen=True)
class BundledProbe:
    name: str
    build: callable
    expected_rank: int
    description: str
    scroll_dims: tuple[int, int] | None = None   # (n, m) when the chart is a scroll


BUNDLED_PROBES: dict[str, BundledProbe] = {}


def _bundle(name, build, expected_rank, description, scroll_dims=None):
    BUNDLED_PROBES[name] = BundledProbe(name, build, expected_rank, description,
                                        scroll_dims)


_bundle("segre-1-1", lambda: segre_chart(1, 1), 4, "P1 x P1 in P3", (2, 1))
_bundle("segre-2-1", lambda: segre_chart(2, 1), 6, "P2 x P1 in P5", (3, 2))
_bundle("segre-2-2", lambda: segre_chart(2, 2), 9, "P2 x P2 in P8", (4, 2))
_bundle("segre-3-1", lambda: segre_chart(3, 1), 8, "P3 x P1 in P7", (4, 3))
_bundle("p1-cube", lambda: p1_power_chart(3), 7, "(P1)^3 in P7", (3, 2))
_bundle("p1-fourth", lambda: p1_power_chart(4), 11, "(P1)^4 in P15", (4, 3))
_bundle("p1-fifth", lambda: p1_power_chart(5), 16, "(P1)^5 in P31", (5, 4))
_bundle("flag-threefold", flag_threefold_chart, 8,
        "point-line incidence threefold in P7", (3, 2))
_bundle("cubic-scroll-times-p1", cubic_scroll_times_p1_chart, 8,
        "rational cubic scroll times P1 in P9", (3, 2))
_bundle("veronese", veronese_chart, 6, "Veronese surface in P5")
_bundle("two-summand-plane-scroll", lambda: two_summand_scroll_chart(2), 9,
        "P(O(1)+O(2)) over the plane in P8", (3, 2))
_bundle("cubic-surface-scroll", lambda: two_summand_scroll_chart(1), 5,
        "cubic surface scroll in P4", (2, 1))
_bundle("bordiga", bordiga_chart, 9, "degree-10 threefold scroll chart in P9",
        (3, 2))


@lru_cache(maxsize=None)
def bundled_minor_report(name: str, size: int) -> MinorReport:
    """Minor report of a bundled probe, computed once per process."""
    return inflection_equations(BUNDLED_PROBES[name].build(), size)
