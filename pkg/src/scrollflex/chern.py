"""Truncated graded-ring arithmetic and splitting-principle bundle calculus.

A :class:`GradedClass` is a polynomial over exact rationals in named,
weighted variables, truncated above a fixed cohomological degree.  Variables
may carry a *sector* tag with its own degree cap; classes pulled back from a
lower-dimensional base use this to vanish above the base dimension.

:class:`FormalBundle` pairs a rank with a total Chern class of constant term
one.  Derived bundles (duals, twists by line classes, tensor products,
symmetric powers) are computed with formal Chern roots: the derived total
class is expanded as a symmetric polynomial in the roots and rewritten in
elementary symmetric polynomials by exact Gaussian elimination over the
symmetric-monomial basis.  An independent Newton-identity route through
power sums is provided for cross-checking.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Mapping, Sequence, Union

from .errors import InvalidInputError, ResourceLimitError, RingMismatchError

Scalar = Union[int, Fraction]

TENSOR_RANK_LIMIT = 64
SYM_RANK_LIMIT = 64


def _coerce(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise InvalidInputError(f"expected an exact rational, got {value!r}")


@dataclass(frozen=True)
class GradedVariable:
    """A named generator with a positive cohomological weight."""

    name: str
    weight: int = 1
    sector: str | None = None

    def __post_init__(self):
        if not self.name or not isinstance(self.name, str):
            raise InvalidInputError("variable name must be a nonempty string")
        if self.weight < 1:
            raise InvalidInputError(f"weight of {self.name} must be >= 1")


class GradedRing:
    """An ordered tuple of graded variables with truncation data."""

    __slots__ = ("variables", "names", "weights", "truncation", "sector_caps",
                 "_index", "_sector_idx")

    def __init__(self, variables: Sequence[GradedVariable], truncation: int,
                 sector_caps: Mapping[str, int] | None = None):
        self.variables = tuple(variables)
        self.names = tuple(v.name for v in self.variables)
        if len(set(self.names)) != len(self.names):
            raise InvalidInputError("variable names must be unique in a ring")
        if truncation < 0:
            raise InvalidInputError("truncation must be non-negative")
        self.weights = tuple(v.weight for v in self.variables)
        self.truncation = truncation
        self.sector_caps = dict(sector_caps or {})
        for sector in self.sector_caps:
            if not any(v.sector == sector for v in self.variables):
                raise InvalidInputError(f"sector cap for unused sector {sector!r}")
        self._index = {name: i for i, name in enumerate(self.names)}
        self._sector_idx = {
            sector: tuple(i for i, v in enumerate(self.variables) if v.sector == sector)
            for sector in self.sector_caps
        }

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise InvalidInputError(f"ring has no variable {name!r}") from None

    def monomial_degree(self, exps: Sequence[int]) -> int:
        return sum(w * e for w, e in zip(self.weights, exps))

    def admits(self, exps: Sequence[int]) -> bool:
        if self.monomial_degree(exps) > self.truncation:
            return False
        for sector, cap in self.sector_caps.items():
            deg = sum(self.weights[i] * exps[i] for i in self._sector_idx[sector])
            if deg > cap:
                return False
        return True

    def monomial_string(self, exps: Sequence[int]) -> str:
        parts = []
        for name, e in zip(self.names, exps):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    # -- constructors --------------------------------------------------

    def zero(self) -> "GradedClass":
        return GradedClass(self, {})

    def one(self) -> "GradedClass":
        return self.scalar(1)

    def scalar(self, value: Scalar) -> "GradedClass":
        value = _coerce(value)
        if not value:
            return self.zero()
        return GradedClass(self, {tuple(0 for _ in self.names): value})

    def variable(self, name: str) -> "GradedClass":
        i = self.index(name)
        exps = tuple(1 if j == i else 0 for j in range(len(self.names)))
        return GradedClass(self, {exps: Fraction(1)})

    # -- identity ------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, GradedRing)
                and self.variables == other.variables
                and self.truncation == other.truncation
                and self.sector_caps == other.sector_caps)

    def __hash__(self):
        return hash((self.variables, self.truncation,
                     tuple(sorted(self.sector_caps.items()))))

    def __repr__(self):
        return (f"GradedRing({', '.join(self.names)}; trunc={self.truncation}"
                + (f"; caps={self.sector_caps}" if self.sector_caps else "") + ")")

    def descriptor(self) -> dict:
        return {
            "variables": [[v.name, v.weight, v.sector] for v in self.variables],
            "truncation": self.truncation,
            "sector_caps": dict(self.sector_caps),
        }

    @classmethod
    def from_descriptor(cls, payload: Mapping) -> "GradedRing":
        variables = [GradedVariable(n, w, s) for n, w, s in payload["variables"]]
        return cls(variables, payload["truncation"], payload.get("sector_caps") or None)


class GradedClass:
    """A truncated graded polynomial with exact rational coefficients."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: GradedRing, terms: Mapping[tuple[int, ...], Scalar]):
        self.ring = ring
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, coeff in terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(ring.names) or any(e < 0 for e in exps):
                raise InvalidInputError(f"bad exponent vector {exps}")
            if not ring.admits(exps):
                continue
            c = _coerce(coeff)
            if c:
                prev = clean.get(exps)
                total = c if prev is None else prev + c
                if total:
                    clean[exps] = total
                else:
                    del clean[exps]
        self.terms = clean

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def constant_term(self) -> Fraction:
        return self.terms.get(tuple(0 for _ in self.ring.names), Fraction(0))

    def degree(self) -> int | None:
        """Top weighted degree present, or None for the zero class."""
        if not self.terms:
            return None
        return max(self.ring.monomial_degree(e) for e in self.terms)

    def min_positive_degree(self) -> int | None:
        degs = [self.ring.monomial_degree(e) for e in self.terms if any(e)]
        return min(degs) if degs else None

    def homogeneous_part(self, d: int) -> "GradedClass":
        return GradedClass(self.ring, {
            e: c for e, c in self.terms.items()
            if self.ring.monomial_degree(e) == d
        })

    def graded_parts(self) -> dict[int, "GradedClass"]:
        out: dict[int, GradedClass] = {}
        for e, c in self.terms.items():
            d = self.ring.monomial_degree(e)
            out.setdefault(d, self.ring.zero())
        return {d: self.homogeneous_part(d) for d in sorted(out)}

    def is_homogeneous(self, d: int) -> bool:
        return all(self.ring.monomial_degree(e) == d for e in self.terms)

    def coefficient(self, monomial: Union[str, Sequence[int]]) -> Fraction:
        if isinstance(monomial, str):
            exps = [0] * len(self.ring.names)
            if monomial.strip() != "1":
                for factor in monomial.split("*"):
                    name, _, power = factor.strip().partition("^")
                    exps[self.ring.index(name)] += int(power) if power else 1
            monomial = exps
        return self.terms.get(tuple(monomial), Fraction(0))

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "GradedClass") -> None:
        if self.ring != other.ring:
            raise RingMismatchError(
                f"cannot mix classes from {self.ring!r} and {other.ring!r}"
            )

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.scalar(other)
        if not isinstance(other, GradedClass):
            return NotImplemented
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, Fraction(0)) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        out = GradedClass.__new__(GradedClass)
        out.ring = self.ring
        out.terms = terms
        return out

    __radd__ = __add__

    def __neg__(self):
        out = GradedClass.__new__(GradedClass)
        out.ring = self.ring
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.scalar(other)
        if not isinstance(other, GradedClass):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _coerce(other)
            out = GradedClass.__new__(GradedClass)
            out.ring = self.ring
            out.terms = {e: k * c for e, k in self.terms.items()} if c else {}
            return out
        if not isinstance(other, GradedClass):
            return NotImplemented
        self._check(other)
        ring = self.ring
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                if not ring.admits(exps):
                    continue
                s = out.get(exps, Fraction(0)) + c1 * c2
                if s:
                    out[exps] = s
                else:
                    out.pop(exps, None)
        result = GradedClass.__new__(GradedClass)
        result.ring = ring
        result.terms = out
        return result

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise InvalidInputError("class powers take non-negative integers")
        result = self.ring.one()
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.scalar(other)
        if not isinstance(other, GradedClass):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    # -- series and structural operations -----------------------------------

    def series_inverse(self) -> "GradedClass":
        """Multiplicative inverse of a class with constant term one."""
        if self.constant_term != 1:
            raise InvalidInputError(
                f"series inverse needs constant term 1, got {self.constant_term}"
            )
        u = self - 1
        out = self.ring.one()
        power = self.ring.one()
        for _ in range(self.ring.truncation):
            power = power * u
            if power.is_zero():
                break
            out = out + power if (_ % 2 == 1) else out - power
        return out

    def alternate_signs(self) -> "GradedClass":
        """Negate every odd-degree graded piece (Chern classes of a dual)."""
        return GradedClass(self.ring, {
            e: (-c if self.ring.monomial_degree(e) % 2 else c)
            for e, c in self.terms.items()
        })

    def substitute(self, target: GradedRing,
                   mapping: Mapping[str, "GradedClass"]) -> "GradedClass":
        """Evaluate the class with each variable replaced by a target class.

        Every variable occurring in a term must be mapped; values must be
        homogeneous of the variable's weight (or zero).
        """
        values: dict[int, GradedClass] = {}
        for name, value in mapping.items():
            i = self.ring.index(name)
            if value.ring != target:
                raise RingMismatchError(
                    f"substitution value for {name!r} lives in the wrong ring"
                )
            if not value.is_zero() and not value.is_homogeneous(self.ring.weights[i]):
                raise InvalidInputError(
                    f"substitution for {name!r} must be homogeneous of degree "
                    f"{self.ring.weights[i]}"
                )
            values[i] = value
        out = target.zero()
        powers: dict[tuple[int, int], GradedClass] = {}
        for exps, c in self.terms.items():
            term = target.scalar(c)
            for i, e in enumerate(exps):
                if e == 0:
                    continue
                if i not in values:
                    raise InvalidInputError(
                        f"no substitution supplied for {self.ring.names[i]!r}"
                    )
                key = (i, e)
                if key not in powers:
                    powers[key] = values[i] ** e
                term = term * powers[key]
                if term.is_zero():
                    break
            out = out + term
        return out

    # -- io ------------------------------------------------------------------

    def to_payload(self) -> dict:
        terms = sorted(self.terms.items(), key=lambda kv: _print_key(self.ring, kv[0]))
        return {
            "ring": self.ring.descriptor(),
            "terms": [[list(e), c.numerator, c.denominator] for e, c in terms],
        }

    @classmethod
    def from_payload(cls, payload: Mapping, ring: GradedRing | None = None) -> "GradedClass":
        found = GradedRing.from_descriptor(payload["ring"])
        if ring is not None and ring != found:
            raise RingMismatchError("payload ring does not match the expected ring")
        return cls(found, {
            tuple(e): Fraction(num, den) for e, num, den in payload["terms"]
        })

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for exps in sorted(self.terms, key=lambda e: _print_key(self.ring, e)):
            c = self.terms[exps]
            mono = self.ring.monomial_string(exps)
            if mono == "1":
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            bits.append(("-" if c < 0 else "+", body))
        sign, head = bits[0]
        text = ("-" if sign == "-" else "") + head
        for sign, body in bits[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"GradedClass({self})"


def _print_key(ring: GradedRing, exps: tuple[int, ...]):
    # ascending degree, then descending lex in the ring's variable order
    return (ring.monomial_degree(exps), tuple(-e for e in exps))


def series_inverse(x: GradedClass) -> GradedClass:
    return x.series_inverse()


class FormalBundle:
    """A rank together with a total Chern class of constant term one."""

    __slots__ = ("rank", "total_chern")

    def __init__(self, rank: int, total_chern: GradedClass):
        if not isinstance(rank, int) or rank < 0:
            raise InvalidInputError("bundle rank must be a non-negative integer")
        if total_chern.constant_term != 1:
            raise InvalidInputError("total Chern class must have constant term 1")
        self.rank = rank
        self.total_chern = total_chern

    @property
    def ring(self) -> GradedRing:
        return self.total_chern.ring

    def chern(self, i: int) -> GradedClass:
        return self.total_chern.homogeneous_part(i)

    def __eq__(self, other):
        return (isinstance(other, FormalBundle) and self.rank == other.rank
                and self.total_chern == other.total_chern)

    def __repr__(self):
        return f"FormalBundle(rank={self.rank}, c={self.total_chern})"

    # method sugar over the module-level operations
    def dual(self) -> "FormalBundle":
        return dual(self)

    def direct_sum(self, other: "FormalBundle") -> "FormalBundle":
        return direct_sum(self, other)

    def tensor(self, other: "FormalBundle", method: str = "roots") -> "FormalBundle":
        return tensor(self, other, method=method)

    def tensor_line(self, line: GradedClass, sign: int) -> "FormalBundle":
        return tensor_line(self, line, sign)

    def sym_power(self, k: int, method: str = "roots") -> "FormalBundle":
        return sym_power(self, k, method=method)


def trivial_bundle(ring: GradedRing, rank: int) -> FormalBundle:
    return FormalBundle(rank, ring.one())

def bundle_from_classes(rank: int, classes: Sequence[GradedClass]) -> FormalBundle:
    """Build a bundle from its positive-degree Chern classes c_1, c_2, ..."""
    if not classes:
        raise InvalidInputError("need at least c_1 (possibly zero)")
    ring = classes[0].ring
    total = ring.one()
    for i, cls in enumerate(classes, start=1):
        if not cls.is_zero() and not cls.is_homogeneous(i):
            raise InvalidInputError(f"c_{i} must be homogeneous of degree {i}")
        total = total + cls
    return FormalBundle(rank, total)


def dual(e: FormalBundle) -> FormalBundle:
    """Same rank, with c_i replaced by (-1)^i c_i."""
    return FormalBundle(e.rank, e.total_chern.alternate_signs())


def direct_sum(a: FormalBundle, b: FormalBundle) -> FormalBundle:
    """Whitney sum: ranks add, total Chern classes multiply."""
    return FormalBundle(a.rank + b.rank, a.total_chern * b.total_chern)


def tensor_line(e: FormalBundle, line: GradedClass, sign: int) -> FormalBundle:
    """Twist by a line bundle with first Chern class ``sign * line``."""
    if sign not in (1, -1):
        raise InvalidInputError("sign must be +1 or -1")
    if not line.is_zero() and not line.is_homogeneous(1):
        raise InvalidInputError("line class must be homogeneous of degree 1")
    lam = line if sign == 1 else -line
    ring = e.ring
    lam_pow = [ring.one()]
    for _ in range(ring.truncation):
        lam_pow.append(lam_pow[-1] * lam)
    total = ring.zero()
    for k in range(ring.truncation + 1):
        part = ring.zero()
        for i in range(0, min(k, e.rank) + 1):
            factor = comb(e.rank - i, k - i)
            if factor == 0:
                continue
            part = part + e.chern(i) * lam_pow[k - i] * factor
        total = total + part
    return FormalBundle(e.rank, total)


# -- splitting-principle tables -------------------------------------------
#
# Universal expressions for the Chern classes of derived bundles are computed
# once per (ranks, truncation) in a scratch ring of weight-one roots, then
# instantiated by substituting the operands' actual Chern classes.


def _root_ring(sizes: Sequence[int], truncation: int) -> tuple[GradedRing, list[range]]:
    variables = []
    blocks = []
    start = 0
    for b, size in enumerate(sizes):
        variables.extend(GradedVariable(f"r{b}_{i}") for i in range(size))
        blocks.append(range(start, start + size))
        start += size
    return GradedRing(variables, truncation), blocks


def _elementary(ring: GradedRing, block: range, i: int) -> GradedClass:
    n = len(ring.names)
    terms = {}
    for combo in itertools.combinations(block, i):
        exps = [0] * n
        for j in combo:
            exps[j] = 1
        terms[tuple(exps)] = Fraction(1)
    return GradedClass(ring, terms) if i else ring.one()


def _weighted_vectors(total: int, weights: Sequence[int]):
    """All exponent tuples alpha with sum(alpha_i * weights_i) == total."""
    if not weights:
        if total == 0:
            yield ()
        return
    w = weights[0]
    for head in range(total // w + 1):
        for tail in _weighted_vectors(total - head * w, weights[1:]):
            yield (head,) + tail


def _solve_exact(columns: list[dict], target: dict) -> list[Fraction]:
    monomials = sorted(set().union(target, *columns))
    rows = [[col.get(m, Fraction(0)) for col in columns] + [target.get(m, Fraction(0))]
            for m in monomials]
    ncols = len(columns)
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                factor = rows[i][c]
                rows[i] = [v - factor * p for v, p in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][ncols]:
            raise InvalidInputError("inconsistent symmetric reduction")
    solution = [Fraction(0)] * ncols
    for row_idx, c in enumerate(pivots):
        solution[c] = rows[row_idx][ncols]
    return solution


def _reduce_symmetric(part: GradedClass, blocks: Sequence[range], d: int) -> dict:
    """Rewrite a block-symmetric degree-d polynomial in elementary symmetrics.

    Returns a map from per-block elementary exponent tuples (concatenated)
    to rational coefficients.
    """
    ring = part.ring
    sizes = [len(b) for b in blocks]
    candidates = []
    splits = list(_weighted_vectors(d, [1] * len(blocks))) if len(blocks) > 1 else [(d,)]
    for split in splits:
        per_block = []
        for b, db in enumerate(split):
            per_block.append(list(_weighted_vectors(db, list(range(1, sizes[b] + 1)))))
        for combo in itertools.product(*per_block):
            candidates.append(tuple(itertools.chain.from_iterable(combo)))
    expansions = []
    for cand in candidates:
        value = ring.one()
        pos = 0
        for b, block in enumerate(blocks):
            for i in range(1, sizes[b] + 1):
                e = cand[pos + i - 1]
                if e:
                    value = value * (_elementary(ring, block, i) ** e)
            pos += sizes[b]
        expansions.append(value.terms)
    coeffs = _solve_exact(expansions, part.terms)
    return {cand: c for cand, c in zip(candidates, coeffs) if c}


@lru_cache(maxsize=None)
def _tensor_table(ra: int, rb: int, truncation: int) -> tuple:
    """Chern classes of a tensor product in elementary symmetric data."""
    ring, (block_a, block_b) = _root_ring((ra, rb), truncation)
    roots = [
        ring.variable(ring.names[i]) + ring.variable(ring.names[j])
        for i in block_a for j in block_b
    ]
    total = ring.one()
    for root in roots:
        total = total * (ring.one() + root)
    return tuple(
        _reduce_symmetric(total.homogeneous_part(d), (block_a, block_b), d)
        for d in range(truncation + 1)
    )


@lru_cache(maxsize=None)
def _sym_table(r: int, k: int, truncation: int) -> tuple:
    """Chern classes of the k-th symmetric power in elementary symmetric data."""
    ring, (block,) = _root_ring((r,), truncation)
    total = ring.one()
    for combo in itertools.combinations_with_replacement(block, k):
        root = ring.zero()
        for i in combo:
            root = root + ring.variable(ring.names[i])
        total = total * (ring.one() + root)
    return tuple(
        _reduce_symmetric(total.homogeneous_part(d), (block,), d)
        for d in range(truncation + 1)
    )


# -- Newton-identity route (independent of the root expansions) ------------


def _chern_ring(sizes: Sequence[int], truncation: int) -> tuple[GradedRing, list[list[str]]]:
    variables = []
    names = []
    for b, size in enumerate(sizes):
        block = [f"e{b}_{i}" for i in range(1, size + 1)]
        names.append(block)
        variables.extend(GradedVariable(n, i) for i, n in enumerate(block, start=1))
    return GradedRing(variables, truncation), names


def _power_sums(ring: GradedRing, names: list[str], rank: int) -> list[GradedClass]:
    """p_0..p_trunc from Newton's identities, p_0 = rank."""
    e = [ring.one()] + [ring.variable(n) for n in names]
    p: list[GradedClass] = [ring.scalar(rank)]
    for d in range(1, ring.truncation + 1):
        total = ring.zero()
        for i in range(1, d):
            if i <= rank:
                term = e[i] * p[d - i]
                total = total + (term if i % 2 == 1 else -term)
        if d <= rank:
            tail = e[d] * d
            total = total + (tail if d % 2 == 1 else -tail)
        p.append(total)
    return p


def _chern_from_power_sums(ring: GradedRing, p: Sequence[GradedClass]) -> list[GradedClass]:
    """e_0..e_trunc recovered from power sums via Newton's identities."""
    e: list[GradedClass] = [ring.one()]
    for d in range(1, ring.truncation + 1):
        total = ring.zero()
        for i in range(1, d + 1):
            term = e[d - i] * p[i]
            total = total + (term if i % 2 == 1 else -term)
        e.append(total * Fraction(1, d))
    return e


def _class_to_table(cls: GradedClass) -> dict:
    return dict(cls.terms)


@lru_cache(maxsize=None)
def _tensor_table_newton(ra: int, rb: int, truncation: int) -> tuple:
    ring, (names_a, names_b) = _chern_ring((ra, rb), truncation)
    pa = _power_sums(ring, names_a, ra)
    pb = _power_sums(ring, names_b, rb)
    pt = [pa[0] * pb[0]]
    for d in range(1, truncation + 1):
        total = ring.zero()
        for t in range(d + 1):
            total = total + pa[t] * pb[d - t] * comb(d, t)
        pt.append(total)
    e = _chern_from_power_sums(ring, pt)
    return tuple(_class_to_table(e[d]) for d in range(truncation + 1))


def _partitions(k: int, largest: int | None = None):
    if k == 0:
        yield ()
        return
    largest = k if largest is None else largest
    for head in range(min(k, largest), 0, -1):
        for tail in _partitions(k - head, head):
            yield (head,) + tail


def _cycle_index_size(partition: tuple[int, ...]) -> int:
    z = 1
    for part in set(partition):
        m = partition.count(part)
        z *= part ** m * factorial(m)
    return z


@lru_cache(maxsize=None)
def _sym_table_newton(r: int, k: int, truncation: int) -> tuple:
    """Symmetric-power Chern classes through the exponential character.

    The character of the k-th symmetric power is the complete homogeneous
    polynomial in the exponentials of the roots; extracting graded parts of
    the cycle-index expansion yields its power sums in terms of those of the
    original bundle.
    """
    ring, (names,) = _chern_ring((r,), truncation)
    p = _power_sums(ring, names, r)
    ps: list[GradedClass] = []
    for d in range(truncation + 1):
        total = ring.zero()
        for partition in _partitions(k):
            weight = Fraction(1, _cycle_index_size(partition))
            for split in _compositions(d, len(partition)):
                term = ring.scalar(weight)
                for part, di in zip(partition, split):
                    term = term * p[di] * Fraction(part ** di, factorial(di))
                total = total + term
        ps.append(total * factorial(d))
    e = _chern_from_power_sums(ring, ps)
    return tuple(_class_to_table(e[d]) for d in range(truncation + 1))


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


# -- derived bundle operations ----------------------------------------------


def _instantiate(table: tuple, operands: Sequence[FormalBundle]) -> FormalBundle:
    ring = operands[0].ring
    sizes = [b.rank for b in operands]
    powers: dict[tuple[int, int, int], GradedClass] = {}

    def chern_power(b: int, i: int, e: int) -> GradedClass:
        key = (b, i, e)
        if key not in powers:
            powers[key] = operands[b].chern(i) ** e
        return powers[key]

    total = ring.zero()
    for d, entry in enumerate(table):
        if d > ring.truncation:
            break
        for exps, coeff in entry.items():
            term = ring.scalar(coeff)
            pos = 0
            for b, size in enumerate(sizes):
                for i in range(1, size + 1):
                    e = exps[pos + i - 1]
                    if e:
                        term = term * chern_power(b, i, e)
                        if term.is_zero():
                            break
                pos += size
                if term.is_zero():
                    break
            total = total + term
    return total


def tensor(a: FormalBundle, b: FormalBundle, method: str = "roots") -> FormalBundle:
    """Tensor product computed through formal Chern roots."""
    if a.ring != b.ring:
        raise RingMismatchError("tensor operands live in different rings")
    if a.rank * b.rank > TENSOR_RANK_LIMIT:
        raise ResourceLimitError(
            f"tensor rank {a.rank * b.rank} exceeds the limit {TENSOR_RANK_LIMIT}"
        )
    if method == "roots":
        table = _tensor_table(a.rank, b.rank, a.ring.truncation)
    elif method == "newton":
        table = _tensor_table_newton(a.rank, b.rank, a.ring.truncation)
    else:
        raise InvalidInputError(f"unknown method {method!r}")
    total = _instantiate(table, (a, b))
    return FormalBundle(a.rank * b.rank, total)


def sym_power(e: FormalBundle, k: int, method: str = "roots") -> FormalBundle:
    """k-th symmetric power computed through formal Chern roots."""
    if not isinstance(k, int) or k < 0:
        raise InvalidInputError("symmetric power order must be a non-negative integer")
    if k == 0:
        return trivial_bundle(e.ring, 1)
    rank = comb(e.rank + k - 1, k)
    if rank > SYM_RANK_LIMIT:
        raise ResourceLimitError(
            f"symmetric power rank {rank} exceeds the limit {SYM_RANK_LIMIT}"
        )
    if method == "roots":
        table = _sym_table(e.rank, k, e.ring.truncation)
    elif method == "newton":
        table = _sym_table_newton(e.rank, k, e.ring.truncation)
    else:
        raise InvalidInputError(f"unknown method {method!r}")
    total = _instantiate(table, (e,))
    return FormalBundle(rank, total)
