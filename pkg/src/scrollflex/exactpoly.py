"""Sparse multivariate polynomials over exact rationals.

The workhorse behind jet matrices, degree formulas and diophantine scans.
A polynomial lives over a fixed ordered tuple of variable names and stores
a map from exponent tuples to nonzero ``Fraction`` coefficients.  Values
are never mutated after construction; every operation returns a fresh
polynomial in canonical sparse form.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd as int_gcd
from math import lcm as int_lcm
from typing import Iterable, Mapping, Sequence, Union

from .errors import InvalidInputError

Scalar = Union[int, Fraction]

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


def _coerce(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise InvalidInputError(f"expected an exact rational, got {value!r}")


def _grlex_key(exps: tuple[int, ...]):
    # sort key for descending graded-lex printing
    return (-sum(exps), tuple(-e for e in exps))


class Poly:
    """A sparse polynomial with exact rational coefficients."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Sequence[str], terms: Mapping[tuple[int, ...], Scalar] | None = None):
        self.vars = tuple(vars)
        if len(set(self.vars)) != len(self.vars):
            raise InvalidInputError(f"duplicate variable names in {self.vars}")
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(self.vars) or any(e < 0 for e in exps):
                raise InvalidInputError(f"bad exponent vector {exps} for {self.vars}")
            c = _coerce(coeff)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
                if not clean[exps]:
                    del clean[exps]
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, vars: Sequence[str]) -> "Poly":
        return cls(vars, {})

    @classmethod
    def const(cls, vars: Sequence[str], value: Scalar) -> "Poly":
        value = _coerce(value)
        if not value:
            return cls.zero(vars)
        return cls(vars, {tuple(0 for _ in vars): value})

    @classmethod
    def variable(cls, vars: Sequence[str], name: str) -> "Poly":
        vars = tuple(vars)
        if name not in vars:
            raise InvalidInputError(f"unknown variable {name!r} (ring has {vars})")
        exps = tuple(1 if v == name else 0 for v in vars)
        return cls(vars, {exps: Fraction(1)})

    @classmethod
    def variables(cls, vars: Sequence[str]) -> tuple["Poly", ...]:
        return tuple(cls.variable(vars, v) for v in vars)

    # -- basic queries ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise InvalidInputError(f"{self} is not constant")
        return self.terms.get(tuple(0 for _ in self.vars), Fraction(0))

    def total_degree(self) -> int:
        """Largest total degree among terms; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        i = self.vars.index(name)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def leading(self) -> tuple[tuple[int, ...], Fraction]:
        """Leading (exponents, coefficient) in graded-lex order."""
        if not self.terms:
            raise InvalidInputError("zero polynomial has no leading term")
        exps = min(self.terms, key=_grlex_key)
        return exps, self.terms[exps]

    # -- arithmetic ---------------------------------------------------

    def _check(self, other: "Poly") -> None:
        if self.vars != other.vars:
            raise InvalidInputError(
                f"variable tuples differ: {self.vars} vs {other.vars}"
            )

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.vars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        terms = dict(self.terms)
        for exps, c in other.terms.items():
            s = terms.get(exps, Fraction(0)) + c
            if s:
                terms[exps] = s
            else:
                terms.pop(exps, None)
        return Poly(self.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.vars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _coerce(other)
            if not c:
                return Poly.zero(self.vars)
            return Poly(self.vars, {e: k * c for e, k in self.terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(exps, Fraction(0)) + c1 * c2
                if s:
                    out[exps] = s
                else:
                    out.pop(exps, None)
        return Poly(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise InvalidInputError("polynomial powers take non-negative integers")
        result = Poly.const(self.vars, 1)
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
            other = Poly.const(self.vars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    # -- calculus and substitution -------------------------------------

    def diff(self, name: str) -> "Poly":
        i = self.vars.index(name)
        out: dict[tuple[int, ...], Fraction] = {}
        for exps, c in self.terms.items():
            if exps[i] == 0:
                continue
            d = list(exps)
            d[i] -= 1
            out[tuple(d)] = c * exps[i]
        return Poly(self.vars, out)

    def subs(self, mapping: Mapping[str, Union["Poly", Scalar]],
             vars: Sequence[str] | None = None) -> "Poly":
        """Substitute variables; unmapped names must exist in the target tuple."""
        target = tuple(vars) if vars is not None else self.vars
        values: list[Poly] = []
        for name in self.vars:
            if name in mapping:
                v = mapping[name]
                if isinstance(v, Poly):
                    if v.vars != target:
                        raise InvalidInputError(
                            f"substitution value for {name!r} lives over {v.vars}, "
                            f"expected {target}"
                        )
                    values.append(v)
                else:
                    values.append(Poly.const(target, v))
            elif name in target:
                values.append(Poly.variable(target, name))
            else:
                if self.degree_in(name) > 0:
                    raise InvalidInputError(
                        f"no substitution for {name!r} and it is absent from {target}"
                    )
                values.append(Poly.zero(target))
        out = Poly.zero(target)
        powers: dict[tuple[int, int], Poly] = {}
        for exps, c in self.terms.items():
            term = Poly.const(target, c)
            for i, e in enumerate(exps):
                if e == 0:
                    continue
                key = (i, e)
                if key not in powers:
                    powers[key] = values[i] ** e
                term = term * powers[key]
            out = out + term
        return out

    def eval_at(self, point: Mapping[str, Scalar]) -> Fraction:
        missing = [v for v in self.vars if v not in point and self.degree_in(v) > 0]
        if missing:
            raise InvalidInputError(f"point misses values for {missing}")
        total = Fraction(0)
        for exps, c in self.terms.items():
            val = c
            for name, e in zip(self.vars, exps):
                if e:
                    val *= _coerce(point[name]) ** e
            total += val
        return total

    # -- exact division, content, gcd ----------------------------------

    def exact_div(self, divisor: "Poly") -> "Poly":
        """Quotient self/divisor; raises if the division is not exact."""
        if isinstance(divisor, (int, Fraction)):
            c = _coerce(divisor)
            if not c:
                raise InvalidInputError("division by zero")
            return self * (1 / c)
        self._check(divisor)
        if divisor.is_zero():
            raise InvalidInputError("division by zero polynomial")
        rem = dict(self.terms)
        out: dict[tuple[int, ...], Fraction] = {}
        dexps, dcoeff = divisor.leading()
        while rem:
            rexps = min(rem, key=_grlex_key)
            q = tuple(a - b for a, b in zip(rexps, dexps))
            if any(e < 0 for e in q):
                raise InvalidInputError("division is not exact")
            qc = rem[rexps] / dcoeff
            out[q] = out.get(q, Fraction(0)) + qc
            for exps, c in divisor.terms.items():
                t = tuple(a + b for a, b in zip(q, exps))
                s = rem.get(t, Fraction(0)) - qc * c
                if s:
                    rem[t] = s
                else:
                    rem.pop(t, None)
        return Poly(self.vars, out)

    def divisible_by(self, divisor: "Poly") -> bool:
        try:
            self.exact_div(divisor)
            return True
        except InvalidInputError:
            return False

    def monomial_content(self) -> tuple[int, ...]:
        """Componentwise minimum exponent over all terms (zero poly -> zeros)."""
        if not self.terms:
            return tuple(0 for _ in self.vars)
        mins = None
        for exps in self.terms:
            mins = exps if mins is None else tuple(map(min, mins, exps))
        return mins

    def shift_down(self, exps: Sequence[int]) -> "Poly":
        exps = tuple(exps)
        return Poly(self.vars, {
            tuple(a - b for a, b in zip(e, exps)): c for e, c in self.terms.items()
        })

    def normalized(self) -> "Poly":
        """Scale to coprime integer coefficients with positive leading one."""
        if not self.terms:
            return self
        num = 0
        den = 1
        for c in self.terms.values():
            num = int_gcd(num, c.numerator)
            den = int_lcm(den, c.denominator)
        scale = Fraction(den, num)
        if self.leading()[1] < 0:
            scale = -scale
        return self * scale

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for exps in sorted(self.terms, key=_grlex_key):
            c = self.terms[exps]
            factors = []
            for name, e in zip(self.vars, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mono = "*".join(factors)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            bits.append((sign, body))
        head_sign, head = bits[0]
        text = ("-" if head_sign == "-" else "") + head
        for sign, body in bits[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"Poly({self})"


# -- gcd machinery ------------------------------------------------------


def _as_univariate(p: Poly, index: int) -> dict[int, Poly]:
    """View p as univariate in vars[index] with polynomial coefficients."""
    coeffs: dict[int, dict[tuple[int, ...], Fraction]] = {}
    for exps, c in p.terms.items():
        d = exps[index]
        rest = list(exps)
        rest[index] = 0
        coeffs.setdefault(d, {})[tuple(rest)] = c
    return {d: Poly(p.vars, t) for d, t in coeffs.items()}


def _from_univariate(coeffs: dict[int, Poly], vars: tuple[str, ...], index: int) -> Poly:
    terms: dict[tuple[int, ...], Fraction] = {}
    for d, poly in coeffs.items():
        for exps, c in poly.terms.items():
            e = list(exps)
            e[index] += d
            terms[tuple(e)] = terms.get(tuple(e), Fraction(0)) + c
    return Poly(vars, terms)


def _content_list(polys: Iterable[Poly]) -> Poly:
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        raise InvalidInputError("content of an empty list")
    g = polys[0]
    for p in polys[1:]:
        g = poly_gcd(g, p)
        if g.is_constant():
            break
    return g.normalized()


def _pseudo_rem(f: dict[int, Poly], g: dict[int, Poly]) -> dict[int, Poly]:
    # pseudo-remainder up to content, which is all the PRS loop needs
    dg = max(g)
    lg = g[dg]
    f = dict(f)
    while f and max(f) >= dg:
        df = max(f)
        lf = f[df]
        new: dict[int, Poly] = {}
        for d, c in f.items():
            new[d] = c * lg
        for d, c in g.items():
            shifted = d + df - dg
            term = lf * c
            new[shifted] = new.get(shifted, term * 0) - term
        f = {d: c for d, c in new.items() if not c.is_zero()}
    return f


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Greatest common divisor, normalized to primitive integer form."""
    if p.vars != q.vars:
        raise InvalidInputError("gcd of polynomials over different variables")
    if p.is_zero():
        return q.normalized() if not q.is_zero() else q
    if q.is_zero():
        return p.normalized()
    mp = p.monomial_content()
    mq = q.monomial_content()
    shared = tuple(map(min, mp, mq))
    a = p.shift_down(mp)
    b = q.shift_down(mq)
    mono = Poly(p.vars, {shared: Fraction(1)})
    if a.is_constant() or b.is_constant():
        return mono
    common = [
        i for i, name in enumerate(p.vars)
        if a.degree_in(name) > 0 and b.degree_in(name) > 0
    ]
    if not common:
        return mono
    index = min(common, key=lambda i: a.degree_in(p.vars[i]) * b.degree_in(p.vars[i]))
    fa = _as_univariate(a, index)
    fb = _as_univariate(b, index)
    cont_a = _content_list(fa.values())
    cont_b = _content_list(fb.values())
    cont = poly_gcd(cont_a, cont_b)
    fa = {d: c.exact_div(cont_a) for d, c in fa.items()}
    fb = {d: c.exact_div(cont_b) for d, c in fb.items()}
    if max(fa) < max(fb):
        fa, fb = fb, fa
    while True:
        r = _pseudo_rem(fa, fb)
        if not r:
            g = fb
            break
        if max(r) == 0:
            g = {0: Poly.const(p.vars, 1)}
            break
        rc = _content_list(r.values())
        fa, fb = fb, {d: c.exact_div(rc) for d, c in r.items()}
    gp = _from_univariate(g, p.vars, index)
    gc = _content_list(_as_univariate(gp, index).values())
    gp = gp.exact_div(gc)
    return (mono * cont * gp).normalized()


def gcd_degree_bounds(polys: Sequence[Poly], rng) -> dict[str, int]:
    """Randomized upper-bound certificate for per-variable gcd degrees.

    Specializing all but one variable at a random point can only enlarge the
    gcd of the specializations, so a degree-zero univariate gcd at several
    points certifies that the true gcd is free of that variable (up to the
    vanishingly unlikely event that every sample hits the leading-form locus).
    """
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return {}
    vars = polys[0].vars
    bounds: dict[str, int] = {}
    for name in vars:
        degs = [p.degree_in(name) for p in polys]
        if min(degs) <= 0:
            bounds[name] = 0
            continue
        best = min(degs)
        for _ in range(3):
            point = {v: Fraction(rng.randint(-40, 40)) for v in vars if v != name}
            g = 0  # univariate gcd degree via integer polynomial gcd on samples
            uni = []
            for p in polys:
                coeffs: dict[int, Fraction] = {}
                for exps, c in p.terms.items():
                    val = c
                    for v, e in zip(vars, exps):
                        if v != name and e:
                            val *= point[v] ** e
                    d = exps[vars.index(name)]
                    coeffs[d] = coeffs.get(d, Fraction(0)) + val
                uni.append({d: c for d, c in coeffs.items() if c})
            best = min(best, _univariate_gcd_degree(uni))
            if best == 0:
                break
        bounds[name] = best
    return bounds


def _univariate_gcd_degree(polys: list[dict[int, Fraction]]) -> int:
    polys = [p for p in polys if p]
    if not polys:
        return 0
    g = polys[0]
    for p in polys[1:]:
        g = _univariate_gcd(g, p)
        if max(g) == 0:
            return 0
    return max(g)

def _univariate_gcd(a: dict[int, Fraction], b: dict[int, Fraction]) -> dict[int, Fraction]:
    while b:
        da, db = max(a), max(b)
        if da < db:
            a, b = b, a
            continue
        lead = a[da] / b[db]
        new = dict(a)
        for d, c in b.items():
            t = d + da - db
            s = new.get(t, Fraction(0)) - lead * c
            if s:
                new[t] = s
            else:
                new.pop(t, None)
        a = new
        if not a:
            a, b = b, {}
    return a


def common_divisor(polys: Sequence[Poly], rng=None) -> Poly:
    """Common content of a family: shared monomial times polynomial gcd."""
    live = [p for p in polys if not p.is_zero()]
    if not live:
        raise InvalidInputError("no nonzero polynomials to take content of")
    vars = live[0].vars
    shared = None
    for p in live:
        m = p.monomial_content()
        shared = m if shared is None else tuple(map(min, shared, m))
    stripped = [p.shift_down(shared) for p in live]
    mono = Poly(vars, {shared: Fraction(1)})
    if any(p.is_constant() for p in stripped):
        return mono
    if rng is not None:
        bounds = gcd_degree_bounds(stripped, rng)
        if all(b == 0 for b in bounds.values()):
            return mono
    g = stripped[0]
    for p in stripped[1:]:
        g = poly_gcd(g, p)
        if g.is_constant():
            return mono
    return (mono * g).normalized()


# -- parsing -------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<int>\d+)|(?P<op>\*\*|[-+*/^()]))"
)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise InvalidInputError(f"cannot parse polynomial near {text[pos:pos+12]!r}")
        if m.lastgroup == "name":
            out.append(("name", m.group("name")))
        elif m.lastgroup == "int":
            out.append(("int", int(m.group("int"))))
        else:
            op = m.group("op")
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


def parse_poly(text: str, vars: Sequence[str]) -> Poly:
    """Parse ``+ - * / ^`` expressions over the given variables.

    Division is restricted to integer literals, keeping coefficients exact.
    """
    vars = tuple(vars)
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else ("end", None)

    def take():
        nonlocal pos
        tok = peek()
        pos += 1
        return tok

    def parse_expr() -> Poly:
        node = parse_term()
        while peek() == ("op", "+") or peek() == ("op", "-"):
            _, op = take()
            rhs = parse_term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def parse_term() -> Poly:
        node = parse_factor()
        while peek() in (("op", "*"), ("op", "/")):
            _, op = take()
            rhs = parse_factor()
            if op == "*":
                node = node * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    raise InvalidInputError("division only by nonzero integer literals")
                node = node * (1 / rhs.constant_value())
        return node

    def parse_factor() -> Poly:
        kind, value = peek()
        if (kind, value) == ("op", "-"):
            take()
            return -parse_factor()
        if (kind, value) == ("op", "+"):
            take()
            return parse_factor()
        node = parse_base()
        if peek() == ("op", "^"):
            take()
            kind, value = take()
            neg = False
            if (kind, value) == ("op", "-"):
                neg = True
                kind, value = take()
            if kind != "int":
                raise InvalidInputError("exponent must be an integer literal")
            if neg:
                raise InvalidInputError("negative exponents are not supported")
            node = node ** value
        return node

    def parse_base() -> Poly:
        kind, value = take()
        if kind == "name":
            return Poly.variable(vars, value)
        if kind == "int":
            return Poly.const(vars, value)
        if (kind, value) == ("op", "("):
            node = parse_expr()
            if take() != ("op", ")"):
                raise InvalidInputError("unbalanced parentheses")
            return node
        raise InvalidInputError(f"unexpected token {value!r}")

    result = parse_expr()
    if pos != len(tokens):
        raise InvalidInputError("trailing tokens in polynomial expression")
    return result
