"""Exact linear algebra: rational ranks and fraction-free polynomial minors."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

from .errors import InvalidInputError, ResourceLimitError
from .exactpoly import Poly

MINOR_COUNT_LIMIT = 10 ** 5


def rank_rational(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank of a matrix of exact rationals by Gaussian elimination."""
    m = [list(map(Fraction, row)) for row in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    row = 0
    for col in range(ncols):
        pivot = next((i for i in range(row, len(m)) if m[i][col]), None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        inv = 1 / m[row][col]
        for i in range(row + 1, len(m)):
            if not m[i][col]:
                continue
            factor = m[i][col] * inv
            for j in range(col, ncols):
                m[i][j] -= factor * m[row][j]
        rank += 1
        row += 1
        if row == len(m):
            break
    return rank


def _find_pivot(m, step):
    for i in range(step, len(m)):
        for j in range(step, len(m[0])):
            if not m[i][j].is_zero():
                return i, j
    return None


def rank_poly(rows: Sequence[Sequence[Poly]]) -> int:
    """Rank over the rational function field, by fraction-free elimination.

    Bareiss one-step elimination: every intermediate entry is a minor of the
    original matrix, and the division by the previous pivot is exact.
    """
    m = [list(row) for row in rows]
    if not m or not m[0]:
        return 0
    prev = None
    rank = 0
    steps = min(len(m), len(m[0]))
    for step in range(steps):
        loc = _find_pivot(m, step)
        if loc is None:
            break
        pi, pj = loc
        if pi != step:
            m[pi], m[step] = m[step], m[pi]
        if pj != step:
            for row in m:
                row[pj], row[step] = row[step], row[pj]
        pivot = m[step][step]
        for i in range(step + 1, len(m)):
            for j in range(step + 1, len(m[0])):
                num = m[i][j] * pivot - m[i][step] * m[step][j]
                m[i][j] = num if prev is None else num.exact_div(prev)
            m[i][step] = Poly.zero(pivot.vars)
        prev = pivot
        rank += 1
    return rank


def det_poly(rows: Sequence[Sequence[Poly]]) -> Poly:
    """Determinant of a square polynomial matrix (fraction-free Bareiss)."""
    n = len(rows)
    if n == 0:
        raise InvalidInputError("determinant of an empty matrix")
    if any(len(r) != n for r in rows):
        raise InvalidInputError("determinant needs a square matrix")
    vars = rows[0][0].vars
    m = [list(row) for row in rows]
    sign = 1
    prev = None
    for step in range(n - 1):
        loc = _find_pivot(m, step)
        if loc is None:
            return Poly.zero(vars)
        pi, pj = loc
        if pi != step:
            m[pi], m[step] = m[step], m[pi]
            sign = -sign
        if pj != step:
            for row in m:
                row[pj], row[step] = row[step], row[pj]
            sign = -sign
        pivot = m[step][step]
        for i in range(step + 1, n):
            for j in range(step + 1, n):
                num = m[i][j] * pivot - m[i][step] * m[step][j]
                m[i][j] = num if prev is None else num.exact_div(prev)
        prev = pivot
    return m[n - 1][n - 1] * sign


def det_rational(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    m = [list(map(Fraction, row)) for row in rows]
    n = len(m)
    det = Fraction(1)
    for step in range(n):
        pivot = next((i for i in range(step, n) if m[i][step]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != step:
            m[pivot], m[step] = m[step], m[pivot]
            det = -det
        det *= m[step][step]
        inv = 1 / m[step][step]
        for i in range(step + 1, n):
            factor = m[i][step] * inv
            for j in range(step, n):
                m[i][j] -= factor * m[step][j]
    return det


def minor_count(nrows: int, ncols: int, r: int) -> int:
    from math import comb

    return comb(nrows, r) * comb(ncols, r)


def iter_minors(matrix: Sequence[Sequence[Poly]], r: int,
                limit: int = MINOR_COUNT_LIMIT):
    """Yield ((row subset, column subset), r x r minor) over all subsets."""
    nrows = len(matrix)
    ncols = len(matrix[0]) if matrix else 0
    if r > min(nrows, ncols):
        raise InvalidInputError(
            f"minor size {r} exceeds matrix shape {nrows}x{ncols}"
        )
    count = minor_count(nrows, ncols, r)
    if count > limit:
        raise ResourceLimitError(
            f"{count} minors of size {r} exceed the limit of {limit}"
        )
    for rows in itertools.combinations(range(nrows), r):
        for cols in itertools.combinations(range(ncols), r):
            sub = [[matrix[i][j] for j in cols] for i in rows]
            yield (rows, cols), det_poly(sub)
