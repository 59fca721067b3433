"""Exact linear algebra over the rationals.

Matrices are lists of rows of mpq.  Determinants use Bareiss' fraction-free
elimination on a common-denominator integer copy; kernels and solves use
plain row reduction, which is exact with mpq entries.
"""
from __future__ import annotations

from typing import Sequence

import gmpy2

from .exactpoly.poly import rational

Matrix = list[list]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[rational(x) for x in row] for row in rows]


def transpose(m: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*m)] if m else []


def identity(n: int) -> Matrix:
    return [[gmpy2.mpq(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), gmpy2.mpq(0)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum((x * y for x, y in zip(row, v)), gmpy2.mpq(0)) for row in a]


def determinant(m: Sequence[Sequence]) -> gmpy2.mpq:
    n = len(m)
    if n == 0:
        return gmpy2.mpq(1)
    rows = to_matrix(m)
    # clear denominators row by row, then Bareiss on integers
    scale = gmpy2.mpq(1)
    ints = []
    for row in rows:
        den = gmpy2.mpz(1)
        for x in row:
            den = gmpy2.lcm(den, x.denominator)
        scale *= den
        ints.append([gmpy2.mpz(x * den) for x in row])
    sign = 1
    prev = gmpy2.mpz(1)
    for k in range(n - 1):
        if ints[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if ints[r][k] != 0), None)
            if swap is None:
                return gmpy2.mpq(0)
            ints[k], ints[swap] = ints[swap], ints[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                ints[i][j] = (ints[i][j] * ints[k][k] - ints[i][k] * ints[k][j]) // prev
        prev = ints[k][k]
    return gmpy2.mpq(sign * ints[n - 1][n - 1]) / scale


def rref(m: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the pivot columns."""
    a = to_matrix(m)
    rows = len(a)
    cols = len(a[0]) if a else 0
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m: Sequence[Sequence]) -> int:
    if not m:
        return 0
    return len(rref(m)[1])


def nullspace(m: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    """Basis of ``{x : m x = 0}``, one vector per free column."""
    if not m:
        n = ncols or 0
        return [[gmpy2.mpq(int(i == j)) for i in range(n)] for j in range(n)]
    a, pivots = rref(m)
    n = len(a[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [gmpy2.mpq(0)] * n
        v[f] = gmpy2.mpq(1)
        for row, p in zip(a, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> list:
    """Unique solution of the square system ``a x = b``."""
    n = len(a)
    aug = [list(row) + [rational(y)] for row, y in zip(to_matrix(a), b)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular system")
    return [red[i][n] for i in range(n)]


def inverse(a: Sequence[Sequence]) -> Matrix:
    n = len(a)
    aug = [list(row) + e for row, e in zip(to_matrix(a), identity(n))]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def in_span(vectors: Sequence[Sequence], v: Sequence) -> bool:
    return rank(list(vectors) + [list(v)]) == rank(vectors) if vectors else not any(v)
