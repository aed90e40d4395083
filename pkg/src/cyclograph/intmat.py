"""Small exact integer linear algebra: determinants, integral solves, HNF and SNF.

Matrices are lists (or tuples) of rows holding Python ints. Dimensions here are
the degree of a cyclotomic field, so everything is written for clarity rather
than asymptotic speed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[int]]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with g = gcd(a, b) >= 0 and s*a + t*b = g."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def matvec(a: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def det(m: Sequence[Sequence[int]]) -> int:
    """Determinant by Bareiss fraction-free elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def solve_integral(m: Sequence[Sequence[int]], b: Sequence[int]) -> list[int] | None:
    """Solve m @ x = b for a nonsingular square m; None unless x is integral."""
    n = len(m)
    a = [[Fraction(v) for v in row] + [Fraction(rhs)] for row, rhs in zip(m, b)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / a[k][k]
        a[k] = [v * inv for v in a[k]]
        for i in range(n):
            if i != k and a[i][k]:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    out = []
    for row in a:
        if row[n].denominator != 1:
            return None
        out.append(row[n].numerator)
    return out


def hnf_from_vectors(
    vectors: Sequence[Sequence[int]], dim: int, modulus: int | None = None
) -> tuple[tuple[int, ...], ...]:
    """Column-style Hermite normal form of the lattice spanned by ``vectors``.

    Returns the rows of an upper-triangular ``dim x dim`` matrix H whose columns
    are a basis, with positive diagonal and ``0 <= H[i][j] < H[i][i]`` for j > i.
    If ``modulus`` is given it must be a positive integer with
    ``modulus * Z^dim`` contained in the lattice; it keeps entries small.

    Raises ValueError if the vectors do not span a full-rank lattice.
    """
    rows = [list(v) for v in vectors if any(v)]
    if modulus:
        rows += [[modulus * (i == k) for i in range(dim)] for k in range(dim)]
    basis: list[list[int] | None] = [None] * dim

    def _shrink(v: list[int], upto: int) -> list[int]:
        if modulus:
            for i in range(upto):
                v[i] %= modulus
        return v

    for k in reversed(range(dim)):
        pivot = None
        rest = []
        for r in rows:
            if r[k] == 0:
                rest.append(r)
                continue
            if pivot is None:
                pivot = r
                continue
            g, s, t = xgcd(pivot[k], r[k])
            a, b = pivot[k] // g, r[k] // g
            other = [b * x - a * y for x, y in zip(pivot, r)]
            pivot = _shrink([s * x + t * y for x, y in zip(pivot, r)], k)
            if any(_shrink(other, k)):
                rest.append(other)
        if pivot is None:
            raise ValueError("vectors do not span a full-rank lattice")
        if pivot[k] < 0:
            pivot = [-x for x in pivot]
        basis[k] = pivot
        rows = rest

    for j in range(dim):
        col = basis[j]
        for i in range(j - 1, -1, -1):
            q = col[i] // basis[i][i]
            if q:
                col = [x - q * y for x, y in zip(col, basis[i])]
        basis[j] = col
    return tuple(tuple(basis[j][i] for j in range(dim)) for i in range(dim))


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[list[int], Matrix, Matrix, Matrix]:
    """Smith normal form of a nonsingular square integer matrix.

    Returns ``(diag, U, U_inv, V)`` with ``U @ m @ V == diag(diag)``, U and V
    unimodular, ``diag[k] > 0`` and ``diag[k] | diag[k+1]``.
    """
    n = len(m)
    s = [list(r) for r in m]
    u, u_inv, v = identity(n), identity(n), identity(n)

    def row_add(i: int, j: int, c: int) -> None:  # row_i += c * row_j
        s[i] = [x + c * y for x, y in zip(s[i], s[j])]
        u[i] = [x + c * y for x, y in zip(u[i], u[j])]
        for r in u_inv:
            r[j] -= c * r[i]

    def row_swap(i: int, j: int) -> None:
        if i != j:
            s[i], s[j] = s[j], s[i]
            u[i], u[j] = u[j], u[i]
            for r in u_inv:
                r[i], r[j] = r[j], r[i]

    def col_add(i: int, j: int, c: int) -> None:  # col_i += c * col_j
        for r in s:
            r[i] += c * r[j]
        for r in v:
            r[i] += c * r[j]

    def col_swap(i: int, j: int) -> None:
        if i != j:
            for r in s:
                r[i], r[j] = r[j], r[i]
            for r in v:
                r[i], r[j] = r[j], r[i]

    for k in range(n):
        while True:
            entries = [
                (abs(s[i][j]), i, j) for i in range(k, n) for j in range(k, n) if s[i][j]
            ]
            if not entries:
                raise ValueError("matrix is singular")
            _, pi, pj = min(entries)
            row_swap(k, pi)
            col_swap(k, pj)
            p = s[k][k]
            clean = True
            for i in range(k + 1, n):
                q = s[i][k] // p
                if q:
                    row_add(i, k, -q)
                clean &= s[i][k] == 0
            for j in range(k + 1, n):
                q = s[k][j] // p
                if q:
                    col_add(j, k, -q)
                clean &= s[k][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(k + 1, n) for j in range(k + 1, n) if s[i][j] % p), None
            )
            if bad is None:
                break
            row_add(k, bad, 1)
        if s[k][k] < 0:
            s[k] = [-x for x in s[k]]
            u[k] = [-x for x in u[k]]
            for r in u_inv:
                r[k] = -r[k]
    return [s[k][k] for k in range(n)], u, u_inv, v
