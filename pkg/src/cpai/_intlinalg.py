"""Exact integer and rational matrix helpers.

Matrices are plain tuples/lists of rows with int or Fraction entries.
Everything here is exact; nothing imports numpy.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(rows):
    return [list(col) for col in zip(*rows)]


def matmul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def det_int(rows):
    """Bareiss fraction-free determinant of an integer matrix."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(map(int, r)) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def hnf_column(matrix):
    """Column-style Hermite normal form.

    Returns (H, U) with H = M @ U, U unimodular, and H in column echelon
    form: for each pivot row the pivot is positive, entries to its right
    are zero, and entries to its left are reduced into [0, pivot).  For a
    square nonsingular M this makes H lower triangular.
    """
    H = [list(map(int, row)) for row in matrix]
    m = len(H)
    n = len(H[0]) if m else 0
    U = identity(n)

    def swap_cols(a, b):
        for row in H:
            row[a], row[b] = row[b], row[a]
        for row in U:
            row[a], row[b] = row[b], row[a]

    def addmul_col(dst, src, q):
        for row in H:
            row[dst] -= q * row[src]
        for row in U:
            row[dst] -= q * row[src]

    def negate_col(a):
        for row in H:
            row[a] = -row[a]
        for row in U:
            row[a] = -row[a]

    pivots = []
    c = 0
    for i in range(m):
        if c >= n:
            break
        if all(H[i][j] == 0 for j in range(c, n)):
            continue
        while True:
            nonzero = [j for j in range(c, n) if H[i][j] != 0]
            jmin = min(nonzero, key=lambda j: abs(H[i][j]))
            if jmin != c:
                swap_cols(c, jmin)
            done = True
            for j in range(c + 1, n):
                if H[i][j] != 0:
                    addmul_col(j, c, H[i][j] // H[i][c])
                    if H[i][j] != 0:
                        done = False
            if done:
                break
        if H[i][c] < 0:
            negate_col(c)
        for j in range(c):
            q = H[i][j] // H[i][c]
            if q:
                addmul_col(j, c, q)
        pivots.append((i, c))
        c += 1
    return H, U, pivots


def hermite_normal_form(matrix):
    """Public HNF: (H, U) with H = M @ U and U unimodular."""
    H, U, _ = hnf_column(matrix)
    return H, U


def integer_kernel(matrix):
    """Basis (list of integer vectors) of {x : M x = 0}; saturated."""
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    if n == 0:
        return []
    H, U, pivots = hnf_column(matrix)
    r = len(pivots)
    return [[U[row][j] for row in range(n)] for j in range(r, n)]


def solve_integer(matrix, rhs):
    """One integer solution x of M x = b, or None if none exists."""
    y = _echelon_solve(matrix, rhs)
    if y is None:
        return None
    if any(v.denominator != 1 for v in y):
        return None
    _, U, _ = hnf_column(matrix)
    x = matvec(U, [int(v) for v in y])
    return [int(v) for v in x]


def solve_rational(matrix, rhs):
    """One rational solution x of M x = b, or None if inconsistent."""
    y = _echelon_solve(matrix, rhs)
    if y is None:
        return None
    _, U, _ = hnf_column(matrix)
    return matvec([[Fraction(v) for v in row] for row in U], y)


def _echelon_solve(matrix, rhs):
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    H, U, pivots = hnf_column(matrix)
    r = [Fraction(v) for v in rhs]
    if len(r) != m:
        raise ValueError("right-hand side length mismatch")
    y = [Fraction(0)] * n
    for i, k in pivots:
        yk = r[i] / H[i][k]
        y[k] = yk
        if yk:
            for row in range(m):
                if H[row][k]:
                    r[row] -= yk * H[row][k]
    if any(r):
        return None
    return y


def rank_rational(matrix):
    rows = [[Fraction(v) for v in row] for row in matrix]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for j in range(cols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][j]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = 1 / rows[rank][j]
        rows[rank] = [v * inv for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][j]:
                f = rows[i][j]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def rational_inverse(matrix):
    """Exact inverse of a square matrix, as Fractions."""
    n = len(matrix)
    a = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if a[i][col]), None)
        if pivot is None:
            raise ValueError("matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for i in range(n):
            if i != col and a[i][col]:
                f = a[i][col]
                a[i] = [u - f * v for u, v in zip(a[i], a[col])]
    return [row[n:] for row in a]


def hnf_row_basis(rows):
    """Canonical basis of the lattice generated by the given row vectors."""
    rows = [list(map(int, r)) for r in rows if any(r)]
    if not rows:
        return []
    H, _, pivots = hnf_column(transpose(rows))
    return [[H[i][j] for i in range(len(H))] for _, j in pivots]


def saturate_rows(rows):
    """Canonical basis of (rational row span) intersected with Z^d.

    This is the saturation of the lattice the rows generate: the double
    integer-kernel construction returns a basis whose integer span picks up
    every integer vector of the rational span.
    """
    rows = [list(map(int, r)) for r in rows if any(r)]
    if not rows:
        return []
    d = len(rows[0])
    perp = integer_kernel(rows)
    if not perp:
        return hnf_row_basis(identity(d))
    sat = integer_kernel(perp)
    return hnf_row_basis(sat)


def primitive(vector):
    """Divide an integer vector by the gcd of its entries (orientation kept)."""
    g = 0
    for v in vector:
        g = gcd(g, abs(int(v)))
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    return tuple(int(v) // g for v in vector)


def clear_denominators(vector):
    """Scale a rational vector to a primitive integer vector (same ray)."""
    fracs = [Fraction(v) for v in vector]
    if not any(fracs):
        raise ValueError("zero vector has no primitive form")
    lcm = 1
    for f in fracs:
        lcm = lcm * f.denominator // gcd(lcm, f.denominator)
    ints = [int(f * lcm) for f in fracs]
    return primitive(ints)
