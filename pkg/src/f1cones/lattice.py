"""Exact integer and rational linear algebra on small dense matrices.

Matrices are lists of rows of Python ints (or Fractions where noted).
Smith normal form is delegated to sympy's DomainMatrix implementation;
the rest is plain Gaussian elimination over the rationals.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from sympy import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_decomp

Vector = tuple
Matrix = list


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def transpose(a: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence], inner: int | None = None) -> list[list]:
    """Product of an m x k and a k x n matrix (lists of rows)."""
    if not a:
        return []
    k = len(a[0]) if inner is None else inner
    if k == 0:
        n = len(b[0]) if b else 0
        return [[0] * n for _ in a]
    bt = transpose(b)
    return [[dot(row, col) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in a)


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on its ray."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(0 for _ in ints)
    return tuple(x // g for x in ints)


def rref(rows: Sequence[Sequence], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q. Returns (nonzero rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    if not rows:
        return 0
    return len(rref(rows, len(rows[0]) if ncols is None else ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple[int, ...]]:
    """Primitive integer basis of the rational right kernel {x : rows . x = 0}."""
    red, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, piv):
            x[p] = -row[f]
        basis.append(primitive(x))
    return basis


def solve_rational(rows: Sequence[Sequence], rhs: Sequence) -> tuple[Fraction, ...] | None:
    """One rational solution x of rows . x = rhs, or None."""
    if not rows:
        return None if any(rhs) else ()
    n = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, piv = rref(aug, n + 1)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(red, piv):
        x[p] = row[n]
    return tuple(x)


def det(a: Sequence[Sequence]) -> int:
    """Determinant of a square integer matrix (Bareiss, exact)."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            p = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if p is None:
                return 0
            m[k], m[p] = m[p], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def inverse(a: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(a)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(a)]
    red, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)) or len(piv) < n or any(p >= n for p in piv[:n]):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


def unimodular_inverse(a: Sequence[Sequence]) -> list[list[int]]:
    inv = inverse(a)
    out = [[int(x) for x in row] for row in inv]
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return out


def smith(a: Sequence[Sequence[int]], nrows: int, ncols: int) -> tuple[list[int], list[list[int]], list[list[int]]]:
    """Smith normal form: returns (diag, U, V) with U . a . V diagonal.

    ``diag`` holds the nonzero invariant factors d_1 | d_2 | ..., all positive.
    """
    if nrows == 0 or ncols == 0:
        return [], identity(nrows), identity(ncols)
    dm = DomainMatrix([[ZZ(int(x)) for x in row] for row in a], (nrows, ncols), ZZ)
    d, u, v = smith_normal_decomp(dm)
    d, u, v = d.to_list(), u.to_list(), v.to_list()
    u = [[int(x) for x in row] for row in u]
    v = [[int(x) for x in row] for row in v]
    diag = []
    for i in range(min(nrows, ncols)):
        x = int(d[i][i])
        if x == 0:
            break
        if x < 0:
            u[i] = [-y for y in u[i]]
            x = -x
        diag.append(x)
    return diag, u, v


def integer_kernel(a: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """Lattice basis of {x in Z^ncols : a . x = 0}."""
    if not a:
        return [tuple(r) for r in identity(ncols)]
    diag, _, v = smith(a, len(a), ncols)
    r = len(diag)
    return [tuple(v[i][j] for i in range(ncols)) for j in range(r, ncols)]


def in_row_lattice(a: Sequence[Sequence[int]], y: Sequence[int]) -> bool:
    """Is y an integer combination of the rows of a?"""
    n = len(y)
    if not a:
        return not any(y)
    diag, _, v = smith(a, len(a), n)
    yv = [dot(y, [v[i][j] for i in range(n)]) for j in range(n)]
    for j, x in enumerate(yv):
        if j < len(diag):
            if x % diag[j]:
                return False
        elif x:
            return False
    return True


def row_lattice_coordinates(a: Sequence[Sequence[int]], y: Sequence[int]) -> tuple[int, ...] | None:
    """Integer c with c . a = y, or None."""
    m, n = len(a), len(y)
    if m == 0:
        return () if not any(y) else None
    # c . a = y  <=>  a^T c^T = y^T
    at = transpose(a)
    diag, u, v = smith(at, n, m)
    uy = matvec(u, y)
    z = [0] * m
    for i, x in enumerate(uy):
        if i < len(diag):
            if x % diag[i]:
                return None
            z[i] = x // diag[i]
        elif x:
            return None
    return matvec(v, z)


def saturation(vectors: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    """Lattice basis of span_Q(vectors) intersected with Z^n."""
    vecs = [list(v) for v in vectors if any(v)]
    if not vecs:
        return []
    perp = nullspace(vecs, n)
    if not perp:
        return [tuple(r) for r in identity(n)]
    return integer_kernel(perp, n)


def complement_projection(basis: Sequence[Sequence[int]], n: int) -> tuple[list[list[int]], list[list[int]]]:
    """For a saturated sublattice L of Z^n, a surjection P: Z^n -> Z^(n-k) with kernel L
    and a section S (n x (n-k)) with P . S = I."""
    k = len(basis)
    if k == 0:
        return identity(n), identity(n)
    diag, u, v = smith([list(b) for b in basis], k, n)
    if diag != [1] * k:
        raise ValueError("sublattice is not saturated")
    vinv = unimodular_inverse(v)
    # x -> x . V, drop the first k coordinates
    p = [[v[i][j] for i in range(n)] for j in range(k, n)]
    s = transpose([vinv[j] for j in range(k, n)], n)
    return p, s
