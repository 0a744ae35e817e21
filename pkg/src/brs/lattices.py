"""Integer-lattice utilities: gcd reduction and unimodular basis completion.

``complete_to_unimodular`` extends a primitive integer vector m to an integer
matrix with determinant +1 whose last row is m, via Hermite-style column
reduction of the 1 x d matrix (m) with recorded elementary operations.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd


def xgcd(a: int, b: int):
    """(g, x, y) with g = gcd(a, b) = x*a + y*b."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def primitive_part(vec):
    """(g, m) with vec = g*m, g > 0 the gcd of nonzero entries, m primitive.

    All-zero input raises.
    """
    nz = [abs(x) for x in vec if x != 0]
    if not nz:
        raise ValueError("zero vector has no primitive part")
    g = 0
    for x in nz:
        g = gcd(g, x)
    return g, [x // g for x in vec]


def _identity(d):
    return [[1 if i == j else 0 for j in range(d)] for i in range(d)]


def _matmul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    return [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m)]
            for i in range(n)]


def int_det(M) -> int:
    """Exact determinant of a small integer matrix."""
    n = len(M)
    rows = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for col in range(n):
        piv = None
        for r in range(col, n):
            if rows[r][col] != 0:
                piv = r
                break
        if piv is None:
            return 0
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        det *= rows[col][col]
        inv = rows[col][col]
        for r in range(col + 1, n):
            if rows[r][col] != 0:
                f = rows[r][col] / inv
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    assert det.denominator == 1
    return int(det)


def int_inverse(M):
    """Exact inverse of an integer matrix with det +-1 (integer output)."""
    n = len(M)
    aug = [[Fraction(M[i][j]) for j in range(n)] +
           [Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col]
        aug[col] = [x / inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    out = [[aug[i][n + j] for j in range(n)] for i in range(n)]
    for row in out:
        for x in row:
            if x.denominator != 1:
                raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in out]


def complete_to_unimodular(m):
    """Integer matrix with rows (m_1, ..., m_d), det = +1 and m_d = m.

    Requires m primitive (gcd of nonzero entries 1).
    """
    d = len(m)
    g = 0
    for x in m:
        g = gcd(g, abs(x))
    if g != 1:
        raise ValueError("vector must be primitive")
    if d == 1:
        if m[0] != 1:
            raise ValueError("in d=1 only m=(1,) can be completed with det +1")
        return [[1]]
    # column operations V with m . V = (1, 0, ..., 0)
    a = list(m)
    V = _identity(d)
    for j in range(1, d):
        g2, x, y = xgcd(a[0], a[j])
        if g2 == 0:
            continue
        a0, aj = a[0], a[j]
        # new col0 = x*col0 + y*colj ; new colj = -(aj/g2)*col0 + (a0/g2)*colj
        for row in V:
            c0, cj = row[0], row[j]
            row[0] = x * c0 + y * cj
            row[j] = -(aj // g2) * c0 + (a0 // g2) * cj
        a[0], a[j] = g2, 0
    assert a[0] in (1, -1)
    if a[0] == -1:
        for row in V:
            row[0] = -row[0]
        a[0] = 1
    W = int_inverse(V)  # first row of W is m
    assert W[0] == list(m)
    # move m to the last row by a cyclic shift, then fix the sign of det
    rows = W[1:] + [W[0]]
    if int_det(rows) == -1:
        rows[0] = [-x for x in rows[0]]
    assert int_det(rows) == 1 and rows[-1] == list(m)
    return rows


def biorthogonal_columns(M):
    """Columns p_j with <m_i, p_j> = delta_ij for unimodular M (rows m_i)."""
    inv = int_inverse(M)
    d = len(M)
    return [[inv[i][j] for i in range(d)] for j in range(d)]
