"""
Exact dense linear algebra over the rationals.

Matrices are lists of rows of ints or Fractions.  Everything here is small
(tens of vertices), so plain Gaussian elimination is fine.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .exactmath import DomainError

Matrix = list[list[Fraction]]


def to_fraction_matrix(a) -> Matrix:
    return [[Fraction(x) for x in row] for row in a]


def det_bareiss(a) -> int:
    """Fraction-free determinant of an integer matrix."""
    m = [list(map(int, row)) for row in a]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def solve(a, b: Sequence) -> list[Fraction]:
    """Solve a x = b exactly; raises DomainError if a is singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            raise DomainError("singular matrix")
        m[col], m[piv] = m[piv], m[col]
        pr = m[col]
        inv = 1 / pr[col]
        for i in range(n):
            if i != col and m[i][col] != 0:
                f = m[i][col] * inv
                row = m[i]
                for j in range(col, n + 1):
                    row[j] -= f * pr[j]
    return [m[i][n] / m[i][i] for i in range(n)]


def inverse(a) -> Matrix:
    n = len(a)
    cols = [solve(a, [1 if i == j else 0 for i in range(n)]) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def inertia(a) -> tuple[int, int, int]:
    """
    (n_plus, n_minus, nullity) of a symmetric rational matrix.

    Symmetric elimination: a nonzero diagonal pivot is split off directly; if
    the remaining diagonal is zero but some off-diagonal entry is not, the two
    basis vectors span a hyperbolic plane, and replacing e_i by e_i + e_j
    produces a nonzero pivot (the plane then contributes one +1 and one -1).
    """
    m = to_fraction_matrix(a)
    n = len(m)
    for i in range(n):
        for j in range(i):
            if m[i][j] != m[j][i]:
                raise DomainError("inertia needs a symmetric matrix")
    plus = minus = 0
    idx = list(range(n))
    while idx:
        k = next((i for i in idx if m[i][i] != 0), None)
        if k is not None:
            d = m[k][k]
            if d > 0:
                plus += 1
            else:
                minus += 1
            idx.remove(k)
            row = [m[k][j] for j in range(n)]
            for i in idx:
                if row[i] != 0:
                    f = row[i] / d
                    for j in idx:
                        m[i][j] -= f * row[j]
            continue
        pair = next(((i, j) for i in idx for j in idx if i < j and m[i][j] != 0), None)
        if pair is None:
            break  # remaining block is zero
        i0, j0 = pair
        # congruence e_i0 -> e_i0 + e_j0 makes the diagonal entry 2 m[i0][j0]
        new_diag = m[i0][i0] + 2 * m[i0][j0] + m[j0][j0]
        for j in idx:
            if j != i0:
                m[i0][j] += m[j0][j]
                m[j][i0] = m[i0][j]
        m[i0][i0] = new_diag
    nullity = n - plus - minus
    return plus, minus, nullity


def signature(a) -> int:
    p, q, _ = inertia(a)
    return p - q


def quad_form_inverse(a, v: Sequence) -> Fraction:
    """v^T a^{-1} v."""
    x = solve(a, v)
    return sum(Fraction(vi) * xi for vi, xi in zip(v, x))
