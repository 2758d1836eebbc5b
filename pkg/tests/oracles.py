"""Independent reference computations used only by the tests."""

from __future__ import annotations

import itertools
import math
import random
from collections import deque
from fractions import Fraction


def det_laplace(a) -> Fraction:
    """Cofactor expansion along the first row (fine up to ~8x8)."""
    n = len(a)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(a[0][0])
    out = Fraction(0)
    for j in range(n):
        if a[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in a[1:]]
        out += (-1) ** j * Fraction(a[0][j]) * det_laplace(minor)
    return out


def inverse_adjugate(a) -> list[list[Fraction]]:
    n = len(a)
    d = det_laplace(a)
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(a) if k != i]
            out[j][i] = (-1) ** (i + j) * det_laplace(minor) / d
    return out


def leading_minors_negative_definite(a) -> bool:
    """Sylvester: -a is positive definite iff (-1)^k det(a_k) > 0 for all k."""
    return all((-1) ** k * det_laplace([row[:k] for row in a[:k]]) > 0 for k in range(1, len(a) + 1))


def random_tree(rng: random.Random, n: int) -> list[tuple[int, int]]:
    return [(rng.randrange(v), v) for v in range(1, n)]


def tree_matrix(weights, edges):
    n = len(weights)
    q = [[0] * n for _ in range(n)]
    for i, w in enumerate(weights):
        q[i][i] = w
    for u, v in edges:
        q[u][v] = q[v][u] = 1
    return q


def farey_distances(source: Fraction, lo, hi, max_den: int, with_infinity: bool = False, goal=None) -> dict:
    """
    BFS distances from ``source`` in the Farey graph restricted to the slopes
    in [lo, hi] with denominator <= max_den (and infinity if asked).  Keys
    are (num, den) pairs.  Stops early once ``goal`` is reached.
    """

    def ok(num, den):
        if den == 0:
            return with_infinity
        return 1 <= den <= max_den and lo * den <= num <= hi * den

    def neighbours(b, a):
        # all (d, c) with b c - a d = +-1
        if a == 0:
            for d in range(math.floor(lo), math.ceil(hi) + 1):
                yield d, 1
            return
        if a == 1:
            yield 1, 0
        for sign in (1, -1):
            c0 = (sign * pow(b, -1, a)) % a if a > 1 else 0
            for c in range(c0, max_den + 1, a):
                if c == 0:
                    continue
                if (b * c - sign) % a == 0:
                    yield (b * c - sign) // a, c

    start = (source.numerator, source.denominator)
    dist = {start: 0}
    dq = deque([start])
    while dq:
        x = dq.popleft()
        if x == goal:
            break
        for y in neighbours(*x):
            if y not in dist and ok(*y):
                dist[y] = dist[x] + 1
                dq.append(y)
    return dist


def box_corner_min(a_inv, caps):
    """min of v^T A^{-1} v over all v with |v_i| <= caps_i, v_i = caps_i mod 2."""
    best = None
    for v in itertools.product(*[range(-c, c + 1, 2) for c in caps]):
        x = sum(v[i] * a_inv[i][j] * v[j] for i in range(len(v)) for j in range(len(v)))
        if best is None or x < best:
            best = x
    return best
