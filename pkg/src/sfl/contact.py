"""
Tight contact structures as rotation vectors on stabilized diagrams, Gompf's
theta invariant, consistency classes, and closed-form theta values for lens
spaces, prism manifolds and surgeries on torus knots.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .exactmath import DomainError, cf_eval, cf_expand, i_invariant, mod_inverse
from .plumbing import StabilizedDiagram, intersection_data, quadratic_form

CONSISTENT, MOSTLY, INCONSISTENT = "consistent", "mostly", "inconsistent"

DEFAULT_CAP = 10**7


def structure_count(d: StabilizedDiagram) -> int:
    out = 1
    for c in d.caps:
        out *= c + 1
    return out


def is_rotation_vector(d: StabilizedDiagram, rot: Sequence[int]) -> bool:
    return len(rot) == d.n and all(abs(x) <= c and (x - c) % 2 == 0 for x, c in zip(rot, d.caps))


@dataclass
class Enumeration:
    """Lazy stream of rotation vectors with the total known up front."""

    diagram: StabilizedDiagram
    count: int

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        ranges = [range(-c, c + 1, 2) for c in self.diagram.caps]
        return itertools.product(*ranges)

    def at(self, index: int) -> tuple[int, ...]:
        """The index-th vector in lexicographic order (mixed radix)."""
        if not 0 <= index < self.count:
            raise IndexError(index)
        out = []
        for c in reversed(self.diagram.caps):
            index, k = divmod(index, c + 1)
            out.append(-c + 2 * k)
        return tuple(reversed(out))

    def slice(self, start: int, stop: int) -> Iterator[tuple[int, ...]]:
        stop = min(stop, self.count)
        if start >= stop:
            return iter(())
        first = self.at(start)
        caps = self.diagram.caps

        def gen():
            cur = list(first)
            for _ in range(stop - start):
                yield tuple(cur)
                # odometer increment
                i = len(cur) - 1
                while i >= 0:
                    if cur[i] < caps[i]:
                        cur[i] += 2
                        break
                    cur[i] = -caps[i]
                    i -= 1

        return gen()

    def materialize(self, cap: int = DEFAULT_CAP) -> list[tuple[int, ...]]:
        if self.count > cap:
            raise DomainError(f"{self.count} structures exceed the enumeration cap {cap}")
        return list(self)


def enumerate_structures(d: StabilizedDiagram) -> Enumeration:
    return Enumeration(d, structure_count(d))


def canonical_rotation(d: StabilizedDiagram) -> tuple[int, ...]:
    return tuple(d.caps)


def c1_squared(d: StabilizedDiagram, rot: Sequence[int]) -> Fraction:
    return quadratic_form(d, rot)


def theta(d: StabilizedDiagram, rot: Sequence[int], data=None) -> Fraction:
    """c1^2 - 2 chi - 3 sigma."""
    data = data or intersection_data(d)
    if data.nullity or data.det == 0:
        raise DomainError(f"intersection form is singular (nullity {data.nullity})")
    return quadratic_form(d, rot) - 2 * data.chi - 3 * data.sigma


def theta_all(d: StabilizedDiagram, cap: int = DEFAULT_CAP, threads: int = 1) -> list[tuple[tuple[int, ...], Fraction]]:
    """theta for every structure, in enumeration order."""
    en = enumerate_structures(d)
    if en.count > cap:
        raise DomainError(f"{en.count} structures exceed the enumeration cap {cap}")
    data = intersection_data(d)
    if threads <= 1 or en.count < 64:
        return [(r, theta(d, r, data)) for r in en]
    step = -(-en.count // threads)

    def work(lo):
        return [(r, theta(d, r, data)) for r in en.slice(lo, lo + step)]

    with ThreadPoolExecutor(threads) as ex:
        parts = list(ex.map(work, range(0, en.count, step)))
    return [x for part in parts for x in part]


def _sign_of(rot, caps, vertices) -> Optional[set]:
    """Signs eps with rot_v = eps cap_v on all given vertices (None if none)."""
    ok = {1, -1}
    for v in vertices:
        if caps[v] == 0:
            continue
        ok &= {e for e in (1, -1) if rot[v] == e * caps[v]}
    return ok


def classify_consistency(d: StabilizedDiagram, rot: Sequence[int]) -> str:
    if not is_rotation_vector(d, rot):
        raise DomainError(f"{tuple(rot)} is not a rotation vector of this diagram")
    if not d.legs:
        raise DomainError("consistency needs a star or chain diagram")
    caps = d.caps
    everything = range(d.n)
    if _sign_of(rot, caps, everything):
        return CONSISTENT
    if d.center is None:
        return INCONSISTENT
    parts = [[d.center]] + [list(leg) for leg in d.legs]
    if all(_sign_of(rot, caps, part) for part in parts):
        return MOSTLY
    return INCONSISTENT


# closed forms ----------------------------------------------------------------

def _check_pq(p, q):
    from math import gcd

    if not (0 < q < p) or gcd(p, q) != 1:
        raise DomainError(f"need coprime 0 < q < p, got p={p}, q={q}")


def theta_lens_closed(p: int, q: int) -> Fraction:
    _check_pq(p, q)
    qs = mod_inverse(q, p) if p > 1 else 0
    return -(i_invariant(Fraction(p, q)) + Fraction(2 + q + qs, p))


def theta_prism_closed(p: int, q: int) -> tuple[Fraction, Fraction]:
    """(theta, c1^2) of the canonical structure on the prism manifold D(p,q)."""
    _check_pq(p, q)
    a = cf_expand(Fraction(p, q))
    k = len(a) - 1
    if k == 0:
        raise DomainError(f"{p}/{q} has a one-term expansion (lens, not prism)")
    tail = 1 / cf_eval(list(reversed(a[1:])) + [a[0] - 1])
    th = 1 - i_invariant(Fraction(p, q)) - tail
    c1 = 2 * k + 3 - sum(a) - tail
    return th, c1


RECIPROCAL, INTEGER = "reciprocal", "integer"


def theta_torus_closed(p: int, q: int, n: int, case: str) -> Fraction:
    """
    Canonical theta after -1/n surgery (case 'reciprocal') or -n surgery
    (case 'integer') on the (p,q) torus knot.
    """
    from math import gcd

    if not (1 < p < q) or gcd(p, q) != 1 or n < 1:
        raise DomainError(f"need coprime 1 < p < q and n >= 1, got ({p}, {q}, {n})")
    t = p * q - p - q
    if case == RECIPROCAL:
        return Fraction(-n * t * t + n - 2)
    if case == INTEGER:
        return -Fraction((t + n - 1) ** 2, n) - 1
    raise DomainError(f"unknown case {case!r}")
