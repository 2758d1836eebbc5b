"""
Paths in the Farey graph and the sign bookkeeping for tight structures on
solid tori.

Conventions: moving left to right on the real line is clockwise on the Farey
circle.  A surgery path for r < 0 runs from 0 anti-clockwise (leftwards) to r
and the edge adjacent to the meridian r carries no sign.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .exactmath import DomainError, Slope, as_slope, cf_eval, det2, has_edge

PLUS, MINUS, BLANK = "+", "-", "."


@dataclass(frozen=True)
class FareyPath:
    """
    Farey path with its continued fraction blocks.

    ``vectors`` are integer representatives (den, num) of the vertices with a
    consistent orientation along the path; ``blocks`` are half-open edge index
    ranges, one per continued fraction entry (a block may be empty, which is
    how runs of -2 entries show up as an "l down" continuation).
    """

    vectors: tuple[tuple[int, int], ...]
    blocks: tuple[tuple[int, int], ...] = ()

    @property
    def vertices(self) -> tuple[Slope, ...]:
        return tuple(Slope.from_vector(v) for v in self.vectors)

    @property
    def n_edges(self) -> int:
        return len(self.vectors) - 1

    def block_of_edge(self, e: int) -> int:
        for i, (lo, hi) in enumerate(self.blocks):
            if lo <= e < hi:
                return i
        raise IndexError(e)

    def turn(self, i: int) -> int:
        """The integer c with v[i-1] + v[i+1] = c v[i] (oriented vectors)."""
        if not 0 < i < len(self.vectors) - 1:
            raise DomainError(f"vertex {i} is not interior to the path")
        u, v, w = self.vectors[i - 1], self.vectors[i], self.vectors[i + 1]
        s = (u[0] + w[0], u[1] + w[1])
        if det2(s, v) != 0:
            raise DomainError(f"vertices around {i} do not form a Farey path")
        return s[0] // v[0] if v[0] else s[1] // v[1]

    def to_json(self) -> dict:
        return {
            "vertices": [str(s) for s in self.vertices],
            "blocks": [list(b) for b in self.blocks],
        }


def _oriented(vectors: list[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    # flip signs so that det(v[i], v[i+1]) has one sign along the path
    out = [vectors[0]]
    sign = None
    for v in vectors[1:]:
        d = det2(out[-1], v)
        if abs(d) != 1:
            raise DomainError(f"{Slope.from_vector(out[-1])} and {Slope.from_vector(v)} are not Farey neighbours")
        if sign is None:
            sign = d
        elif d != sign:
            v = (-v[0], -v[1])
        out.append(v)
    return tuple(out)


def path_from_slopes(slopes: Sequence, blocks: Sequence[tuple[int, int]] = ()) -> FareyPath:
    vecs = [as_slope(s).vector() for s in slopes]
    return FareyPath(_oriented(vecs), tuple(tuple(b) for b in blocks))


def _leftward_step(v: tuple[int, int], r: Fraction) -> tuple[int, int]:
    """Neighbour of v = b/a (a >= 1) in [r, v) closest to r."""
    a, b = v
    A, B = r.denominator, r.numerator
    # left neighbours of v are L + k v, k >= 0, with b_L a - b a_L = -1
    aL = pow(b, -1, a) if a > 1 else 0
    bL = (b * aL - 1) // a
    gap = b * A - B * a  # > 0 since r < v
    need = B * aL - bL * A
    k = max(0, -((-need) // gap))
    return (aL + k * a, bL + k * b)


def standard_path(coeffs: Sequence[int]) -> FareyPath:
    """
    Minimal Farey path from 0 anti-clockwise to r = [c0, ..., cn] (signed
    entries, c0 <= -1, ci <= -2).

    Vertices are produced greedily (each step jumps to the neighbour closest
    to r without passing it), which is a geodesic because Farey edges do not
    cross.  Blocks get |c0+1|, |c1+2|, ..., |c_{n-1}+2|, |cn+1| edges, or |c0|
    edges when n = 0.
    """
    coeffs = list(coeffs)
    if not coeffs:
        raise DomainError("empty continued fraction")
    if coeffs[0] > -1 or any(c > -2 for c in coeffs[1:]):
        raise DomainError(f"surgery continued fraction needs c0 <= -1, ci <= -2: {coeffs}")
    r = cf_eval(coeffs)
    vecs = [(1, 0)]
    while Fraction(vecs[-1][1], vecs[-1][0]) != r:
        vecs.append(_leftward_step(vecs[-1], r))
    n = len(coeffs) - 1
    if n == 0:
        sizes = [-coeffs[0]]
    else:
        sizes = [-(coeffs[0] + 1)] + [-(c + 2) for c in coeffs[1:-1]] + [-(coeffs[-1] + 1)]
    if sum(sizes) != len(vecs) - 1:
        raise AssertionError("block sizes disagree with the geodesic length")
    blocks, lo = [], 0
    for s in sizes:
        blocks.append((lo, lo + s))
        lo += s
    return FareyPath(_oriented(vecs), tuple(blocks))


def count_tight_solid_torus(coeffs: Sequence[int]) -> int:
    """|c0 (c1+1) ... (cn+1)| for signed entries."""
    coeffs = list(coeffs)
    if not coeffs:
        raise DomainError("empty continued fraction")
    if coeffs[0] > -1 or any(c > -2 for c in coeffs[1:]):
        raise DomainError(f"surgery continued fraction needs c0 <= -1, ci <= -2: {coeffs}")
    out = abs(coeffs[0])
    for c in coeffs[1:]:
        out *= abs(c + 1)
    return out


@dataclass(frozen=True)
class DecoratedPath:
    path: FareyPath
    signs: tuple[str, ...]

    def __post_init__(self):
        if len(self.signs) != self.path.n_edges:
            raise DomainError("one sign per edge required")
        if any(s not in (PLUS, MINUS, BLANK) for s in self.signs):
            raise DomainError(f"signs must be '+', '-' or '.': {self.signs}")

    def to_json(self) -> dict:
        d = self.path.to_json()
        d["signs"] = "".join(self.signs)
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def blank_edges(path: FareyPath, meridian_end: str = "last") -> set[int]:
    """Edges adjacent to a meridian: 'first', 'last' or 'both'."""
    out = set()
    if meridian_end in ("first", "both"):
        out.add(0)
    if meridian_end in ("last", "both"):
        out.add(path.n_edges - 1)
    return out


def decorations(path: FareyPath, meridian_end: str = "last") -> Iterator[DecoratedPath]:
    """All decorations up to shuffling signs inside blocks (+ sorted before -)."""
    blank = blank_edges(path, meridian_end)
    per_block = []
    for lo, hi in path.blocks:
        signed = [e for e in range(lo, hi) if e not in blank]
        per_block.append([(signed, k) for k in range(len(signed) + 1)])
    for choice in itertools.product(*per_block):
        signs = [BLANK] * path.n_edges
        for signed, k in choice:
            for j, e in enumerate(signed):
                signs[e] = PLUS if j < len(signed) - k else MINUS
        yield DecoratedPath(path, tuple(signs))


def normalize_signs(d: DecoratedPath) -> DecoratedPath:
    """Sort the signs inside each block (all + before -)."""
    signs = list(d.signs)
    for lo, hi in d.path.blocks:
        idx = [e for e in range(lo, hi) if signs[e] != BLANK]
        vals = sorted((signs[e] for e in idx), key=lambda s: s != PLUS)
        for e, s in zip(idx, vals):
            signs[e] = s
    return DecoratedPath(d.path, tuple(signs))


@dataclass(frozen=True)
class DecorationClass:
    per_block_mixed: tuple[bool, ...]
    junction_mismatches: tuple[int, ...]
    consistent: bool


def classify_decoration(d: DecoratedPath) -> DecorationClass:
    """
    Flag blocks containing both signs and adjacent (signed) blocks of opposite
    uniform sign.  ``junction_mismatches`` holds the index of the later block
    of each offending pair.
    """
    d = normalize_signs(d)
    block_signs = []
    for lo, hi in d.path.blocks:
        block_signs.append({s for s in d.signs[lo:hi] if s != BLANK})
    mixed = tuple(len(s) == 2 for s in block_signs)
    mismatches = []
    prev = None
    for i, s in enumerate(block_signs):
        if not s:
            continue
        if prev is not None and len(s) == 1 and len(block_signs[prev]) == 1 and s != block_signs[prev]:
            mismatches.append(i)
        prev = i
    return DecorationClass(mixed, tuple(mismatches), not any(mixed) and not mismatches)


def exceptional_slopes(d, junction) -> list[Slope]:
    """
    Slopes with a Farey edge to the junction vertex lying strictly between its
    two path neighbours on the side away from the junction.

    ``junction`` is a vertex index or a pair of consecutive edge indices.
    Inside a block the answer is the block target; across an "l down" junction
    it has l elements.
    """
    path = d.path if isinstance(d, DecoratedPath) else d
    if isinstance(junction, tuple):
        e1, e2 = junction
        if e2 != e1 + 1:
            raise DomainError(f"edges {junction} are not consecutive")
        i = e2
    else:
        i = junction
    c = path.turn(i)
    if c < 2:
        raise DomainError(f"path is not minimal at vertex {i} (turn {c})")
    u, v = path.vectors[i - 1], path.vectors[i]
    out = [Slope.from_vector((j * v[0] - u[0], j * v[1] - u[1])) for j in range(1, c)]
    assert all(has_edge(s, Slope.from_vector(v)) for s in out)
    return out
