"""
Small Seifert fibered spaces, their plumbing / surgery diagrams and the
intersection-form invariants of the 4-manifolds they describe.

Diagrams are weighted trees.  Each vertex also carries a stabilization
capacity (how many times the Legendrian unknot is stabilized), which is what
the contact module enumerates over.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import linalg
from .exactmath import DomainError, cf_expand, mod_inverse, parse_rational


@dataclass(frozen=True)
class SeifertData:
    """Y(e0; r1, r2, r3) with 0 < ri < 1, stored with r sorted descending."""

    e0: int
    r: tuple[Fraction, Fraction, Fraction]

    def __post_init__(self):
        r = tuple(sorted((Fraction(x) for x in self.r), reverse=True))
        if len(r) != 3:
            raise DomainError("need exactly three singular fibers")
        for x in r:
            if not 0 < x < 1:
                raise DomainError(f"Seifert invariant {x} not in (0,1)")
        object.__setattr__(self, "e0", int(self.e0))
        object.__setattr__(self, "r", r)

    def __str__(self):
        return f"Y({self.e0}; " + ", ".join(f"{x.numerator}/{x.denominator}" for x in self.r) + ")"

    @classmethod
    def parse(cls, text: str) -> "SeifertData":
        """'e0;r1,r2,r3' (also accepts 'Y(e0; r1, r2, r3)')."""
        t = text.strip()
        if t.startswith("Y(") and t.endswith(")"):
            t = t[2:-1]
        if ";" not in t:
            raise DomainError(f"expected 'e0;r1,r2,r3', got {text!r}")
        e, rest = t.split(";", 1)
        e0 = parse_rational(e)
        if e0.denominator != 1:
            raise DomainError(f"e0 must be an integer, got {e.strip()}")
        rs = [parse_rational(x) for x in rest.split(",")]
        return cls(int(e0), tuple(rs))


def normalize_seifert(e: int, slots: Sequence) -> SeifertData:
    """
    Rolfsen-twist every slot into (0,1): ri = slot - floor(slot) and
    e0 = e + sum of floors.  Integer slots are absorbed into e0.
    """
    e0 = int(e)
    rs = []
    for s in slots:
        s = parse_rational(s)
        f = s.numerator // s.denominator
        e0 += f
        if s != f:
            rs.append(s - f)
    if len(rs) != 3:
        raise DomainError(f"not a 3-singular-fiber space: {len(rs)} non-integer slots after absorption")
    return SeifertData(e0, tuple(rs))


def orientation_reverse(s: SeifertData) -> SeifertData:
    return normalize_seifert(-s.e0, [-x for x in s.r])


def euler_sum(s: SeifertData) -> Fraction:
    """e0 + r1 + r2 + r3; nonzero exactly for rational homology spheres."""
    return s.e0 + sum(s.r)


def rational_euler_number(s: SeifertData) -> Fraction:
    """The other common sign convention, e(Y) = -(e0 + r1 + r2 + r3)."""
    return -euler_sum(s)


@dataclass(frozen=True)
class StabilizedDiagram:
    """
    Weighted tree with stabilization capacities.

    ``center`` and ``legs`` describe the star structure when there is one;
    legs list vertex indices from the center outward.  A chain has
    ``center=None`` and a single leg running along it.
    """

    weights: tuple[int, ...]
    caps: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    center: Optional[int] = None
    legs: tuple[tuple[int, ...], ...] = ()
    flags: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        n = len(self.weights)
        if len(self.caps) != n:
            raise DomainError("one capacity per vertex required")
        if any(c < 0 for c in self.caps):
            raise DomainError("capacities must be nonnegative")
        if n == 0:
            raise DomainError("empty diagram")
        if len(self.edges) != n - 1:
            raise DomainError("a tree on n vertices has n-1 edges")
        seen = {0}
        adj = self.adjacency()
        todo = [0]
        while todo:
            v = todo.pop()
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    todo.append(u)
        if len(seen) != n:
            raise DomainError("diagram is not connected")

    @property
    def n(self) -> int:
        return len(self.weights)

    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in self.weights]
        for a, b in self.edges:
            if not (0 <= a < len(adj) and 0 <= b < len(adj)) or a == b:
                raise DomainError(f"bad edge {(a, b)}")
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def matrix(self) -> list[list[int]]:
        n = self.n
        q = [[0] * n for _ in range(n)]
        for i, w in enumerate(self.weights):
            q[i][i] = w
        for a, b in self.edges:
            q[a][b] = q[b][a] = 1
        return q

    def is_star(self) -> bool:
        return self.center is not None

    def leg_weights(self) -> list[list[int]]:
        return [[self.weights[v] for v in leg] for leg in self.legs]


def star_diagram(center_weight: int, legs: Sequence[Sequence[int]], center_cap=None,
                 caps: Optional[Sequence[Sequence[int]]] = None, flags=()) -> StabilizedDiagram:
    """
    Star-shaped diagram from a center weight and legs listed from the center
    outward.  Capacities default to |w| - 2 (0 for w > -2) on legs and
    max(|e0| - 2, 0) at the center.
    """
    weights = [int(center_weight)]
    if center_cap is None:
        center_cap = -center_weight - 2 if center_weight <= -2 else 0
    capl = [center_cap]
    edges, leg_idx = [], []
    for li, leg in enumerate(legs):
        prev, idx = 0, []
        for j, w in enumerate(leg):
            v = len(weights)
            weights.append(int(w))
            if caps is not None:
                capl.append(caps[li][j])
            else:
                capl.append(-w - 2 if w <= -2 else 0)
            edges.append((prev, v))
            idx.append(v)
            prev = v
        leg_idx.append(tuple(idx))
    return StabilizedDiagram(tuple(weights), tuple(capl), tuple(edges), 0, tuple(leg_idx), frozenset(flags))


def chain_diagram(weights: Sequence[int], caps: Optional[Sequence[int]] = None) -> StabilizedDiagram:
    weights = tuple(int(w) for w in weights)
    if caps is None:
        caps = tuple(-w - 2 if w <= -2 else 0 for w in weights)
    edges = tuple((i, i + 1) for i in range(len(weights) - 1))
    return StabilizedDiagram(weights, tuple(caps), edges, None, (tuple(range(len(weights))),))


def seifert_to_plumbing(s: SeifertData) -> StabilizedDiagram:
    """Star: center e0, leg i weights -a^i_j from the expansion of 1/ri."""
    legs = [[-a for a in cf_expand(1 / x)] for x in s.r]
    flags = () if s.e0 <= -2 else ("center_uncapped",)
    return star_diagram(s.e0, legs, flags=flags)


def lens_chain(p: int, q: int) -> StabilizedDiagram:
    """Linear plumbing for L(p,q): weights -a_i from p/q = [a0, ..., ak]."""
    _check_pq(p, q)
    return chain_diagram([-a for a in cf_expand(Fraction(p, q))])


def prism_graph(p: int, q: int) -> StabilizedDiagram:
    """
    Chain -a0, ..., -ak for p/q with two -2 leaves on the -a0 end.  Vertex
    order is (leaf, a0, ..., ak, leaf) so that the canonical rotation vector
    reads (0, a0-2, ..., ak-2, 0).
    """
    _check_pq(p, q)
    a = cf_expand(Fraction(p, q))
    k = len(a) - 1
    weights = [-2] + [-x for x in a] + [-2]
    n = len(weights)
    edges = [(0, 1), (1, n - 1)] + [(i, i + 1) for i in range(1, k + 1)]
    caps = [0] + [x - 2 for x in a] + [0]
    legs = ((0,), (n - 1,), tuple(range(2, k + 2)))
    return StabilizedDiagram(tuple(weights), tuple(caps), tuple(edges), 1, legs)


def prism_lens_chain(p: int, q: int) -> StabilizedDiagram:
    """The chain -(a0-1), -a1, ..., -ak of (p-q)/q used alongside the prism graph."""
    a = cf_expand(Fraction(p, q))
    return chain_diagram([-(a[0] - 1)] + [-x for x in a[1:]])


def _check_pq(p, q):
    if not (0 < q < p) or math.gcd(p, q) != 1:
        raise DomainError(f"need coprime 0 < q < p, got p={p}, q={q}")


@dataclass(frozen=True)
class IntersectionData:
    matrix: tuple[tuple[int, ...], ...]
    chi: int
    sigma: int
    det: int
    nullity: int = 0

    def to_json(self) -> dict:
        return {
            "matrix": [[str(x) for x in row] for row in self.matrix],
            "chi": str(self.chi),
            "sigma": str(self.sigma),
            "det": str(self.det),
            "nullity": str(self.nullity),
        }


def _tree_ldl(d: StabilizedDiagram):
    """
    Leaves-first elimination on a tree.  Returns (order, parent, pivots) with
    pivots d_v = w_v - sum over children of 1/d_c, or None on a zero pivot.
    """
    adj = d.adjacency()
    root = d.center if d.center is not None else 0
    parent = [-1] * d.n
    order = []
    seen = [False] * d.n
    seen[root] = True
    dq = deque([root])
    while dq:
        v = dq.popleft()
        order.append(v)
        for u in adj[v]:
            if not seen[u]:
                seen[u] = True
                parent[u] = v
                dq.append(u)
    order.reverse()  # leaves first, root last
    piv = [Fraction(w) for w in d.weights]
    for v in order:
        if piv[v] == 0:
            return None
        if parent[v] >= 0:
            piv[parent[v]] -= 1 / piv[v]
    return order, parent, piv


def intersection_data(d: StabilizedDiagram) -> IntersectionData:
    q = d.matrix()
    ldl = _tree_ldl(d)
    if ldl is not None:
        piv = ldl[2]
        det = Fraction(1)
        for x in piv:
            det *= x
        plus = sum(1 for x in piv if x > 0)
        minus = d.n - plus
        null = 0
        det = int(det)
    else:
        plus, minus, null = linalg.inertia(q)
        det = linalg.det_bareiss(q)
    return IntersectionData(tuple(tuple(r) for r in q), d.n + 1, plus - minus, det, null)


def solve(d: StabilizedDiagram, b: Sequence) -> list[Fraction]:
    """Exact solution of Q x = b."""
    ldl = _tree_ldl(d)
    if ldl is None:
        return _dense_solve(d, b)
    return _ldl_solve(ldl, b)


def _dense_solve(d, b):
    try:
        return linalg.solve(d.matrix(), b)
    except DomainError:
        _, _, null = linalg.inertia(d.matrix())
        raise DomainError(f"intersection form is singular (nullity {null})") from None


def _ldl_solve(ldl, b):
    order, parent, piv = ldl
    bb = [Fraction(x) for x in b]
    for v in order:
        if parent[v] >= 0 and bb[v]:
            bb[parent[v]] -= bb[v] / piv[v]
    x = [Fraction(0)] * len(bb)
    for v in reversed(order):
        up = x[parent[v]] if parent[v] >= 0 else 0
        x[v] = (bb[v] - up) / piv[v] if bb[v] else -up / piv[v]
    return x


def quadratic_form(d: StabilizedDiagram, v: Sequence[int]) -> Fraction:
    """v^T Q^{-1} v."""
    if len(v) != d.n:
        raise DomainError(f"vector has {len(v)} entries, diagram has {d.n} vertices")
    x = solve(d, v)
    return sum(Fraction(a) * b for a, b in zip(v, x))


def _branch_dets(d: StabilizedDiagram) -> dict:
    """
    det of the component containing n after cutting the edge w-n, for every
    directed edge (w, n); the key (-1, v) gives det Q itself.
    """
    adj = d.adjacency()
    memo: dict = {}

    def deps(w, n):
        kids = [m for m in adj[n] if m != w]
        return kids, [(n, m) for m in kids] + [(m, g) for m in kids for g in adj[m] if g != n]

    for v in range(d.n):
        stack = [(-1, v)]
        while stack:
            w, n = stack[-1]
            if (w, n) in memo:
                stack.pop()
                continue
            kids, need = deps(w, n)
            missing = [e for e in need if e not in memo]
            if missing:
                stack.extend(missing)
                continue
            # expand along the row of n
            sub = [memo[(n, m)] for m in kids]
            val = d.weights[n] * math.prod(sub)
            for i, m in enumerate(kids):
                grand = math.prod(memo[(m, g)] for g in adj[m] if g != n)
                val -= grand * math.prod(sub[:i] + sub[i + 1:])
            memo[(w, n)] = val
            stack.pop()
    return memo


def inverse_matrix(d: StabilizedDiagram) -> list[list[Fraction]]:
    """
    Q^{-1} for a tree: entry (i, j) is (-1)^len(path) times the determinant
    of Q with the i-j path deleted, over det Q.  The deleted-path minor is
    the product of the branches hanging off the path.
    """
    adj = d.adjacency()
    br = _branch_dets(d)
    det = br[(-1, 0)]
    if det == 0:
        _, _, null = linalg.inertia(d.matrix())
        raise DomainError(f"intersection form is singular (nullity {null})")
    out = [[Fraction(0)] * d.n for _ in range(d.n)]
    for i in range(d.n):
        # (vertex, previous vertex, product over the path so far, sign)
        stack = [(i, -1, 1, 1)]
        while stack:
            u, prev, acc, sign = stack.pop()
            off = [m for m in adj[u] if m != prev]
            out[i][u] = Fraction(sign * acc * math.prod(br[(u, m)] for m in off), det)
            for c in off:
                rest = math.prod(br[(u, m)] for m in off if m != c)
                stack.append((c, u, acc * rest, -sign))
    return out


def torus_surgery_seifert(p: int, q: int, r) -> SeifertData:
    """Seifert invariants of r-surgery on the (p,q) torus knot, r < 0."""
    r = parse_rational(r)
    if not (1 < p < q) or math.gcd(p, q) != 1:
        raise DomainError(f"need coprime 1 < p < q, got ({p}, {q})")
    if r >= 0:
        raise DomainError(f"surgery coefficient must be negative, got {r}")
    qs = mod_inverse(q % p, p)
    ps = mod_inverse(p % q, q)
    return SeifertData(-1, (Fraction(p - qs, p), Fraction(q - ps, q), 1 / (p * q - r)))


def torus_surgery_chain(p: int, q: int, r) -> StabilizedDiagram:
    """
    Chain for Legendrian surgery realizing r-surgery on the max-tb (p,q)
    torus knot: -r = [a0, ..., ak] (head may be 1), weights -ai, head
    capacity pq - p - q + a0 - 1, tail capacities ai - 2.
    """
    r = parse_rational(r)
    if not (1 < p < q) or math.gcd(p, q) != 1:
        raise DomainError(f"need coprime 1 < p < q, got ({p}, {q})")
    if r >= 0:
        raise DomainError(f"surgery coefficient must be negative, got {r}")
    a = cf_expand(-r, allow_head_one=True)
    caps = [p * q - p - q + a[0] - 1] + [x - 2 for x in a[1:]]
    return chain_diagram([-x for x in a], caps)


def fiber_knot_type(x) -> tuple[int, int]:
    """(q, -q') for x = q/p, where p'q - q'p = 1 and 0 < p' < p."""
    x = parse_rational(x)
    if not 0 < x < 1:
        raise DomainError(f"need 0 < x < 1, got {x}")
    q, p = x.numerator, x.denominator
    pp = pow(q, -1, p)
    qq = (pp * q - 1) // p
    return (q, -qq)


# text format -------------------------------------------------------------

def parse_plumbing(text: str) -> StabilizedDiagram:
    """
    Either a star (``center <w>`` then ``leg <w1> <w2> ...`` lines, legs from
    the center outward) or a general tree (``vertex <id> <w>`` and
    ``edge <id> <id>`` lines).  Blank lines and ``#`` comments are ignored.
    """
    center, legs, verts, edges = None, [], {}, []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "center" and len(tok) == 2:
                center = int(tok[1])
            elif tok[0] == "leg" and len(tok) >= 2:
                legs.append([int(t) for t in tok[1:]])
            elif tok[0] == "vertex" and len(tok) == 3:
                verts[tok[1]] = int(tok[2])
            elif tok[0] == "edge" and len(tok) == 3:
                edges.append((tok[1], tok[2]))
            else:
                raise ValueError
        except ValueError:
            raise DomainError(f"line {lineno}: cannot parse {line!r}") from None
    if center is not None or legs:
        if verts or edges:
            raise DomainError("mixing star and vertex/edge syntax")
        if center is None:
            raise DomainError("star diagram needs a 'center' line")
        return star_diagram(center, legs)
    if not verts:
        raise DomainError("empty plumbing description")
    ids = list(verts)
    index = {k: i for i, k in enumerate(ids)}
    try:
        e = tuple((index[a], index[b]) for a, b in edges)
    except KeyError as exc:
        raise DomainError(f"edge mentions unknown vertex {exc.args[0]}") from None
    d = StabilizedDiagram(tuple(verts[k] for k in ids), tuple(-verts[k] - 2 if verts[k] <= -2 else 0 for k in ids), e)
    return as_star(d)


def as_star(d: StabilizedDiagram) -> StabilizedDiagram:
    """Attach star structure (unique vertex of degree >= 3, or a chain)."""
    adj = d.adjacency()
    hubs = [v for v in range(d.n) if len(adj[v]) >= 3]
    if len(hubs) > 1:
        return d
    if not hubs:
        ends = [v for v in range(d.n) if len(adj[v]) <= 1]
        start = ends[0]
        path, prev = [start], -1
        while len(path) < d.n:
            nxt = [u for u in adj[path[-1]] if u != prev][0]
            prev = path[-1]
            path.append(nxt)
        return StabilizedDiagram(d.weights, d.caps, d.edges, None, (tuple(path),), d.flags)
    c = hubs[0]
    legs = []
    for u in adj[c]:
        leg, prev = [u], c
        while True:
            nxt = [w for w in adj[leg[-1]] if w != prev]
            if not nxt:
                break
            prev = leg[-1]
            leg.append(nxt[0])
        legs.append(tuple(leg))
    return StabilizedDiagram(d.weights, d.caps, d.edges, c, tuple(legs), d.flags)


def format_plumbing(d: StabilizedDiagram) -> str:
    if d.center is not None and sorted([d.center] + [v for leg in d.legs for v in leg]) == list(range(d.n)):
        lines = [f"center {d.weights[d.center]}"]
        lines += ["leg " + " ".join(str(d.weights[v]) for v in leg) for leg in d.legs]
    else:
        lines = [f"vertex v{i} {w}" for i, w in enumerate(d.weights)]
        lines += [f"edge v{a} v{b}" for a, b in d.edges]
    return "\n".join(lines) + "\n"
