"""
Deciding which tight contact structures on small Seifert fibered spaces (and
on lens spaces, prism manifolds, the T/I spherical manifolds and negative
surgeries on torus knots) can be filled by a symplectic rational homology
ball.

Every verdict carries a short tag naming the fact it rests on:

  not-qhs               Y is not a rational homology sphere
  e0-below-minus-4      no rational ball fillings at all when e0 < -4
  qhb-canonical         e0 <= -3: fillable iff the graph is in a QHB family
                        and the structure is +-canonical
  qhb-e0-minus-2        e0 = -2 and QHB: only +-canonical fills
  consistency           inconsistent structures are split by a mixed torus
                        and cannot bound a rational ball
  theta                 theta != -2 rules out a rational ball
  sum-window            e0 = -1 and r1+r2+r3 > 1 > r1+r2 (largest pair)
  cable-construction    filling built from a cable of a fiber in S^1 x S^2
  lens-O                lens spaces: fillable iff p/q in O and +-canonical
  spherical             non-cyclic spherical links never fill
  torus-surgery         r-surgery on T(p,q) in the ruled-out parameter range
  open                  existence not decided (Candidate) or classification
                        unavailable (Unknown)
"""

from __future__ import annotations

import itertools
import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Optional

from . import contact
from .contact import CONSISTENT, INCONSISTENT, MOSTLY
from .exactmath import DomainError, cf_expand, format_rational, mod_inverse, parse_rational
from .plumbing import (
    SeifertData,
    StabilizedDiagram,
    fiber_knot_type,
    lens_chain,
    normalize_seifert,
    orientation_reverse,
    euler_sum,
    prism_graph,
    seifert_to_plumbing,
    star_diagram,
    torus_surgery_chain,
    torus_surgery_seifert,
)

FILLABLE, NOT_FILLABLE, CANDIDATE, UNKNOWN = "Fillable", "NotFillable", "Candidate", "Unknown"
LSPACE, NOT_LSPACE, LSPACE_UNKNOWN = "LSpace", "NotLSpace", "Unknown"

ENV_TEMPLATES = "SFL_QHB_TEMPLATES"


# O membership -----------------------------------------------------------------

def o_membership(p: int, q: int) -> Optional[tuple[int, int]]:
    """(m, h) with p = m^2, q = mh - 1, 0 < h < m coprime, or None."""
    if not (0 < q < p) or math.gcd(p, q) != 1:
        raise DomainError(f"need coprime 0 < q < p, got p={p}, q={q}")
    m = math.isqrt(p)
    if m * m != p or (q + 1) % m:
        return None
    h = (q + 1) // m
    if 0 < h < m and math.gcd(m, h) == 1:
        return (m, h)
    return None


# QHB templates ------------------------------------------------------------------

@dataclass(frozen=True)
class QhbTemplate:
    id: str
    center: dict
    legs: tuple

    @property
    def params(self) -> tuple[str, ...]:
        names = set()
        for tok in [self.center] + [t for leg in self.legs for t in leg]:
            if "param" in tok:
                names.add(tok["param"])
            if "run2" in tok:
                names.add(tok["run2"])
        return tuple(sorted(names))

    def instantiate(self, **params) -> StabilizedDiagram:
        missing = [x for x in self.params if x not in params]
        if missing:
            raise DomainError(f"template {self.id} needs parameters {missing}")
        if any(params[x] < 0 for x in self.params):
            raise DomainError("template parameters must be nonnegative")
        legs = [sum((_expand(t, params) for t in leg), []) for leg in self.legs]
        (c,) = _expand(self.center, params)
        return star_diagram(c, legs)


def _expand(tok: dict, params) -> list[int]:
    if "w" in tok:
        return [int(tok["w"])]
    if "param" in tok:
        return [-(params[tok["param"]] + int(tok.get("offset", 0)))]
    if "run2" in tok:
        return [-2] * params[tok["run2"]]
    raise DomainError(f"unknown template token {tok}")


def _check_token(tok):
    if not isinstance(tok, dict) or len(set(tok) & {"w", "param", "run2"}) != 1:
        raise DomainError(f"bad template token {tok!r}")
    for key in ("param", "run2"):
        if key in tok and tok[key] not in ("p", "q", "r"):
            raise DomainError(f"template parameter must be p, q or r: {tok!r}")


def parse_templates(data) -> list[QhbTemplate]:
    out = []
    for entry in data:
        try:
            center, legs = entry["center"], entry["legs"]
            tid = str(entry["id"])
        except (KeyError, TypeError):
            raise DomainError(f"template entry needs id, center and legs: {entry!r}") from None
        _check_token(center)
        if "run2" in center:
            raise DomainError("the center must be a single vertex")
        for leg in legs:
            for tok in leg:
                _check_token(tok)
        out.append(QhbTemplate(tid, center, tuple(tuple(leg) for leg in legs)))
    return out


def load_templates(path: Optional[str] = None) -> list[QhbTemplate]:
    """From ``path``, else $SFL_QHB_TEMPLATES, else the bundled file."""
    path = path or os.environ.get(ENV_TEMPLATES)
    if path:
        with open(path) as fh:
            return parse_templates(json.load(fh))
    return list(_bundled_templates())


@lru_cache(maxsize=1)
def _bundled_templates() -> tuple[QhbTemplate, ...]:
    text = resources.files("sfl").joinpath("data/qhb_templates.json").read_text()
    return tuple(parse_templates(json.loads(text)))


def _match_leg(tokens, weights, bind, ti=0, wi=0):
    """Yield bindings extending ``bind`` under which tokens spell weights."""
    if ti == len(tokens):
        if wi == len(weights):
            yield bind
        return
    tok = tokens[ti]
    if "w" in tok:
        if wi < len(weights) and weights[wi] == tok["w"]:
            yield from _match_leg(tokens, weights, bind, ti + 1, wi + 1)
    elif "param" in tok:
        if wi >= len(weights):
            return
        val = -weights[wi] - int(tok.get("offset", 0))
        x = tok["param"]
        if val < 0 or bind.get(x, val) != val:
            return
        yield from _match_leg(tokens, weights, {**bind, x: val}, ti + 1, wi + 1)
    else:
        x = tok["run2"]
        run = 0
        while wi + run < len(weights) and weights[wi + run] == -2:
            run += 1
        lengths = [bind[x]] if x in bind else range(run + 1)
        for n in lengths:
            if n <= run:
                yield from _match_leg(tokens, weights, {**bind, x: n}, ti + 1, wi + n)


def qhb_match(d: StabilizedDiagram, templates=None) -> Optional[tuple[str, dict]]:
    """First template (in file order) whose instance is d, up to leg order."""
    if d.center is None or len(d.legs) != 3:
        return None
    if sorted([d.center] + [v for leg in d.legs for v in leg]) != list(range(d.n)):
        return None
    templates = load_templates() if templates is None else templates
    legs = d.leg_weights()
    cw = d.weights[d.center]
    for t in templates:
        for b0 in _match_leg((t.center,), [cw], {}):
            for perm in itertools.permutations(legs):
                for b in _leg_chain(t.legs, perm, b0):
                    return t.id, {k: b.get(k, 0) for k in t.params}
    return None


def _leg_chain(tlegs, legs, bind, i=0):
    if i == len(tlegs):
        yield bind
        return
    for b in _match_leg(tlegs[i], legs[i], bind):
        yield from _leg_chain(tlegs, legs, b, i + 1)


# L-spaces -----------------------------------------------------------------------

def lspace_status(s: SeifertData) -> str:
    """Sufficient conditions for Y(-1; r1, r2, r3) to be or not be an L-space."""
    if s.e0 != -1:
        raise DomainError("L-space test implemented for e0 = -1 only")
    r1, r2, _ = s.r
    total = sum(s.r)
    if total >= Fraction(3, 2) or r1 + r2 >= 1:
        return LSPACE
    if total < 1:
        return NOT_LSPACE
    return LSPACE_UNKNOWN


# fillable examples from cables ---------------------------------------------------------

def generate_fillable(x, m: int, h: int, k: int) -> tuple[SeifertData, dict]:
    """
    Seifert space S(p/q, -p/q, m^2/(km^2+mh+1)) for x = q/p, together with
    the recipe for its rational ball filling: a Stein 2-handle on S^1 x D^3
    along the Legendrian (m, -h) cable of the fiber knot stabilized k times,
    i.e. the (m, -h - km) cable in the torus framing.
    """
    x = parse_rational(x)
    if not 0 < x < 1:
        raise DomainError(f"need 0 < q/p < 1, got {x}")
    if x.numerator == 1:
        raise DomainError(f"q/p = {x} is of the form 1/n: the result is a lens space")
    if not (0 < h < m) or math.gcd(m, h) != 1:
        raise DomainError(f"need coprime 0 < h < m, got m={m}, h={h}")
    if k < 0:
        raise DomainError(f"need k >= 0, got {k}")
    q, p = x.numerator, x.denominator
    den = k * m * m + m * h + 1
    s = normalize_seifert(0, [Fraction(p, q), Fraction(-p, q), Fraction(m * m, den)])
    fiber = fiber_knot_type(x)
    record = {
        "fiber_knot": list(fiber),
        "cable": [m, -h - k * m],
        "stabilizations": k,
        "fiber_surgery": format_rational(Fraction(-den, m * m)),
        "cable_surgery": -m * h - 1 - k * m * m,
        "lens_ball": [m * m, m * h - 1],
        # H_1(S^1 x S^2) = Z; the regular fiber of this Seifert structure is p times a generator
        "fiber_class": p,
        "handle_class": m * p,
    }
    return s, record


def construction_theta(record: dict) -> Fraction:
    """
    theta of the constructed structure from the handle data of its filling:
    one 0-, one 1- and one 2-handle, the 2-handle running handle_class times
    over the 1-handle.
    """
    w = record["handle_class"]
    chi = 1 - 1 + 1
    b2 = 1 - (1 if w != 0 else 0)  # rank of H_2(X; Q)
    if b2:
        raise DomainError("2-handle is null-homologous over the 1-handle; filling is not a rational ball")
    c1_sq, sigma = Fraction(0), 0
    return c1_sq - 2 * chi - 3 * sigma


def cable_slope_identity(m: int, h: int, k: int) -> bool:
    """
    Slope mn - 1 on the (m, n) cable of a knot is slope (mn - 1)/m^2 on the
    knot.  After k stabilizations the Legendrian cable is (m, -h - km) in
    the torus framing; the resulting companion slope must be the fiber
    surgery coefficient -(km^2 + mh + 1)/m^2 recorded by generate_fillable.
    """
    n = -h - k * m
    cable_slope = m * n - 1
    companion = Fraction(cable_slope, m * m)
    record = generate_fillable(Fraction(2, 5), m, h, k)[1]
    return (record["cable"] == [m, n]
            and record["cable_surgery"] == cable_slope
            and format_rational(companion) == record["fiber_surgery"])


def generator_preimage(s: SeifertData) -> list[tuple[Fraction, int, int, int]]:
    """
    All (x, m, h, k), with x normalized to 1/(1 + r), such that
    generate_fillable(x, m, h, k) presents s.
    """
    out = []
    r = list(s.r)
    for t in range(3):
        others = [r[i] for i in range(3) if i != t]
        if others[0] + others[1] != 1:
            continue
        v = s.e0 + 1 + r[t]
        if v <= 0:
            continue
        m = math.isqrt(v.numerator)
        if m * m != v.numerator or m < 2:
            continue
        rest = v.denominator - 1
        k, rem = divmod(rest, m * m)
        if rem % m:
            continue
        h = rem // m
        if not (0 < h < m) or math.gcd(m, h) != 1:
            continue
        for ri in sorted(set(others), reverse=True):
            x = 1 / (1 + ri)
            if x.numerator == 1:
                continue
            cand = (x, m, h, k)
            if generate_fillable(*cand)[0] == s and cand not in out:
                out.append(cand)
    return out


# spherical manifolds -------------------------------------------------------------------

SPHERICAL_GRAPHS = {
    "T3": (-2, [[-2, -2], [-2], [-3]]),
    "T27": (-6, [[-2, -2], [-3], [-2]]),
    "I49": (-3, [[-2], [-5], [-2, -2]]),
}


def spherical_graph(kind: str, p: int = None, q: int = None) -> StabilizedDiagram:
    """T3, T27, I49, or D with parameters (p, q) (also accepted as 'D:p/q')."""
    if kind.startswith("D:"):
        x = parse_rational(kind[2:])
        p, q = x.numerator, x.denominator
        kind = "D"
    if kind == "D":
        if p is None or q is None:
            raise DomainError("D needs p and q")
        return prism_graph(p, q)
    if kind not in SPHERICAL_GRAPHS:
        raise DomainError(f"unknown spherical kind {kind!r}; expected T3, T27, I49 or D:p/q")
    c, legs = SPHERICAL_GRAPHS[kind]
    return star_diagram(c, legs)


# verdicts ---------------------------------------------------------------------------

@dataclass
class Verdict:
    status: str
    tag: str
    reason: str
    construction: Optional[dict] = None

    def to_json(self) -> dict:
        d = {"status": self.status, "justification": f"{self.tag}: {self.reason}"}
        if self.construction is not None:
            d["construction"] = self.construction
        return d


@dataclass
class StructureReport:
    rotation: Optional[tuple]
    theta: Optional[Fraction]
    cls: Optional[str]
    verdict: Verdict

    def to_json(self) -> dict:
        d = {
            "rotation": None if self.rotation is None else list(self.rotation),
            "theta": None if self.theta is None else format_rational(self.theta),
            "class": self.cls,
        }
        d.update(self.verdict.to_json())
        return d


@dataclass
class Report:
    input: str
    count: Optional[int]
    structures: list = field(default_factory=list)
    summary: Optional[Verdict] = None
    notes: list = field(default_factory=list)

    def statuses(self) -> list[str]:
        if self.structures:
            return [s.verdict.status for s in self.structures]
        return [self.summary.status] if self.summary else []

    def to_json(self) -> dict:
        d = {
            "input": self.input,
            "count": None if self.count is None else str(self.count),
            "structures": [s.to_json() for s in self.structures],
        }
        if self.summary is not None:
            d["summary"] = self.summary.to_json()
        if self.notes:
            d["notes"] = list(self.notes)
        return d


def _representative(rot) -> bool:
    """Keep one of each +-pair: the one whose first nonzero entry is positive."""
    for x in rot:
        if x:
            return x > 0
    return True


def _structures(d: StabilizedDiagram, decide, cap: int, collapse: bool, with_theta=True, threads: int = 1):
    en = contact.enumerate_structures(d)
    if en.count > cap:
        raise DomainError(f"{en.count} structures exceed the enumeration cap {cap}")
    out = []
    if with_theta:
        pairs = contact.theta_all(d, cap, threads)
    else:
        pairs = [(r, None) for r in en]
    for rot, th in pairs:
        if collapse and not _representative(rot):
            continue
        cls = contact.classify_consistency(d, rot)
        v = decide(rot, cls, th)
        out.append(StructureReport(rot, th, cls, _theta_filter(v, th)))
    return en.count, out


def _theta_filter(v: Verdict, th) -> Verdict:
    if th is None or th == -2 or v.status == NOT_FILLABLE:
        return v
    if v.status == FILLABLE:
        raise AssertionError("a fillable structure must have theta = -2")
    return Verdict(NOT_FILLABLE, "theta", f"theta = {format_rational(th)} != -2")


def _is_canonical(d, rot) -> bool:
    can = contact.canonical_rotation(d)
    return tuple(rot) == can or tuple(rot) == tuple(-x for x in can)


def verdict_seifert(s: SeifertData, cap: int = contact.DEFAULT_CAP, collapse: bool = True,
                    templates=None, threads: int = 1) -> Report:
    rep = Report(str(s), None)
    if euler_sum(s) == 0:
        rep.summary = Verdict(NOT_FILLABLE, "not-qhs", "e0 + r1 + r2 + r3 = 0, so b1 > 0")
        return rep
    e0 = s.e0
    if e0 <= -2:
        d = seifert_to_plumbing(s)
        match = qhb_match(d, templates)
        if match:
            rep.notes.append(f"QHB family {match[0]} with parameters {match[1]}")
        if e0 < -4:
            def decide(rot, cls, th):
                return Verdict(NOT_FILLABLE, "e0-below-minus-4", f"e0 = {e0} < -4")
        elif e0 <= -3:
            def decide(rot, cls, th):
                if match and _is_canonical(d, rot):
                    return Verdict(FILLABLE, "qhb-canonical", "canonical structure on a QHB graph",
                                   {"type": "qhb-smoothing", "family": match[0], "parameters": match[1]})
                why = "not the canonical structure" if match else "graph is in no QHB family"
                return Verdict(NOT_FILLABLE, "qhb-canonical", why)
        elif match:
            def decide(rot, cls, th):
                if _is_canonical(d, rot):
                    return Verdict(FILLABLE, "qhb-e0-minus-2", "canonical structure on a QHB graph",
                                   {"type": "qhb-smoothing", "family": match[0], "parameters": match[1]})
                return Verdict(NOT_FILLABLE, "qhb-e0-minus-2", "only the canonical structure fills")
        else:
            ls = lspace_status(orientation_reverse(s))
            rep.notes.append(f"L-space status (via -Y): {ls}")
            if ls == LSPACE:
                def decide(rot, cls, th):
                    if cls == INCONSISTENT:
                        return Verdict(NOT_FILLABLE, "consistency", "inconsistent structure")
                    return Verdict(CANDIDATE, "open", f"{cls} structure on a non-QHB L-space; existence open")
            else:
                def decide(rot, cls, th):
                    return Verdict(UNKNOWN, "open", "tight structures on this non-L-space are not classified")
        rep.count, rep.structures = _structures(d, decide, cap, collapse, threads=threads)
        return rep
    if e0 == -1:
        r1, r2, _ = s.r
        if sum(s.r) > 1 > r1 + r2:
            rep.summary = Verdict(NOT_FILLABLE, "sum-window", "r1 + r2 + r3 > 1 > r1 + r2")
            return rep
        pre = generator_preimage(s)
        rep.notes.append(f"L-space status: {lspace_status(s)}")
        if pre:
            recs = [dict(generate_fillable(*c)[1], x=format_rational(c[0]), m=c[1], h=c[2], k=c[3]) for c in pre]
            rep.summary = Verdict(FILLABLE, "cable-construction",
                                  f"{len(pre)} cable construction(s) give fillable structures; others undecided",
                                  {"type": "cable", "recipes": recs})
        else:
            rep.summary = Verdict(UNKNOWN, "open", "no obstruction or construction applies for e0 = -1")
        return rep
    return _verdict_positive(s, cap, collapse)


def positive_legs(s: SeifertData) -> list[tuple[list[int], list[int]]]:
    """
    Legs (weights, capacities) of the contact surgery description for e0 >= 0:
    s1 = e0 + r1, s2 = r2, s3 = r3, -1/si = [b0, ..., bn] with head capacity
    |b0| - 1 and tail capacities |bj| - 2.
    """
    if s.e0 < 0:
        raise DomainError("this description needs e0 >= 0")
    out = []
    for i, x in enumerate(s.r):
        si = x + s.e0 if i == 0 else x
        b = cf_expand(1 / si, allow_head_one=True)
        out.append(([-v for v in b], [b[0] - 1] + [v - 2 for v in b[1:]]))
    return out


def _classify_legs(rots, caps) -> str:
    signs = []
    for rot, cap in zip(rots, caps):
        ok = {1, -1}
        for x, c in zip(rot, cap):
            if c:
                ok &= {e for e in (1, -1) if x == e * c}
        if not ok:
            return INCONSISTENT
        signs.append(ok)
    return CONSISTENT if set.intersection(*signs) else MOSTLY


def _verdict_positive(s: SeifertData, cap: int, collapse: bool) -> Report:
    legs = positive_legs(s)
    caps = [c for _, c in legs]
    count = 1
    for c in caps:
        for x in c:
            count *= x + 1
    rep = Report(str(s), count)
    if count > cap:
        raise DomainError(f"{count} structures exceed the enumeration cap {cap}")
    pre = generator_preimage(s)
    recs = [dict(generate_fillable(*c)[1], x=format_rational(c[0]), m=c[1], h=c[2], k=c[3]) for c in pre]
    flat = [x for c in caps for x in c]
    for rot in itertools.product(*[range(-c, c + 1, 2) for c in flat]):
        if collapse and not _representative(rot):
            continue
        rots, i = [], 0
        for c in caps:
            rots.append(rot[i:i + len(c)])
            i += len(c)
        cls = _classify_legs(rots, caps)
        if cls == INCONSISTENT:
            v = Verdict(NOT_FILLABLE, "consistency", "inconsistent structure")
        elif cls == CONSISTENT and recs:
            v = Verdict(FILLABLE, "cable-construction", "consistent structure built from a cable",
                        {"type": "cable", "recipes": recs})
        else:
            v = Verdict(CANDIDATE, "open", f"{cls} structure; existence of a filling open")
        rep.structures.append(StructureReport(rot, None, cls, v))
    rep.notes.append("theta is not computed for e0 >= 0 (no Stein plumbing model)")
    return rep


def verdict_lens(p: int, q: int, cap: int = contact.DEFAULT_CAP, collapse: bool = True, threads: int = 1) -> Report:
    d = lens_chain(p, q)
    om = o_membership(p, q)
    rep = Report(f"L({p},{q})", None)
    if p > 1:
        qs = mod_inverse(q, p)
        dual = o_membership(p, qs)
        rep.notes.append(f"p/q in O: {om is not None}; p/q* = {p}/{qs} in O: {dual is not None}")

    def decide(rot, cls, th):
        if om and _is_canonical(d, rot):
            m, h = om
            return Verdict(FILLABLE, "lens-O", f"p/q = {m}^2/({m}*{h}-1)",
                           {"type": "rational-blowdown", "m": m, "h": h})
        why = "not the canonical structure" if om else "p/q is not of the form m^2/(mh-1)"
        return Verdict(NOT_FILLABLE, "lens-O", why)

    rep.count, rep.structures = _structures(d, decide, cap, collapse, threads=threads)
    return rep


def verdict_spherical(kind: str, p=None, q=None, cap: int = contact.DEFAULT_CAP, collapse: bool = True,
                      threads: int = 1) -> Report:
    d = spherical_graph(kind, p, q)
    if kind.startswith("D:"):
        x = parse_rational(kind[2:])
        p, q, kind = x.numerator, x.denominator, "D"
    name = kind if kind != "D" else f"D({p},{q})"

    def decide(rot, cls, th):
        return Verdict(NOT_FILLABLE, "spherical", f"{name} is spherical but not a lens space")

    rep = Report(name, None)
    rep.count, rep.structures = _structures(d, decide, cap, collapse, threads=threads)
    return rep


def verdict_prism(p: int, q: int, **kw) -> Report:
    return verdict_spherical("D", p, q, **kw)


def verdict_torus(p: int, q: int, r, cap: int = contact.DEFAULT_CAP, collapse: bool = True, threads: int = 1) -> Report:
    r = parse_rational(r)
    d = torus_surgery_chain(p, q, r)
    s = torus_surgery_seifert(p, q, r)
    rep = Report(f"S^3_{{T({p},{q})}}({format_rational(r)}) = {s}", None)
    trefoil = (p, q) == (2, 3)
    integral = r.denominator == 1
    reciprocal = r.numerator == -1
    ruled_out = (trefoil and integral and r < -1) or (not trefoil and (integral or reciprocal))

    def decide(rot, cls, th):
        if ruled_out:
            return Verdict(NOT_FILLABLE, "torus-surgery", "parameter range with no rational ball filling")
        if cls == INCONSISTENT:
            return Verdict(NOT_FILLABLE, "consistency", "inconsistent structure")
        return Verdict(CANDIDATE, "open", "consistent structure with theta = -2; existence open")

    rep.count, rep.structures = _structures(d, decide, cap, collapse, threads=threads)
    return rep


def verdict_brieskorn(p: int, q: int, n: int, **kw) -> Report:
    """Sigma(p, q, pqn+1), i.e. -1/n surgery on T(p,q)."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    rep = verdict_torus(p, q, Fraction(-1, n), **kw)
    rep.input = f"Sigma({p},{q},{p * q * n + 1})"
    return rep
