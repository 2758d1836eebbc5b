"""Command-line front end: ``sfl <subcommand> ...`` (see ``sfl --help``)."""

from __future__ import annotations

import argparse
import json
import re
import sys

from . import contact, obstruct, plumbing
from .exactmath import DomainError, format_rational, parse_rational

EXIT_OK, EXIT_PARSE, EXIT_DOMAIN = 0, 2, 3


class Parser(argparse.ArgumentParser):
    def __init__(self, *a, **kw):
        super().__init__(*a, **kw)
        # let "-4/3" or "-2;1/2,1/3,1/5" through as values
        self._negative_number_matcher = re.compile(r"^-\d")


def _rational(text):
    try:
        return parse_rational(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _int(text):
    x = _rational(text)
    if x.denominator != 1:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    return int(x)


def _pq(text):
    x = _rational(text)
    if not (x > 1):
        raise argparse.ArgumentTypeError(f"expected p/q > 1, got {text!r}")
    return x.numerator, x.denominator


def _seifert(text):
    try:
        return plumbing.SeifertData.parse(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _add_selectors(p, brieskorn=False):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--lens", type=_pq, metavar="p/q", help="lens space L(p,q)")
    g.add_argument("--prism", type=_pq, metavar="p/q", help="prism manifold D(p,q)")
    g.add_argument("--seifert", type=_seifert, metavar="E0;R1,R2,R3", help="small Seifert fibered space")
    g.add_argument("--torus-surgery", nargs=3, metavar=("P", "Q", "R"), help="R-surgery on the (P,Q) torus knot")
    if brieskorn:
        g.add_argument("--brieskorn", nargs=3, type=_int, metavar=("P", "Q", "N"), help="Sigma(P,Q,PQN+1)")
        g.add_argument("--spherical", metavar="KIND", help="T3, T27, I49 or D:p/q")


def _add_common(p, default):
    # accepted before or after the subcommand; the subcommand copy only overrides when given
    d = (lambda x: x) if default else (lambda x: argparse.SUPPRESS)
    p.add_argument("--json", action="store_true", default=d(False), help="machine-readable output")
    p.add_argument("--threads", type=int, default=d(1), help="worker threads for enumeration sweeps")
    p.add_argument("--cap", type=int, default=d(contact.DEFAULT_CAP), help="refuse to enumerate more structures than this")
    p.add_argument("--qhb-templates", metavar="FILE", default=d(None),
                   help=f"QHB template file (default: ${obstruct.ENV_TEMPLATES} or bundled)")


def build_parser() -> argparse.ArgumentParser:
    ap = Parser(prog="sfl", description="Contact invariants and rational ball fillability of small Seifert fibered spaces.")
    _add_common(ap, True)
    common = Parser(add_help=False)
    _add_common(common, False)
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=Parser)

    p = sub.add_parser("theta", parents=[common], help="theta invariants")
    _add_selectors(p)
    m = p.add_mutually_exclusive_group()
    m.add_argument("--canonical", action="store_true", help="canonical structure only (default)")
    m.add_argument("--all", action="store_true", help="every structure")

    p = sub.add_parser("verdict", parents=[common], help="rational ball fillability per structure")
    _add_selectors(p, brieskorn=True)
    p.add_argument("--no-collapse", action="store_true", help="list xi and -xi separately")

    p = sub.add_parser("enumerate", parents=[common], help="list rotation vectors")
    _add_selectors(p)

    p = sub.add_parser("normalize", parents=[common], help="normalize Seifert invariants")
    p.add_argument("e", type=_int)
    p.add_argument("slots", nargs=3, type=_rational)

    p = sub.add_parser("qhb-match", parents=[common], help="match a star graph against the QHB families")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--seifert", type=_seifert, metavar="E0;R1,R2,R3")
    g.add_argument("--plumbing", metavar="FILE")

    p = sub.add_parser("generate", parents=[common], help="Seifert space with a rational ball filling from a cable")
    p.add_argument("x", type=_rational, metavar="q/p")
    p.add_argument("m", type=_int)
    p.add_argument("h", type=_int)
    p.add_argument("k", type=_int)

    p = sub.add_parser("spherical", parents=[common], help="plumbing graph and canonical theta of T3, T27, I49 or D:p/q")
    p.add_argument("kind")
    return ap


def _diagram(args):
    if args.lens:
        return f"L({args.lens[0]},{args.lens[1]})", plumbing.lens_chain(*args.lens)
    if args.prism:
        return f"D({args.prism[0]},{args.prism[1]})", plumbing.prism_graph(*args.prism)
    if args.seifert:
        s = args.seifert
        if s.e0 > -2:
            raise DomainError(f"{s}: e0 >= -1 has no Stein plumbing model; theta needs e0 <= -2")
        return str(s), plumbing.seifert_to_plumbing(s)
    p, q, r = _torus_args(args.torus_surgery)
    return f"S^3_{{T({p},{q})}}({format_rational(r)})", plumbing.torus_surgery_chain(p, q, r)


def _torus_args(vals):
    try:
        p, q, r = (parse_rational(v) for v in vals)
    except DomainError as exc:
        raise _ParseError(str(exc))
    if p.denominator != 1 or q.denominator != 1:
        raise _ParseError(f"torus knot parameters must be integers, got {vals[0]} {vals[1]}")
    return int(p), int(q), r


class _ParseError(Exception):
    pass


def _closed_form(args):
    if args.lens:
        return contact.theta_lens_closed(*args.lens)
    if args.prism:
        return contact.theta_prism_closed(*args.prism)[0]
    if args.torus_surgery:
        p, q, r = _torus_args(args.torus_surgery)
        if r.numerator == -1:
            return contact.theta_torus_closed(p, q, r.denominator, contact.RECIPROCAL)
        if r.denominator == 1:
            return contact.theta_torus_closed(p, q, -r.numerator, contact.INTEGER)
    return None


def cmd_theta(args, out):
    name, d = _diagram(args)
    data = plumbing.intersection_data(d)
    can = contact.canonical_rotation(d)
    res = {
        "input": name,
        "chi": str(data.chi),
        "sigma": str(data.sigma),
        "det": str(data.det),
        "count": str(contact.structure_count(d)),
        "canonical_rotation": list(can),
        "c1_squared_canonical": format_rational(contact.c1_squared(d, can)),
        "theta_canonical": format_rational(contact.theta(d, can, data)),
    }
    cf = _closed_form(args)
    if cf is not None:
        res["theta_closed_form"] = format_rational(cf)
    if args.all:
        res["structures"] = [
            {"rotation": list(r), "theta": format_rational(t), "class": contact.classify_consistency(d, r)}
            for r, t in contact.theta_all(d, args.cap, args.threads)
        ]
    if args.json:
        _dump(res, out)
        return
    for key in ("input", "chi", "sigma", "det", "count", "canonical_rotation", "c1_squared_canonical",
                "theta_canonical", "theta_closed_form"):
        if key in res:
            out.write(f"{key:22s} {_txt(res[key])}\n")
    for s in res.get("structures", []):
        out.write(f"  {_txt(s['rotation']):30s} {s['theta']:>14s}  {s['class']}\n")


def cmd_verdict(args, out):
    kw = dict(cap=args.cap, collapse=not args.no_collapse, threads=args.threads)
    if args.lens:
        rep = obstruct.verdict_lens(*args.lens, **kw)
    elif args.prism:
        rep = obstruct.verdict_prism(*args.prism, **kw)
    elif args.seifert:
        rep = obstruct.verdict_seifert(args.seifert, templates=_templates(args), **kw)
    elif args.spherical:
        rep = obstruct.verdict_spherical(args.spherical, **kw)
    elif args.brieskorn:
        rep = obstruct.verdict_brieskorn(*args.brieskorn, **kw)
    else:
        rep = obstruct.verdict_torus(*_torus_args(args.torus_surgery), **kw)
    res = rep.to_json()
    if args.json:
        _dump(res, out)
        return
    out.write(f"input  {res['input']}\n")
    if res["count"] is not None:
        out.write(f"count  {res['count']}\n")
    for n in res.get("notes", []):
        out.write(f"note   {n}\n")
    for s in res["structures"]:
        th = s["theta"] if s["theta"] is not None else "-"
        out.write(f"  {_txt(s['rotation']):30s} {th:>14s}  {s['class']:12s} {s['status']:12s} {s['justification']}\n")
    if "summary" in res:
        out.write(f"summary {res['summary']['status']}  {res['summary']['justification']}\n")


def cmd_enumerate(args, out):
    name, d = _diagram(args) if not args.seifert else (str(args.seifert), plumbing.seifert_to_plumbing(args.seifert))
    en = contact.enumerate_structures(d)
    rots = en.materialize(args.cap)
    if args.json:
        _dump({"input": name, "count": str(en.count), "caps": list(d.caps), "rotations": [list(r) for r in rots]}, out)
        return
    out.write(f"input {name}\ncount {en.count}\n")
    for r in rots:
        out.write(_txt(list(r)) + "\n")


def cmd_normalize(args, out):
    s = plumbing.normalize_seifert(args.e, args.slots)
    if args.json:
        _dump(_seifert_json(s), out)
    else:
        out.write(str(s) + "\n")


def _seifert_json(s):
    return {"e0": str(s.e0), "r": [format_rational(x) for x in s.r], "text": str(s),
            "euler_sum": format_rational(plumbing.euler_sum(s))}


def cmd_qhb(args, out):
    if args.seifert:
        name, d = str(args.seifert), plumbing.seifert_to_plumbing(args.seifert)
    else:
        try:
            with open(args.plumbing) as fh:
                text = fh.read()
        except OSError as exc:
            raise _ParseError(f"cannot read {args.plumbing}: {exc.strerror}")
        try:
            d = plumbing.parse_plumbing(text)
        except DomainError as exc:
            raise _ParseError(str(exc))
        name = args.plumbing
    m = obstruct.qhb_match(d, _templates(args))
    res = {"input": name, "match": None if m is None else {"family": m[0], "parameters": {k: str(v) for k, v in m[1].items()}}}
    if args.json:
        _dump(res, out)
    elif m is None:
        out.write(f"{name}: no QHB family\n")
    else:
        ps = ", ".join(f"{k}={v}" for k, v in m[1].items())
        out.write(f"{name}: family {m[0]} ({ps})\n")


def cmd_generate(args, out):
    s, rec = obstruct.generate_fillable(args.x, args.m, args.h, args.k)
    res = {"seifert": _seifert_json(s), "construction": rec,
           "theta": format_rational(obstruct.construction_theta(rec))}
    if args.json:
        _dump(res, out)
        return
    out.write(f"{s}\n")
    for k in sorted(rec):
        out.write(f"  {k:16s} {_txt(rec[k])}\n")
    out.write(f"  {'theta':16s} {res['theta']}\n")


def cmd_spherical(args, out):
    d = obstruct.spherical_graph(args.kind)
    can = contact.canonical_rotation(d)
    data = plumbing.intersection_data(d)
    res = {"kind": args.kind, "weights": list(d.weights), "edges": [list(e) for e in d.edges],
           "plumbing": plumbing.format_plumbing(d), "det": str(data.det),
           "canonical_rotation": list(can), "theta_canonical": format_rational(contact.theta(d, can, data))}
    if args.json:
        _dump(res, out)
        return
    out.write(res["plumbing"])
    out.write(f"det {res['det']}\ntheta_canonical {res['theta_canonical']}\n")


def _templates(args):
    return obstruct.load_templates(args.qhb_templates) if args.qhb_templates else None


def _txt(v):
    if isinstance(v, list):
        return "(" + ", ".join(str(x) for x in v) + ")"
    return str(v)


def _dump(obj, out):
    out.write(json.dumps(obj, sort_keys=True) + "\n")


COMMANDS = {
    "theta": cmd_theta,
    "verdict": cmd_verdict,
    "enumerate": cmd_enumerate,
    "normalize": cmd_normalize,
    "qhb-match": cmd_qhb,
    "generate": cmd_generate,
    "spherical": cmd_spherical,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        COMMANDS[args.cmd](args, out)
    except _ParseError as exc:
        sys.stderr.write(f"sfl: parse error: {exc}\n")
        return EXIT_PARSE
    except (DomainError, ZeroDivisionError) as exc:
        sys.stderr.write(f"sfl: domain error: {exc}\n")
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
