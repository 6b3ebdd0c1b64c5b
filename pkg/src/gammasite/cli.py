"""Command line: spectra, points, covers, sheaf checks, localizations and the
pushout counterexample, reported as JSON."""
from __future__ import annotations

import argparse
import json
import sys

from .cinf_site import StrategyError, build_cinf, is_cover, validate_multipartition
from .gamma_core import ENUMERABLE, TierError, validate_salgebra
from .sheaves import (
    generating_covers, localize, plus_construction, sheaf_check, sheafify, structure_presheaf,
)
from .structures import StructureError
from .topos_points import enumerate_points
from .tv_check import build_counterexample, default_catalog, verify_not_faithful, verify_pushout
from .workspace import AxiomError, Workspace, WorkspaceError, element_of, parse_workspace

SCHEMA = 1


def _label(cat, c):
    return cat.label(c)


def witness_json(cat, mp):
    A = cat.algebra
    return {
        "parent": list(mp.tree.parent),
        "objects": [_label(cat, c) for c in mp.assignment],
        "partitions": [{"vertex": v, "arity": w.arity, "xi": A.format(w.xi) if w.arity else "*",
                        "parts": [_label(cat, p) for p in w.parts]} for v, w in mp.witnesses],
    }


def _objects_json(cat):
    out = []
    for o in cat.objects:
        d = {"index": o.index, "rep": cat.algebra.format(o.rep)}
        if o.members is not None:
            d["members"] = sorted(cat.algebra.format(x) for x in o.members)
        out.append(d)
    return out


def _points_json(A):
    cat = build_cinf(A)
    out = []
    for p in enumerate_points(A):
        d = {"support": sorted(_label(cat, c) for c in p.support)}
        if p.prime is not None:
            d["prime"] = sorted(A.format(x) for x in p.prime)
        out.append(d)
    return out


def spectrum_report(name, A, max_family=2):
    cat = build_cinf(A)
    rep = {
        "schema": SCHEMA,
        "command": "spectrum",
        "algebra": name,
        "objects": _objects_json(cat),
        "hom": [[int(v) for v in row] for row in cat.hom],
        "terminal": _label(cat, cat.terminal),
        "zero": _label(cat, cat.zero),
    }
    covers = {}
    for c in range(len(cat)):
        entries = []
        fams = generating_covers(A, c, max_family) if A.tier == ENUMERABLE else \
            [f for f in ([()] if c == cat.zero else []) + [(x,) for x in cat.below(c)]
             if is_cover(A, f, c).is_cover]
        for fam in fams:
            res = is_cover(A, fam, c)
            entries.append({"family": [_label(cat, x) for x in fam],
                            "witness": witness_json(cat, res.witness) if res.witness else None})
        covers[_label(cat, c)] = entries
    rep["covers"] = covers
    if A.tier != ENUMERABLE:
        return rep
    rep["points"] = _points_json(A)
    O = structure_presheaf(A)
    rep["sections_level1"] = {_label(cat, c): len(O.section(c).level(1)) for c in range(len(cat))}
    _, eta = plus_construction(O)
    rep["eta_injective"] = {_label(cat, c): eta.injective_at(c, 1) for c in range(len(cat))}
    checks = []
    for c in range(len(cat)):
        for fam in generating_covers(A, c, max_family):
            r = sheaf_check(O, fam, c, 1)
            checks.append({"target": _label(cat, c), "family": [_label(cat, x) for x in fam],
                           "sections": r.sections, "matching": r.matching, "ok": r.ok})
    rep["sheaf_checks"] = checks
    return rep


def _objects_from(A, cat, tokens, line=None):
    return [cat.class_of(element_of(A, t, line)) for t in tokens if t.strip()]


def cover_report(name, A, target, family, strategy):
    cat = build_cinf(A)
    c = _objects_from(A, cat, [target])[0]
    fam = _objects_from(A, cat, family)
    res = is_cover(A, fam, c, strategy)
    out = {"schema": SCHEMA, "command": "cover", "algebra": name, "target": _label(cat, c),
           "family": [_label(cat, x) for x in fam], "verdict": res.verdict.value, "detail": res.detail}
    if res.witness is not None:
        if not validate_multipartition(cat, res.witness, fam, c):
            raise AssertionError("cover witness failed re-validation")
        out["witness"] = witness_json(cat, res.witness)
    return out


def sheaf_report(name, A, level, max_family=2):
    cat = build_cinf(A)
    O = structure_presheaf(A)
    P2, eta = sheafify(O)
    checks = []
    for c in range(len(cat)):
        for fam in generating_covers(A, c, max_family):
            r = sheaf_check(O, fam, c, level)
            checks.append({"target": _label(cat, c), "family": [_label(cat, x) for x in fam],
                           "sections": r.sections, "matching": r.matching,
                           "injective": r.injective, "surjective": r.surjective})
    return {"schema": SCHEMA, "command": "sheaf-check", "algebra": name, "level": level, "checks": checks,
            "is_sheaf": all(ch["injective"] and ch["surjective"] for ch in checks),
            "sheafified_sections": {_label(cat, c): len(P2.section(c).level(level)) for c in range(len(cat))},
            "eta_injective": {_label(cat, c): eta.injective_at(c, level) for c in range(len(cat))}}


def localize_report(name, A, tokens):
    M = [element_of(A, t) for t in tokens if t.strip()]
    L = localize(A, M)
    return {"schema": SCHEMA, "command": "localize", "algebra": name,
            "set": sorted(A.format(x) for x in L.mset),
            "idempotent": A.format(L.idempotent),
            "level_sizes": {str(k): len(L.level(k)) for k in range(1, A.truncation + 1)},
            "level1": [A.format(x) for x in L.level(1)]}


def tv_report(ws: Workspace | None, field_name):
    K = (ws or Workspace()).semiring(field_name)
    D = build_counterexample(K)
    pushout = verify_pushout(D, default_catalog(D))
    nf = [verify_not_faithful(D, u) for u in K.units() if u != K.one]
    Ap = D.A_prime
    return {"schema": SCHEMA, "command": "tv-check", "field": K.label,
            "sizes": {"A_prime": len(Ap.level(1)), "apex": len(D.apex.level(1))},
            "pushout": {"status": pushout.status, "ok": pushout.ok,
                        "entries": [{"test": e.label, "pairs": e.commuting_pairs, "unique": e.unique}
                                    for e in pushout.entries]},
            "not_faithful": [{"u": K.name(r.u), "differs_from_identity": r.differs_from_identity,
                              "moves": [[Ap.format(a), Ap.format(b)] for a, b in r.moves_level1],
                              "order": r.order,
                              "base_change_identity": {str(j): v for j, v in r.base_change_identity.items()}}
                             for r in nf]}


def validate_report(name, A):
    bad = validate_salgebra(A)
    return {"schema": SCHEMA, "command": "validate", "algebra": name, "ok": not bad,
            "violations": [{"axiom": v.axiom, "instance": v.instance} for v in bad]}


def hom_dot(name, A) -> str:
    cat = build_cinf(A)
    lines = [f'digraph "{name}" {{']
    for c in range(len(cat)):
        lines.append(f'  n{c} [label="{_label(cat, c)}"];')
    for a in range(len(cat)):
        for b in range(len(cat)):
            if a != b and cat.hom[a][b]:
                lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def run_command(args, ws: Workspace | None):
    cmd = args.command
    if cmd == "tv-check":
        return tv_report(ws, args.field)
    if ws is None:
        raise WorkspaceError("this command needs --workspace")
    A = ws.algebra(args.algebra)
    if cmd == "spectrum":
        return spectrum_report(args.algebra, A)
    if cmd == "points":
        return {"schema": SCHEMA, "command": "points", "algebra": args.algebra, "points": _points_json(A)}
    if cmd == "cover":
        return cover_report(args.algebra, A, args.target, args.family.split(","), args.strategy)
    if cmd == "sheaf-check":
        return sheaf_report(args.algebra, A, args.level)
    if cmd == "localize":
        return localize_report(args.algebra, A, args.set.split(","))
    if cmd == "validate":
        return validate_report(args.algebra, A)
    raise WorkspaceError(f"unknown command {cmd!r}")


def build_parser():
    p = argparse.ArgumentParser(prog="gammasite", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    for parser, default in ((p, None), (common, argparse.SUPPRESS)):
        parser.add_argument("-w", "--workspace", default=default, help="workspace file")
        parser.add_argument("--out", default=default, help="write JSON here instead of stdout")
        parser.add_argument("--dot", default=default, help="write the hom digraph of the algebra here")
    sub = p.add_subparsers(dest="command", required=True)
    add = lambda name: sub.add_parser(name, parents=[common])
    for cmd in ("spectrum", "points", "validate"):
        add(cmd).add_argument("algebra")
    c = add("cover")
    c.add_argument("algebra")
    c.add_argument("--target", required=True)
    c.add_argument("--family", default="")
    c.add_argument("--strategy", default="auto",
                   choices=["auto", "semiring", "monoid", "tropical", "generic"])
    s = add("sheaf-check")
    s.add_argument("algebra")
    s.add_argument("--level", type=int, default=1)
    loc = add("localize")
    loc.add_argument("algebra")
    loc.add_argument("--set", required=True)
    t = add("tv-check")
    t.add_argument("--field", required=True)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        ws = None
        if args.workspace:
            with open(args.workspace, encoding="utf-8") as fh:
                ws = parse_workspace(fh.read())
        report = run_command(args, ws)
        if args.dot:
            if not getattr(args, "algebra", None):
                raise WorkspaceError("--dot needs an algebra")
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(hom_dot(args.algebra, ws.algebra(args.algebra)))
    except (WorkspaceError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (AxiomError, StructureError, StrategyError, TierError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
