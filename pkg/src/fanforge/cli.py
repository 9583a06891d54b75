"""Command-line front end.

Commands: validate, resolve [--relative] [--trace FILE] [--emit-divisors DIR],
check-map, hilbert CONE_ID.  Data goes to stdout, diagnostics to stderr.

Exit codes: 0 success, 1 validation violations / invalid map, 2 parse error,
3 omega vertex order not total, 4 non-termination guard (a bug),
5 functoriality mismatch (a bug).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import exactlin as xl
from . import relative as rel
from . import resolve as rsv
from . import valuation as vln
from .complexes import ComplexMap, ConicalComplex, complex_from_doc, complex_to_doc
from .cones import NotSimplicial

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_PARSE = 2
EXIT_ORDER = 3
EXIT_GUARD = 4
EXIT_FUNCTORIALITY = 5


def _load_doc(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        print(f"parse error: {e}", file=sys.stderr)
        sys.exit(EXIT_PARSE)


def _load_complex(doc):
    try:
        return complex_from_doc(doc)
    except (KeyError, ValueError, TypeError) as e:
        print(f"parse error: malformed complex document ({e})", file=sys.stderr)
        sys.exit(EXIT_PARSE)


def cmd_validate(args) -> int:
    doc = _load_doc(args.path)
    k = _load_complex(doc)
    violations = k.validate()
    for v in violations:
        print(v, file=sys.stderr)
    if violations:
        return EXIT_VIOLATIONS
    print(f"ok: {len(k.cones)} cones, {len(k.maximal_ids())} maximal", file=sys.stderr)
    return EXIT_OK


def _relative_from_doc(doc, k):
    omega = frozenset(int(x) for x in doc.get("omega", []))
    order = {int(e["vertex_id"]): int(e["rank"]) for e in doc.get("omega_order", [])}
    rk = rel.RelativeComplex(k, omega, order)
    rk.check_order_total()
    return rk


def cmd_resolve(args) -> int:
    doc = _load_doc(args.path)
    k = _load_complex(doc)
    violations = k.validate()
    if violations:
        for v in violations:
            print(v, file=sys.stderr)
        return EXIT_VIOLATIONS
    try:
        if args.relative:
            if "omega" not in doc:
                print("--relative needs an omega block", file=sys.stderr)
                return EXIT_PARSE
            rk = _relative_from_doc(doc, k)
            out_rel, trace = rel.resolve_relative(rk)
            out = out_rel.complex
        else:
            out, trace = rsv.resolve(k)
    except rel.OrderNotTotal as e:
        print(f"omega order not total: {e}", file=sys.stderr)
        return EXIT_ORDER
    except rsv.ResolutionGuardError as e:
        print(f"non-termination guard tripped: {e}", file=sys.stderr)
        return EXIT_GUARD
    payload = complex_to_doc(out)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=1)
    else:
        json.dump(payload, sys.stdout, indent=1)
        print()
    if args.trace:
        with open(args.trace, "w") as fh:
            fh.write(trace.to_jsonl() + ("\n" if len(trace) else ""))
    if args.emit_divisors:
        _emit_divisors(k, trace, args.emit_divisors)
    print(f"resolved: {len(trace)} steps, {len(out.maximal_ids())} maximal cones",
          file=sys.stderr)
    return EXIT_OK


def _emit_divisors(k: ConicalComplex, trace, out_dir):
    """Per trace center: the PL function of the star subdivision and its
    exceptional coefficient map, computed on the complex before the step."""
    os.makedirs(out_dir, exist_ok=True)
    cur = k
    for si, step in enumerate(trace):
        centers = []
        for tc in step.centers:
            cid = rsv._find_cone(cur, tc)
            v = xl.solve_integral(cur.cones[cid].emb, tc.vector)
            centers.append(rsv.StarCenter(cid, v))
        for ci, center in enumerate(centers):
            f, sub, min_a = vln.pl_function(center, 1, cur)
            f_int, _, _ = vln.pl_function(center, min_a, cur)
            coeffs = vln.exceptional_coefficients(f_int)
            payload = {
                "step": si,
                "center": ci,
                "sufficiently_divisible_a": min_a,
                "pl_function": f_int.to_json_dict(),
                "exceptional_coefficients": {str(r): str(v) for r, v in
                                             sorted(coeffs.items())},
            }
            name = f"step{si:03d}_center{ci:02d}.json"
            with open(os.path.join(out_dir, name), "w") as fh:
                json.dump(payload, fh, indent=1)
        cur, _ = cur.star_subdivide(centers)


def cmd_check_map(args) -> int:
    doc = _load_doc(args.path)
    try:
        src = complex_from_doc(doc["source"])
        dst = complex_from_doc(doc["target"])
        assignment = {}
        mats = {}
        for entry in doc["map"]["assignments"]:
            cid = int(entry["src"])
            assignment[cid] = int(entry["dst"])
            mats[cid] = tuple(tuple(int(x) for x in row) for row in entry["matrix"])
    except (KeyError, ValueError, TypeError) as e:
        print(f"parse error: malformed map document ({e})", file=sys.stderr)
        return EXIT_PARSE
    f = ComplexMap(src, dst, assignment, mats)
    kind, problems = f.check()
    print(f"map kind: {kind}", file=sys.stderr)
    if kind == "invalid":
        for p in problems:
            print(f"  {p}", file=sys.stderr)
        return EXIT_VIOLATIONS
    if kind == "general":
        return EXIT_OK
    out_src, trace_src = rsv.resolve(src)
    out_dst, trace_dst = rsv.resolve(dst)
    pushed = rsv.push_trace(f, trace_src)
    replay_out, replay_trace = rsv.replay_trace(dst, pushed)
    if replay_trace.to_jsonl() != trace_dst.to_jsonl() or \
            rsv.complex_signature(replay_out) != rsv.complex_signature(out_dst):
        print("functoriality mismatch: pushed trace does not reproduce the "
              "image resolution (this is a bug)", file=sys.stderr)
        return EXIT_FUNCTORIALITY
    print(f"functoriality verified: {len(trace_src)} steps correspond",
          file=sys.stderr)
    return EXIT_OK


def cmd_hilbert(args) -> int:
    doc = _load_doc(args.path)
    k = _load_complex(doc)
    cid = args.cone_id
    if cid not in k.cones:
        print(f"unknown cone id {cid}", file=sys.stderr)
        return EXIT_PARSE
    cone = k.standalone(cid)
    cc = k.cones[cid]

    def amb(v):
        return list(xl.mat_vec(cc.amb, v)) if cc.amb is not None else list(v)

    report = {"id": cid, "dim": cc.dim,
              "vertices": [amb(v) for v in sorted(cone.own_vertices)]}
    try:
        report["det"] = cone.det_simplicial()
        report["small_vectors"] = [amb(v) for v in cone._own_small_vectors()]
        report["minimal_vectors"] = [amb(v) for v in cone._own_minimal_vectors()]
    except NotSimplicial:
        print(f"cone {cid} is not simplicial", file=sys.stderr)
        return EXIT_VIOLATIONS
    if cc.dim >= 1:
        report["minimal_internal_vectors"] = [amb(v) for v in cone._own_minimal_internal()]
        if cone.is_irreducible_singular or cc.dim == 1:
            b = xl.solve_integral(xl.identity(cc.dim), cone.canonical_barycenter())
            report["canonical_barycenter"] = amb(cone.canonical_barycenter())
    json.dump(report, sys.stdout, indent=1, default=str)
    print()
    return EXIT_OK


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="fanforge",
        description="Canonical desingularization of conical complexes")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the complex axioms")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("resolve", help="run the canonical desingularization")
    p.add_argument("path")
    p.add_argument("--relative", action="store_true",
                   help="relative resolution using the document's omega block")
    p.add_argument("--trace", metavar="FILE", help="write the subdivision trace (JSON lines)")
    p.add_argument("--emit-divisors", metavar="DIR",
                   help="write per-center PL functions and exceptional coefficients")
    p.add_argument("--out", metavar="FILE", help="write the resolved complex here instead of stdout")
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("check-map", help="classify a map and verify functoriality")
    p.add_argument("path")
    p.set_defaults(func=cmd_check_map)

    p = sub.add_parser("hilbert", help="vertex/small/minimal vector report for one cone")
    p.add_argument("path")
    p.add_argument("cone_id", type=int)
    p.set_defaults(func=cmd_hilbert)

    args = ap.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
