"""Command-line driver: experiments over built-in or user presentations.

Exit codes: 0 success (including delivered negative verdicts such as
"non-normal"), 1 a checked claim failed or a resource cap was hit,
2 usage or input errors.  Reports are JSON with deterministic bytes for a
fixed seed; wall-clock timings go to stderr and an optional sidecar file so
they never break byte-level reproducibility.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__, autlab, constructions, order, pcgroup, structure, suites
from .cayley import (BallBudgetError, GenSet, GeodesicCapError, count_geodesics,
                     enumerate_geodesics, export_distances, export_graph,
                     export_vertex_map, generate_ball, load_vertex_map,
                     standard_genset)
from .pcgroup import CollectionError, PresentationError
from .reporting import json_bytes, json_pretty, jsonable

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_USAGE = 2


def _load_group(spec):
    if spec.startswith("@") or os.path.exists(spec):
        path = spec[1:] if spec.startswith("@") else spec
        with open(path, encoding="utf-8") as fh:
            return pcgroup.parse_presentation(fh.read())
    return pcgroup.from_id(spec)


def _parse_vectors(text, n):
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        v = tuple(int(x) for x in chunk.split(","))
        if len(v) != n:
            raise ValueError(f"vector {chunk!r} has length {len(v)}, expected {n}")
        out.append(v)
    return out


def _resolve_genset(p, selector):
    if selector in (None, "std"):
        return standard_genset(p)
    if selector == "fsf":
        F = structure.torsion_subgroup(p)
        base = GenSet(p, [s for s in standard_genset(p).elements
                          if any(structure.project_to_quotient(p, s))])
        return constructions.fsf_generating_set(p, F, base).genset
    if selector == "lifted":
        quotient = structure.quotient_by_torsion(p)
        qgens = {structure.project_to_quotient(p, s)
                 for s in standard_genset(p).elements
                 if any(structure.project_to_quotient(p, s))}
        return constructions.lift_generating_set(p, sorted(qgens))
    return GenSet(p, _parse_vectors(selector, p.n))


def _envelope(p, command, params, payload):
    return {
        "tool": {"name": "nilcay", "version": __version__},
        "command": command,
        "presentation": {"name": p.name, "sha256": p.sha256()},
        "parameters": jsonable(params),
        "result": jsonable(payload),
    }


def _emit(obj, args):
    text = json_pretty(obj) if getattr(args, "pretty", False) else \
        json_bytes(obj).decode("utf-8")
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)


def _element(p, text):
    return p.element_from_str(text)


# -- subcommand handlers -----------------------------------------------------


def cmd_ball(args):
    p = _load_group(args.group)
    S = _resolve_genset(p, args.genset)
    ball = generate_ball(p, S, args.radius, max_vertices=args.budget)
    if args.out:
        export_graph(ball, args.out)
    if args.distances:
        export_distances(ball, args.distances)
    payload = {"vertices": len(ball), "radius": args.radius,
               "genset_size": len(S.elements)}
    if not args.out and not args.distances:
        _emit(_envelope(p, "ball", vars_of(args), payload), args)
    else:
        print(json.dumps(jsonable(payload)), file=sys.stderr)
    return EXIT_OK


def cmd_distance(args):
    p = _load_group(args.group)
    S = _resolve_genset(p, args.genset)
    ball = generate_ball(p, S, args.radius, max_vertices=args.budget)
    u = _element(p, getattr(args, "from"))
    v = _element(p, args.to)
    d = ball.distance(u, v)
    if args.format == "tsv":
        sys.stdout.write(f"{p.element_to_str(u)}\t{p.element_to_str(v)}\t"
                         f"{'unknown' if d is None else d}\n")
    else:
        _emit(_envelope(p, "distance", vars_of(args),
                        {"dist": d, "certified": d is not None}), args)
    return EXIT_OK


def cmd_geodesics(args):
    p = _load_group(args.group)
    S = _resolve_genset(p, args.genset)
    ball = generate_ball(p, S, args.radius, max_vertices=args.budget)
    u = _element(p, getattr(args, "from"))
    v = _element(p, args.to)
    count = count_geodesics(ball, u, v)
    payload = {"count": count}
    if not args.count_only:
        paths = enumerate_geodesics(ball, u, v, cap=args.cap)
        payload["paths"] = [[p.element_to_str(s) for s in path.labels]
                            for path in paths]
    if args.format == "tsv":
        sys.stdout.write(f"count\t{count}\n")
        for path in payload.get("paths", []):
            sys.stdout.write("\t".join(path) + "\n")
    else:
        _emit(_envelope(p, "geodesics", vars_of(args), payload), args)
    return EXIT_OK


def cmd_distortion(args):
    p = _load_group(args.group)
    S = _resolve_genset(p, args.genset)
    g = _element(p, args.element)
    verdict, profile, report = order.classify_distorted(
        p, S, g, kmax=args.kmax, max_vertices=args.budget)
    if args.table:
        with open(args.table, "w", encoding="utf-8") as fh:
            fh.write("k\tdist\tratio\n")
            for k, d, r in zip(profile.ks, profile.dists, profile.ratios):
                fh.write(f"{k}\t{'?' if d is None else d}\t"
                         f"{'?' if r is None else r}\n")
    _emit(_envelope(p, "distortion", vars_of(args), report.to_dict()), args)
    return EXIT_OK if verdict != "inconclusive" else EXIT_VERDICT


def cmd_biorder(args):
    p = _load_group(args.group)
    if args.compare:
        o = order.BiOrder(p)
        x, y = (_element(p, t) for t in args.compare)
        c = o.compare(x, y)
        name = {order.LESS: "less", order.EQUAL: "equal",
                order.GREATER: "greater"}[c]
        _emit(_envelope(p, "biorder.compare", vars_of(args), {"verdict": name}),
              args)
        return EXIT_OK
    if args.max:
        o = order.BiOrder(p)
        S = _resolve_genset(p, args.genset)
        s = order.max_generator(o, S)
        _emit(_envelope(p, "biorder.max", vars_of(args),
                        {"max_generator": s}), args)
        return EXIT_OK
    if args.convexity:
        S = _resolve_genset(p, args.genset)
        s = _element(p, args.convexity)
        ball = generate_ball(p, S, max(args.kmax, 1), max_vertices=args.budget)
        rep = order.convexity_check(ball, s, args.kmax)
        _emit(_envelope(p, "biorder.convexity", vars_of(args), rep.to_dict()),
              args)
        return EXIT_OK if rep.ok else EXIT_VERDICT
    raise SystemExit2("biorder needs one of --compare, --max, --convexity")


def cmd_structure(args):
    p = _load_group(args.group)
    if args.torsion:
        N = structure.torsion_subgroup(p)
        _emit(_envelope(p, "structure.torsion", vars_of(args),
                        {"elements": list(N.elements), "order": len(N.elements)}),
              args)
        return EXIT_OK
    if args.zdagger:
        S = _resolve_genset(p, args.genset)
        ball = generate_ball(p, S, args.radius, max_vertices=args.budget)
        zd = structure.z_dagger(p, ball, kmax=args.kmax)
        _emit(_envelope(p, "structure.zdagger", vars_of(args),
                        {"elements": list(zd)}), args)
        return EXIT_OK
    if args.conjugator:
        S = _resolve_genset(p, args.genset)
        ball = generate_ball(p, S, args.radius, max_vertices=args.budget)
        a, b = (_element(p, t) for t in args.conjugator)
        res = structure.find_conjugator(ball, a, b, kmax=args.kmax)
        _emit(_envelope(p, "structure.conjugator", vars_of(args),
                        res.report.to_dict()), args)
        return EXIT_OK
    if args.rank:
        N = structure.torsion_subgroup(p)
        rep = structure.rank_report(p, N)
        _emit(_envelope(p, "structure.rank", vars_of(args), rep.to_dict()), args)
        return EXIT_OK if rep.ok else EXIT_VERDICT
    if args.isolator:
        S = _resolve_genset(p, args.genset)
        ball = generate_ball(p, S, args.radius, max_vertices=args.budget)
        witness = structure.commutator_subgroup_witness(p, ball)
        res = structure.isolator_oracle(ball, witness, args.kmax)
        _emit(_envelope(p, "structure.isolator", vars_of(args),
                        res.report().to_dict()), args)
        return EXIT_OK
    raise SystemExit2("structure needs one of --torsion, --zdagger, "
                      "--conjugator, --rank, --isolator")


def cmd_construct(args):
    p = _load_group(args.group) if args.group else None
    if args.klein_grid is not None:
        bm = constructions.klein_grid_map(args.klein_grid)
        ok = bool(bm.check())
        if args.out:
            export_vertex_map(bm.mapping, args.out)
        _emit(_envelope(bm.source.presentation, "construct.klein_grid",
                        vars_of(args), {"adjacency_ok": ok}), args)
        return EXIT_OK if ok else EXIT_VERDICT
    if args.klein_flip is not None:
        bm = constructions.klein_flip_map(args.klein_flip)
        ok = bool(bm.check())
        if args.out:
            export_vertex_map(bm.mapping, args.out)
        _emit(_envelope(bm.source.presentation, "construct.klein_flip",
                        vars_of(args), {"adjacency_ok": ok, "notes": bm.notes}),
              args)
        return EXIT_OK if ok else EXIT_VERDICT
    if p is None:
        raise SystemExit2("construct needs --group for this operation")
    if args.fsf:
        F = structure.torsion_subgroup(p)
        S = GenSet(p, [s for s in standard_genset(p).elements
                       if any(structure.project_to_quotient(p, s))])
        res = constructions.fsf_generating_set(p, F, S)
        _emit(_envelope(p, "construct.fsf", vars_of(args),
                        {"genset": list(res.genset.elements),
                         "removed_identity": res.removed_identity}), args)
        return EXIT_OK
    if args.lift:
        quotient = structure.quotient_by_torsion(p)
        qgens = sorted({structure.project_to_quotient(p, s)
                        for s in standard_genset(p).elements
                        if any(structure.project_to_quotient(p, s))})
        lifted = constructions.lift_generating_set(p, qgens)
        _emit(_envelope(p, "construct.lift", vars_of(args),
                        {"genset": list(lifted.elements),
                         "quotient": quotient.name}), args)
        return EXIT_OK
    if args.wreath_fibers is not None:
        S = _resolve_genset(p, args.genset)
        ball = generate_ball(p, S, args.radius, max_vertices=args.budget)
        g = constructions.graph_from_ball(ball)
        w = constructions.wreath_product(
            g, constructions.edgeless_graph(args.wreath_fibers))
        _emit(_envelope(p, "construct.wreath", vars_of(args),
                        {"vertices": len(w.vertices), "edges": w.edge_count()}),
              args)
        return EXIT_OK
    raise SystemExit2("construct needs one of --klein-grid, --klein-flip, "
                      "--fsf, --lift, --wreath-fibers")


def cmd_autos(args):
    p = _load_group(args.group)
    S = _resolve_genset(p, args.genset)
    ball = generate_ball(p, S, args.radius, max_vertices=args.budget)
    try:
        if args.orbit:
            g = _element(p, args.orbit)
            orbit = autlab.aut_e_orbit(ball, g, args.stability, cap=args.cap)
            _emit(_envelope(p, "autos.orbit", vars_of(args),
                            {"element": g, "orbit": list(orbit)}), args)
            return EXIT_OK
        auts = autlab.enumerate_local_auts(ball, args.stability, cap=args.cap)
        payload = {"count": len(auts)}
        if args.out:
            lines = []
            for i, aut in enumerate(auts):
                for u, v in sorted(aut.mapping.items()):
                    lines.append(f"{i}\t{p.element_to_str(u)}\t{p.element_to_str(v)}")
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write("\n".join(lines) + "\n")
        _emit(_envelope(p, "autos.enumerate", vars_of(args), payload), args)
        return EXIT_OK
    except autlab.EnumerationCapError as exc:
        _emit(_envelope(p, "autos", vars_of(args),
                        {"error": str(exc), "found": exc.found}), args)
        return EXIT_VERDICT


def cmd_normality(args):
    p = _load_group(args.group)
    S = _resolve_genset(p, args.genset)
    rep = autlab.normality_verdict(p, S, args.radius, args.stability,
                                   cap=args.cap)
    _emit(_envelope(p, "normality", vars_of(args), rep.to_dict()), args)
    return EXIT_OK if rep.verdict != "inconclusive" else EXIT_VERDICT


def cmd_induced(args):
    p = _load_group(args.group)
    q = _load_group(args.target) if args.target else p
    S = _resolve_genset(p, args.genset)
    T = _resolve_genset(q, args.target_genset or args.genset)
    ball_a = generate_ball(p, S, args.radius, max_vertices=args.budget)
    ball_b = generate_ball(q, T, args.radius, max_vertices=args.budget)
    mapping = load_vertex_map(args.map)
    n1 = structure.torsion_subgroup(p)
    n2 = structure.torsion_subgroup(q)
    rep = autlab.induced_quotient_check(ball_a, ball_b, mapping, n1, n2)
    _emit(_envelope(p, "induced", vars_of(args), rep.to_dict()), args)
    return EXIT_OK if rep.ok else EXIT_VERDICT


def cmd_verify(args):
    names = list(suites.SUITES) if args.suite == "all" else \
        [s.strip() for s in args.suite.split(",")]
    envelope, timing = suites.run_verify(names, seed=args.seed,
                                         threads=args.threads,
                                         group_filter=args.group)
    for name in names:
        ok = envelope["suites"][name]["ok"]
        ms = timing.per_suite_ms[name]
        print(f"{'PASS' if ok else 'FAIL'} {name} ({ms:.0f} ms)",
              file=sys.stderr)
    _emit(envelope, args)
    if args.timings:
        with open(args.timings, "w", encoding="utf-8") as fh:
            fh.write(json_pretty({"per_suite_ms": timing.per_suite_ms}))
    return EXIT_OK if timing.all_passed else EXIT_VERDICT


# -- parser ------------------------------------------------------------------


class SystemExit2(Exception):
    """Usage error carrying exit code 2."""


def vars_of(args):
    skip = {"func", "out", "pretty", "timings", "table", "distances", "map"}
    return {k: v for k, v in vars(args).items()
            if k not in skip and v is not None}


def _add_common(sp, genset=True, radius=True, budget=True):
    sp.add_argument("--group", required=False,
                    help="built-in id (z2, zn:3, heisenberg, klein_bottle, "
                         "zxz2, heisenberg_z3, ...) or a presentation file path")
    if genset:
        sp.add_argument("--genset", default="std",
                        help="std, fsf, lifted, or explicit vectors 'a,b;c,d'")
    if radius:
        sp.add_argument("--radius", type=int, default=4)
    if budget:
        sp.add_argument("--budget", type=int, default=None,
                        help="vertex budget override (env NILCAY_BUDGET_VERTICES)")
    sp.add_argument("--out", help="write the JSON report or export here")
    sp.add_argument("--pretty", action="store_true", help="indented JSON")
    sp.add_argument("--format", choices=("json", "tsv"), default="json")


def build_parser():
    ap = argparse.ArgumentParser(prog="nilcay", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("ball", help="generate and export a Cayley ball")
    _add_common(sp)
    sp.add_argument("--distances", help="also export vertex distances (TSV)")
    sp.set_defaults(func=cmd_ball)

    sp = sub.add_parser("distance", help="certified word distance")
    _add_common(sp)
    sp.add_argument("--from", required=True)
    sp.add_argument("--to", required=True)
    sp.set_defaults(func=cmd_distance)

    sp = sub.add_parser("geodesics", help="enumerate or count geodesics")
    _add_common(sp)
    sp.add_argument("--from", required=True)
    sp.add_argument("--to", required=True)
    sp.add_argument("--count-only", action="store_true")
    sp.add_argument("--cap", type=int, default=10**6)
    sp.set_defaults(func=cmd_geodesics)

    sp = sub.add_parser("distortion", help="distortion profile and verdict")
    _add_common(sp, radius=False)
    sp.add_argument("--element", required=True)
    sp.add_argument("--kmax", type=int, default=order.DEFAULT_CLASSIFY_KMAX)
    sp.add_argument("--table", help="write the k/dist/ratio TSV here")
    sp.set_defaults(func=cmd_distortion)

    sp = sub.add_parser("biorder", help="bi-order comparisons and convexity")
    _add_common(sp, radius=False)
    sp.add_argument("--compare", nargs=2, metavar=("X", "Y"))
    sp.add_argument("--max", action="store_true")
    sp.add_argument("--convexity", metavar="GEN")
    sp.add_argument("--kmax", type=int, default=6)
    sp.set_defaults(func=cmd_biorder)

    sp = sub.add_parser("structure", help="torsion, isolators, conjugators, ranks")
    _add_common(sp)
    sp.add_argument("--torsion", action="store_true")
    sp.add_argument("--zdagger", action="store_true")
    sp.add_argument("--isolator", action="store_true")
    sp.add_argument("--conjugator", nargs=2, metavar=("A", "B"))
    sp.add_argument("--rank", action="store_true")
    sp.add_argument("--kmax", type=int, default=8)
    sp.set_defaults(func=cmd_structure)

    sp = sub.add_parser("construct", help="wreath/FSF/lift/Klein constructions")
    _add_common(sp)
    sp.add_argument("--klein-grid", type=int, metavar="R")
    sp.add_argument("--klein-flip", type=int, metavar="R")
    sp.add_argument("--fsf", action="store_true")
    sp.add_argument("--lift", action="store_true")
    sp.add_argument("--wreath-fibers", type=int, metavar="N")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("autos", help="stable local automorphisms and orbits")
    _add_common(sp)
    sp.add_argument("--stability", type=int, default=2)
    sp.add_argument("--orbit", metavar="ELEMENT")
    sp.add_argument("--cap", type=int, default=10**5)
    sp.set_defaults(func=cmd_autos)

    sp = sub.add_parser("normality", help="ball-level normality verdict")
    _add_common(sp)
    sp.add_argument("--stability", type=int, default=2)
    sp.add_argument("--cap", type=int, default=10**5)
    sp.set_defaults(func=cmd_normality)

    sp = sub.add_parser("induced", help="torsion-quotient induced-map check")
    _add_common(sp)
    sp.add_argument("--target", help="target group id (defaults to --group)")
    sp.add_argument("--target-genset")
    sp.add_argument("--map", required=True, help="vertex map TSV (src<TAB>dst)")
    sp.set_defaults(func=cmd_induced)

    sp = sub.add_parser("verify", help="run acceptance suites")
    sp.add_argument("--suite", default="all",
                    help="all or a comma list of: " + ", ".join(suites.SUITES))
    sp.add_argument("--group", help="restrict family-parametric suites")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--out", help="write the JSON report here")
    sp.add_argument("--pretty", action="store_true")
    sp.add_argument("--timings", help="write wall-clock sidecar JSON here")
    sp.set_defaults(func=cmd_verify)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    t0 = time.perf_counter()
    try:
        code = args.func(args)
    except SystemExit2 as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_USAGE
    except (PresentationError, ValueError, FileNotFoundError,
            structure.SubgroupError, order.BiOrderUnavailable) as exc:
        print(json.dumps({"error": str(exc), "kind": type(exc).__name__}),
              file=sys.stderr)
        return EXIT_USAGE
    except (CollectionError, BallBudgetError, GeodesicCapError) as exc:
        diag = {"error": str(exc), "kind": type(exc).__name__}
        if isinstance(exc, GeodesicCapError):
            diag["partial_count"] = exc.partial_count
        print(json.dumps(diag), file=sys.stderr)
        return EXIT_VERDICT
    finally:
        elapsed = (time.perf_counter() - t0) * 1000.0
        print(f"wall_clock_ms={elapsed:.1f}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
