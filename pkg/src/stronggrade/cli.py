"""Batch command-line front end.

Exit status: 0 when every verdict is yes, 1 when some verdict is no, 2 on
input errors. Reports are JSON with sorted keys, so identical inputs give
byte-identical output (timings are added only with ``--timing``).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .criteria import strongly_z_graded, strongly_zmod_graded
from .errors import GraphConditionError, NotStronglyGradedError, StrongGradeError
from .formats import load
from .groupoid import (is_global, require_valid, strong_grading_check, transformation_groupoid,
                       validate_groupoid)
from .kgraph import strongly_zk_graded, validate_kgraph
from .lpa import LeavittPathAlgebra, degree, homogeneous_components, unit_factorization_certificate
from .rings import parse_ring
from .steinberg import (dade_probe, inclusion_exclusion_factorization, steinberg_algebra,
                        strongly_graded_algebra_check)
from .verdict import _plain

EXIT_YES, EXIT_NO, EXIT_INPUT = 0, 1, 2


def _witness(w):
    return _plain(asdict(w))


def _window(group, spec):
    if spec is None:
        return None
    spec = spec.strip()
    if spec.lstrip("-").isdigit():
        return group.window(int(spec))
    return [group.parse_element(part) for part in spec.split(";") if part.strip()]


def _algebra_input(path, ring_name):
    kind, obj, digest = load(path, ("algebra", "groupoid"))
    if kind == "groupoid":
        require_valid(obj)
        return steinberg_algebra(obj, parse_ring(ring_name or "QQ")), digest
    if ring_name:
        from .formats import algebra_from_doc
        obj = algebra_from_doc(json.loads(open(path, encoding="utf-8").read()), str(path),
                               parse_ring(ring_name))
    return obj, digest


# ---------------------------------------------------------------- handlers
# each returns (exit code, digest, result dict)

def graph_check(args, path):
    _, g, digest = load(path, "graph")
    grp = args.group.strip().lower()
    if grp == "z":
        v = strongly_z_graded(g)
    elif grp.startswith("zmod:"):
        try:
            n = int(grp[5:])
        except ValueError:
            raise StrongGradeError(f"bad modulus in --group {args.group!r}") from None
        v = strongly_zmod_graded(g, n)
    else:
        raise StrongGradeError(f"--group must be z or zmod:<n>, got {args.group!r}")
    return (EXIT_YES if v.answer else EXIT_NO), digest, {"group": args.group, "verdict": v.to_dict()}


def graph_certify(args, path):
    _, g, digest = load(path, "graph")
    try:
        cert = unit_factorization_certificate(g, args.vertex, args.degree)
    except GraphConditionError as exc:
        return EXIT_NO, digest, {"verdict": {"answer": "no", "witness": _witness(exc.witness),
                                             "message": str(exc)}}
    return EXIT_YES, digest, {"verdict": {"answer": "yes"}, "certificate": cert.to_dict()}


def gpd_check(args, path):
    _, G, digest = load(path, "groupoid")
    rep = validate_groupoid(G)
    if not rep.valid:
        raise StrongGradeError(f"{path}: invalid groupoid: {rep.violation} at {rep.triple!r}")
    res = strong_grading_check(G, _window(G.group, args.window))
    return (EXIT_YES if res.answer else EXIT_NO), digest, {"report": res.to_dict(G.group.format)}


def gpd_factor(args, path):
    _, G, digest = load(path, "groupoid")
    require_valid(G)
    U = [s.strip() for s in args.set.split(",") if s.strip()]
    gamma, delta = G.group.parse_element(args.gamma), G.group.parse_element(args.delta)
    try:
        expr = inclusion_exclusion_factorization(G, U, gamma, delta)
    except NotStronglyGradedError as exc:
        return EXIT_NO, digest, {"verdict": {"answer": "no", "witness": str(exc.witness),
                                             "message": str(exc)}}
    A = steinberg_algebra(G)
    ok = expr.evaluate(A) == {u: 1 for u in U}
    return EXIT_YES, digest, {"verdict": {"answer": "yes"}, "expression": expr.to_list(),
                              "reevaluates_to_indicator": ok}


def alg_check(args, path):
    A, digest = _algebra_input(path, args.ring)
    A.check()
    res = strongly_graded_algebra_check(A, _window(A.group, args.window))
    return (EXIT_YES if res.answer else EXIT_NO), digest, {"report": res.to_dict(A.group.format)}


def dade_probe_cmd(args, path):
    A, digest = _algebra_input(path, args.ring)
    probe = dade_probe(A, _window(A.group, args.window))
    ok = all(probe.values())
    return (EXIT_YES if ok else EXIT_NO), digest, {
        "answer": "yes" if ok else "no",
        "natural_map_bijective": {A.group.format(a): v for a, v in probe.items()}}


def paction_check(args, path):
    _, p, digest = load(path, "paction")
    G = transformation_groupoid(p)
    gp = strong_grading_check(G)
    al = strongly_graded_algebra_check(steinberg_algebra(G))
    glob = is_global(p)
    if not (glob == gp.answer == al.answer):
        raise StrongGradeError("internal disagreement between partial-action checks")
    fmt = p.group.format
    return (EXIT_YES if glob else EXIT_NO), digest, {
        "answer": "yes" if glob else "no", "is_global": glob,
        "groupoid": gp.to_dict(fmt), "algebra": al.to_dict(fmt)}


def kp_check(args, path):
    _, K, digest = load(path, "kgraph")
    v = strongly_zk_graded(K)
    return (EXIT_YES if v.answer else EXIT_NO), digest, {"verdict": v.to_dict(),
                                                         "experimental": K.experimental}


def kp_validate(args, path):
    _, K, digest = load(path, "kgraph")
    rep = validate_kgraph(K)
    return (EXIT_YES if rep.valid else EXIT_NO), digest, {"report": rep.to_dict()}


def eval_cmd(args, path):
    _, g, digest = load(path, "graph")
    alg = LeavittPathAlgebra(g, parse_ring(args.ring or "ZZ"))
    val = alg.parse(args.expression)
    return EXIT_YES, digest, {"expression": args.expression, "value": str(val),
                              "degree": degree(val),
                              "components": {str(d): str(c) for d, c in homogeneous_components(val).items()}}


# ---------------------------------------------------------------- plumbing

def _run_one(job):
    handler, args, path = job
    t0 = time.perf_counter()
    try:
        code, digest, result = handler(args, path)
    except (StrongGradeError, OSError, UnicodeDecodeError) as exc:
        return EXIT_INPUT, {"input": str(path), "error": str(exc)}
    rep = {"input": str(path), "sha256": digest, "result": result}
    if args.timing:
        rep["elapsed_seconds"] = round(time.perf_counter() - t0, 6)
    return code, rep


def _add_common(p, multi=True):
    if multi:
        p.add_argument("files", nargs="+", metavar="FILE")
        p.add_argument("--jobs", type=int, default=1, help="parallel workers across input files")
    p.add_argument("--output", help="write the report here instead of standard output")
    p.add_argument("--timing", action="store_true", help="include elapsed time (breaks byte-stability)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stronggrade",
                                 description="Decide strong gradings and emit checkable reports.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="area", required=True)

    graph = sub.add_parser("graph", help="Leavitt path algebra of a directed graph")
    gs = graph.add_subparsers(dest="action", required=True)
    p = gs.add_parser("check")
    p.add_argument("--group", required=True, help="z or zmod:<n>")
    _add_common(p)
    p.set_defaults(handler=graph_check)
    p = gs.add_parser("certify")
    p.add_argument("--vertex", required=True)
    p.add_argument("--degree", required=True, type=int)
    p.add_argument("file")
    _add_common(p, multi=False)
    p.set_defaults(handler=graph_certify)

    gpd = sub.add_parser("gpd", help="finite graded groupoids")
    gps = gpd.add_subparsers(dest="action", required=True)
    p = gps.add_parser("check")
    p.add_argument("--window", help="radius, or ';'-separated degrees")
    _add_common(p)
    p.set_defaults(handler=gpd_check)
    p = gps.add_parser("factor")
    p.add_argument("--gamma", required=True)
    p.add_argument("--delta", required=True)
    p.add_argument("--set", required=True, help="comma-separated morphism ids of U")
    p.add_argument("file")
    _add_common(p, multi=False)
    p.set_defaults(handler=gpd_factor)

    for area, action, handler in (("alg", "check", alg_check), ("dade", "probe", dade_probe_cmd)):
        top = sub.add_parser(area)
        p = top.add_subparsers(dest="action", required=True).add_parser(action)
        p.add_argument("--ring", help="QQ or GF(p); overrides the document")
        p.add_argument("--window", help="radius, or ';'-separated degrees")
        _add_common(p)
        p.set_defaults(handler=handler)

    top = sub.add_parser("paction", help="partial actions of finite groups")
    p = top.add_subparsers(dest="action", required=True).add_parser("check")
    _add_common(p)
    p.set_defaults(handler=paction_check)

    kp = sub.add_parser("kp", help="k-graphs and Kumjian-Pask algebras")
    ks = kp.add_subparsers(dest="action", required=True)
    for action, handler in (("check", kp_check), ("validate", kp_validate)):
        p = ks.add_parser(action)
        _add_common(p)
        p.set_defaults(handler=handler)

    p = sub.add_parser("eval", help="evaluate an expression in L_R(E)")
    p.add_argument("file")
    p.add_argument("expression")
    p.add_argument("--ring", help="ZZ (default), QQ or GF(p)")
    _add_common(p, multi=False)
    p.set_defaults(handler=eval_cmd, action=None)
    return ap


def run(argv=None) -> tuple:
    """Returns (exit code, report text, parsed arguments)."""
    args = build_parser().parse_args(argv)
    files = getattr(args, "files", None) or [args.file]
    jobs = [(args.handler, args, f) for f in files]
    if getattr(args, "jobs", 1) > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            outcomes = list(pool.map(_run_one, jobs))
    else:
        outcomes = [_run_one(j) for j in jobs]
    codes = [c for c, _ in outcomes]
    code = EXIT_INPUT if EXIT_INPUT in codes else (EXIT_NO if EXIT_NO in codes else EXIT_YES)
    command = " ".join(x for x in (args.area, args.action) if x)
    doc = {"schema": "stronggrade/report@1", "command": command, "version": __version__,
           "reports": [r for _, r in outcomes]}
    return code, json.dumps(doc, indent=2, sort_keys=True) + "\n", args


def main(argv=None) -> int:
    code, text, args = run(argv)
    if code == EXIT_INPUT:
        for line in json.loads(text)["reports"]:
            if "error" in line:
                print(f"error: {line['error']}", file=sys.stderr)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
