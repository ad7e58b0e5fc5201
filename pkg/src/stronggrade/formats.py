"""JSON document formats for every input kind, with location-bearing errors.

Each document carries a ``schema`` field such as ``stronggrade/graph@1``.
``load`` returns the parsed object and ``dump`` produces a document that
``load`` reads back to an equal value.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path as FsPath

from .errors import StrongGradeError, ValidationError
from .graph import Edge, Graph, Ray
from .groupoid import FiniteGradedGroupoid, PartialAction
from .groups import parse_group
from .kgraph import KEdge, KGraph
from .rings import parse_ring
from .steinberg import GradedAlgebra

KINDS = ("graph", "groupoid", "paction", "kgraph", "algebra")
VERSION = 1


class SchemaError(ValidationError):
    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


def _need(doc, key, where, kind=None):
    if not isinstance(doc, dict) or key not in doc:
        raise SchemaError(where, f"missing field {key!r}")
    val = doc[key]
    if kind is not None and not isinstance(val, kind):
        names = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise SchemaError(f"{where}.{key}", f"expected {names}")
    return val


def _strs(vals, where):
    for i, v in enumerate(vals):
        if not isinstance(v, str):
            raise SchemaError(f"{where}[{i}]", "expected a string")
    return vals


def schema_name(kind: str) -> str:
    return f"stronggrade/{kind}@{VERSION}"


def kind_of(doc, where="$") -> str:
    if not isinstance(doc, dict):
        raise SchemaError(where, "document must be an object")
    name = _need(doc, "schema", where, str)
    for k in KINDS:
        if name == schema_name(k):
            return k
    raise SchemaError(f"{where}.schema", f"unknown schema {name!r}")


# ---------------------------------------------------------------- graph

def graph_from_doc(doc, where="$") -> Graph:
    verts = _strs(_need(doc, "vertices", where, list), f"{where}.vertices")
    edges = []
    for i, e in enumerate(doc.get("edges", [])):
        w = f"{where}.edges[{i}]"
        edges.append(Edge(_need(e, "id", w, str), _need(e, "src", w, str), _need(e, "rng", w, str)))
    emitters = _strs(doc.get("infinite_emitters", []), f"{where}.infinite_emitters")
    rays = []
    for i, r in enumerate(doc.get("rays", [])):
        w = f"{where}.rays[{i}]"
        rays.append(Ray(_need(r, "id", w, str), frozenset(_strs(_need(r, "entries", w, list), w))))
    try:
        return Graph(tuple(verts), tuple(edges), frozenset(emitters), tuple(rays))
    except ValidationError as exc:
        raise SchemaError(where, str(exc)) from None


def graph_to_doc(g: Graph) -> dict:
    return {"schema": schema_name("graph"), "vertices": list(g.vertices),
            "edges": [{"id": e.id, "src": e.src, "rng": e.rng} for e in g.edges],
            "infinite_emitters": sorted(g.infinite_emitters),
            "rays": [{"id": r.id, "entries": sorted(r.entries)} for r in g.rays]}


# ---------------------------------------------------------------- groupoid

def _elem(group, val, where):
    try:
        return group.parse_element(val)
    except StrongGradeError as exc:
        raise SchemaError(where, str(exc)) from None


def _group(doc, where):
    try:
        return parse_group(_need(doc, "group", where, str))
    except ValidationError as exc:
        raise SchemaError(f"{where}.group", str(exc)) from None


def groupoid_from_doc(doc, where="$") -> FiniteGradedGroupoid:
    grp = _group(doc, where)
    ids, d, c, deg = [], {}, {}, {}
    for i, m in enumerate(_need(doc, "morphisms", where, list)):
        w = f"{where}.morphisms[{i}]"
        x = _need(m, "id", w, str)
        ids.append(x)
        d[x] = _need(m, "d", w, str)
        c[x] = _need(m, "c", w, str)
        deg[x] = _elem(grp, _need(m, "deg", w), f"{w}.deg")
    compose = {}
    for i, t in enumerate(_need(doc, "compose", where, list)):
        if not (isinstance(t, list) and len(t) == 3 and all(isinstance(s, str) for s in t)):
            raise SchemaError(f"{where}.compose[{i}]", "expected [x, y, xy]")
        compose[(t[0], t[1])] = t[2]
    inverse = _need(doc, "inverse", where, dict)
    return FiniteGradedGroupoid(grp, tuple(ids), d, c, compose, dict(inverse), deg)


def _gfmt(group, g):
    return g[0] if len(g) == 1 else list(g)


def groupoid_to_doc(G: FiniteGradedGroupoid) -> dict:
    name = str
    return {"schema": schema_name("groupoid"), "group": G.group.name,
            "morphisms": [{"id": name(x), "d": name(G.d[x]), "c": name(G.c[x]),
                           "deg": _gfmt(G.group, G.deg[x])} for x in G.morphisms],
            "compose": [[name(x), name(y), name(z)] for (x, y), z in sorted(
                G.compose.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1])))],
            "inverse": {name(x): name(y) for x, y in G.inverse.items()}}


# ---------------------------------------------------------------- partial action

def paction_from_doc(doc, where="$") -> PartialAction:
    """``maps`` sends a group element (as a string key) to {y: theta(y)}; domains are read off."""
    grp = _group(doc, where)
    space = tuple(_strs(_need(doc, "space", where, list), f"{where}.space"))
    maps, domains = {}, {}
    for key, table in _need(doc, "maps", where, dict).items():
        w = f"{where}.maps[{key!r}]"
        g = _elem(grp, key, w)
        if not isinstance(table, dict):
            raise SchemaError(w, "expected an object {point: image}")
        maps[g] = dict(table)
        domains[g] = frozenset(table.values())
    e = grp.identity
    if e not in maps:
        maps[e] = {x: x for x in space}
        domains[e] = frozenset(space)
    return PartialAction(grp, space, domains, maps)


def paction_to_doc(p: PartialAction) -> dict:
    return {"schema": schema_name("paction"), "group": p.group.name, "space": list(p.space),
            "maps": {p.group.format(g): dict(sorted(m.items())) for g, m in sorted(p.maps.items())}}


# ---------------------------------------------------------------- k-graph

def kgraph_from_doc(doc, where="$") -> KGraph:
    rank = _need(doc, "rank", where, int)
    verts = _strs(_need(doc, "vertices", where, list), f"{where}.vertices")
    edges = []
    for i, e in enumerate(_need(doc, "edges", where, list)):
        w = f"{where}.edges[{i}]"
        edges.append(KEdge(_need(e, "id", w, str), _need(e, "color", w, int) - 1,
                           _need(e, "src", w, str), _need(e, "rng", w, str)))
    squares = []
    for i, s in enumerate(doc.get("squares", [])):
        if not (isinstance(s, list) and len(s) == 4 and all(isinstance(x, str) for x in s)):
            raise SchemaError(f"{where}.squares[{i}]", "expected [a, b, c, d] meaning ab = cd")
        squares.append(tuple(s))
    try:
        return KGraph(rank, tuple(verts), tuple(edges), tuple(squares))
    except ValidationError as exc:
        raise SchemaError(where, str(exc)) from None


def kgraph_to_doc(K: KGraph) -> dict:
    return {"schema": schema_name("kgraph"), "rank": K.rank, "vertices": list(K.vertices),
            "edges": [{"id": e.id, "color": e.color + 1, "src": e.src, "rng": e.rng} for e in K.edges],
            "squares": [list(s) for s in K.squares]}


# ---------------------------------------------------------------- algebra

def algebra_from_doc(doc, where="$", ring=None) -> GradedAlgebra:
    grp = _group(doc, where)
    try:
        rng = ring or parse_ring(doc.get("ring", "QQ"))
    except StrongGradeError as exc:
        raise SchemaError(f"{where}.ring", str(exc)) from None
    basis, deg = [], {}
    for i, b in enumerate(_need(doc, "basis", where, list)):
        w = f"{where}.basis[{i}]"
        x = _need(b, "id", w, str)
        basis.append(x)
        deg[x] = _elem(grp, _need(b, "deg", w), f"{w}.deg")
    known = set(basis)

    def vec(v, w):
        if not isinstance(v, dict) or not set(v) <= known:
            raise SchemaError(w, "expected an object {basis id: coefficient}")
        out = {k: rng.normalize(c) for k, c in v.items()}
        return {k: c for k, c in out.items() if c}

    table = {}
    for i, t in enumerate(_need(doc, "products", where, list)):
        w = f"{where}.products[{i}]"
        if not (isinstance(t, list) and len(t) == 3 and t[0] in known and t[1] in known):
            raise SchemaError(w, "expected [i, j, {k: c}]")
        v = vec(t[2], w)
        if v:
            table[(t[0], t[1])] = v
    units = tuple(vec(u, f"{where}.local_units[{i}]")
                  for i, u in enumerate(_need(doc, "local_units", where, list)))
    return GradedAlgebra(rng, grp, tuple(basis), deg, table, units)


def algebra_to_doc(A: GradedAlgebra) -> dict:
    def plain(c):
        return c if isinstance(c, int) else str(c)
    return {"schema": schema_name("algebra"), "group": A.group.name, "ring": A.ring.name,
            "basis": [{"id": str(b), "deg": _gfmt(A.group, A.deg[b])} for b in A.basis],
            "products": [[str(i), str(j), {str(k): plain(c) for k, c in v.items()}]
                         for (i, j), v in sorted(A.table.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1])))],
            "local_units": [{str(k): plain(c) for k, c in u.items()} for u in A.local_units]}


# ---------------------------------------------------------------- entry points

_READERS = {"graph": graph_from_doc, "groupoid": groupoid_from_doc, "paction": paction_from_doc,
            "kgraph": kgraph_from_doc, "algebra": algebra_from_doc}


def parse_document(text: str, where="$"):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    kind = kind_of(doc, where)
    return kind, _READERS[kind](doc, where)


def load(path, expect=None):
    """Read a document; returns (kind, object, sha256 of the raw bytes)."""
    raw = FsPath(path).read_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    kind, obj = parse_document(raw.decode("utf-8"), where=str(path))
    if expect is not None and kind not in ((expect,) if isinstance(expect, str) else expect):
        raise SchemaError(f"{path}.schema", f"expected a {expect} document, got {kind}")
    return kind, obj, digest


def dump(obj) -> dict:
    if isinstance(obj, Graph):
        return graph_to_doc(obj)
    if isinstance(obj, FiniteGradedGroupoid):
        return groupoid_to_doc(obj)
    if isinstance(obj, PartialAction):
        return paction_to_doc(obj)
    if isinstance(obj, KGraph):
        return kgraph_to_doc(obj)
    if isinstance(obj, GradedAlgebra):
        return algebra_to_doc(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(dump(obj), indent=2, sort_keys=True) + "\n"
