"""Finite directed multigraphs with infinite-emitter annotations and rays.

Conventions follow Leavitt path algebra usage: a path ``e1 e2 ... en``
satisfies ``r(e_i) == s(e_{i+1})``. A :class:`Ray` attaches an implicit
infinite tail ``rho(0) -> rho(1) -> ...`` to the core; every entry vertex
contributes one edge into ``rho(0)`` and nothing leaves the ray.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

from .config import limits
from .errors import DomainError, ResourceError, ValidationError


@dataclass(frozen=True, order=True)
class Edge:
    id: str
    src: str
    rng: str


@dataclass(frozen=True)
class Ray:
    id: str
    entries: frozenset

    def __post_init__(self):
        object.__setattr__(self, "entries", frozenset(self.entries))
        if not self.entries:
            raise ValidationError(f"ray {self.id!r} has no entry vertex")


@dataclass(frozen=True)
class Path:
    """A finite path, stored with its vertex sequence.

    ``vertices`` has one more entry than ``edges``; a length-0 path is a
    single vertex.
    """

    vertices: tuple
    edges: tuple = ()

    def __post_init__(self):
        if len(self.vertices) != len(self.edges) + 1:
            raise ValidationError("path needs len(vertices) == len(edges) + 1")

    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = hash((self.vertices, self.edges))
            object.__setattr__(self, "_hash", h)
            return h

    @classmethod
    def vertex(cls, v) -> "Path":
        return cls((v,), ())

    @property
    def source(self):
        return self.vertices[0]

    @property
    def range(self):
        return self.vertices[-1]

    def __len__(self):
        return len(self.edges)

    def __add__(self, other: "Path") -> "Path":
        if self.range != other.source:
            raise DomainError(f"cannot concatenate: {self.range!r} != {other.source!r}")
        return Path(self.vertices + other.vertices[1:], self.edges + other.edges)

    def is_prefix_of(self, other: "Path") -> bool:
        n = len(self.edges)
        return (self.source == other.source and len(other.edges) >= n
                and other.edges[:n] == self.edges)

    def sort_key(self):
        return (len(self.edges), self.edges, self.vertices[0])

    def __str__(self):
        return " ".join(self.edges) if self.edges else str(self.vertices[0])


def shift(p: Path, n: int) -> Path:
    """Drop the first ``n`` edges; ``shift(p, len(p))`` is the range vertex."""
    if n < 0 or n > len(p):
        raise DomainError(f"cannot shift a path of length {len(p)} by {n}")
    return Path(p.vertices[n:], p.edges[n:])


@dataclass(frozen=True)
class Graph:
    vertices: tuple
    edges: tuple = ()
    infinite_emitters: frozenset = frozenset()
    rays: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(
            e if isinstance(e, Edge) else Edge(*e) for e in self.edges))
        object.__setattr__(self, "infinite_emitters", frozenset(self.infinite_emitters))
        object.__setattr__(self, "rays", tuple(self.rays))
        self._validate()

    def _validate(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValidationError("duplicate vertex identifier")
        seen = set()
        for e in self.edges:
            if e.id in seen:
                raise ValidationError(f"duplicate edge identifier {e.id!r}")
            seen.add(e.id)
            if e.src not in vs or e.rng not in vs:
                raise ValidationError(
                    f"edge {e.id!r} ({e.src!r} -> {e.rng!r}) uses an undeclared vertex")
            if e.id in vs:
                raise ValidationError(f"edge identifier {e.id!r} is also a vertex")
        if not self.infinite_emitters <= vs:
            bad = sorted(self.infinite_emitters - vs)
            raise ValidationError(f"infinite emitter {bad[0]!r} is not a vertex")
        ray_ids = set()
        for ray in self.rays:
            if ray.id in ray_ids or ray.id in vs or ray.id in seen:
                raise ValidationError(f"ray identifier {ray.id!r} clashes with another name")
            ray_ids.add(ray.id)
            if not ray.entries <= vs:
                bad = sorted(ray.entries - vs)
                raise ValidationError(f"ray {ray.id!r} enters from unknown vertex {bad[0]!r}")

    @cached_property
    def edge_map(self) -> dict:
        return {e.id: e for e in self.edges}

    @cached_property
    def _out(self) -> dict:
        out = defaultdict(list)
        for e in sorted(self.edges):
            out[e.src].append(e)
        return dict(out)

    @cached_property
    def _in(self) -> dict:
        inc = defaultdict(list)
        for e in sorted(self.edges):
            inc[e.rng].append(e)
        return dict(inc)

    def out_edges(self, v) -> list:
        """Core edges leaving ``v``, sorted by identifier."""
        return self._out.get(v, [])

    def in_edges(self, v) -> list:
        return self._in.get(v, [])

    def ray_entries_from(self, v) -> list:
        return [r for r in self.rays if v in r.entries]

    def s(self, e):
        return self.edge_map[e].src

    def r(self, e):
        return self.edge_map[e].rng

    @property
    def is_finite(self) -> bool:
        return not self.rays and not self.infinite_emitters

    def path(self, edge_ids: Iterable[str], start=None) -> Path:
        ids = tuple(edge_ids)
        if not ids:
            if start is None:
                raise DomainError("a length-0 path needs an explicit vertex")
            return Path.vertex(start)
        for e in ids:
            if e not in self.edge_map:
                raise DomainError(f"unknown edge {e!r}")
        verts = [self.s(ids[0])]
        for e in ids:
            if self.s(e) != verts[-1]:
                raise DomainError(f"edges not composable at {e!r}")
            verts.append(self.r(e))
        return Path(tuple(verts), ids)

    def relabel(self, vmap: dict, emap: dict) -> "Graph":
        return Graph(
            tuple(vmap[v] for v in self.vertices),
            tuple(Edge(emap[e.id], vmap[e.src], vmap[e.rng]) for e in self.edges),
            frozenset(vmap[v] for v in self.infinite_emitters),
            tuple(Ray(r.id, frozenset(vmap[v] for v in r.entries)) for r in self.rays),
        )


@dataclass(frozen=True)
class VertexClassification:
    sinks: frozenset
    infinite_emitters: frozenset
    singular: frozenset
    isolated: frozenset
    row_finite: bool
    has_sink: bool
    has_isolated: bool = field(default=False)

    def flags(self, v) -> dict:
        return {
            "sink": v in self.sinks,
            "infinite_emitter": v in self.infinite_emitters,
            "singular": v in self.singular,
            "isolated": v in self.isolated,
        }


def classify_vertices(g: Graph) -> VertexClassification:
    """Sink, infinite-emitter, singular and isolated flags for core vertices.

    Ray vertices are never sinks. A core vertex that feeds a ray emits an
    edge, so it is not a sink either.
    """
    sinks = frozenset(
        v for v in g.vertices
        if not g.out_edges(v) and v not in g.infinite_emitters and not g.ray_entries_from(v))
    isolated = frozenset(v for v in sinks if not g.in_edges(v))
    emitters = frozenset(g.infinite_emitters)
    return VertexClassification(
        sinks=sinks,
        infinite_emitters=emitters,
        singular=sinks | emitters,
        isolated=isolated,
        row_finite=not emitters,
        has_sink=bool(sinks),
        has_isolated=bool(isolated),
    )


def cycle_vertices(g: Graph) -> frozenset:
    """Core vertices that are the base of a closed path of length >= 1."""
    result = set()
    for v in g.vertices:
        stack = [e.rng for e in g.out_edges(v)]
        seen = set()
        while stack:
            w = stack.pop()
            if w == v:
                result.add(v)
                break
            if w in seen:
                continue
            seen.add(w)
            stack.extend(e.rng for e in g.out_edges(w))
    return frozenset(result)


def paths_into(g: Graph, v, n: int, cap: int | None = None) -> list:
    """All core paths of length ``n`` with range ``v``, lexicographic by edge ids."""
    if v not in g.vertices:
        raise DomainError(f"{v!r} is not a core vertex")
    cap = limits().max_enum if cap is None else cap
    # build backwards, then sort: enumeration order need not be lexicographic
    layer = [((), v)]
    for _ in range(n):
        nxt = []
        for suffix, head in layer:
            for e in g.in_edges(head):
                nxt.append(((e.id,) + suffix, e.src))
                if len(nxt) > cap:
                    raise ResourceError(f"more than {cap} paths of length {n} into {v!r}")
        layer = nxt
    return [g.path(edges, start=head) for edges, head in sorted(layer)]


def paths_from(g: Graph, v, n: int, cap: int | None = None) -> list:
    """All core paths of length ``n`` with source ``v``, lexicographic by edge ids."""
    if v not in g.vertices:
        raise DomainError(f"{v!r} is not a core vertex")
    cap = limits().max_enum if cap is None else cap
    layer = [Path.vertex(v)]
    for _ in range(n):
        nxt = []
        for p in layer:
            for e in g.out_edges(p.range):
                nxt.append(Path(p.vertices + (e.rng,), p.edges + (e.id,)))
                if len(nxt) > cap:
                    raise ResourceError(f"more than {cap} paths of length {n} from {v!r}")
        layer = nxt
    return sorted(layer, key=lambda p: p.edges)


def iter_paths_from(g: Graph, v, max_len: int) -> Iterator[Path]:
    """Every core path from ``v`` of length at most ``max_len``."""
    for n in range(max_len + 1):
        yield from paths_from(g, v, n)
