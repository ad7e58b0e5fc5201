"""Finite higher-rank graphs given by a coloured skeleton and commuting squares.

Category conventions: an edge ``e`` goes from ``s(e)`` to ``r(e)`` and a
word ``a b`` (read left to right) is the composite with ``s(a) == r(b)``,
so ``r(ab) = r(a)``. A square ``(a, b, c, d)`` records ``ab = cd`` where
``a, d`` share one colour and ``b, c`` another. Paths are stored as
canonical words: all colour-0 edges first, then colour 1, and so on.
Colours are 0-based internally.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .errors import DomainError, GraphConditionError, ValidationError
from .graph import Edge, Graph
from .semilinear import GridPeriodicFamily
from .verdict import LassoWitness, SourceWitness, Verdict


@dataclass(frozen=True, order=True)
class KEdge:
    id: str
    color: int
    src: str
    rng: str


@dataclass(frozen=True)
class KGraph:
    rank: int
    vertices: tuple
    edges: tuple
    squares: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(e if isinstance(e, KEdge) else KEdge(*e)
                                                for e in self.edges))
        object.__setattr__(self, "squares", tuple(tuple(s) for s in self.squares))
        if self.rank < 1:
            raise ValidationError("rank must be at least 1")
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValidationError("duplicate vertex identifier")
        seen = set()
        for e in self.edges:
            if e.id in seen or e.id in vs:
                raise ValidationError(f"edge identifier {e.id!r} is not unique")
            seen.add(e.id)
            if e.src not in vs or e.rng not in vs:
                raise ValidationError(f"edge {e.id!r} uses an undeclared vertex")
            if not 0 <= e.color < self.rank:
                raise ValidationError(f"edge {e.id!r} has colour {e.color + 1} outside 1..{self.rank}")

    @property
    def experimental(self) -> bool:
        return self.rank >= 3

    @cached_property
    def edge_map(self) -> dict:
        return {e.id: e for e in self.edges}

    @cached_property
    def _into(self) -> dict:
        out: dict = {}
        for e in sorted(self.edges):
            out.setdefault((e.rng, e.color), []).append(e)
        return out

    @cached_property
    def _from(self) -> dict:
        out: dict = {}
        for e in sorted(self.edges):
            out.setdefault((e.src, e.color), []).append(e)
        return out

    def edges_into(self, v, color) -> list:
        """Colour-``color`` edges with range ``v`` (the set v Lambda^{e_color})."""
        return self._into.get((v, color), [])

    def edges_from(self, v, color) -> list:
        return self._from.get((v, color), [])

    def color(self, e) -> int:
        return self.edge_map[e].color

    def s(self, e):
        return self.edge_map[e].src

    def r(self, e):
        return self.edge_map[e].rng

    @cached_property
    def swap(self) -> dict:
        """(a, b) -> (c, d) in both directions; built without validation."""
        out = {}
        for a, b, c, d in self.squares:
            out[(a, b)] = (c, d)
            out[(c, d)] = (a, b)
        return out


# ---------------------------------------------------------------- validation

@dataclass(frozen=True)
class KGraphReport:
    valid: bool
    violation: str | None = None
    where: tuple | None = None
    experimental: bool = False

    def to_dict(self):
        return {"valid": self.valid, "violation": self.violation,
                "where": None if self.where is None else list(self.where),
                "experimental": self.experimental}


def _bicolored(K: KGraph, i: int, j: int) -> list:
    """Composable words ab with colour(a) = i, colour(b) = j."""
    out = []
    for a in sorted(K.edges):
        if a.color != i:
            continue
        for b in K.edges_into(a.src, j):
            out.append((a.id, b.id))
    return out


def validate_kgraph(K: KGraph) -> KGraphReport:
    exp = K.experimental
    em = K.edge_map
    mapping = {}
    for sq in K.squares:
        if len(sq) != 4 or any(x not in em for x in sq):
            return KGraphReport(False, "square mentions an unknown edge", tuple(sq), exp)
        a, b, c, d = (em[x] for x in sq)
        if a.color == b.color or a.color != d.color or b.color != c.color:
            return KGraphReport(False, "square colours do not match", tuple(sq), exp)
        if a.src != b.rng or c.src != d.rng:
            return KGraphReport(False, "square side is not composable", tuple(sq), exp)
        if a.rng != c.rng or b.src != d.src:
            return KGraphReport(False, "square sides have different endpoints", tuple(sq), exp)
        for lhs, rhs in (((a.id, b.id), (c.id, d.id)), ((c.id, d.id), (a.id, b.id))):
            if mapping.get(lhs, rhs) != rhs:
                return KGraphReport(False, "word appears in two different squares", lhs, exp)
            mapping[lhs] = rhs
    for i in range(K.rank):
        for j in range(K.rank):
            if i == j:
                continue
            for w in _bicolored(K, i, j):
                if w not in mapping:
                    return KGraphReport(False, "composable bicoloured pair has no square", w, exp)
    if K.rank >= 3:
        bad = _coherence_violation(K)
        if bad is not None:
            return KGraphReport(False, "squares are not coherent on three colours", bad, exp)
    return KGraphReport(True, None, None, exp)


def require_valid(K: KGraph) -> None:
    rep = validate_kgraph(K)
    if not rep.valid:
        raise ValidationError(f"invalid k-graph: {rep.violation} at {rep.where!r}")


def _coherence_violation(K: KGraph):
    """Both ways of sorting a tricoloured word abc must agree."""
    for i, j, l in itertools.permutations(range(K.rank), 3):
        for a in K.edges:
            if a.color != i:
                continue
            for b in K.edges_into(a.src, j):
                for c in K.edges_into(b.src, l):
                    w = (a.id, b.id, c.id)
                    results = {_sort_word(K, w, order) for order in _swap_orders(K, w)}
                    if len(results) > 1:
                        return w
    return None


def _swap_orders(K, w):
    # sorting by two different strategies: leftmost-first and rightmost-first swaps
    return ("left", "right")


def _sort_word(K: KGraph, word, strategy="left") -> tuple:
    w = list(word)
    n = len(w)
    changed = True
    while changed:
        changed = False
        idxs = range(n - 1) if strategy == "left" else range(n - 2, -1, -1)
        for t in idxs:
            if K.color(w[t]) > K.color(w[t + 1]):
                w[t], w[t + 1] = K.swap[(w[t], w[t + 1])]
                changed = True
                break
    return tuple(w)


# ---------------------------------------------------------------- paths

@dataclass(frozen=True)
class KPath:
    """A path given by its canonical word; a vertex path has an empty word."""

    word: tuple
    degree: tuple
    src: object
    rng: object

    def __str__(self):
        return " ".join(self.word) if self.word else str(self.rng)


def vertex_path(K: KGraph, v) -> KPath:
    if v not in K.vertices:
        raise DomainError(f"unknown vertex {v!r}")
    return KPath((), (0,) * K.rank, v, v)


def kpath(K: KGraph, word) -> KPath:
    """Path from any composable word, normalised to colour order."""
    word = tuple(word)
    if not word:
        raise DomainError("use vertex_path for length-0 paths")
    for e in word:
        if e not in K.edge_map:
            raise DomainError(f"unknown edge {e!r}")
    for a, b in zip(word, word[1:]):
        if K.s(a) != K.r(b):
            raise DomainError(f"{a!r} {b!r} is not composable")
    deg = [0] * K.rank
    for e in word:
        deg[K.color(e)] += 1
    return KPath(_sort_word(K, word), tuple(deg), K.s(word[-1]), K.r(word[0]))


def compose(K: KGraph, lam: KPath, mu: KPath) -> KPath:
    if lam.src != mu.rng:
        raise DomainError(f"cannot compose: s(lambda) = {lam.src!r} != r(mu) = {mu.rng!r}")
    if not lam.word:
        return mu
    if not mu.word:
        return lam
    return kpath(K, lam.word + mu.word)


def _reorder(K: KGraph, word, target_colors) -> list:
    w = list(word)
    for t, col in enumerate(target_colors):
        j = next(j for j in range(t, len(w)) if K.color(w[j]) == col)
        while j > t:
            w[j - 1], w[j] = K.swap[(w[j - 1], w[j])]
            j -= 1
    return w


def _colors_of(deg) -> list:
    return [i for i, n in enumerate(deg) for _ in range(n)]


def segment(K: KGraph, lam: KPath, p, q) -> KPath:
    """lambda(p, q) for 0 <= p <= q <= d(lambda)."""
    p, q = tuple(p), tuple(q)
    if not all(0 <= a <= b <= c for a, b, c in zip(p, q, lam.degree)):
        raise DomainError(f"need 0 <= {p} <= {q} <= {lam.degree}")
    rest = tuple(c - b for b, c in zip(q, lam.degree))
    mid = tuple(b - a for a, b in zip(p, q))
    target = _colors_of(p) + _colors_of(mid) + _colors_of(rest)
    w = _reorder(K, lam.word, target)
    a, b = sum(p), sum(q)
    if a == b:
        v = K.r(w[a]) if a < len(w) else lam.src
        return vertex_path(K, v)
    return kpath(K, w[a:b])


def paths_with_range(K: KGraph, v, degree) -> list:
    """v Lambda^degree in canonical-word order."""
    layer = [((), v)]
    for col in _colors_of(degree):
        layer = [(w + (e.id,), e.src) for w, u in layer for e in K.edges_into(u, col)]
    out = []
    for w, u in layer:
        out.append(KPath(w, tuple(degree), u, v) if w else vertex_path(K, v))
    return out


def join(m, n) -> tuple:
    return tuple(max(a, b) for a, b in zip(m, n))


def lambda_min(K: KGraph, lam: KPath, mu: KPath) -> list:
    """All (rho, tau) with lambda rho = mu tau of degree d(lambda) v d(mu)."""
    if lam.rng != mu.rng:
        return []
    n = join(lam.degree, mu.degree)
    ext = tuple(a - b for a, b in zip(n, lam.degree))
    out = []
    for rho in paths_with_range(K, lam.src, ext):
        nu = compose(K, lam, rho)
        if segment(K, nu, (0,) * K.rank, mu.degree) == mu:
            tau = segment(K, nu, mu.degree, n)
            out.append((rho, tau))
    return out


def mce(K: KGraph, lam: KPath, mu: KPath) -> list:
    return [compose(K, lam, rho) for rho, _ in lambda_min(K, lam, mu)]


def _all_degrees_upto(bound):
    return itertools.product(*(range(b + 1) for b in bound))


def is_exhaustive(K: KGraph, v, E) -> bool:
    """Does every path with range v meet some member of E?

    Paths are tested up to the join N of the degrees in E. Without sources
    this is exact: any path extends to degree N, and a path of degree at
    least N meets E exactly when its (0, N) segment does.
    """
    E = list(E)
    for mu in E:
        if mu.rng != v:
            raise DomainError(f"{mu} does not have range {v!r}")
    if not E:
        return False
    N = (0,) * K.rank
    for mu in E:
        N = join(N, mu.degree)
    for deg in _all_degrees_upto(N):
        for lam in paths_with_range(K, v, deg):
            if not any(lambda_min(K, lam, mu) for mu in E):
                return False
    return True


def ext(K: KGraph, lam: KPath, E) -> list:
    out = {}
    for mu in E:
        for rho, _ in lambda_min(K, lam, mu):
            out[rho.word or (rho.rng,)] = rho
    return [out[k] for k in sorted(out)]


def edge_set(K: KGraph, E) -> list:
    """I(E): the first e_i-segments of members of E."""
    out = {}
    for lam in E:
        for i in range(K.rank):
            if lam.degree[i] > 0:
                ei = tuple(int(j == i) for j in range(K.rank))
                p = segment(K, lam, (0,) * K.rank, ei)
                out[p.word] = p
    return [out[k] for k in sorted(out)]


# ---------------------------------------------------------------- gradings

def transfer(K: KGraph, S, color) -> frozenset:
    """T_i(S) = {s(e) : e of colour i, r(e) in S}."""
    return frozenset(e.src for v in S for e in K.edges_into(v, color))


def _axis_period(K: KGraph, color):
    """Eventual period of T_color^n as a map on vertex sets (via singletons)."""
    seen = {}
    cur = {v: frozenset([v]) for v in K.vertices}
    n = 0
    while True:
        sig = tuple(sorted((v, tuple(sorted(s))) for v, s in cur.items()))
        if sig in seen:
            return seen[sig], n - seen[sig]
        seen[sig] = n
        cur = {v: transfer(K, s, color) for v, s in cur.items()}
        n += 1


def source_sets(K: KGraph) -> GridPeriodicFamily:
    """S_m = {s(beta) : d(beta) = m} as a grid-periodic family."""
    pre, per = [], []
    for i in range(K.rank):
        a, b = _axis_period(K, i)
        pre.append(a)
        per.append(b)
    table = {}
    full = frozenset(K.vertices)
    for m in itertools.product(*(range(a + b) for a, b in zip(pre, per))):
        S = full
        for i, n in enumerate(m):
            for _ in range(n):
                S = transfer(K, S, i)
        table[m] = S
    return GridPeriodicFamily(K.rank, tuple(pre), tuple(per), table)


def sources(K: KGraph) -> list:
    """(v, colour) pairs with v Lambda^{e_colour} empty."""
    return [(v, i) for v in K.vertices for i in range(K.rank) if not K.edges_into(v, i)]


def _surviving_bad_states(K: KGraph, fam: GridPeriodicFamily):
    """Greatest set of bad product states that each have a successor inside the set.

    States are (vertex, folded phase, next colour); a step from (v, phi, i)
    follows a colour-i edge e with r(e) = v to (s(e), phi + e_i, i + 1 mod k).
    """
    k = K.rank
    states = set()
    for phi in fam.box():
        S = fam.table[phi]
        for v in K.vertices:
            if v not in S:
                for i in range(k):
                    states.add((v, phi, i))

    def succ(st):
        v, phi, i = st
        nphi = fam.step(phi, i)
        for e in K.edges_into(v, i):
            nxt = (e.src, nphi, (i + 1) % k)
            yield e.id, nxt

    alive = set(states)
    changed = True
    while changed:
        changed = False
        for st in list(alive):
            if not any(nxt in alive for _, nxt in succ(st)):
                alive.discard(st)
                changed = True
    return alive, succ


def _lasso(alive, succ, start):
    path, index = [], {start: 0}
    cur = start
    while True:
        e, nxt = next((e, n) for e, n in succ(cur) if n in alive)
        path.append(e)
        if nxt in index:
            i = index[nxt]
            return tuple(path[:i]), tuple(path[i:])
        index[nxt] = len(path)
        cur = nxt


def _require_sourceless(K):
    src = sources(K)
    if src:
        v, i = src[0]
        raise GraphConditionError(
            f"vertex {v!r} receives no colour-{i + 1} edge; use strongly_zk_graded",
            SourceWitness(v, i + 1))


def condition_y_kgraph(K: KGraph, m=None) -> Verdict:
    """Condition (Y) by a lasso search over round-robin staircases.

    Witnesses propagate upwards, so an infinite path fails for excess m iff
    every grid point n is bad (x(n) not in S_(n+m)); it suffices to look at
    one cofinal staircase, and the round-robin one is used. Failure is an
    infinite walk through bad product states, i.e. a reachable cycle.
    Passing ``m`` restricts the search to that excess degree.
    """
    require_valid(K)
    _require_sourceless(K)
    fam = source_sets(K)
    alive, succ = _surviving_bad_states(K, fam)
    phases = [fam.fold(tuple(m))] if m is not None else sorted(fam.box())
    for phi in phases:
        for v in sorted(K.vertices, key=str):
            st = (v, phi, 0)
            if st in alive:
                stem, cycle = _lasso(alive, succ, st)
                return Verdict(False, LassoWitness(phi, v, stem, cycle),
                               (("condition_y_kgraph", False),))
    return Verdict(True, None, (("condition_y_kgraph", True),))


def verify_lasso(K: KGraph, w: LassoWitness) -> bool:
    """Walk the lasso (stem, then the cycle twice) and check every visited state is bad."""
    fam = source_sets(K)
    v, phi, i = w.start, fam.fold(w.m), 0
    if v in fam.table[phi]:
        return False
    for e in w.stem + w.cycle + w.cycle:
        if K.color(e) != i or K.r(e) != v:
            return False
        v, phi, i = K.s(e), fam.step(phi, i), (i + 1) % K.rank
        if v in fam.table[phi]:
            return False
    return True


def strongly_zk_graded(K: KGraph) -> Verdict:
    require_valid(K)
    src = sources(K)
    if src:
        v, i = sorted(src, key=lambda t: (str(t[0]), t[1]))[0]
        return Verdict(False, SourceWitness(v, i + 1),
                       (("row_finite", True), ("no_sources", False)))
    y = condition_y_kgraph(K)
    trace = (("row_finite", True), ("no_sources", True), ("condition_y", y.answer))
    return Verdict(y.answer, y.witness, trace)


def from_graph(g: Graph) -> KGraph:
    """The 1-graph whose path category matches the Leavitt path convention of ``g``.

    A graph edge u -> w becomes a k-graph edge with source w and range u, so
    sinks of ``g`` become sources of the 1-graph.
    """
    if g.rays or g.infinite_emitters:
        raise DomainError("only finite row-finite graphs translate to k-graphs")
    return KGraph(1, g.vertices, tuple(KEdge(e.id, 0, e.rng, e.src) for e in g.edges))


def paper_two_graph() -> KGraph:
    """Two vertices u, v; blue e: u->v, g: v->u; red loops f at u, h at v; ef = he, gh = fg."""
    return KGraph(2, ("u", "v"),
                  (KEdge("e", 0, "u", "v"), KEdge("g", 0, "v", "u"),
                   KEdge("f", 1, "u", "u"), KEdge("h", 1, "v", "v")),
                  (("e", "f", "h", "e"), ("g", "h", "f", "g")))
