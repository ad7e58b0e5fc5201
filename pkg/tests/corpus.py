"""Deterministic generators for the test and acceptance corpora."""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

from stronggrade.graph import Edge, Graph, Ray
from stronggrade.groupoid import FiniteGradedGroupoid, PartialAction
from stronggrade.groups import AbelianGroup
from stronggrade.kgraph import KEdge, KGraph


# ---------------------------------------------------------------- graphs

def matrix_graph(M) -> Graph:
    """Edge counts M[i][j] from v_i to v_j; edge ids e<i><j><copy>."""
    n = len(M)
    vs = tuple(f"v{i}" for i in range(n))
    edges = [Edge(f"e{i}{j}{c}", vs[i], vs[j])
             for i in range(n) for j in range(n) for c in range(M[i][j])]
    return Graph(vs, tuple(edges))


def _connected(M) -> bool:
    n = len(M)
    seen, stack = {0}, [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if (M[i][j] or M[j][i]) and j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == n


def _canonical(M):
    n = len(M)
    return min(tuple(M[p[i]][p[j]] for i in range(n) for j in range(n))
               for p in itertools.permutations(range(n)))


@lru_cache(maxsize=None)
def connected_classes(n: int, max_mult: int) -> tuple:
    """Connected multigraphs on n vertices up to isomorphism, as flat count tuples."""
    seen = set()
    out = []
    for flat in itertools.product(range(max_mult + 1), repeat=n * n):
        M = [flat[i * n:(i + 1) * n] for i in range(n)]
        if not _connected(M):
            continue
        c = _canonical(M)
        if c not in seen:
            seen.add(c)
            out.append(c)
    return tuple(out)


def graphs_from_classes(n, max_mult):
    for flat in connected_classes(n, max_mult):
        yield matrix_graph([flat[i * n:(i + 1) * n] for i in range(n)])


def random_graph(rng: random.Random, max_vertices=6, max_mult=2, density=0.35) -> Graph:
    n = rng.randint(1, max_vertices)
    M = [[(rng.randint(1, max_mult) if rng.random() < density else 0) for _ in range(n)]
         for _ in range(n)]
    return matrix_graph(M)


def random_ray_graph(rng: random.Random, max_core=4, max_rays=2) -> Graph:
    g = random_graph(rng, max_core, 1, density=rng.choice([0.2, 0.35, 0.5]))
    rays = []
    for r in range(rng.randint(1, max_rays)):
        k = rng.randint(1, len(g.vertices))
        rays.append(Ray(f"rho{r}", frozenset(rng.sample(list(g.vertices), k))))
    return Graph(g.vertices, g.edges, frozenset(), tuple(rays))


# ---------------------------------------------------------------- groupoids

def _cyclic(n):
    return [tuple([i]) for i in range(n)], lambda a, b: ((a[0] + b[0]) % n,)


def _klein():
    return [(a, b) for a in range(2) for b in range(2)], lambda x, y: ((x[0] + y[0]) % 2, (x[1] + y[1]) % 2)


def _s3():
    elems = sorted(itertools.permutations(range(3)))
    return elems, lambda p, q: tuple(p[q[i]] for i in range(3))


SMALL_GROUPS = {"C1": _cyclic(1), "C2": _cyclic(2), "C3": _cyclic(3), "C4": _cyclic(4),
                "K4": _klein(), "C5": _cyclic(5), "C6": _cyclic(6), "S3": _s3()}


def _homs(H, Gamma: AbelianGroup):
    elems, mul = H
    targets = Gamma.elements()
    e = elems[0]
    out = []
    for images in itertools.product(targets, repeat=len(elems) - 1):
        phi = {e: Gamma.identity, **dict(zip(elems[1:], images))}
        if all(phi[mul(a, b)] == Gamma.op(phi[a], phi[b]) for a in elems for b in elems):
            out.append(phi)
    return out


def _component_shapes(budget):
    """(units, group name) pairs with units^2 * |H| morphisms."""
    out = []
    for name, (elems, _) in SMALL_GROUPS.items():
        for n in (1, 2):
            if n * n * len(elems) <= budget:
                out.append((n, name))
    return out


def _shape_multisets(budget, start=0, shapes=None):
    shapes = shapes or _component_shapes(budget)
    if budget <= 0:
        yield ()
        return
    yield ()
    for i in range(start, len(shapes)):
        n, name = shapes[i]
        size = n * n * len(SMALL_GROUPS[name][0])
        if size <= budget:
            for rest in _shape_multisets(budget - size, i, shapes):
                yield ((n, name),) + rest


def build_groupoid(Gamma, components) -> FiniteGradedGroupoid:
    """components: list of (units, group name, hom dict, potentials tuple)."""
    ms, d, c, comp, inv, deg = [], {}, {}, {}, {}, {}
    for ci, (n, name, phi, pot) in enumerate(components):
        elems, mul = SMALL_GROUPS[name]
        e = elems[0]
        idx = {h: k for k, h in enumerate(elems)}
        inverse = {h: next(k for k in elems if mul(h, k) == e) for h in elems}

        def mid(x, h, y, ci=ci, idx=idx):
            return f"c{ci}:{x}.{idx[h]}.{y}"

        for x in range(n):
            for y in range(n):
                for h in elems:
                    m = mid(x, h, y)
                    ms.append(m)
                    d[m] = mid(y, e, y)
                    c[m] = mid(x, e, x)
                    inv[m] = mid(y, inverse[h], x)
                    deg[m] = Gamma.op(Gamma.op(pot[x], phi[h]), Gamma.inv(pot[y]))
                    for z in range(n):
                        for k in elems:
                            comp[(m, mid(y, k, z))] = mid(x, mul(h, k), z)
    return FiniteGradedGroupoid(Gamma, tuple(ms), d, c, comp, inv, deg)


def graded_groupoids(Gamma: AbelianGroup, max_morphisms=6):
    """Every grading of every groupoid with at most ``max_morphisms`` morphisms (nonempty)."""
    for shape in _shape_multisets(max_morphisms):
        if not shape:
            continue
        choices = []
        for n, name in shape:
            opts = []
            for phi in _homs(SMALL_GROUPS[name], Gamma):
                for rest in itertools.product(Gamma.elements(), repeat=n - 1):
                    opts.append((n, name, phi, (Gamma.identity,) + rest))
            choices.append(opts)
        for combo in itertools.product(*choices):
            yield build_groupoid(Gamma, list(combo))


def groupoid_sample(rng: random.Random, per_group: int, groups=((2,), (3,), (4,))):
    out = []
    for mod in groups:
        Gamma = AbelianGroup(mod)
        allg = list(graded_groupoids(Gamma))
        if len(allg) > per_group:
            allg = rng.sample(allg, per_group)
        out.extend(allg)
    return out


# ---------------------------------------------------------------- partial actions

def _partial_injections(X):
    out = []
    for k in range(len(X) + 1):
        for dom in itertools.combinations(X, k):
            for img in itertools.permutations(X, k):
                out.append(dict(zip(dom, img)))
    return out


def partial_actions(Gamma: AbelianGroup, X):
    """All (P1)/(P2) partial actions of a finite cyclic group on X, via brute force."""
    from stronggrade.errors import ValidationError
    from stronggrade.groupoid import validate_partial_action
    elems = Gamma.elements()
    e = Gamma.identity
    others = [g for g in elems if g != e]
    # theta_(g^-1) is forced to be the inverse of theta_g; choose one per inverse pair
    reps = []
    for g in others:
        if Gamma.inv(g) not in reps:
            reps.append(g)
    injs = _partial_injections(list(X))
    for choice in itertools.product(injs, repeat=len(reps)):
        maps = {e: {x: x for x in X}}
        for g, th in zip(reps, choice):
            maps[g] = dict(th)
            maps[Gamma.inv(g)] = {y: x for x, y in th.items()}
        domains = {g: frozenset(m.values()) for g, m in maps.items()}
        p = PartialAction(Gamma, tuple(X), domains, maps)
        try:
            validate_partial_action(p)
        except ValidationError:
            continue
        yield p


# ---------------------------------------------------------------- k-graphs

def random_two_graph(rng: random.Random, max_vertices=3, max_count=2) -> KGraph:
    """Random 2-graph without sources: commuting count matrices, random square bijections.

    B[r][s] counts colour-1 edges s -> r and R[r][s] colour-2 edges; every row is
    nonzero so each vertex receives both colours. BR = RB makes a bijection
    between blue-red and red-blue words with the same endpoints possible.
    """
    while True:
        n = rng.randint(1, max_vertices)

        def mat():
            while True:
                M = [[rng.randint(0, max_count) if rng.random() < 0.5 else 0 for _ in range(n)]
                     for _ in range(n)]
                if all(any(row) for row in M):
                    return M
        for _ in range(200):
            B, R = mat(), mat()
            BR = [[sum(B[i][k] * R[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
            RB = [[sum(R[i][k] * B[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
            if BR == RB:
                return _two_graph_from(rng, n, B, R)


def _two_graph_from(rng, n, B, R) -> KGraph:
    vs = [f"v{i}" for i in range(n)]
    edges = []
    for color, M, tag in ((0, B, "b"), (1, R, "r")):
        for r in range(n):
            for s in range(n):
                for c in range(M[r][s]):
                    edges.append(KEdge(f"{tag}{r}{s}{c}", color, vs[s], vs[r]))
    K0 = KGraph(2, tuple(vs), tuple(edges))
    squares = []
    for r in vs:
        for s in vs:
            br = [(a.id, b.id) for a in K0.edges if a.color == 0 and a.rng == r
                  for b in K0.edges_into(a.src, 1) if b.src == s]
            rb = [(a.id, b.id) for a in K0.edges if a.color == 1 and a.rng == r
                  for b in K0.edges_into(a.src, 0) if b.src == s]
            assert len(br) == len(rb)
            rng.shuffle(rb)
            for (a, b), (c, d) in zip(sorted(br), rb):
                squares.append((a, b, c, d))
    return KGraph(2, tuple(vs), tuple(edges), tuple(squares))


def parity_two_graph() -> KGraph:
    """Red 2-cycle v1 <-> v2 with a blue loop at each vertex; squares forced."""
    edges = (KEdge("b1", 0, "v1", "v1"), KEdge("b2", 0, "v2", "v2"),
             KEdge("r12", 1, "v1", "v2"), KEdge("r21", 1, "v2", "v1"))
    squares = (("b2", "r12", "r12", "b1"), ("b1", "r21", "r21", "b2"))
    return KGraph(2, ("v1", "v2"), edges, squares)
