"""Graph-level decisions for strong gradings of Leavitt path algebras.

* Z-grading: row-finite, no sinks, and Condition (Y).
* Z/nZ-grading: every singular vertex receives a path of length n - 1.
"""

from __future__ import annotations

from collections import deque

from .graph import Graph, classify_vertices
from .semilinear import SemilinearSet, length_spectra
from .verdict import (ConditionYWitness, InfiniteEmitterWitness, SingularReceivesWitness,
                      SinkWitness, Verdict)
from .errors import DomainError


def _vkey(v):
    return str(v)


def ray_spectrum(g: Graph, ray, spectra=None) -> SemilinearSet:
    """U(ray): lengths of core paths ending at some entry vertex of ``ray``."""
    spectra = spectra or length_spectra(g)
    out = SemilinearSet.empty()
    for w in ray.entries:
        out = out | spectra[w]
    return out


def condition_y(g: Graph) -> Verdict:
    """Decide Condition (Y) for a finite core with attached rays.

    An infinite path either stays in the core, where it revisits a vertex on
    a cycle (whose spectrum is all of N, so (Y) holds), or it is
    ``pi . (entry edge) . ray``. With ``c = len(pi)``, the initial subpaths
    ending on the ray all need ``c + k`` in U(ray); the ones ending at
    ``pi(i)`` need ``i + k`` in the spectrum of ``pi(i)``. Paths that start
    inside a ray fail only for excesses already caught by the trivial prefix
    at an entry vertex.

    All spectra share one (preperiod, period) shape, so the failure predicate
    for ``k >= N0 + P`` repeats that of ``k - P``; we search k in [0, N0 + P)
    over states (vertex, folded value of i + k).
    """
    if not g.rays:
        return Verdict(True, criteria_trace=(("condition_y:finite_core", True),))
    spectra = length_spectra(g)
    some = next(iter(spectra.values()), None)
    if some is None:
        raise DomainError("rays need at least one core vertex")
    n0, per = some.preperiod, some.period
    bits = {v: s.bits for v, s in spectra.items()}
    ray_bits = {r.id: ray_spectrum(g, r, spectra).refine(n0, per).bits for r in g.rays}

    def step(f):
        f += 1
        return n0 if f >= n0 + per else f

    def fold(x):
        return x if x < n0 else n0 + (x - n0) % per

    order = sorted(g.vertices, key=_vkey)
    for k in range(n0 + per):
        f0 = fold(k)
        parent = {}
        queue = deque()
        for v in order:
            if not bits[v][f0]:
                parent[(v, f0)] = None
                queue.append((v, f0))
        while queue:
            state = queue.popleft()
            w, f = state
            for ray in g.rays:
                if w in ray.entries and not ray_bits[ray.id][f]:
                    prefix = []
                    cur = state
                    while parent[cur] is not None:
                        cur, e = parent[cur]
                        prefix.append(e)
                    prefix.reverse()
                    c = len(prefix)
                    return Verdict(False, ConditionYWitness(
                        ray=ray.id, k=k, start=cur[0], prefix=tuple(prefix),
                        explanation=(f"path of length {c} from {cur[0]} to entry {w}, then along "
                                     f"ray {ray.id}: no initial subpath admits a companion "
                                     f"path longer by {k}")),
                        criteria_trace=(("condition_y:ray_search", False),))
            g2 = step(f)
            for e in g.out_edges(w):
                nxt = (e.rng, g2)
                if nxt not in parent and not bits[e.rng][g2]:
                    parent[nxt] = (state, e.id)
                    queue.append(nxt)
    return Verdict(True, criteria_trace=(("condition_y:ray_search", True),))


def strongly_z_graded(g: Graph) -> Verdict:
    cls = classify_vertices(g)
    y = condition_y(g)
    trace = (("row_finite", cls.row_finite), ("no_sinks", not cls.has_sink),
             ("condition_y", y.answer))
    if not cls.row_finite:
        return Verdict(False, InfiniteEmitterWitness(min(cls.infinite_emitters, key=_vkey)), trace)
    if cls.has_sink:
        return Verdict(False, SinkWitness(min(cls.sinks, key=_vkey)), trace)
    if not y.answer:
        return Verdict(False, y.witness, trace)
    return Verdict(True, None, trace)


def strongly_zmod_graded(g: Graph, n: int) -> Verdict:
    """Every singular vertex must receive a path of length ``n - 1``."""
    if n < 1:
        raise DomainError("modulus must be at least 1")
    cls = classify_vertices(g)
    spectra = length_spectra(g)
    for v in sorted(cls.singular, key=_vkey):
        if not spectra[v].membership(n - 1):
            return Verdict(False, SingularReceivesWitness(v, n - 1),
                           ((f"singular_receives_length_{n - 1}", False),))
    return Verdict(True, None, ((f"singular_receives_length_{n - 1}", True),))

