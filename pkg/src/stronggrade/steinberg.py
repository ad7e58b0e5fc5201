"""Steinberg algebras of finite discrete graded groupoids and ring-level checks.

A :class:`GradedAlgebra` is given by structure constants on a homogeneous
basis. For a finite discrete groupoid the basis is the set of morphisms
(indicators of singletons) and ``1_g * 1_h = 1_{gh}`` when ``d(g) == c(h)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DomainError, InternalInconsistencyError, NotStronglyGradedError
from .groupoid import FiniteGradedGroupoid, default_window, key, require_valid
from .groups import QuotientGroup, Subgroup
from .rings import QQ, EchelonBasis, Ring, add_into


@dataclass(frozen=True, eq=False)
class GradedAlgebra:
    ring: Ring
    group: object
    basis: tuple
    deg: dict
    table: dict          # (i, j) -> sparse vector; missing pairs multiply to 0
    local_units: tuple   # degree-e idempotents, as sparse vectors

    def mul_basis(self, i, j) -> dict:
        return self.table.get((i, j), {})

    def mul(self, a: dict, b: dict) -> dict:
        acc: dict = {}
        for i, x in a.items():
            for j, y in b.items():
                prod = self.table.get((i, j))
                if prod:
                    add_into(self.ring, acc, prod, x * y)
        return acc

    def component(self, g) -> list:
        g = self.group.coerce(g)
        return [b for b in self.basis if self.deg[b] == g]

    def occurring_degrees(self) -> list:
        return sorted(set(self.deg.values()))

    def check(self) -> None:
        """Associativity on the basis, additivity of degrees, idempotent local units."""
        grp = self.group
        for (i, j), v in self.table.items():
            for k in v:
                if self.deg[k] != grp.op(self.deg[i], self.deg[j]):
                    raise InternalInconsistencyError(f"degree not additive on {i!r} * {j!r}")
        for i in self.basis:
            for j in self.basis:
                ij = self.mul_basis(i, j)
                for k in self.basis:
                    if self.mul(ij, {k: 1}) != self.mul({i: 1}, self.mul_basis(j, k)):
                        raise InternalInconsistencyError(f"not associative at {(i, j, k)!r}")
        for u in self.local_units:
            if self.mul(u, u) != u or any(self.deg[b] != grp.identity for b in u):
                raise InternalInconsistencyError("declared local unit is not a degree-e idempotent")


def steinberg_algebra(G: FiniteGradedGroupoid, ring: Ring = QQ) -> GradedAlgebra:
    """Convolution algebra on the singleton basis.

    Local units are indicators of unit subsets; only singleton units are
    stored since every other local unit is a sum of them.
    """
    require_valid(G)
    table = {(x, y): {z: 1} for (x, y), z in G.compose.items()}
    units = tuple({u: 1} for u in G.units)
    return GradedAlgebra(ring, G.group, tuple(sorted(G.morphisms, key=key)), dict(G.deg), table, units)


def group_algebra(group, ring: Ring = QQ) -> GradedAlgebra:
    from .groupoid import groupoid_from_group
    return steinberg_algebra(groupoid_from_group(group), ring)


def _products_span(A: GradedAlgebra, left, right) -> EchelonBasis:
    span = EchelonBasis(A.ring)
    for i in left:
        for j in right:
            p = A.mul_basis(i, j)
            if p:
                span.add(p)
    return span


@dataclass(frozen=True)
class AlgebraReport:
    answer: bool
    degrees: tuple
    per_degree: dict  # gamma -> {"local_units": bool, "products": bool}
    failure: tuple | None = None

    def to_dict(self, fmt=str):
        return {"answer": "yes" if self.answer else "no",
                "degrees": [fmt(g) for g in self.degrees],
                "per_degree": {fmt(g): {k: "pass" if v else "fail" for k, v in crit.items()}
                               for g, crit in self.per_degree.items()},
                "failure": None if self.failure is None else [fmt(self.failure[0]), self.failure[1]]}


def strongly_graded_algebra_check(A: GradedAlgebra, degrees=None) -> AlgebraReport:
    """Local units in A_g A_(g^-1), and A_g A_h = A_(gh) over the window, per degree g."""
    if not A.ring.is_field:
        raise DomainError("the algebra check needs a field of coefficients")
    grp = A.group
    if degrees is None:
        degrees = default_window(grp, A.occurring_degrees())
    degrees = tuple(sorted({grp.coerce(g) for g in degrees}))
    per = {}
    failure = None
    for g in degrees:
        left = A.component(g)
        inv_span = _products_span(A, left, A.component(grp.inv(g)))
        units_ok = all(inv_span.contains(u) for u in A.local_units)
        products_ok = True
        for h in degrees:
            span = _products_span(A, left, A.component(h))
            if not all(span.contains({b: 1}) for b in A.component(grp.op(g, h))):
                products_ok = False
                break
        if units_ok != products_ok:
            raise InternalInconsistencyError(f"ring criteria disagree at degree {g!r}")
        per[g] = {"local_units": units_ok, "products": products_ok}
        if failure is None and not units_ok:
            failure = (g, "local_units")
    return AlgebraReport(failure is None, degrees, per, failure)


def regrade_algebra(A: GradedAlgebra, sub: Subgroup) -> GradedAlgebra:
    Q = QuotientGroup(A.group, sub)
    return GradedAlgebra(A.ring, Q, A.basis, {b: Q.project(g) for b, g in A.deg.items()},
                         A.table, A.local_units)


def restrict_algebra(A: GradedAlgebra, sub: Subgroup) -> GradedAlgebra:
    """A_Omega, the sum of the components with degree in Omega."""
    keep = tuple(b for b in A.basis if A.deg[b] in sub.members)
    ks = set(keep)
    table = {(i, j): v for (i, j), v in A.table.items() if i in ks and j in ks}
    return GradedAlgebra(A.ring, sub, keep, {b: A.deg[b] for b in keep}, table, A.local_units)


# ---------------------------------------------------------------- inclusion-exclusion

@dataclass(frozen=True)
class IndicatorExpression:
    """Signed sum of convolution products ``1_V * 1_W``."""

    terms: tuple  # (coeff, V, W) with V, W frozensets of morphisms

    def evaluate(self, A: GradedAlgebra) -> dict:
        acc: dict = {}
        for coeff, V, W in self.terms:
            add_into(A.ring, acc, A.mul({v: 1 for v in V}, {w: 1 for w in W}), coeff)
        return acc

    def to_list(self):
        return [{"coeff": c, "V": sorted(map(str, V)), "W": sorted(map(str, W))}
                for c, V, W in self.terms]

    def __str__(self):
        parts = []
        for c, V, W in self.terms:
            sv = "{" + ", ".join(sorted(map(str, V))) + "}"
            sw = "{" + ", ".join(sorted(map(str, W))) + "}"
            parts.append(f"{'+' if c > 0 else '-'} {abs(c) if abs(c) != 1 else ''}({sv}, {sw})")
        return " ".join(parts)


def inclusion_exclusion_factorization(G: FiniteGradedGroupoid, U, gamma, delta) -> IndicatorExpression:
    """Write 1_U as a signed sum of products 1_V * 1_W with V in G_gamma, W in G_delta.

    Each u in U is factored as u = pq with p of degree gamma (least p first);
    the cover {V_u W_u} of U is expanded by inclusion-exclusion and every
    intersection I with leading index i is rewritten as (I W_i^-1) * W_i.
    """
    grp = G.group
    gamma, delta = grp.coerce(gamma), grp.coerce(delta)
    U = sorted(set(U), key=key)
    unknown = [u for u in U if u not in G.deg]
    if unknown:
        raise DomainError(f"{unknown[0]!r} is not a morphism")
    if not G.is_bisection(U):
        raise DomainError("U is not a bisection")
    target = grp.op(gamma, delta)
    for u in U:
        if G.deg[u] != target:
            raise DomainError(f"{u!r} has degree {grp.format(G.deg[u])}, expected {grp.format(target)}")
    cover = []
    g_part = sorted(G.component(gamma), key=key)
    for u in U:
        for p in g_part:
            if G.c[p] == G.c[u]:
                q = G.compose[(G.inverse[p], u)]
                cover.append((frozenset([p]), frozenset([q])))
                break
        else:
            raise NotStronglyGradedError(
                f"{u!r} has no factorisation through degrees {grp.format(gamma)}, {grp.format(delta)}",
                u)
    sets = [frozenset(G.product(V, W)) for V, W in cover]
    terms = []

    def walk(start, chosen, inter):
        for i in range(start, len(sets)):
            nxt = sets[i] if inter is None else inter & sets[i]
            if not nxt:
                continue
            idx = chosen + [i]
            W = cover[idx[0]][1]
            winv = frozenset(G.inverse[w] for w in W)
            V = frozenset(G.product(nxt, winv))
            terms.append(((-1) ** (len(idx) - 1), V, W))
            walk(i + 1, idx, nxt)

    walk(0, [], None)
    return IndicatorExpression(tuple(terms))


# ---------------------------------------------------------------- Dade functors

@dataclass(frozen=True, eq=False)
class GradedModule:
    """Right module over a graded algebra, on a homogeneous basis."""

    algebra: GradedAlgebra
    basis: tuple
    deg: dict
    action: dict  # (m, a) -> sparse vector over basis

    def act(self, m: dict, a: dict) -> dict:
        acc: dict = {}
        for i, x in m.items():
            for j, y in a.items():
                v = self.action.get((i, j))
                if v:
                    add_into(self.algebra.ring, acc, v, x * y)
        return acc

    def component(self, g) -> list:
        return [b for b in self.basis if self.deg[b] == g]


@dataclass(frozen=True, eq=False)
class EpsModule:
    """Right module over A_e."""

    algebra: GradedAlgebra
    basis: tuple
    action: dict  # (n, x) -> sparse vector, x in A_e


def regular_module(A: GradedAlgebra, alpha=None) -> GradedModule:
    """The shifted module A(alpha): an element of A-degree g sits in degree alpha^-1 g."""
    grp = A.group
    alpha = grp.identity if alpha is None else grp.coerce(alpha)
    ai = grp.inv(alpha)
    return GradedModule(A, A.basis, {b: grp.op(ai, A.deg[b]) for b in A.basis}, A.table)


def _need_field(A: GradedAlgebra):
    if not A.ring.is_field:
        raise DomainError(f"Dade functors need a field, got {A.ring}")


def dade_restriction(M: GradedModule) -> EpsModule:
    A = M.algebra
    _need_field(A)
    eps = A.group.identity
    nb = tuple(M.component(eps))
    ae = A.component(eps)
    return EpsModule(A, nb, {(n, x): M.action[(n, x)] for n in nb for x in ae if (n, x) in M.action})


@dataclass(frozen=True)
class _TensorDegree:
    relations: EchelonBasis
    free: list       # all coordinates (n, a)
    basis: list      # coordinates not eliminated by relations


def _tensor_degree(N: EpsModule, g) -> _TensorDegree:
    A = N.algebra
    ring = A.ring
    ag = A.component(g)
    ae = A.component(A.group.identity)
    rel = EchelonBasis(ring)
    for n in N.basis:
        for x in ae:
            nx = N.action.get((n, x), {})
            for a in ag:
                r: dict = {}
                for n2, c in nx.items():
                    add_into(ring, r, {(n2, a): 1}, c)
                for a2, c in A.mul_basis(x, a).items():
                    add_into(ring, r, {(n, a2): 1}, -c)
                rel.add(r)
    free = [(n, a) for n in N.basis for a in ag]
    piv = rel.pivots()
    return _TensorDegree(rel, free, [f for f in free if f not in piv])


def dade_induction(N: EpsModule, degrees=None) -> GradedModule:
    """N tensor_{A_e} A, graded by (N tensor A)_g = N tensor A_g, as a quotient of the free space."""
    A = N.algebra
    _need_field(A)
    grp = A.group
    if degrees is None:
        degrees = default_window(grp, A.occurring_degrees())
    parts = {grp.coerce(g): _tensor_degree(N, grp.coerce(g)) for g in degrees}
    basis, deg, action = [], {}, {}
    for g, td in parts.items():
        for f in td.basis:
            basis.append(f)
            deg[f] = g
    for (n, a) in basis:
        for b in A.basis:
            prod = A.mul_basis(a, b)
            if not prod:
                continue
            h = grp.op(deg[(n, a)], A.deg[b])
            if h not in parts:
                continue
            v: dict = {}
            for a2, c in prod.items():
                add_into(A.ring, v, {(n, a2): 1}, c)
            v = parts[h].relations.reduce(v)
            if v:
                action[((n, a), b)] = v
    return GradedModule(A, tuple(basis), deg, action)


@dataclass(frozen=True)
class NaturalMapReport:
    iso: bool
    per_degree: dict  # g -> (domain dim, codomain dim, rank)
    eta_iso: bool

    def to_dict(self, fmt=str):
        return {"iso": self.iso, "eta_iso": self.eta_iso,
                "per_degree": {fmt(g): {"domain": d, "codomain": c, "rank": r}
                               for g, (d, c, r) in self.per_degree.items()}}


def dade_natural_map(M: GradedModule, degrees=None) -> NaturalMapReport:
    """m tensor a -> ma from I(M) tensor_{A_e} A to M, tested for bijectivity per degree.

    Also builds eta: N tensor A_e -> N for N = M_e and checks it is bijective.
    """
    A = M.algebra
    _need_field(A)
    grp = A.group
    if degrees is None:
        degrees = default_window(grp, sorted(set(M.deg.values())))
    N = dade_restriction(M)
    per = {}
    iso = True
    for g in sorted({grp.coerce(g) for g in degrees}):
        td = _tensor_degree(N, g)
        image = EchelonBasis(A.ring)
        for (n, a) in td.basis:
            image.add(M.action.get((n, a), {}))
        for r in td.relations.rows.values():
            # relations must die under the map
            img: dict = {}
            for (n, a), c in r.items():
                add_into(A.ring, img, M.action.get((n, a), {}), c)
            if img:
                raise InternalInconsistencyError("natural map is not well defined on the tensor product")
        dom, cod = len(td.basis), len(M.component(g))
        per[g] = (dom, cod, image.rank)
        iso = iso and dom == cod == image.rank
    eps = grp.identity
    if eps in per:
        eta_iso = per[eps][0] == per[eps][1] == per[eps][2]
    else:
        d, c, r = _eta_dims(M, N)
        eta_iso = d == c == r
    if not eta_iso:
        raise InternalInconsistencyError("eta: N tensor A_e -> N is not bijective")
    return NaturalMapReport(iso, per, eta_iso)


def _eta_dims(M, N):
    A = M.algebra
    td = _tensor_degree(N, A.group.identity)
    image = EchelonBasis(A.ring)
    for (n, a) in td.basis:
        image.add(N.action.get((n, a), {}))
    return len(td.basis), len(N.basis), image.rank


def dade_probe(A: GradedAlgebra, degrees=None) -> dict:
    """Natural-map bijectivity on every shifted regular module A(alpha) in the window."""
    grp = A.group
    if degrees is None:
        degrees = default_window(grp, A.occurring_degrees())
    out = {}
    for alpha in sorted({grp.coerce(g) for g in degrees}):
        out[alpha] = dade_natural_map(regular_module(A, alpha), degrees).iso
    return out
