"""Finite graded groupoids with the discrete topology.

A groupoid is given by explicit tables. Composition ``xy`` is defined when
``d(x) == c(y)``; units are the morphisms ``u`` with ``d(u) == c(u) == u``.
Every subset is compact open, and a bisection is any subset on which both
``d`` and ``c`` are injective.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import (DomainError, InternalInconsistencyError, UnsupportedFeatureError,
                     ValidationError)
from .graph import Graph, Path, shift
from .groups import AbelianGroup, QuotientGroup, Subgroup


def key(x):
    """Deterministic order for morphism identifiers of mixed types."""
    return (type(x).__name__, repr(x))


@dataclass(frozen=True)
class FiniteGradedGroupoid:
    group: object
    morphisms: tuple
    d: dict
    c: dict
    compose: dict
    inverse: dict
    deg: dict

    def __hash__(self):
        return id(self)

    @property
    def units(self) -> list:
        return sorted((x for x in self.morphisms if self.d.get(x) == x and self.c.get(x) == x), key=key)

    def component(self, gamma) -> list:
        gamma = self.group.coerce(gamma)
        return [x for x in self.morphisms if self.deg[x] == gamma]

    def mul(self, x, y):
        """``xy`` or None when not composable."""
        return self.compose.get((x, y))

    def product(self, xs, ys) -> set:
        out = set()
        for x in xs:
            for y in ys:
                z = self.compose.get((x, y))
                if z is not None:
                    out.add(z)
        return out

    def occurring_degrees(self) -> list:
        return sorted(set(self.deg.values()))

    def is_bisection(self, xs) -> bool:
        xs = list(xs)
        return (len({self.d[x] for x in xs}) == len(xs)
                and len({self.c[x] for x in xs}) == len(xs))


def groupoid_from_group(group: AbelianGroup, grading=None) -> FiniteGradedGroupoid:
    """A finite group as a one-unit groupoid, graded by ``grading`` (identity by default)."""
    elems = group.elements()
    e = group.identity
    grading = grading or (lambda x: x)
    return FiniteGradedGroupoid(
        group, tuple(elems), {x: e for x in elems}, {x: e for x in elems},
        {(x, y): group.op(x, y) for x in elems for y in elems},
        {x: group.inv(x) for x in elems}, {x: grading(x) for x in elems})


def discrete_groupoid(group, units) -> FiniteGradedGroupoid:
    units = tuple(units)
    e = group.identity
    return FiniteGradedGroupoid(group, units, {u: u for u in units}, {u: u for u in units},
                                {(u, u): u for u in units}, {u: u for u in units},
                                {u: e for u in units})


# ---------------------------------------------------------------- validation

@dataclass(frozen=True)
class GroupoidReport:
    valid: bool
    violation: str | None = None
    triple: tuple | None = None

    def to_dict(self):
        return {"valid": self.valid, "violation": self.violation,
                "triple": None if self.triple is None else [repr(t) for t in self.triple]}


def validate_groupoid(G: FiniteGradedGroupoid) -> GroupoidReport:
    """Check the groupoid axioms and the grading functor; report the first violation."""
    ms = list(G.morphisms)
    mset = set(ms)
    if len(mset) != len(ms):
        return GroupoidReport(False, "duplicate morphism identifier")
    for x in ms:
        for name, table in (("d", G.d), ("c", G.c), ("inverse", G.inverse), ("deg", G.deg)):
            if x not in table:
                return GroupoidReport(False, f"{name} undefined", (x,))
        if G.d[x] not in mset or G.c[x] not in mset:
            return GroupoidReport(False, "d or c is not a morphism", (x,))
        for u in (G.d[x], G.c[x]):
            if G.d[u] != u or G.c[u] != u:
                return GroupoidReport(False, "d or c is not a unit", (x, u))
        if not G.group.contains(G.deg[x]):
            return GroupoidReport(False, "degree outside the grading group", (x,))
    for (x, y), z in G.compose.items():
        if x not in mset or y not in mset or z not in mset:
            return GroupoidReport(False, "composition table mentions an unknown morphism", (x, y, z))
    for x in ms:
        for y in ms:
            z = G.compose.get((x, y))
            composable = G.d[x] == G.c[y]
            if composable and z is None:
                return GroupoidReport(False, "composable pair has no product", (x, y))
            if not composable and z is not None:
                return GroupoidReport(False, "product defined on a non-composable pair", (x, y, z))
            if z is None:
                continue
            if G.d[z] != G.d[y] or G.c[z] != G.c[x]:
                return GroupoidReport(False, "product has wrong domain or codomain", (x, y, z))
            if G.deg[z] != G.group.op(G.deg[x], G.deg[y]):
                return GroupoidReport(False, "deg(xy) != deg(x)deg(y)", (x, y, z))
    for x in ms:
        if G.compose[(x, G.d[x])] != x or G.compose[(G.c[x], x)] != x:
            return GroupoidReport(False, "unit is not neutral", (x,))
        xi = G.inverse[x]
        if xi not in mset:
            return GroupoidReport(False, "inverse is not a morphism", (x, xi))
        if G.compose.get((x, xi)) != G.c[x] or G.compose.get((xi, x)) != G.d[x]:
            return GroupoidReport(False, "inverse law fails", (x, xi))
    for u in G.units:
        if G.deg[u] != G.group.identity:
            return GroupoidReport(False, "unit has nonzero degree", (u,))
    for x, y, z in itertools.product(ms, repeat=3):
        xy = G.compose.get((x, y))
        if xy is None:
            continue
        yz = G.compose.get((y, z))
        if yz is None:
            continue
        if G.compose[(xy, z)] != G.compose[(x, yz)]:
            return GroupoidReport(False, "composition is not associative", (x, y, z))
    return GroupoidReport(True)


def require_valid(G: FiniteGradedGroupoid) -> None:
    rep = validate_groupoid(G)
    if not rep.valid:
        raise ValidationError(f"invalid groupoid: {rep.violation} at {rep.triple!r}")


# ---------------------------------------------------------------- strong grading

CRITERIA = ("products", "inverse_products", "domains", "codomains")


@dataclass(frozen=True)
class StrongGradingReport:
    answer: bool
    degrees: tuple
    per_degree: dict  # gamma -> {criterion: bool}
    failure: tuple | None = None  # (gamma, criterion)

    def to_dict(self, fmt=str):
        return {"answer": "yes" if self.answer else "no",
                "degrees": [fmt(g) for g in self.degrees],
                "per_degree": {fmt(g): {k: "pass" if v else "fail" for k, v in crit.items()}
                               for g, crit in self.per_degree.items()},
                "failure": None if self.failure is None else [fmt(self.failure[0]), self.failure[1]]}


def default_window(group, occurring) -> list:
    """Whole group when finite; otherwise the box around occurring degrees plus one step."""
    if group.is_finite:
        return group.elements()
    radius = 1 + max((abs(c) for g in occurring for c, m in zip(g, group.moduli) if not m), default=0)
    return group.window(radius)


def strong_grading_check(G: FiniteGradedGroupoid, degrees=None) -> StrongGradingReport:
    """Evaluate all four criteria for each requested degree and assert they agree.

    For a finite groupoid the four conditions agree degree by degree: (1), (2)
    and (4) are equivalent via ``z = x (x^-1 z)``, (3) at gamma is (4) at
    gamma^-1, and the set of degrees satisfying (3) is the stabiliser of a
    finite set of cosets, hence a subgroup.
    """
    grp = G.group
    if degrees is None:
        degrees = default_window(grp, G.occurring_degrees())
    degrees = tuple(sorted({grp.coerce(g) for g in degrees}))
    comp: dict = {}

    def part(g):
        if g not in comp:
            comp[g] = G.component(g)
        return comp[g]

    units = set(G.units)
    eps = grp.identity
    per = {}
    failure = None
    for g in degrees:
        gi = grp.inv(g)
        c1 = all(G.product(part(g), part(dl)) == set(part(grp.op(g, dl))) for dl in degrees)
        c2 = G.product(part(g), part(gi)) == set(part(eps))
        c3 = {G.d[x] for x in part(g)} == units
        c4 = {G.c[x] for x in part(g)} == units
        crit = dict(zip(CRITERIA, (c1, c2, c3, c4)))
        if len(set(crit.values())) != 1:
            raise InternalInconsistencyError(f"criteria disagree at degree {g!r}: {crit}")
        per[g] = crit
        if failure is None and not c3:
            failure = (g, "domains")
    return StrongGradingReport(failure is None, degrees, per, failure)


def regrade_quotient(G: FiniteGradedGroupoid, sub: Subgroup) -> FiniteGradedGroupoid:
    """Same groupoid, graded by Gamma/Omega."""
    if sub.parent != G.group:
        raise DomainError("subgroup is not a subgroup of the grading group")
    Q = QuotientGroup(G.group, sub)
    return FiniteGradedGroupoid(Q, G.morphisms, G.d, G.c, G.compose, G.inverse,
                                {x: Q.project(g) for x, g in G.deg.items()})


def restrict_subgroupoid(G: FiniteGradedGroupoid, sub: Subgroup) -> FiniteGradedGroupoid:
    """The subgroupoid of morphisms with degree in Omega, graded by Omega."""
    if sub.parent != G.group:
        raise DomainError("subgroup is not a subgroup of the grading group")
    keep = tuple(x for x in G.morphisms if G.deg[x] in sub.members)
    ks = set(keep)
    return FiniteGradedGroupoid(
        sub, keep, {x: G.d[x] for x in keep}, {x: G.c[x] for x in keep},
        {(x, y): z for (x, y), z in G.compose.items() if x in ks and y in ks},
        {x: G.inverse[x] for x in keep}, {x: G.deg[x] for x in keep})


# ---------------------------------------------------------------- cylinder bisections

@dataclass(frozen=True)
class CylinderBisection:
    """Z(alpha, beta) = {(alpha z, |alpha| - |beta|, beta z)} in a boundary path groupoid."""

    alpha: Path
    beta: Path
    excluded: frozenset = frozenset()

    def __post_init__(self):
        if self.alpha.range != self.beta.range:
            raise DomainError("Z(alpha, beta) needs r(alpha) == r(beta)")
        object.__setattr__(self, "excluded", frozenset(self.excluded))

    @property
    def degree(self) -> int:
        return len(self.alpha) - len(self.beta)

    def inverse(self) -> "CylinderBisection":
        if self.excluded:
            raise UnsupportedFeatureError("inverse of a cylinder with excluded extensions")
        return CylinderBisection(self.beta, self.alpha)

    def __str__(self):
        return f"Z({self.alpha}, {self.beta})"


def compose_bisections(a: CylinderBisection, b: CylinderBisection):
    """Set product of two cylinders; None when empty."""
    if a.excluded or b.excluded:
        raise UnsupportedFeatureError("composition with excluded extensions is not supported")
    if a.beta.is_prefix_of(b.alpha):
        return CylinderBisection(a.alpha + shift(b.alpha, len(a.beta)), b.beta)
    if b.alpha.is_prefix_of(a.beta):
        return CylinderBisection(a.alpha, b.beta + shift(a.beta, len(b.alpha)))
    return None


# ---------------------------------------------------------------- partial actions

@dataclass(frozen=True)
class PartialAction:
    group: object
    space: tuple
    domains: dict  # gamma -> frozenset X_gamma
    maps: dict     # gamma -> dict, theta_gamma : X_{gamma^-1} -> X_gamma

    def domain(self, g):
        return frozenset(self.domains.get(g, ()))

    def theta(self, g):
        return self.maps.get(g, {})


def validate_partial_action(p: PartialAction) -> None:
    """(P1) bijectivity and (P2) identity/extension; raises ValidationError naming the degrees."""
    grp = p.group
    X = set(p.space)
    if len(X) != len(p.space):
        raise ValidationError("duplicate point in the space")
    elems = grp.elements()
    for g in list(p.domains) + list(p.maps):
        if not grp.contains(g):
            raise ValidationError(f"{g!r} is not a group element")
    for g in elems:
        dom, cod, th = p.domain(grp.inv(g)), p.domain(g), p.theta(g)
        if not dom <= X or not cod <= X:
            raise ValidationError(f"domain of gamma={grp.format(g)} is not inside the space")
        if set(th) != set(dom) or set(th.values()) != set(cod) or len(set(th.values())) != len(th):
            raise ValidationError(f"(P1): theta at gamma={grp.format(g)} is not a bijection "
                                  f"X_(gamma^-1) -> X_gamma")
    e = grp.identity
    if p.domain(e) != X or any(p.theta(e).get(x) != x for x in X):
        raise ValidationError("(P2): X_e must be the whole space and theta_e the identity")
    for g in elems:
        for h in elems:
            gh = grp.op(g, h)
            tg, th, tgh = p.theta(g), p.theta(h), p.theta(gh)
            for x, y in th.items():
                if y in tg and tgh.get(x) != tg[y]:
                    raise ValidationError(f"(P2): theta at gamma={grp.format(g)}, "
                                          f"delta={grp.format(h)} does not extend to gamma*delta")


def is_global(p: PartialAction) -> bool:
    X = frozenset(p.space)
    return all(p.domain(g) == X for g in p.group.elements())


def transformation_groupoid(p: PartialAction) -> FiniteGradedGroupoid:
    """Morphisms (x, gamma, y) with y in X_(gamma^-1) and x = theta_gamma(y)."""
    validate_partial_action(p)
    grp = p.group
    e = grp.identity
    ms = []
    for g in grp.elements():
        for y, x in sorted(p.theta(g).items(), key=lambda kv: key(kv[0])):
            ms.append((x, g, y))
    d = {m: (m[2], e, m[2]) for m in ms}
    c = {m: (m[0], e, m[0]) for m in ms}
    by_target: dict = {}
    for m in ms:
        by_target.setdefault(m[0], []).append(m)
    compose = {}
    for m1 in ms:
        for m2 in by_target.get(m1[2], ()):
            compose[(m1, m2)] = (m1[0], grp.op(m1[1], m2[1]), m2[2])
    inverse = {m: (m[2], grp.inv(m[1]), m[0]) for m in ms}
    return FiniteGradedGroupoid(grp, tuple(ms), d, c, compose, inverse, {m: m[1] for m in ms})
