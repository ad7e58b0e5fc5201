from __future__ import annotations

import dataclasses
import itertools
import random

import pytest

from stronggrade.errors import DomainError, UnsupportedFeatureError, ValidationError
from stronggrade.graph import Edge, Graph
from stronggrade.groupoid import (CylinderBisection, PartialAction, compose_bisections,
                                  discrete_groupoid, groupoid_from_group, is_global,
                                  regrade_quotient, restrict_subgroupoid, strong_grading_check,
                                  transformation_groupoid, validate_groupoid,
                                  validate_partial_action)
from stronggrade.groups import AbelianGroup, QuotientGroup, Subgroup, parse_group, subgroups

from .corpus import graded_groupoids, partial_actions
from .oracles import lasso_drop, lasso_prefix, lasso_prepend, lassos_from

Z2, Z4 = AbelianGroup((2,)), AbelianGroup((4,))


def brute_strong(G) -> bool:
    """G_g G_h == G_gh for every pair of group elements, straight from the table."""
    grp = G.group
    comp = {g: {x for x in G.morphisms if G.deg[x] == g} for g in grp.elements()}
    for g, h in itertools.product(grp.elements(), repeat=2):
        prod = {G.compose[(x, y)] for x in comp[g] for y in comp[h] if (x, y) in G.compose}
        if prod != comp[grp.op(g, h)]:
            return False
    return True


def swap_action():
    e, s = (0,), (1,)
    return PartialAction(Z2, ("a", "b"), {e: frozenset("ab"), s: frozenset("ab")},
                         {e: {"a": "a", "b": "b"}, s: {"a": "b", "b": "a"}})


def test_groups():
    G = parse_group("Z/2xZ")
    assert G.op((1, 3), (1, -1)) == (0, 2)
    assert G.format((1, -2)) == "(1,-2)"
    assert parse_group("Z^2").moduli == (0, 0)
    assert sorted(len(s.members) for s in subgroups(Z4)) == [1, 2, 4]
    Q = QuotientGroup(Z4, Subgroup(Z4, frozenset({(0,), (2,)})))
    assert Q.project((3,)) == (1,)
    with pytest.raises(ValidationError):
        parse_group("Q")
    assert AbelianGroup((1,)).elements() == [(0,)]


def test_validation_examples():
    assert validate_groupoid(groupoid_from_group(Z2)).valid
    assert validate_groupoid(discrete_groupoid(Z2, ["u", "w"])).valid
    G = groupoid_from_group(Z2)
    bad = dataclasses.replace(G, deg={(0,): (0,), (1,): (1,)},
                              compose={**G.compose, ((1,), (1,)): (1,)})
    rep = validate_groupoid(bad)
    assert not rep.valid and rep.triple is not None


def test_functor_violation_reports_triple():
    G = groupoid_from_group(Z4, grading=lambda x: ((x[0] * 2) % 4,))
    assert validate_groupoid(G).valid
    G2 = groupoid_from_group(Z4, grading=lambda x: (1,) if x == (1,) else (0,))
    rep = validate_groupoid(G2)
    assert not rep.valid
    assert rep.violation == "deg(xy) != deg(x)deg(y)"
    x, y, z = rep.triple
    assert G2.deg[z] != Z4.op(G2.deg[x], G2.deg[y])


def test_strong_grading_examples():
    assert strong_grading_check(groupoid_from_group(Z2)).answer
    rep = strong_grading_check(discrete_groupoid(Z2, ["u", "w"]))
    assert not rep.answer and rep.failure == ((1,), "domains")
    assert strong_grading_check(transformation_groupoid(swap_action())).answer


def test_four_criteria_and_brute_force_agree():
    for mod in (2, 3, 4):
        for G in graded_groupoids(AbelianGroup((mod,)), 5):
            rep = strong_grading_check(G)
            for crit in rep.per_degree.values():
                assert len(set(crit.values())) == 1
            assert rep.answer == brute_strong(G)


def test_infinite_group_window():
    Z = parse_group("Z")
    G = groupoid_from_group(AbelianGroup((2,)))
    G = dataclasses.replace(G, group=Z, deg={(0,): (0,), (1,): (0,)})
    rep = strong_grading_check(G)
    assert rep.degrees == ((-1,), (0,), (1,))
    assert not rep.answer


def test_quotient_and_restriction_examples():
    G = groupoid_from_group(Z4)
    omega = Subgroup(Z4, frozenset({(0,), (2,)}))
    Q = regrade_quotient(G, omega)
    R = restrict_subgroupoid(G, omega)
    assert sorted(R.morphisms) == [(0,), (2,)]
    assert validate_groupoid(R).valid and validate_groupoid(Q).valid
    assert strong_grading_check(G).answer == (strong_grading_check(Q).answer
                                              and strong_grading_check(R).answer)
    whole = Subgroup(Z4, frozenset(Z4.elements()))
    assert strong_grading_check(regrade_quotient(G, whole)).answer


def test_partial_action_examples():
    p = swap_action()
    T = transformation_groupoid(p)
    assert len(T.morphisms) == 4 and is_global(p)
    e, s = (0,), (1,)
    q = PartialAction(Z2, ("a", "b"), {e: frozenset("ab"), s: frozenset("a")},
                      {e: {"a": "a", "b": "b"}, s: {"a": "a"}})
    validate_partial_action(q)
    assert not is_global(q)
    assert not strong_grading_check(transformation_groupoid(q)).answer
    triv = AbelianGroup((1,))
    t = PartialAction(triv, ("a",), {(0,): frozenset("a")}, {(0,): {"a": "a"}})
    assert is_global(t) and strong_grading_check(transformation_groupoid(t)).answer


def test_partial_action_violations():
    e, s = (0,), (1,)
    p = PartialAction(Z2, ("a", "b"), {e: frozenset("ab"), s: frozenset("ab")},
                      {e: {"a": "a", "b": "b"}, s: {"a": "b", "b": "b"}})
    with pytest.raises(ValidationError, match="P1"):
        validate_partial_action(p)
    Z3 = AbelianGroup((3,))
    # theta_1 theta_1 sends a to c, but theta_2 is not defined at a
    p = PartialAction(Z3, ("a", "b", "c"),
                      {(0,): frozenset("abc"), (1,): frozenset("bc"), (2,): frozenset("ab")},
                      {(0,): {"a": "a", "b": "b", "c": "c"}, (1,): {"a": "b", "b": "c"},
                       (2,): {"b": "a", "c": "b"}})
    with pytest.raises(ValidationError, match="P2"):
        validate_partial_action(p)


def test_partial_action_enumeration_counts():
    # brute force by the validator; counts from the corpus generator
    assert [sum(1 for _ in partial_actions(Z2, "abc"[:n])) for n in range(4)] == [1, 2, 5, 14]


def test_transformation_groupoids_are_valid():
    for p in partial_actions(AbelianGroup((3,)), ("a", "b")):
        assert validate_groupoid(transformation_groupoid(p)).valid


# ---------------------------------------------------------------- cylinders

ROSE = Graph(("v",), (Edge("e", "v", "v"), Edge("f", "v", "v")))
TWO = Graph(("u", "w"), (Edge("a", "u", "w"), Edge("b", "w", "u"), Edge("c", "u", "u")))


def cylinder_sample(g, Z: CylinderBisection, lassos):
    al, be = Z.alpha.edges, Z.beta.edges
    return {(lasso_prepend(al, z), Z.degree, lasso_prepend(be, z)) for z in lassos[Z.alpha.range]}


def in_cylinder(x, k, y, Z: CylinderBisection) -> bool:
    al, be = Z.alpha.edges, Z.beta.edges
    return (lasso_prefix(x, len(al)) == al and lasso_prefix(y, len(be)) == be
            and k == Z.degree and lasso_drop(x, len(al)) == lasso_drop(y, len(be)))


def _all_paths(g, n):
    out = [g.path([], start=v) for v in g.vertices]
    layer = list(out)
    for _ in range(n):
        layer = [p + g.path([e.id]) for p in layer for e in g.out_edges(p.range)]
        out += layer
    return out


@pytest.mark.parametrize("g", [ROSE, TWO])
def test_cylinder_composition_against_lassos(g):
    lassos = {v: lassos_from(g, v, 3, 3) for v in g.vertices}
    short = {v: {z for z in zs if len(z[0]) <= 1} for v, zs in lassos.items()}
    paths = _all_paths(g, 2)
    rng = random.Random(5)
    cyls = [CylinderBisection(a, b) for a in paths for b in paths if a.range == b.range]
    for A, B in rng.sample(list(itertools.product(cyls, cyls)), 150):
        SA, SB = cylinder_sample(g, A, lassos), cylinder_sample(g, B, lassos)
        prod = {(x, k + l, z) for (x, k, y) in SA for (y2, l, z) in SB if y == y2}
        C = compose_bisections(A, B)
        if C is None:
            assert not prod
            continue
        assert all(in_cylinder(x, k, z, C) for x, k, z in prod)
        # every short element of C decomposes through the samples
        assert cylinder_sample(g, C, short) <= prod


def test_cylinder_examples():
    v = ROSE.path([], start="v")
    e, f = ROSE.path(["e"]), ROSE.path(["f"])
    Zvv = CylinderBisection(v, v)
    assert compose_bisections(Zvv, Zvv) == Zvv
    C = compose_bisections(CylinderBisection(e, v), CylinderBisection(v, e))
    assert C == CylinderBisection(e, e) and C.degree == 0
    assert compose_bisections(CylinderBisection(v, e), CylinderBisection(f, v)) is None
    assert CylinderBisection(e, v).inverse() == CylinderBisection(v, e)
    with pytest.raises(UnsupportedFeatureError):
        compose_bisections(CylinderBisection(v, v, {e}), Zvv)


def test_cylinder_associativity():
    paths = _all_paths(TWO, 2)
    rng = random.Random(11)
    cyls = [CylinderBisection(a, b) for a in paths for b in paths if a.range == b.range]
    for _ in range(300):
        A, B, C = rng.choice(cyls), rng.choice(cyls), rng.choice(cyls)
        AB = compose_bisections(A, B)
        BC = compose_bisections(B, C)
        left = None if AB is None else compose_bisections(AB, C)
        right = None if BC is None else compose_bisections(A, BC)
        assert left == right
