from itertools import combinations, islice, product

import pytest

from spheretrack.arrangement import (FIRST, SECOND, Arrangement, CrossingGraph,
                                     band_surgery_candidates, dehn_twist, intersection_number,
                                     is_isotopic, least_representative, minimal_position,
                                     neighborhood_boundary, punctured_intersection,
                                     representative_rank, vertex_slides)
from spheretrack.errors import InvalidCurveError, PreconditionError
from spheretrack.splitting import dual_pairs, enumerate_disks, haken_circle
from spheretrack.surface import (EDGE_COUNT, NormalCurve, algebraic_intersection, edge_pushoff,
                                 homology_vector, is_separating)

from conftest import seed_budget


@pytest.fixture(scope="module")
def loops():
    return {name: edge_pushoff(edge) for edge, name in enumerate("abcd")}


def test_intersections_of_edge_pushoffs(loops):
    assert intersection_number(loops["a"], loops["b"]) == 1
    assert intersection_number(loops["c"], loops["d"]) == 1
    assert intersection_number(loops["a"], loops["c"]) == 0
    assert intersection_number(loops["b"], loops["d"]) == 0


def test_intersection_is_symmetric(l21):
    assert intersection_number(l21.alpha1, l21.beta1) == intersection_number(l21.beta1, l21.alpha1) == 2


def test_intersection_requires_essential_curves(loops):
    with pytest.raises(InvalidCurveError):
        intersection_number(NormalCurve((2,) * EDGE_COUNT), loops["a"])
    with pytest.raises(InvalidCurveError):
        intersection_number(loops["a"] + loops["c"], loops["b"])


def test_punctured_count_bounds_the_closed_count(l31):
    assert punctured_intersection(l31.alpha1, l31.beta1) >= intersection_number(l31.alpha1, l31.beta1)


def test_arrangement_sequences_visit_every_crossing(l21):
    arrangement = Arrangement(l21.alpha1, l21.beta1)
    ids = list(range(len(arrangement.crossings)))
    assert sorted(arrangement.sequence(FIRST)) == ids
    assert sorted(arrangement.sequence(SECOND)) == ids
    assert len(arrangement.crossings) >= 2


def test_minimal_position_keeps_the_intersection_number(l31):
    _, _, arrangement, survivors = minimal_position(l31.alpha1, l31.beta1)
    assert len(survivors) == 3
    assert all(0 <= cid < len(arrangement.crossings) for cid in survivors)


@pytest.mark.parametrize("power", [1, 2, -1])
def test_twist_meets_the_original_power_times(loops, power):
    twisted = dehn_twist(loops["b"], loops["a"], power)
    assert twisted.is_essential
    assert intersection_number(twisted, loops["b"]) == abs(power)
    assert intersection_number(twisted, loops["a"]) == 1


def test_twist_adds_the_twisting_class(loops):
    twisted = dehn_twist(loops["b"], loops["a"])
    assert tuple(abs(x) for x in homology_vector(twisted)) == (1, 1, 0, 0)


def test_twist_along_a_disjoint_curve_is_the_identity(loops):
    assert dehn_twist(loops["c"], loops["a"], 3) == loops["c"]
    assert dehn_twist(loops["b"], loops["a"], 0) == loops["b"]


def test_inverse_twist_undoes_the_twist(loops):
    there = dehn_twist(loops["b"], loops["a"], 2)
    back = dehn_twist(there, loops["a"], -2)
    assert is_isotopic(back, loops["b"])
    assert not is_isotopic(there, loops["b"])


def test_vertex_slides_are_isotopies(loops):
    slides = vertex_slides(loops["d"])
    assert slides
    for slid in slides[:4]:
        assert slid != loops["d"]
        assert is_isotopic(slid, loops["d"])


def test_band_surgery_needs_two_crossings(loops):
    with pytest.raises(PreconditionError):
        band_surgery_candidates(loops["a"], loops["b"])


def test_band_surgery_lowers_the_crossings(l21):
    for resolved in band_surgery_candidates(l21.alpha1, l21.beta1):
        assert resolved.is_essential
        assert intersection_number(resolved, l21.beta1) < 2


def test_neighborhood_boundary_separates(loops):
    circle = neighborhood_boundary(loops["a"], loops["b"])
    assert circle.is_essential
    assert is_separating(circle)
    assert intersection_number(circle, loops["a"]) == 0
    assert intersection_number(circle, loops["b"]) == 0


def test_neighborhood_boundary_needs_one_crossing(loops):
    with pytest.raises(PreconditionError):
        neighborhood_boundary(loops["a"], loops["c"])


def disk_bigons(graph):
    """Every bigon face of a crossing graph that bounds a disk on the closed surface."""
    found = []
    for dart in sorted(graph.origin):
        other = graph._face_next(dart)
        if graph._face_next(other) != dart or graph.origin[dart] == graph.origin[other]:
            continue
        if graph.label[dart] == graph.label[other] or graph.chi[graph.region[dart]] != 1:
            continue
        found.append((dart, other) if graph.label[dart] == FIRST else (other, dart))
    return found


def copy_graph(graph):
    clone = object.__new__(CrossingGraph)
    clone.arrangement = graph.arrangement
    for name in ("sigma", "twin", "origin", "label", "region", "chi", "has_vertex"):
        setattr(clone, name, dict(getattr(graph, name)))
    return clone


def exhaustive_intersection(c1, c2):
    """Least crossing count over every order in which bigons can be removed."""
    if c1 == c2:
        return 0
    arrangement = Arrangement(c1, c2)
    if not arrangement.crossings:
        return 0
    best, seen = None, set()
    stack = [CrossingGraph(arrangement)]
    while stack:
        graph = stack.pop()
        state = frozenset(graph.origin.values())
        if state in seen:
            continue
        seen.add(state)
        moves = disk_bigons(graph)
        if not moves:
            best = graph.crossing_count if best is None else min(best, graph.crossing_count)
        for move in moves:
            child = copy_graph(graph)
            child.remove_bigon(*move)
            stack.append(child)
    return best


def boundary_pairs(diagram, max_weight, limit=None):
    v = [d.boundary for d in enumerate_disks(diagram, "V", max_weight)][:limit]
    w = [d.boundary for d in enumerate_disks(diagram, "W", max_weight)][:limit]
    return list(product(v, w)) + list(combinations(v, 2))


def test_intersection_matches_exhaustive_bigon_removal(l21):
    for c1, c2 in boundary_pairs(l21, seed_budget(l21), limit=6):
        assert intersection_number(c1, c2) == exhaustive_intersection(c1, c2), (c1, c2)


@pytest.mark.slow
def test_intersection_matches_exhaustive_bigon_removal_at_budget_eight(l21):
    for c1, c2 in boundary_pairs(l21, 8, limit=25):
        assert intersection_number(c1, c2) == exhaustive_intersection(c1, c2), (c1, c2)


def test_algebraic_count_bounds_the_geometric_count(l21):
    for c1, c2 in boundary_pairs(l21, seed_budget(l21), limit=12):
        geometric, algebraic = intersection_number(c1, c2), abs(algebraic_intersection(c1, c2))
        assert algebraic <= geometric
        assert (geometric - algebraic) % 2 == 0


def twist_triples(diagram, max_weight, count):
    curves = [edge_pushoff(e) for e in range(4)]
    curves += [d.boundary for side in "VW" for d in enumerate_disks(diagram, side, max_weight)]
    triples = ((c1, c2, along, power)
               for (c1, c2), along, power in product(combinations(curves, 2), curves[:4], (1, -1))
               if c1 != along and c2 != along)
    return list(islice(triples, count))


def test_twists_keep_intersection_numbers(l21):
    for c1, c2, along, power in twist_triples(l21, seed_budget(l21), 12):
        before = intersection_number(c1, c2)
        after = intersection_number(dehn_twist(c1, along, power), dehn_twist(c2, along, power))
        assert after == before, (c1, c2, along, power)


@pytest.mark.slow
def test_twists_keep_intersection_numbers_on_many_triples(l21):
    triples = twist_triples(l21, seed_budget(l21) + 1, 120)
    assert len(triples) >= 100
    for c1, c2, along, power in triples:
        before = intersection_number(c1, c2)
        after = intersection_number(dehn_twist(c1, along, power), dehn_twist(c2, along, power))
        assert after == before, (c1, c2, along, power)


def test_twist_results_are_least_representatives(loops):
    twisted = dehn_twist(loops["b"], loops["a"], 2)
    assert least_representative(twisted) == twisted
    for slid in vertex_slides(twisted):
        assert representative_rank(slid) >= representative_rank(twisted)


def test_least_representative_never_raises_the_rank(loops):
    for slid in vertex_slides(loops["d"])[:4]:
        least = least_representative(slid)
        assert representative_rank(least) <= representative_rank(slid)
        assert is_isotopic(least, loops["d"])


def test_neighborhood_boundary_is_a_least_representative(loops):
    circle = neighborhood_boundary(loops["c"], loops["d"])
    assert least_representative(circle) == circle


def test_separating_circles_meet_every_basis_curve_evenly(l21):
    basis = [edge_pushoff(e) for e in range(4)]
    for pair in dual_pairs(l21, seed_budget(l21)):
        circle = haken_circle(pair)
        assert is_separating(circle)
        for loop in basis:
            assert intersection_number(circle, loop) % 2 == 0, (pair, loop)


def test_distinct_dual_pairs_have_distinct_haken_circles(l21):
    pairs = dual_pairs(l21, seed_budget(l21))
    circles = {pair.key: haken_circle(pair) for pair in pairs}
    assert len({c.weights for c in circles.values()}) == len(pairs)
    for k1, k2 in combinations(sorted(circles), 2):
        assert not is_isotopic(circles[k1], circles[k2]), (k1, k2)
