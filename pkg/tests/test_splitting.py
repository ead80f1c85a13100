import pytest

from spheretrack.arrangement import intersection_number
from spheretrack.errors import ConfigError, PreconditionError
from spheretrack.splitting import (DualPair, HeegaardDiagram, are_disjoint, are_dual,
                                   build_diagram, check_lens_parameters, common_duals,
                                   diagram_checks, disk_candidates, dual_disks, enumerate_disks,
                                   enumerate_primitive_disks, find_disk,
                                   first_homology_invariants, haken_circle, make_disk,
                                   normal_vectors, primitive_pairs, seed_disk, word_in_V,
                                   word_in_W)
from spheretrack.surface import NormalCurve, is_separating, validate_normal
from spheretrack.utils import lens_parameters
from spheretrack.words import is_primitive

from conftest import seed_budget


@pytest.mark.parametrize("p, q", [(4, 2), (1, 1), (5, 3), (6, 3), (3, 0)])
def test_invalid_lens_parameters(p, q):
    with pytest.raises(ConfigError):
        check_lens_parameters(p, q)
    with pytest.raises(ConfigError):
        build_diagram(p, q)


@pytest.mark.parametrize("p, q", [(2, 1), (3, 1), (4, 1), (5, 1), (5, 2)])
def test_diagram_checks_hold(p, q):
    diagram = build_diagram(p, q)
    assert all(diagram_checks(diagram).values())
    assert first_homology_invariants(diagram) == [1, p]


@pytest.mark.slow
@pytest.mark.parametrize("p, q", lens_parameters(8))
def test_every_preset_up_to_eight(p, q):
    diagram = build_diagram(p, q)
    assert intersection_number(diagram.alpha1, diagram.beta1) == p
    assert first_homology_invariants(diagram) == [1, p]


def test_words_of_the_meridians(l31):
    assert str(word_in_W(l31, l31.alpha1)) == "xxx"
    assert str(word_in_W(l31, l31.alpha2)) == "y"
    assert str(word_in_V(l31, l31.beta2)) == "y"
    assert len(word_in_V(l31, l31.alpha1)) == 0


def test_diagram_round_trips_through_its_dict(l52):
    payload = l52.to_dict()
    assert payload["model_version"] == l52.model_version
    assert HeegaardDiagram.from_dict(payload) == l52


def test_stale_model_version_is_rejected(l21):
    from spheretrack.errors import CacheMismatchError
    payload = dict(l21.to_dict(), model_version="old-model")
    with pytest.raises(CacheMismatchError):
        HeegaardDiagram.from_dict(payload)


def test_seed_disks(l21):
    a1, a2 = seed_disk(l21, "alpha1"), seed_disk(l21, "alpha2")
    b1, b2 = seed_disk(l21, "beta1"), seed_disk(l21, "beta2")
    assert a2.is_primitive and b2.is_primitive
    assert not a1.is_primitive and not b1.is_primitive
    assert are_dual(a2, b2)
    assert not are_dual(a1, b1)
    assert are_disjoint(a1, a2)


def test_make_disk_rejects_curves_that_bound_nothing(l21):
    assert make_disk(l21, "V", l21.beta2) is None
    assert make_disk(l21, "W", l21.alpha2) is None


def test_haken_circle_of_the_seed_pair(l21):
    circle = haken_circle(DualPair(seed_disk(l21, "alpha2"), seed_disk(l21, "beta2")))
    assert circle.is_essential
    assert is_separating(circle)


def test_normal_vectors_are_normal_and_sorted():
    vectors = normal_vectors(2)
    assert vectors == sorted(set(vectors))
    assert all(validate_normal(w) and any(w) for w in vectors)
    assert all(max(w) <= 2 for w in vectors)
    assert (2,) * 9 in vectors


def test_normal_vectors_split_by_first_edge():
    whole = normal_vectors(2)
    blocks = [w for a in range(3) for w in normal_vectors(2, a)]
    assert sorted(blocks) == whole


def test_enumeration_contains_the_seed_disks(l21):
    n = seed_budget(l21)
    disks_v = enumerate_disks(l21, "V", n)
    disks_w = enumerate_disks(l21, "W", n)
    assert find_disk(disks_v, l21.alpha1) is not None
    assert find_disk(disks_v, l21.alpha2) is not None
    assert find_disk(disks_w, l21.beta2) is not None
    assert len({d.key for d in disks_v}) == len(disks_v)
    assert all(max(d.boundary.weights) <= n for d in disks_v)


def test_enumeration_rejects_empty_budget(l21):
    with pytest.raises(ConfigError):
        enumerate_disks(l21, "V", 0)


def test_primitive_disks_have_primitive_words(l21):
    for disk in enumerate_primitive_disks(l21, "V", seed_budget(l21)):
        assert is_primitive(disk.word_other)
        assert disk.side == "V"


def test_duals_meet_their_disk_once(l21):
    n = seed_budget(l21)
    base = find_disk(enumerate_primitive_disks(l21, "V", n), l21.alpha2)
    duals = dual_disks(l21, base, n)
    assert find_disk(duals, l21.beta2) is not None
    for dual in duals:
        assert dual.side == "W"
        assert intersection_number(base.boundary, dual.boundary) == 1


def test_dual_disks_need_a_primitive_disk(l21):
    with pytest.raises(PreconditionError):
        dual_disks(l21, seed_disk(l21, "alpha1"), seed_budget(l21))


def test_common_duals_need_a_primitive_pair(l21):
    a2 = seed_disk(l21, "alpha2")
    with pytest.raises(PreconditionError):
        common_duals(l21, a2, a2, seed_budget(l21))


def test_primitive_pairs_are_disjoint(l21):
    for e1, e2 in primitive_pairs(l21, "V", seed_budget(l21)):
        assert e1.key != e2.key
        assert intersection_number(e1.boundary, e2.boundary) == 0


def test_worker_count_does_not_change_enumeration(l21):
    n = seed_budget(l21)
    assert enumerate_disks(l21, "V", n, workers=2) == enumerate_disks(l21, "V", n, workers=1)


@pytest.mark.slow
def test_enumeration_is_monotone_in_the_budget(l21):
    n = seed_budget(l21)
    small = {d.key for d in enumerate_disks(l21, "V", n)}
    large = {d.key for d in enumerate_disks(l21, "V", n + 2)}
    assert small <= large


def test_vertex_linking_curve_bounds_no_disk(l21):
    assert make_disk(l21, "V", NormalCurve((2,) * 9)) is None


@pytest.mark.parametrize("p, q", [(2, 1), (3, 1), (5, 2), (7, 3)])
def test_meridian_systems_are_disjoint_normal_curves(p, q):
    diagram = build_diagram(p, q)
    for side, (first, second) in diagram.meridians.items():
        parts = diagram.system(side).components()
        assert sorted(c.weights for c in parts) == sorted([first.weights, second.weights])
        assert intersection_number(first, second) == 0


@pytest.mark.parametrize("side", ["V", "W"])
def test_candidate_filter_keeps_every_disk(l21, side):
    kept = {tuple(int(w) for w in row) for row in disk_candidates(l21, side, 2)}
    for weights in normal_vectors(2):
        curve = NormalCurve(weights)
        if curve.is_connected and make_disk(l21, side, curve) is not None:
            assert weights in kept


def test_candidates_are_connected_and_non_separating(l31):
    for row in disk_candidates(l31, "W", 2):
        curve = NormalCurve(tuple(int(w) for w in row))
        assert curve.is_essential
        assert not is_separating(curve)


@pytest.mark.slow
def test_budget_ten_enumeration_extends_the_seed_budget(l21):
    small = enumerate_disks(l21, "V", seed_budget(l21))
    large = enumerate_disks(l21, "V", 10, workers=4)
    assert len(large) > len(small)
    assert all(find_disk(large, d.boundary) is not None for d in small)
    assert all(max(d.boundary.weights) <= 10 for d in large)
