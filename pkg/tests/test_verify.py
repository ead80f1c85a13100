import pytest

import spheretrack.verify as verify_module
from spheretrack.complexes import ComplexGraph, build_disk_complex, valency_growth
from spheretrack.errors import ConfigError
from spheretrack.splitting import build_diagram
from spheretrack.verify import (CONCLUSIVE_PASS, EVIDENCE_PASS, FAIL, SEED_RADIUS, SUITES,
                                VerifierReport, check_cycle_faces, normalize_budgets,
                                record_growth, suite_name, verify)

from conftest import seed_budget

BUDGET = {"p": 2, "q": 1, "max_weight": 1, "model_version": "test"}


def make_graph(edges, kind="D(V)", fill=False):
    g = ComplexGraph(kind, dict(BUDGET))
    for u, v in edges:
        g.add_vertex(u)
        g.add_vertex(v)
        g.add_edge(u, v)
    if fill:
        g.fill_two_simplices()
    return g


def verdicts(report):
    return {prop.name: prop.verdict for prop in report.properties}


def test_suite_names_and_aliases():
    assert len(SUITES) == 8
    assert suite_name("forest-p>=4") == "forest-p≥4"
    assert suite_name("disconnection-q>=2") == "disconnection-q≥2"
    with pytest.raises(ConfigError):
        suite_name("no-such-suite")


def test_unknown_suite_is_a_config_error(l21):
    with pytest.raises(ConfigError):
        verify(l21, "lemma9", [2])


@pytest.mark.parametrize("budgets", [[], [0, 2], [-1]])
def test_budgets_must_be_positive(budgets):
    with pytest.raises(ConfigError):
        normalize_budgets(budgets)


def test_budgets_are_sorted_and_unique():
    assert normalize_budgets([4, 2, 4]) == [2, 4]


@pytest.mark.parametrize("suite, p, q", [
    ("L21-4-cycles", 3, 1),
    ("L31-6-cycles", 2, 1),
    ("forest-p>=4", 3, 1),
])
def test_suites_refuse_other_lens_spaces(suite, p, q):
    with pytest.raises(ConfigError):
        verify(build_diagram(p, q), suite, [1])


def test_failing_property_needs_a_certificate():
    report = VerifierReport("no-3-cycles", 2, 1, [2])
    with pytest.raises(ValueError):
        report.add("x", FAIL, "no certificate")
    with pytest.raises(ValueError):
        report.add("x", "maybe", "unknown verdict")


def test_report_serializes_its_verdicts():
    report = VerifierReport("lemma2-counts", 2, 1, [2, 4])
    report.add("a", EVIDENCE_PASS, "ok")
    report.add("b", CONCLUSIVE_PASS, "ok")
    assert report.passed
    report.add("c", FAIL, "broken", [{"budget": 4}])
    payload = report.to_dict()
    assert payload["passed"] is False
    assert [prop["verdict"] for prop in payload["properties"]] == [EVIDENCE_PASS, CONCLUSIVE_PASS, FAIL]
    assert payload["budgets"] == [2, 4]
    assert [prop.name for prop in report.failures] == ["c"]


def test_no_three_cycles_on_l21(l21):
    report = verify(l21, "no-3-cycles", [seed_budget(l21)])
    assert report.passed, report.failures
    assert "valency_growth" in report.tables


def test_lemma5_on_l21(l21):
    report = verify(l21, "lemma5-tree", [seed_budget(l21)])
    assert report.passed, report.failures


def test_lemma2_counts_never_exceed_two_on_l21(l21):
    report = verify(l21, "lemma2-counts", [seed_budget(l21)])
    assert report.passed, report.failures


def test_growth_on_every_sampled_vertex_is_evidence():
    graphs = {1: make_graph([("a", "b")]), 3: make_graph([("a", "b"), ("a", "c"), ("b", "c")])}
    report = VerifierReport("no-3-cycles", 2, 1, [1, 3])
    record_growth(report, valency_growth(graphs.get, [1, 3]), [1, 3])
    assert verdicts(report) == {"valency-growth": EVIDENCE_PASS}
    assert report.tables["valency_growth"]["a"] == {"1": 1, "3": 2}


def test_lost_neighbors_fail_valency_growth():
    small = make_graph([("a", "b"), ("a", "c")])
    large = make_graph([("a", "b")])
    large.add_vertex("c")
    report = VerifierReport("no-3-cycles", 2, 1, [1, 3])
    record_growth(report, valency_growth({1: small, 3: large}.get, [1, 3]), [1, 3])
    assert verdicts(report) == {"valency-growth": FAIL}
    assert report.failures[0].certificates[0]["vertex"] == "a"


def test_stalled_growth_is_left_unresolved():
    graphs = {1: make_graph([("a", "b")]), 3: make_graph([("a", "b"), ("a", "c")])}
    report = VerifierReport("no-3-cycles", 2, 1, [1, 3])
    record_growth(report, valency_growth(graphs.get, [1, 3]), [1, 3])
    assert "valency-growth" not in verdicts(report)
    assert report.passed
    [entry] = report.tables["unresolved"]
    assert entry["name"] == "valency-growth"
    assert {w["vertex"] for w in entry["witnesses"]} == {"b"}


def test_single_budget_growth_is_unresolved():
    graphs = {2: make_graph([("a", "b")])}
    report = VerifierReport("no-3-cycles", 2, 1, [2])
    record_growth(report, valency_growth(graphs.get, [2]), [2])
    assert report.properties == []
    assert report.tables["unresolved"][0]["name"] == "valency-growth"


def test_square_without_a_diagonal_has_no_ears():
    square = make_graph([("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")], fill=True)
    report = VerifierReport("lemma3-triples", 2, 1, [1])
    check_cycle_faces(report, square, 1)
    assert verdicts(report) == {"cycle-spans-no-simplex": EVIDENCE_PASS, "cycle-has-two-ears": FAIL}
    assert report.failures[0].certificates[0]["ears"] == []


def test_fanned_pentagon_has_two_ears_on_every_cycle():
    pentagon = make_graph([("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a"),
                           ("a", "c"), ("a", "d")], fill=True)
    report = VerifierReport("lemma3-triples", 2, 1, [1])
    check_cycle_faces(report, pentagon, 1)
    assert report.passed, report.failures
    assert "3 cycles" in report.properties[0].detail


def test_cycle_faces_run_on_the_disk_complex(l21, monkeypatch):
    built = []

    def spy(diagram, side, max_weight, workers=1):
        built.append((side, max_weight))
        return build_disk_complex(diagram, side, max_weight, workers)

    monkeypatch.setattr(verify_module, "build_disk_complex", spy)
    n = seed_budget(l21)
    report = verify(l21, "lemma3-triples", [n])
    assert built == [("V", n)]
    assert "cycle-has-two-ears" in verdicts(report)


def test_seed_ball_uses_radius_four_on_l21(l21):
    n = seed_budget(l21)
    report = verify(l21, "disconnection-q≥2", [n], radius=2)
    found = verdicts(report)
    assert found["seed-ball-connected"] == EVIDENCE_PASS
    [prop] = [p for p in report.properties if p.name == "seed-ball-connected"]
    assert prop.certificates[0]["radius"] == SEED_RADIUS
    assert report.tables["component_counts"][str(n)] >= 1


def with_budget(g, max_weight):
    g.budget = dict(g.budget, max_weight=max_weight)
    return g


def test_seed_ball_fails_when_the_large_budget_drops_a_path():
    small = with_budget(make_graph([("s", "a"), ("a", "b"), ("b", "c"), ("c", "d"), ("d", "e")]), 2)
    large = with_budget(make_graph([("s", "a"), ("a", "b"), ("c", "d"), ("d", "e")]), 4)
    report = VerifierReport("disconnection-q≥2", 2, 1, [2, 4])
    verify_module.record_seed_reach(report, small, large, "s", 1)
    assert verdicts(report)["seed-ball-connected"] == FAIL
    assert report.failures[0].certificates[0]["vertices"] == ["c", "d"]
    assert report.tables["component_counts"] == {"2": 1, "4": 2}


def test_seed_reach_leaves_far_vertices_unresolved():
    small = with_budget(make_graph([("s", "a"), ("x", "y")]), 2)
    large = with_budget(make_graph([("s", "a"), ("a", "b"), ("x", "y")]), 4)
    report = VerifierReport("disconnection-q≥2", 2, 1, [2, 4])
    verify_module.record_seed_reach(report, small, large, "s", 4)
    assert verdicts(report) == {"seed-ball-connected": EVIDENCE_PASS}
    assert report.tables["unresolved"][0]["witnesses"] == ["x", "y"]


@pytest.mark.slow
@pytest.mark.parametrize("p, q", [(2, 1), (3, 1), (4, 1), (5, 1), (5, 2), (7, 2)])
def test_no_three_cycles_at_budget_ten(p, q):
    report = verify(build_diagram(p, q), "no-3-cycles", [8, 10])
    assert report.passed, report.failures


@pytest.mark.slow
def test_l21_four_cycles():
    report = verify(build_diagram(2, 1), "L21-4-cycles", [10])
    assert report.passed, report.failures


@pytest.mark.slow
def test_l31_six_cycles():
    report = verify(build_diagram(3, 1), "L31-6-cycles", [12])
    assert report.passed, report.failures


@pytest.mark.slow
@pytest.mark.parametrize("p", [4, 5])
def test_forest_for_p_at_least_four(p):
    report = verify(build_diagram(p, 1), "forest-p≥4", [8])
    assert report.passed, report.failures


@pytest.mark.slow
def test_disconnection_for_l52():
    report = verify(build_diagram(5, 2), "disconnection-q≥2", [10], radius=3)
    assert report.passed, report.failures


@pytest.mark.slow
@pytest.mark.parametrize("p, q", [(3, 1), (4, 1), (5, 2)])
def test_lemma3_triples(p, q):
    report = verify(build_diagram(p, q), "lemma3-triples", [8, 10])
    assert report.passed, report.failures
