"""
Named verification suites for the structure of the sphere complex and the
primitive disk complexes.

Each suite runs over an ascending list of budgets and records one verdict per
property. Positive existence (a cycle, a common dual, a triple, a surgery
result) is conclusive; universal and negative claims are evidence at the
largest budget searched. A failing property always carries a certificate
naming the budget and the keys needed to replay it.
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations

import networkx as nx

from .arrangement import intersection_number
from .complexes import (build_disk_complex, build_dual_tree, build_pprime_complex,
                        build_sphere_complex, component_count, cycle_ears, edge_cycle_census,
                        find_cycles, is_forest, neighborhood, phi_V, sphere_edge_clause,
                        valency_growth)
from .errors import ConfigError
from .splitting import (SIDES, DualPair, are_disjoint, common_duals, dual_disks,
                        dual_pairs, dual_surgery_step, enumerate_disks,
                        enumerate_primitive_disks, find_disk, primitive_pairs,
                        primitive_triples)
from .surface import MODEL_VERSION

logger = logging.getLogger(__name__)

CONCLUSIVE_PASS = "conclusive-pass"
EVIDENCE_PASS = "evidence-pass"
FAIL = "fail"

# Sample sizes keep the suites within desk-scale budgets.
VALENCY_SAMPLE = 10
DUAL_TREE_SAMPLE = 5
SURGERY_SAMPLE = 5
CERTIFICATE_SAMPLE = 5
SEED_RADIUS = 4


@dataclass
class PropertyVerdict:
    name: str
    verdict: str
    detail: str
    certificates: list = field(default_factory=list)

    def to_dict(self):
        return {
            "name": self.name,
            "verdict": self.verdict,
            "detail": self.detail,
            "certificates": list(self.certificates),
        }


@dataclass
class VerifierReport:
    """Verdicts of one suite on one lens space, with the budgets searched."""
    suite: str
    p: int
    q: int
    budgets: list
    properties: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)

    def add(self, name, verdict, detail, certificates=None):
        if verdict not in (CONCLUSIVE_PASS, EVIDENCE_PASS, FAIL):
            raise ValueError(f"unknown verdict {verdict!r}")
        if verdict == FAIL and not certificates:
            raise ValueError(f"failing property {name!r} needs a certificate")
        self.properties.append(PropertyVerdict(name, verdict, detail, list(certificates or [])))
        log = logger.warning if verdict == FAIL else logger.info
        log("[%s L(%d,%d)] %s: %s (%s)", self.suite, self.p, self.q, name, verdict, detail)

    def unresolved(self, name, detail, witnesses=None):
        """Records a property the searched budgets can neither pass nor fail."""
        self.tables.setdefault("unresolved", []).append(
            {"name": name, "detail": detail, "witnesses": list(witnesses or [])[:CERTIFICATE_SAMPLE]})
        logger.info("[%s L(%d,%d)] %s: unresolved at budget (%s)", self.suite, self.p, self.q, name, detail)

    @property
    def passed(self):
        return all(prop.verdict != FAIL for prop in self.properties)

    @property
    def failures(self):
        return [prop for prop in self.properties if prop.verdict == FAIL]

    def to_dict(self):
        return {
            "suite": self.suite,
            "p": self.p,
            "q": self.q,
            "budgets": list(self.budgets),
            "model_version": MODEL_VERSION,
            "passed": self.passed,
            "properties": [prop.to_dict() for prop in self.properties],
            "tables": dict(self.tables),
        }

    def __repr__(self):
        return f"<VerifierReport {self.suite} L({self.p},{self.q}) passed={self.passed}>"


def _growth_table(frame):
    """Valency pivot as {vertex: {budget: valency}} with string budget keys."""
    if frame.empty:
        return {}
    return {vertex: {str(n): int(v) for n, v in row.items()} for vertex, row in frame.iterrows()}


def record_growth(report, frame, budgets):
    """
    Verdict on the valency growth table of a budget chain.

    A sampled vertex whose valency drops fails. Strict growth on the whole
    sample is evidence, and anything less stays unresolved at budget.
    """
    report.tables["valency_growth"] = _growth_table(frame)
    if len(budgets) < 2 or frame.empty:
        report.unresolved("valency-growth", "growth needs at least two budgets and a sampled vertex")
        return
    first, last = frame[budgets[0]], frame[budgets[-1]]
    dropped = [{"vertex": v, "valencies": {str(n): int(frame.at[v, n]) for n in budgets}}
               for v in frame.index if last[v] < first[v]]
    if dropped:
        report.add("valency-growth", FAIL, f"{len(dropped)} sampled vertices lose neighbors",
                   dropped[:CERTIFICATE_SAMPLE])
        return
    growing = [v for v in frame.index if last[v] > first[v]]
    required = min(VALENCY_SAMPLE, len(frame))
    detail = f"{len(growing)} of {len(frame)} sampled vertices gain neighbors from {budgets[0]} to {budgets[-1]}"
    if len(growing) >= required:
        report.add("valency-growth", EVIDENCE_PASS, detail)
    else:
        report.unresolved("valency-growth", detail,
                          [{"vertex": v, "valency": int(last[v])} for v in frame.index if v not in growing])


def _pair_index(diagram, max_weight, workers):
    return {pair.key: pair for pair in dual_pairs(diagram, max_weight, workers)}


def _cycle_pattern_ok(g, cycle, pairs):
    """
    A cycle of length 2k through dual pairs uses k distinct V-disks and k
    distinct W-disks and alternates between the two adjacency clauses.
    """
    if len(cycle) % 2:
        return False
    k = len(cycle) // 2
    v_disks = {pairs[key].v_disk.key for key in cycle}
    w_disks = {pairs[key].w_disk.key for key in cycle}
    if len(v_disks) != k or len(w_disks) != k:
        return False
    clauses = [g.witness(cycle[i], cycle[(i + 1) % len(cycle)])["clause"] for i in range(len(cycle))]
    return all(clauses[i] != clauses[(i + 1) % len(clauses)] for i in range(len(clauses)))


def _pairwise_disjoint(disks):
    return all(are_disjoint(d1, d2) for d1, d2 in combinations(disks, 2))


def _disks_on_cycle(cycle, pairs, side):
    seen = {}
    for key in cycle:
        disk = pairs[key].v_disk if side == "V" else pairs[key].w_disk
        seen.setdefault(disk.key, disk)
    return [seen[k] for k in sorted(seen)]


def check_no_three_cycles(report, diagram, budgets, radius, workers):
    """No pairwise-adjacent triple of dual pairs; edges match the adjacency clauses."""
    for n in budgets:
        g = build_sphere_complex(diagram, n, workers)
        triangles = [c for c in g.certificates if c["kind"] == "3-cycle"]
        if triangles:
            report.add(f"no-3-cycles@{n}", FAIL, f"{len(triangles)} pairwise adjacent triples",
                       [{"budget": n, **c} for c in triangles[:CERTIFICATE_SAMPLE]])
        else:
            report.add(f"no-3-cycles@{n}", EVIDENCE_PASS,
                       f"{len(g.vertices)} vertices, {len(g.edges)} edges, no triangle at budget {n}")

        # 1. Re-evaluate the adjacency predicate on every pair of vertices.
        pairs = _pair_index(diagram, n, workers)
        mismatches = []
        for k1, k2 in combinations(sorted(pairs), 2):
            clause = sphere_edge_clause(pairs[k1], pairs[k2])
            if (clause is not None) != g.has_edge(k1, k2):
                mismatches.append({"budget": n, "u": k1, "v": k2, "clause": clause})
        if mismatches:
            report.add(f"edge-predicate@{n}", FAIL, f"{len(mismatches)} edges disagree with the clauses",
                       mismatches[:CERTIFICATE_SAMPLE])
        else:
            report.add(f"edge-predicate@{n}", CONCLUSIVE_PASS, f"{len(pairs)} vertices re-checked")

        # 2. The projection to P'(V) sends edges to edges or to single vertices.
        image, _ = phi_V(g)
        pprime = build_pprime_complex(diagram, n, "V", workers)
        outside = [{"budget": n, "u": u, "v": v} for u, v in sorted(image.edges) if not pprime.has_edge(u, v)]
        if outside:
            report.add(f"phi-adjacency@{n}", FAIL, f"{len(outside)} image edges outside P'(V)",
                       outside[:CERTIFICATE_SAMPLE])
        else:
            report.add(f"phi-adjacency@{n}", CONCLUSIVE_PASS, f"{len(image.edges)} image edges in P'(V)")

    # 3. Infinite valency is only ever observed as growth.
    frame = valency_growth(lambda n: build_sphere_complex(diagram, n, workers), budgets, VALENCY_SAMPLE)
    record_growth(report, frame, budgets)


def _check_cycle_census(report, diagram, budgets, workers, length, max_len):
    for n in budgets:
        g = build_sphere_complex(diagram, n, workers)
        pairs = _pair_index(diagram, n, workers)
        census = edge_cycle_census(g, max_len)
        failures, unresolved, good = [], 0, set()
        for edge, cycles in census.items():
            if not cycles:
                unresolved += 1
            elif len(cycles) > 1:
                failures.append({"budget": n, "edge": list(edge), "cycles": [list(c) for c in cycles]})
            elif len(cycles[0]) != length or not _cycle_pattern_ok(g, cycles[0], pairs):
                failures.append({"budget": n, "edge": list(edge), "cycles": [list(cycles[0])]})
            else:
                good.add(cycles[0])
        name = f"unique-{length}-cycle@{n}"
        if failures:
            report.add(name, FAIL, f"{len(failures)} edges break uniqueness or the cycle pattern",
                       failures[:CERTIFICATE_SAMPLE])
            continue
        report.add(name, EVIDENCE_PASS,
                   f"{len(census) - unresolved} edges on a unique {length}-cycle, "
                   f"{unresolved} edges without a cycle of length <= {max_len} at budget {n}",
                   [{"budget": n, "cycle": list(c)} for c in sorted(good)[:CERTIFICATE_SAMPLE]])

        # 1. The disks on each side of a cycle are pairwise disjoint.
        bad = [list(c) for c in sorted(good)
               if not all(_pairwise_disjoint(_disks_on_cycle(c, pairs, side)) for side in SIDES)]
        if bad:
            report.add(f"cycle-disks-disjoint@{n}", FAIL, f"{len(bad)} cycles with meeting disks",
                       [{"budget": n, "cycle": c} for c in bad[:CERTIFICATE_SAMPLE]])
        elif good:
            report.add(f"cycle-disks-disjoint@{n}", CONCLUSIVE_PASS,
                       f"{len(good)} cycles span a primitive {'pair' if length == 4 else 'triple'} on each side")


def check_l21_four_cycles(report, diagram, budgets, radius, workers):
    if (diagram.p, diagram.q) != (2, 1):
        raise ConfigError(f"suite {report.suite} applies to L(2,1), not L({diagram.p},{diagram.q})")
    _check_cycle_census(report, diagram, budgets, workers, length=4, max_len=8)


def check_l31_six_cycles(report, diagram, budgets, radius, workers):
    if (diagram.p, diagram.q) != (3, 1):
        raise ConfigError(f"suite {report.suite} applies to L(3,1), not L({diagram.p},{diagram.q})")
    _check_cycle_census(report, diagram, budgets, workers, length=6, max_len=10)


def check_forest(report, diagram, budgets, radius, workers):
    """Sphere complexes of L(p,1), p >= 4, and of every q >= 2 explore as forests."""
    if diagram.q == 1 and diagram.p < 4:
        raise ConfigError(f"suite {report.suite} does not apply to L({diagram.p},1)")
    for n in budgets:
        g = build_sphere_complex(diagram, n, workers)
        cycles = find_cycles(g, 12)
        if cycles:
            report.add(f"sphere-forest@{n}", FAIL, f"{len(cycles)} cycles of length <= 12",
                       [{"budget": n, "cycle": list(c)} for c in cycles[:CERTIFICATE_SAMPLE]])
        else:
            report.add(f"sphere-forest@{n}", EVIDENCE_PASS,
                       f"no cycle of length <= 12 among {len(g.vertices)} vertices, "
                       f"{component_count(g)} components at budget {n}")
        if diagram.q >= 2:
            pprime = build_pprime_complex(diagram, n, "V", workers)
            if is_forest(pprime):
                report.add(f"pprime-forest@{n}", EVIDENCE_PASS,
                           f"P'(V) explores as {component_count(pprime)} tree components")
            else:
                report.add(f"pprime-forest@{n}", FAIL, "P'(V) has a cycle",
                           [{"budget": n, "cycle": list(c)} for c in find_cycles(pprime, 12)[:CERTIFICATE_SAMPLE]])


def _seed_pair(diagram, max_weight, workers):
    v = find_disk(enumerate_primitive_disks(diagram, "V", max_weight, workers), diagram.alpha2)
    w = find_disk(enumerate_disks(diagram, "W", max_weight, workers), diagram.beta2)
    if v is None or w is None:
        return None
    return DualPair(v, w)


def record_seed_reach(report, small, large, seed, radius):
    """
    Connectivity evidence around a seed vertex from two budgets.

    The radius ball of `small` must lie in the seed's component of `large`;
    the radius is at least SEED_RADIUS. Vertices of `small` outside that
    component are left unresolved at budget.
    """
    n0, n = small.budget["max_weight"], large.budget["max_weight"]
    radius = max(radius, SEED_RADIUS)
    reached = nx.node_connected_component(large.graph, seed)
    ball = neighborhood(small, seed, radius)
    lost = sorted(ball - reached)
    if lost:
        report.add("seed-ball-connected", FAIL,
                   f"{len(lost)} vertices within radius {radius} at budget {n0} leave the seed component",
                   [{"budget": n, "seed": seed, "radius": radius, "vertices": lost[:CERTIFICATE_SAMPLE]}])
    else:
        report.add("seed-ball-connected", EVIDENCE_PASS,
                   f"{len(ball)} vertices within radius {radius} of {seed} at budget {n0} "
                   f"stay in its component at budget {n}",
                   [{"budget": n, "seed": seed, "radius": radius, "size": len(ball)}])

    report.tables["component_counts"] = {str(n0): component_count(small), str(n): component_count(large)}
    apart = sorted(set(small.vertices) - reached)
    if apart:
        report.unresolved("explored-reach", f"{len(apart)} of {len(small.vertices)} vertices at budget {n0} "
                          f"are not joined to the seed at budget {n}", apart)
    else:
        report.add("explored-reach", EVIDENCE_PASS,
                   f"all {len(small.vertices)} vertices at budget {n0} join the seed at budget {n}")


def check_disconnection(report, diagram, budgets, radius, workers):
    """
    For q >= 2, two dual pairs built on a primitive pair without common dual
    sit in different explored components. For q = 1 the radius-4 ball around
    the seed pair must stay inside the seed component as the budget grows.
    """
    n0, n = budgets[0], budgets[-1]
    g = build_sphere_complex(diagram, n, workers)

    if diagram.q == 1:
        seed = _seed_pair(diagram, n, workers)
        if seed is None or seed.key not in g.vertices:
            report.add("seed-ball-connected", FAIL, "seed dual pair missing from the explored complex",
                       [{"budget": n, "seed": seed.key if seed else None}])
            return
        record_seed_reach(report, build_sphere_complex(diagram, n0, workers), g, seed.key, radius)
        return

    # 1. A primitive pair with no common dual at the largest budget.
    witness = None
    pairs = primitive_pairs(diagram, "V", n0, workers)
    for e1, e2 in pairs:
        if not common_duals(diagram, e1, e2, n, workers):
            witness = (e1, e2)
            break
    if witness is None:
        report.add("pair-without-common-dual", FAIL, "every explored primitive pair has a common dual",
                   [{"budget": n, "pairs_checked": len(pairs)}])
        return
    e1, e2 = witness
    report.add("pair-without-common-dual", EVIDENCE_PASS,
               f"{e1.key} and {e2.key} have no common dual at budget {n}",
               [{"budget": n, "pair": [e1.key, e2.key]}])

    # 2. Dual pairs on the two disks and their explored neighborhoods.
    d1, d2 = dual_disks(diagram, e1, n, workers), dual_disks(diagram, e2, n, workers)
    if not d1 or not d2:
        report.add("neighborhoods-disjoint", FAIL, "a primitive disk has no dual at budget",
                   [{"budget": n, "pair": [e1.key, e2.key]}])
        return
    s1, s2 = DualPair(e1, d1[0]).key, DualPair(e2, d2[0]).key
    ball1, ball2 = neighborhood(g, s1, radius), neighborhood(g, s2, radius)
    graph = g.graph
    if nx.has_path(graph, s1, s2):
        report.add("neighborhoods-disjoint", FAIL, f"{s1} and {s2} are joined in the explored complex",
                   [{"budget": n, "path": nx.shortest_path(graph, s1, s2)}])
    elif ball1 & ball2:
        report.add("neighborhoods-disjoint", FAIL, "neighborhoods share vertices",
                   [{"budget": n, "shared": sorted(ball1 & ball2)[:CERTIFICATE_SAMPLE]}])
    else:
        report.add("neighborhoods-disjoint", EVIDENCE_PASS,
                   f"radius-{radius} neighborhoods of sizes {len(ball1)} and {len(ball2)} are disjoint; "
                   f"{component_count(g)} explored components",
                   [{"budget": n, "seeds": [s1, s2], "radius": radius}])

    # 3. Components are trees.
    if is_forest(g):
        report.add("tree-components", EVIDENCE_PASS, f"{component_count(g)} tree components at budget {n}")
    else:
        report.add("tree-components", FAIL, "explored complex has a cycle",
                   [{"budget": n, "cycle": list(c)} for c in find_cycles(g, 12)[:CERTIFICATE_SAMPLE]])


def _common_dual_table(diagram, side, n0, n, workers):
    return [((e1, e2), common_duals(diagram, e1, e2, n, workers))
            for e1, e2 in primitive_pairs(diagram, side, n0, workers)]


def check_lemma2_counts(report, diagram, budgets, radius, workers):
    """Common dual counts: two for L(2,1), one for other L(p,1), at most one when q >= 2."""
    n0, n = budgets[0], budgets[-1]
    expected = 2 if diagram.p == 2 else 1
    for side in SIDES:
        table = _common_dual_table(diagram, side, n0, n, workers)
        over = [{"budget": n, "pair": [e1.key, e2.key], "common_duals": [d.key for d in duals]}
                for (e1, e2), duals in table if len(duals) > expected]
        exact = sum(1 for _, duals in table if len(duals) == expected)
        none = sum(1 for _, duals in table if not duals)
        if over:
            report.add(f"{side}:common-dual-count", FAIL, f"{len(over)} pairs exceed {expected} common duals",
                       over[:CERTIFICATE_SAMPLE])
        elif diagram.q == 1:
            report.add(f"{side}:common-dual-count", EVIDENCE_PASS,
                       f"{exact} of {len(table)} pairs have exactly {expected} common duals; "
                       f"{len(table) - exact} unresolved at budget {n}")
        else:
            report.add(f"{side}:common-dual-count", EVIDENCE_PASS,
                       f"{len(table)} pairs with at most one common dual, {none} with none at budget {n}")

        if diagram.p == 2:
            doubles = [(pair, duals) for pair, duals in table if len(duals) == 2]
            meeting = [{"budget": n, "pair": [e1.key, e2.key], "common_duals": [d.key for d in duals]}
                       for (e1, e2), duals in doubles if not are_disjoint(*duals)]
            if meeting:
                report.add(f"{side}:common-duals-disjoint", FAIL, "two common duals meet",
                           meeting[:CERTIFICATE_SAMPLE])
            elif doubles:
                report.add(f"{side}:common-duals-disjoint", CONCLUSIVE_PASS,
                           f"{len(doubles)} pairs whose two common duals form a primitive pair")

        if diagram.q >= 2 and table:
            verdict = EVIDENCE_PASS if none else FAIL
            report.add(f"{side}:pair-without-common-dual", verdict,
                       f"{none} of {len(table)} pairs without a common dual at budget {n}",
                       [{"budget": n, "pairs_checked": len(table)}])


def _triple_key(triple):
    return tuple(sorted(disk.key for disk in triple))


def check_lemma3_triples(report, diagram, budgets, radius, workers):
    """Primitive triples exist iff q = 2 or p = 2q + 1, with the per-pair refinements."""
    p, q = diagram.p, diagram.q
    n0, n = budgets[0], budgets[-1]
    required = q == 2 or p == 2 * q + 1
    for side in SIDES:
        triples = primitive_triples(diagram, side, n, workers)

        # 1. Presence.
        name = f"{side}:triples-present"
        if required and not triples:
            report.add(name, FAIL, f"no primitive triple at budget {n}", [{"budget": n, "side": side}])
            continue
        if not required and triples:
            report.add(name, FAIL, f"{len(triples)} primitive triples found",
                       [{"budget": n, "triple": list(_triple_key(t))} for t in triples[:CERTIFICATE_SAMPLE]])
            continue
        if not required:
            report.add(name, EVIDENCE_PASS, f"no primitive triple at budget {n}")
            continue
        report.add(name, CONCLUSIVE_PASS, f"{len(triples)} primitive triples at budget {n}",
                   [{"budget": n, "triple": list(_triple_key(t))} for t in triples[:CERTIFICATE_SAMPLE]])

        cache = {}

        def duals_of(e1, e2):
            key = tuple(sorted((e1.key, e2.key)))
            if key not in cache:
                cache[key] = common_duals(diagram, e1, e2, n, workers)
            return cache[key]

        # 2. Triples through each primitive pair of the smaller budget.
        containing = Counter()
        for triple in triples:
            for d1, d2 in combinations(triple, 2):
                containing[tuple(sorted((d1.key, d2.key)))] += 1
        split, over, unresolved = Counter(), [], 0
        for e1, e2 in primitive_pairs(diagram, side, n0, workers):
            count = containing[tuple(sorted((e1.key, e2.key)))]
            has_dual = bool(duals_of(e1, e2))
            if p == 3:
                allowed = {1}
            elif p == 5:
                allowed = {1} if has_dual else {2}
            else:
                allowed = {0, 1} if has_dual else {1}
            split[f"{'with' if has_dual else 'without'}-dual:{count}"] += 1
            if count > max(allowed):
                over.append({"budget": n, "pair": [e1.key, e2.key], "triples": count, "has_common_dual": has_dual})
            elif count not in allowed:
                unresolved += 1
        report.tables[f"{side}:triples-per-pair"] = dict(sorted(split.items()))
        if over:
            report.add(f"{side}:triples-per-pair", FAIL, f"{len(over)} pairs in too many triples",
                       over[:CERTIFICATE_SAMPLE])
        else:
            report.add(f"{side}:triples-per-pair", EVIDENCE_PASS,
                       f"split {dict(sorted(split.items()))}; {unresolved} pairs unresolved at budget {n}")

        # 3. Common duals on the pairs of each triple.
        bad, settled = [], 0
        for triple in primitive_triples(diagram, side, n0, workers):
            found = [duals_of(d1, d2) for d1, d2 in combinations(triple, 2)]
            with_dual = sum(1 for duals in found if duals)
            if any(len(duals) > 1 for duals in found):
                bad.append({"budget": n, "triple": list(_triple_key(triple)), "reason": "several common duals"})
            elif p == 3 and with_dual == 3:
                if not _pairwise_disjoint([duals[0] for duals in found]):
                    bad.append({"budget": n, "triple": list(_triple_key(triple)),
                                "reason": "common duals do not form a triple"})
                else:
                    settled += 1
            elif p >= 5 and with_dual > 1:
                bad.append({"budget": n, "triple": list(_triple_key(triple)), "reason": f"{with_dual} pairs with common duals"})
            elif p >= 5 and with_dual == 1:
                settled += 1
        if bad:
            report.add(f"{side}:triple-common-duals", FAIL, f"{len(bad)} triples break the common dual rule",
                       bad[:CERTIFICATE_SAMPLE])
        else:
            report.add(f"{side}:triple-common-duals", EVIDENCE_PASS,
                       f"{settled} triples settled at budget {n}")

    # 4. Cycles of D(V) against its 2-simplices.
    check_cycle_faces(report, build_disk_complex(diagram, "V", n0, workers), n0)


def check_cycle_faces(report, complex_, budget, max_len=5):
    """
    No 2-simplex has all three edges on a cycle of length >= 4, and every
    such cycle has two 2-simplices with two edges on it and no cycle edge in
    common.
    """
    spanning, earless, checked = [], [], 0
    for cycle in find_cycles(complex_, max_len):
        n = len(cycle)
        if n < 4:
            continue
        checked += 1
        edges = {frozenset((cycle[i], cycle[(i + 1) % n])) for i in range(n)}
        ears = cycle_ears(complex_, cycle)
        if any(frozenset((cycle[i - 1], cycle[(i + 1) % n])) in edges for i in ears):
            spanning.append({"budget": budget, "cycle": list(cycle)})
        if not any((j - i) % n not in (1, n - 1) for i, j in combinations(ears, 2)):
            earless.append({"budget": budget, "cycle": list(cycle), "ears": [cycle[i] for i in ears]})
    if spanning:
        report.add("cycle-spans-no-simplex", FAIL, "a 2-simplex has its edges on a cycle",
                   spanning[:CERTIFICATE_SAMPLE])
    else:
        report.add("cycle-spans-no-simplex", EVIDENCE_PASS,
                   f"{checked} cycles of length 4 to {max_len} in {complex_.kind} at budget {budget}")
    if earless:
        report.add("cycle-has-two-ears", FAIL, f"{len(earless)} cycles without two edge-disjoint ears",
                   earless[:CERTIFICATE_SAMPLE])
    else:
        report.add("cycle-has-two-ears", EVIDENCE_PASS,
                   f"{checked} cycles each carry two 2-simplices on disjoint cycle edges")


def check_lemma5_tree(report, diagram, budgets, radius, workers):
    """Dual trees explore acyclic, and surgery moves one dual toward another."""
    n0, n = budgets[0], budgets[-1]
    for side in SIDES:
        bases = enumerate_primitive_disks(diagram, side, n0, workers)[:DUAL_TREE_SAMPLE]
        if not bases:
            report.add(f"{side}:dual-tree-acyclic", FAIL, f"no primitive disk at budget {n0}",
                       [{"budget": n0, "side": side}])
            continue
        cyclic = []
        for base in bases:
            for budget in budgets:
                tree = build_dual_tree(diagram, base, budget, workers)
                if not is_forest(tree):
                    cyclic.append({"budget": budget, "base": base.key,
                                   "cycles": [list(c) for c in find_cycles(tree, 8)[:CERTIFICATE_SAMPLE]]})
        if cyclic:
            report.add(f"{side}:dual-tree-acyclic", FAIL, f"{len(cyclic)} dual trees with cycles",
                       cyclic[:CERTIFICATE_SAMPLE])
        else:
            report.add(f"{side}:dual-tree-acyclic", EVIDENCE_PASS,
                       f"{len(bases)} bases acyclic at budgets {list(budgets)}")

        # 1. Surgery on meeting duals of the same base.
        stuck, moved = [], 0
        for base in bases:
            duals = dual_disks(diagram, base, n, workers)
            meeting = [(d1, d2) for d1, d2 in combinations(duals, 2)
                       if intersection_number(d1.boundary, d2.boundary) >= 2][:SURGERY_SAMPLE]
            for d1, d2 in meeting:
                if dual_surgery_step(diagram, base, d1, d2):
                    moved += 1
                else:
                    stuck.append({"budget": n, "base": base.key, "from": d1.key, "toward": d2.key})
        if stuck:
            report.add(f"{side}:dual-surgery", FAIL, f"{len(stuck)} surgeries produced no dual",
                       stuck[:CERTIFICATE_SAMPLE])
        elif moved:
            report.add(f"{side}:dual-surgery", CONCLUSIVE_PASS, f"{moved} surgeries reduced intersection")
        else:
            report.add(f"{side}:dual-surgery", EVIDENCE_PASS, f"no meeting duals at budget {n}")


SUITES = {
    "no-3-cycles": check_no_three_cycles,
    "L21-4-cycles": check_l21_four_cycles,
    "L31-6-cycles": check_l31_six_cycles,
    "forest-p≥4": check_forest,
    "disconnection-q≥2": check_disconnection,
    "lemma2-counts": check_lemma2_counts,
    "lemma3-triples": check_lemma3_triples,
    "lemma5-tree": check_lemma5_tree,
}

ALIASES = {
    "forest-p>=4": "forest-p≥4",
    "disconnection-q>=2": "disconnection-q≥2",
}


def suite_name(name):
    """Canonical suite name; raises ConfigError for unknown names."""
    name = ALIASES.get(name, name)
    if name not in SUITES:
        raise ConfigError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return name


def normalize_budgets(budgets):
    budgets = sorted(set(int(n) for n in budgets))
    if not budgets or budgets[0] < 1:
        raise ConfigError(f"budgets must be positive, got {budgets}")
    return budgets


def verify(diagram, suite, budgets, radius=3, workers=1):
    """
    Runs one named suite on a diagram over ascending budgets.

    Raises:
        ConfigError: unknown suite, empty or non-positive budgets, or a suite
            that does not apply to this lens space.
    """
    name = suite_name(suite)
    budgets = normalize_budgets(budgets)
    report = VerifierReport(name, diagram.p, diagram.q, budgets)
    logger.info("Running %s on L(%d,%d) at budgets %s", name, diagram.p, diagram.q, budgets)
    SUITES[name](report, diagram, budgets, radius, workers)
    return report
