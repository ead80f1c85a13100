"""
Budgeted pieces of the disk complexes and of the sphere complex.

Every builder returns a ComplexGraph stamped with its budget. Graph analysis
(cycles, forests, components, neighborhoods) goes through networkx.
"""
import logging
from dataclasses import dataclass, field
from itertools import combinations

import networkx as nx
import pandas as pd

from .errors import PreconditionError
from .splitting import (are_disjoint, common_duals, dual_disks, dual_pairs,
                        enumerate_disks, enumerate_primitive_disks, opposite)
from .surface import MODEL_VERSION

logger = logging.getLogger(__name__)

SPHERE = "Sphere"


def disk_kind(side):
    return f"D({side})"


def primitive_kind(side):
    return f"P({side})"


def pprime_kind(side):
    return f"P'({side})"


def dual_tree_kind(side):
    return f"P_D({side})"


def budget_stamp(diagram, max_weight):
    return {"p": diagram.p, "q": diagram.q, "max_weight": max_weight, "model_version": MODEL_VERSION}


def _edge_key(u, v):
    return (u, v) if u <= v else (v, u)


@dataclass
class ComplexGraph:
    """A finite explored piece of a complex: vertices, edges with witnesses and 2-simplices."""
    kind: str
    budget: dict
    vertices: dict = field(default_factory=dict)
    edges: dict = field(default_factory=dict)
    two_simplices: list = field(default_factory=list)
    certificates: list = field(default_factory=list)

    def add_vertex(self, key, payload=None):
        self.vertices[key] = payload or {}

    def add_edge(self, u, v, witness=None):
        if u == v:
            raise ValueError(f"loop at {u}")
        self.edges[_edge_key(u, v)] = witness or {}

    def has_edge(self, u, v):
        return _edge_key(u, v) in self.edges

    def witness(self, u, v):
        return self.edges[_edge_key(u, v)]

    def neighbors(self, key):
        return sorted(v if u == key else u for u, v in self.edges if key in (u, v))

    @property
    def graph(self):
        g = nx.Graph()
        g.add_nodes_from(sorted(self.vertices))
        g.add_edges_from(sorted(self.edges))
        return g

    def check(self):
        """Raises ValueError when an edge or 2-simplex refers to missing pieces."""
        for u, v in self.edges:
            if u not in self.vertices or v not in self.vertices:
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside the vertex set")
        for triple in self.two_simplices:
            if len(set(triple)) != 3:
                raise ValueError(f"2-simplex {triple} repeats a vertex")
            for u, v in combinations(triple, 2):
                if not self.has_edge(u, v):
                    raise ValueError(f"2-simplex {triple} misses the edge ({u}, {v})")
        if self.kind == SPHERE and self.two_simplices:
            raise ValueError("the sphere complex carries no 2-simplices")

    def fill_two_simplices(self):
        """Adds every triangle of the edge graph as a 2-simplex."""
        adjacency = {key: set(self.neighbors(key)) for key in self.vertices}
        triples = set()
        for u, v in self.edges:
            for w in adjacency[u] & adjacency[v]:
                triples.add(tuple(sorted((u, v, w))))
        self.two_simplices = sorted(triples)

    def to_dict(self):
        return {
            "kind": self.kind,
            "budget": dict(self.budget),
            "vertices": [{"key": key, "payload": self.vertices[key]} for key in sorted(self.vertices)],
            "edges": [{"u": u, "v": v, "witness": self.edges[(u, v)]} for u, v in sorted(self.edges)],
            "two_simplices": [list(t) for t in sorted(self.two_simplices)],
            "certificates": list(self.certificates),
        }

    @classmethod
    def from_dict(cls, payload):
        g = cls(payload["kind"], dict(payload["budget"]))
        for vertex in payload.get("vertices", []):
            g.add_vertex(vertex["key"], vertex.get("payload"))
        for edge in payload.get("edges", []):
            g.add_edge(edge["u"], edge["v"], edge.get("witness"))
        g.two_simplices = [tuple(t) for t in payload.get("two_simplices", [])]
        g.certificates = list(payload.get("certificates", []))
        g.check()
        return g

    def __repr__(self):
        return f"<ComplexGraph {self.kind} {len(self.vertices)}v {len(self.edges)}e>"


def _disjointness_graph(kind, diagram, max_weight, disks):
    g = ComplexGraph(kind, budget_stamp(diagram, max_weight))
    for disk in disks:
        g.add_vertex(disk.key, disk.to_dict())
    for d1, d2 in combinations(disks, 2):
        if are_disjoint(d1, d2):
            g.add_edge(d1.key, d2.key)
    g.fill_two_simplices()
    g.check()
    return g


def build_disk_complex(diagram, side, max_weight, workers=1):
    """Non-separating disks at budget; edges join disjoint disks, triangles span 2-simplices."""
    disks = enumerate_disks(diagram, side, max_weight, workers)
    return _disjointness_graph(disk_kind(side), diagram, max_weight, disks)


def build_primitive_complex(diagram, side, max_weight, workers=1):
    """The full subcomplex of the disk complex on the primitive disks."""
    disks = enumerate_primitive_disks(diagram, side, max_weight, workers)
    return _disjointness_graph(primitive_kind(side), diagram, max_weight, disks)


def build_pprime_complex(diagram, max_weight, side="V", workers=1):
    """
    Primitive disks joined when they form a primitive pair with a common dual.

    Each edge carries its common duals as witness; a triangle is a 2-simplex
    when all three of its pairs have common duals.
    """
    disks = enumerate_primitive_disks(diagram, side, max_weight, workers)
    g = ComplexGraph(pprime_kind(side), budget_stamp(diagram, max_weight))
    for disk in disks:
        g.add_vertex(disk.key, disk.to_dict())
    for d1, d2 in combinations(disks, 2):
        if not are_disjoint(d1, d2):
            continue
        witnesses = common_duals(diagram, d1, d2, max_weight, workers)
        if witnesses:
            g.add_edge(d1.key, d2.key, {"common_duals": [w.key for w in witnesses]})
    g.fill_two_simplices()
    g.check()
    return g


def build_dual_tree(diagram, base, max_weight, workers=1):
    """Duals of a primitive disk, joined when disjoint."""
    if not base.is_primitive:
        raise PreconditionError(f"{base!r} is not primitive")
    duals = dual_disks(diagram, base, max_weight, workers)
    g = _disjointness_graph(dual_tree_kind(opposite(base.side)), diagram, max_weight, duals)
    g.budget["base"] = base.key
    return g


def sphere_edge_clause(pair1, pair2):
    """
    Which adjacency clause joins two dual pairs: 'i', 'ii' or None.

    (i) they share the W-disk and their V-disks are disjoint; (ii) they share
    the V-disk and their W-disks are disjoint. A disk shared by both pairs is
    automatically a common dual of the other two disks.
    """
    same_w = pair1.w_disk.key == pair2.w_disk.key
    same_v = pair1.v_disk.key == pair2.v_disk.key
    if same_w and not same_v and are_disjoint(pair1.v_disk, pair2.v_disk):
        return "i"
    if same_v and not same_w and are_disjoint(pair1.w_disk, pair2.w_disk):
        return "ii"
    return None


def build_sphere_complex(diagram, max_weight, workers=1):
    """
    Dual pairs at budget, joined by the two shared-disk clauses.

    No 2-simplices are produced; any three pairwise adjacent vertices are
    recorded as certificates of a triangle in the sphere complex.
    """
    pairs = dual_pairs(diagram, max_weight, workers)
    g = ComplexGraph(SPHERE, budget_stamp(diagram, max_weight))
    for pair in pairs:
        g.add_vertex(pair.key, {"v_disk": pair.v_disk.to_dict(), "w_disk": pair.w_disk.to_dict()})

    # 1. Pairs sharing a disk are the only candidates for an edge.
    groups = {}
    for pair in pairs:
        groups.setdefault(("W", pair.w_disk.key), []).append(pair)
        groups.setdefault(("V", pair.v_disk.key), []).append(pair)
    for (shared_side, shared_key), members in sorted(groups.items()):
        for p1, p2 in combinations(members, 2):
            clause = sphere_edge_clause(p1, p2)
            if clause is not None:
                g.add_edge(p1.key, p2.key, {"clause": clause, "shared": shared_key})

    # 2. Triangles would contradict the absence of 3-cycles; keep them as certificates.
    filled = ComplexGraph(SPHERE + "-triangles", g.budget, dict(g.vertices), dict(g.edges))
    filled.fill_two_simplices()
    for triple in filled.two_simplices:
        g.certificates.append({"kind": "3-cycle", "vertices": list(triple)})
    g.check()
    logger.info("Sphere complex L(%d,%d) budget %d: %d vertices, %d edges",
                diagram.p, diagram.q, max_weight, len(g.vertices), len(g.edges))
    return g


def phi_V(sphere):
    """
    Projects the sphere complex to the primitive disks of V.

    Returns the image graph and the vertex map. Clause (i) edges map to edges
    witnessed by the shared W-disk; clause (ii) edges collapse to a vertex.
    """
    if sphere.kind != SPHERE:
        raise PreconditionError(f"phi_V expects a sphere complex, got {sphere.kind}")
    image = ComplexGraph(pprime_kind("V"), dict(sphere.budget))
    vertex_map = {}
    for key in sorted(sphere.vertices):
        disk = sphere.vertices[key]["v_disk"]
        vertex_map[key] = disk["key"]
        image.add_vertex(disk["key"], disk)
    for (u, v), witness in sorted(sphere.edges.items()):
        a, b = vertex_map[u], vertex_map[v]
        if a == b:
            continue
        current = image.edges.get(_edge_key(a, b), {"common_duals": []})
        duals = sorted(set(current["common_duals"]) | {sphere.vertices[u]["w_disk"]["key"]})
        image.add_edge(a, b, {"common_duals": duals})
    image.fill_two_simplices()
    return image, vertex_map


def canonical_cycle(cycle):
    """Least rotation or reflection of a cycle of vertex keys."""
    cycle = tuple(cycle)
    rotations = [cycle[i:] + cycle[:i] for i in range(len(cycle))]
    reverse = tuple(reversed(cycle))
    rotations += [reverse[i:] + reverse[:i] for i in range(len(reverse))]
    return min(rotations)


def find_cycles(g, max_len):
    """Every simple cycle with at most max_len vertices, once each, canonically ordered."""
    if max_len < 3:
        raise ValueError(f"max_len must be at least 3, got {max_len}")
    graph = g.graph if isinstance(g, ComplexGraph) else g
    found = {canonical_cycle(c) for c in nx.simple_cycles(graph, length_bound=max_len) if len(c) >= 3}
    return sorted(found, key=lambda c: (len(c), c))


def is_forest(g):
    graph = g.graph if isinstance(g, ComplexGraph) else g
    return graph.number_of_nodes() == 0 or nx.is_forest(graph)


def component_count(g):
    graph = g.graph if isinstance(g, ComplexGraph) else g
    return nx.number_connected_components(graph)


def cycle_ears(g, cycle):
    """
    Positions i where cycle[i - 1], cycle[i], cycle[i + 1] span a 2-simplex.

    Such a 2-simplex has exactly the two cycle edges at position i on the
    cycle when the cycle is longer than three.
    """
    n = len(cycle)
    return [i for i in range(n) if g.has_edge(cycle[i - 1], cycle[(i + 1) % n])]


def edge_cycle_census(g, max_len):
    """Maps every edge to the cycles of length <= max_len passing through it."""
    census = {edge: [] for edge in sorted(g.edges)}
    for cycle in find_cycles(g, max_len):
        for i, u in enumerate(cycle):
            census[_edge_key(u, cycle[(i + 1) % len(cycle)])].append(cycle)
    return census


def neighborhood(g, seed, radius):
    """Vertex keys within `radius` edges of `seed` in the explored graph."""
    if seed not in g.vertices:
        return set()
    return set(nx.ego_graph(g.graph, seed, radius=radius).nodes)


def valency_growth(builder, budgets, sample_size=10):
    """
    Vertex valencies along an ascending chain of budgets.

    `builder(max_weight)` returns a ComplexGraph. Vertices are sampled from
    the smallest budget so every row follows the same vertices.

    Returns:
        pandas.DataFrame indexed by vertex key with one column per budget.
    """
    budgets = sorted(budgets)
    graphs = {n: builder(n) for n in budgets}
    sample = sorted(graphs[budgets[0]].vertices)[:sample_size]
    rows = []
    for n in budgets:
        graph = graphs[n].graph
        for key in sample:
            rows.append({"vertex": key, "max_weight": n,
                         "valency": graph.degree(key) if key in graph else 0})
    frame = pd.DataFrame(rows, columns=["vertex", "max_weight", "valency"])
    if frame.empty:
        return frame
    return frame.pivot(index="vertex", columns="max_weight", values="valency")
