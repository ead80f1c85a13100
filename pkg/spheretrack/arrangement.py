"""
Two normal curves drawn together on the triangulated surface.

An Arrangement places the points of two multicurves on every edge, draws
their normal arcs as chords of each triangle and records where chords cross.
CrossingGraph turns that picture into a combinatorial map and removes
bigons until the crossings that survive realize the minimal intersection.
The curve-pair operations built on top (intersection numbers, Dehn twists,
band surgery, minimal position) live here as well.
"""
import logging
from functools import lru_cache
from typing import NamedTuple

from networkx.utils import UnionFind

from .errors import InvalidCurveError, PreconditionError
from .surface import (EDGE_COUNT, TRIANGULATION, NormalCurve, components,
                      homology_class_mod2, is_separating, require_connected,
                      reverse_walk, vertex_loop, arc_corners, Corner)

logger = logging.getLogger(__name__)

FIRST, SECOND = "A", "B"


class Chord(NamedTuple):
    """One normal arc of a curve inside a triangle.

    `start` and `end` are boundary keys (side, position) that grow
    counterclockwise around the triangle; `start_point`/`end_point` are
    (edge, position) keys of the shared edge points.
    """
    label: str
    component: int
    arc: int
    triangle: int
    start: tuple
    end: tuple
    start_point: tuple
    end_point: tuple


class ChordCrossing(NamedTuple):
    id: int
    triangle: int
    first: int
    second: int
    first_rank: tuple
    second_rank: tuple
    sign: int


def _between(key, lo, hi):
    """True when `key` lies strictly on the counterclockwise boundary arc from lo to hi."""
    if lo < hi:
        return lo < key < hi
    return key > lo or key < hi


def _crosses(c, d):
    return _between(d.start, c.start, c.end) != _between(d.end, c.start, c.end)


def _rank_along(c, d):
    # Chords crossing c meet it in the order their endpoints appear on the
    # counterclockwise arc from c.start to c.end.
    key = d.start if _between(d.start, c.start, c.end) else d.end
    return (key < c.start, key)


def _merge_positions(first, second):
    """Interleaves the two curves' points along each edge, first curve wins ties."""
    positions = {}
    totals = []
    for edge in range(EDGE_COUNT):
        wa, wb = first[edge], second[edge]
        i = j = 0
        while i < wa or j < wb:
            if j >= wb or (i < wa and (2 * i + 1) * wb <= (2 * j + 1) * wa):
                positions[(FIRST, edge, i)] = i + j
                i += 1
            else:
                positions[(SECOND, edge, j)] = i + j
                j += 1
        totals.append(wa + wb)
    return positions, tuple(totals)


class Arrangement:
    """Chords and chord crossings of two multicurves in transverse position."""

    def __init__(self, first, second):
        self.curves = {FIRST: first, SECOND: second}
        self.positions, self.edge_totals = _merge_positions(first.weights, second.weights)
        self.orbits = {FIRST: first.traced, SECOND: second.traced}
        self.chords = {FIRST: [], SECOND: []}
        self.chord_index = {}
        for label in (FIRST, SECOND):
            self._draw(label)
        self.crossings = []
        self.along = {FIRST: [[] for _ in self.chords[FIRST]],
                      SECOND: [[] for _ in self.chords[SECOND]]}
        self._cross()

    def _boundary_key(self, label, crossing, triangle):
        tri = TRIANGULATION
        side = tri.side_of[(crossing.edge, triangle)]
        forward = tri.triangles[triangle][side][1]
        position = self.positions[(label, crossing.edge, crossing.index)]
        along_side = position if forward else self.edge_totals[crossing.edge] - 1 - position
        return (side, along_side), (crossing.edge, position)

    def _draw(self, label):
        tri = TRIANGULATION
        for comp, orbit in enumerate(self.orbits[label]):
            for arc, entry in enumerate(orbit):
                leave = orbit[(arc + 1) % len(orbit)]
                t = tri.right_triangle[entry.edge] if entry.direction == 1 else tri.left_triangle[entry.edge]
                start, start_point = self._boundary_key(label, entry, t)
                end, end_point = self._boundary_key(label, leave, t)
                self.chord_index[(label, comp, arc)] = len(self.chords[label])
                self.chords[label].append(Chord(label, comp, arc, t, start, end, start_point, end_point))

    def _cross(self):
        by_triangle = {}
        for label in (FIRST, SECOND):
            for idx, chord in enumerate(self.chords[label]):
                by_triangle.setdefault((chord.triangle, label), []).append(idx)
        for t in range(len(TRIANGULATION.triangles)):
            for ia in by_triangle.get((t, FIRST), []):
                ca = self.chords[FIRST][ia]
                for ib in by_triangle.get((t, SECOND), []):
                    cb = self.chords[SECOND][ib]
                    if not _crosses(ca, cb):
                        continue
                    sign = -1 if _between(cb.end, ca.start, ca.end) else 1
                    crossing = ChordCrossing(len(self.crossings), t, ia, ib,
                                             _rank_along(ca, cb), _rank_along(cb, ca), sign)
                    self.crossings.append(crossing)
                    self.along[FIRST][ia].append(crossing.id)
                    self.along[SECOND][ib].append(crossing.id)
        for ia, ids in enumerate(self.along[FIRST]):
            ids.sort(key=lambda cid: self.crossings[cid].first_rank)
        for ib, ids in enumerate(self.along[SECOND]):
            ids.sort(key=lambda cid: self.crossings[cid].second_rank)

    def sequence(self, label, component=0):
        """Crossing ids met while travelling once along one component of a curve."""
        ids = []
        for arc in range(len(self.orbits[label][component])):
            ids.extend(self.along[label][self.chord_index[(label, component, arc)]])
        return ids

    def chord_of(self, label, crossing_id):
        crossing = self.crossings[crossing_id]
        return self.chords[label][crossing.first if label == FIRST else crossing.second]

    def path(self, label, start_id, stop_id):
        """
        The walk of a curve from one crossing forward to another.

        Returns the (edge, direction) steps passed between the two crossings;
        going from a crossing back to itself returns the whole loop.
        """
        start, stop = self.chord_of(label, start_id), self.chord_of(label, stop_id)
        orbit = self.orbits[label][start.component]
        if stop.component != start.component:
            raise PreconditionError("crossings lie on different components")
        length = len(orbit)
        steps = (stop.arc - start.arc) % length
        if steps == 0:
            ids = self.along[label][self.chord_index[(label, start.component, start.arc)]]
            if start_id == stop_id or ids.index(stop_id) < ids.index(start_id):
                steps = length
        return tuple((orbit[(start.arc + i) % length].edge, orbit[(start.arc + i) % length].direction)
                     for i in range(1, steps + 1))


class CrossingGraph:
    """
    The four-valent graph of crossings of an Arrangement with its faces.

    Each face remembers the complementary region of the two curves it
    bounds, with that region's Euler characteristic and whether it contains
    the triangulation vertex. Bigon removal rewires the graph in place.
    """

    def __init__(self, arrangement):
        self.arrangement = arrangement
        self.sigma, self.twin, self.origin, self.label, self.region = {}, {}, {}, {}, {}
        self.chi, self.has_vertex = {}, {}
        self._build()

    def _build(self):
        arr = self.arrangement
        tri = TRIANGULATION
        origin, twin, label = [], [], []
        sigma = {}

        def link(u, v, lab):
            d = len(origin)
            origin.extend((u, v))
            twin.extend((d + 1, d))
            label.extend((lab, lab))
            return d, d + 1

        def rotation(darts):
            for i, dart in enumerate(darts):
                sigma[dart] = darts[(i + 1) % len(darts)]

        # 1. Triangulation edges, cut at every curve point.
        tail_dart, head_dart, toward_head, toward_tail = {}, {}, {}, {}
        for edge in range(EDGE_COUNT):
            m = arr.edge_totals[edge]
            nodes = ["v"] + [("p", edge, k) for k in range(m)] + ["v"]
            for k in range(m + 1):
                fwd, back = link(nodes[k], nodes[k + 1], "T")
                if k == 0:
                    tail_dart[edge] = fwd
                else:
                    toward_head[(edge, k - 1)] = fwd
                if k == m:
                    head_dart[edge] = back
                else:
                    toward_tail[(edge, k)] = back

        # 2. Chords, cut at their crossings.
        into, at_crossing = {}, {}
        for lab in (FIRST, SECOND):
            for ci, chord in enumerate(arr.chords[lab]):
                ids = arr.along[lab][ci]
                nodes = [("p",) + chord.start_point] + [("x", cid) for cid in ids] + [("p",) + chord.end_point]
                darts = [link(nodes[k], nodes[k + 1], lab) for k in range(len(nodes) - 1)]
                into[(chord.start_point, chord.triangle)] = darts[0][0]
                into[(chord.end_point, chord.triangle)] = darts[-1][1]
                for k, cid in enumerate(ids):
                    at_crossing[(cid, lab)] = (darts[k + 1][0], darts[k][1])

        # 3. Counterclockwise rotations at crossings, edge points and the vertex.
        for crossing in arr.crossings:
            a_fwd, a_back = at_crossing[(crossing.id, FIRST)]
            b_fwd, b_back = at_crossing[(crossing.id, SECOND)]
            left, right = (b_fwd, b_back) if crossing.sign == 1 else (b_back, b_fwd)
            rotation([a_fwd, left, a_back, right])
        for edge in range(EDGE_COUNT):
            for k in range(arr.edge_totals[edge]):
                point = (edge, k)
                rotation([toward_head[point], into[(point, tri.left_triangle[edge])],
                          toward_tail[point], into[(point, tri.right_triangle[edge])]])
        for t, sides in enumerate(tri.triangles):
            for i, (edge, forward) in enumerate(sides):
                prev_edge, prev_forward = sides[i - 1]
                start = tail_dart[edge] if forward else head_dart[edge]
                sigma[start] = head_dart[prev_edge] if prev_forward else tail_dart[prev_edge]

        # 4. Faces, then regions glued across triangulation edges.
        face = {}
        faces = 0
        for dart in range(len(origin)):
            if dart in face:
                continue
            current = dart
            while current not in face:
                face[current] = faces
                current = sigma[twin[current]]
            faces += 1
        regions = UnionFind(range(faces))
        for dart in range(len(origin)):
            if label[dart] == "T":
                regions.union(face[dart], face[twin[dart]])
        for f in range(faces):
            root = regions[f]
            self.chi[root] = self.chi.get(root, 0) + 1
            self.has_vertex.setdefault(root, False)
        for dart in range(len(origin)):
            if label[dart] == "T" and dart < twin[dart]:
                self.chi[regions[face[dart]]] -= 1
        self.chi[regions[face[tail_dart[0]]]] += 1
        self.has_vertex[regions[face[tail_dart[0]]]] = True

        # 5. Keep only crossing darts; edge points are passed straight through.
        for dart in range(len(origin)):
            if origin[dart][0] != "x":
                continue
            current = dart
            while True:
                far = twin[current]
                if origin[far][0] == "x":
                    break
                current = sigma[sigma[far]]
            self.twin[dart] = far
            self.sigma[dart] = sigma[dart]
            self.origin[dart] = origin[dart][1]
            self.label[dart] = label[dart]
            self.region[dart] = regions[face[dart]]

    @property
    def crossing_count(self):
        return len(set(self.origin.values()))

    @property
    def survivors(self):
        return sorted(set(self.origin.values()))

    def _face_next(self, dart):
        return self.sigma[self.twin[dart]]

    def find_bigon(self, punctured=False):
        """A bigon face bounding a disk, as (first-curve dart, second-curve dart), or None."""
        for dart in sorted(self.origin):
            other = self._face_next(dart)
            if self._face_next(other) != dart or self.origin[dart] == self.origin[other]:
                continue
            if self.label[dart] == self.label[other]:
                continue
            region = self.region[dart]
            if self.chi[region] != 1 or (punctured and self.has_vertex[region]):
                continue
            return (dart, other) if self.label[dart] == FIRST else (other, dart)
        return None

    def remove_bigon(self, first_dart, second_dart):
        x, y = self.origin[first_dart], self.origin[second_dart]
        sigma, twin = self.sigma, self.twin
        pa_x = sigma[sigma[first_dart]]
        pb_x = sigma[sigma[twin[second_dart]]]
        pa_y = sigma[sigma[twin[first_dart]]]
        pb_y = sigma[sigma[second_dart]]
        region_x = self.region[pb_x] if sigma[pa_x] == pb_x else self.region[pa_x]
        region_y = self.region[pb_y] if sigma[pa_y] == pb_y else self.region[pa_y]
        if self.crossing_count == 2:
            for table in (self.sigma, self.twin, self.origin, self.label, self.region):
                table.clear()
            return
        a_u, a_w, b_u, b_w = twin[pa_x], twin[pa_y], twin[pb_x], twin[pb_y]
        twin[a_u], twin[a_w] = a_w, a_u
        twin[b_u], twin[b_w] = b_w, b_u
        for dart in [d for d, o in self.origin.items() if o in (x, y)]:
            for table in (self.sigma, self.twin, self.origin, self.label, self.region):
                del table[dart]
        if region_x == region_y:
            self.chi[region_x] -= 1
        else:
            self.chi[region_x] += self.chi[region_y] - 1
            self.has_vertex[region_x] = self.has_vertex[region_x] or self.has_vertex[region_y]
            for dart, region in self.region.items():
                if region == region_y:
                    self.region[dart] = region_x

    def remove_bigons(self, punctured=False):
        removed = 0
        while self.origin:
            bigon = self.find_bigon(punctured)
            if bigon is None:
                break
            self.remove_bigon(*bigon)
            removed += 1
        return removed


def _ordered_pair(c1, c2):
    return (c1.weights, c2.weights) if c1.weights <= c2.weights else (c2.weights, c1.weights)


@lru_cache(maxsize=200000)
def _intersection_cached(w1, w2):
    if w1 == w2:
        return 0
    arrangement = Arrangement(NormalCurve(w1), NormalCurve(w2))
    if not arrangement.crossings:
        return 0
    graph = CrossingGraph(arrangement)
    graph.remove_bigons()
    return graph.crossing_count


def intersection_number(c1, c2):
    """
    Minimal geometric intersection number of two connected essential curves.

    The curves are drawn from their normal arcs and bigons are removed until
    none is left; by the bigon criterion the remaining crossings are minimal.
    Raises InvalidCurveError for disconnected or inessential input.
    """
    require_connected(c1, essential=True)
    require_connected(c2, essential=True)
    return _intersection_cached(*_ordered_pair(c1, c2))


def punctured_intersection(c1, c2):
    """Minimal crossing count when isotopies may not pass over the vertex."""
    graph = CrossingGraph(Arrangement(c1, c2))
    graph.remove_bigons(punctured=True)
    return graph.crossing_count


def is_isotopic(c1, c2):
    """
    Isotopy test for connected essential curves on the closed surface.

    Weights are only a key up to sliding across the vertex, so equal keys are
    sufficient but not necessary. Non-separating curves are isotopic iff
    they are disjoint with equal Z/2 class; disjoint separating curves are
    isotopic when both split the surface the same way, which on genus 2
    holds for any two disjoint separating essential curves.
    """
    if c1 == c2:
        return True
    sep1, sep2 = is_separating(c1), is_separating(c2)
    if sep1 != sep2:
        return False
    if not sep1 and homology_class_mod2(c1) != homology_class_mod2(c2):
        return False
    return intersection_number(c1, c2) == 0


def slide_candidates(curve):
    """Simple curves obtained by inserting a loop around the vertex into one arc."""
    require_connected(curve, essential=True)
    walk = curve.walk
    found = set()
    for j, corner in enumerate(arc_corners(curve)):
        for vertex in range(3):
            for counterclockwise in (True, False):
                loop = vertex_loop(Corner(corner.triangle, vertex), counterclockwise)
                try:
                    slid = NormalCurve.from_walk(walk[:j + 1] + loop + walk[j + 1:])
                except InvalidCurveError:
                    continue
                if slid != curve and slid.is_essential:
                    found.add(slid)
    return sorted(found)


def representative_rank(curve):
    """Order on isotopic normal representatives: max weight, total weight, then weights."""
    return (max(curve.weights), curve.total_weight, curve.weights)


def least_representative(curve):
    """
    Descends through vertex slides while the representative rank drops.

    The result is isotopic to `curve` and is the key used for it everywhere
    else in the package.
    """
    require_connected(curve, essential=True)
    current = curve
    while True:
        better = min(slide_candidates(current), key=representative_rank, default=None)
        if better is None or representative_rank(better) >= representative_rank(current):
            return current
        current = better


def minimal_position(c1, c2, max_steps=None):
    """
    Slides the two curves across the vertex until they meet minimally.

    Returns (first, second, arrangement, survivors): isotopic copies of the
    inputs whose arrangement keeps exactly intersection_number(c1, c2)
    crossings after removing only bigons that avoid the vertex. The
    surviving crossing ids index arrangement.crossings.
    """
    target = intersection_number(c1, c2)
    first, second = c1, c2
    steps = 0
    while True:
        arrangement = Arrangement(first, second)
        graph = CrossingGraph(arrangement)
        graph.remove_bigons(punctured=True)
        count = graph.crossing_count
        if count == target:
            return first, second, arrangement, graph.survivors
        if max_steps is not None and steps >= max_steps:
            break
        best = None
        for slid_first, slid_second in ([(s, second) for s in slide_candidates(first)]
                                        + [(first, s) for s in slide_candidates(second)]):
            candidate = punctured_intersection(slid_first, slid_second)
            rank = (candidate, slid_first.total_weight + slid_second.total_weight,
                    slid_first.weights, slid_second.weights)
            if best is None or rank < best[0]:
                best = (rank, slid_first, slid_second)
        if best is None or best[0][0] >= count:
            break
        logger.debug("vertex slide lowers crossings %d -> %d", count, best[0][0])
        _, first, second = best
        steps += 1
    raise PreconditionError(f"could not bring {c1!r} and {c2!r} into minimal position")


def vertex_slides(curve):
    """Isotopic copies of `curve` that differ from it by one slide over the vertex."""
    return slide_candidates(curve)


def _loop_from(arrangement, label, crossing_id, forward):
    """The full loop of a curve starting at one of its crossings, in either direction."""
    loop = arrangement.path(label, crossing_id, crossing_id)
    return loop if forward else reverse_walk(loop)


def dehn_twist(curve, along, power=1):
    """
    Image of a multicurve under the `power`-fold Dehn twist along a curve.

    Each time the curve meets `along` it turns left onto `along`, travels
    once around it per unit of power and carries on; negative powers turn
    right. The rerouted walks are reduced back to normal form, and a
    connected image is slid to its least representative.
    """
    require_connected(along, essential=True)
    if power == 0 or curve.is_empty:
        return curve
    if curve.is_essential and intersection_number(curve, along) == 0:
        return curve
    arrangement = Arrangement(curve, along)
    if not arrangement.crossings:
        return curve
    result = NormalCurve.empty()
    for comp, orbit in enumerate(curve.traced):
        walk = []
        for arc, entry in enumerate(orbit):
            walk.append((entry.edge, entry.direction))
            for cid in arrangement.along[FIRST][arrangement.chord_index[(FIRST, comp, arc)]]:
                forward = (arrangement.crossings[cid].sign == 1) == (power > 0)
                loop = _loop_from(arrangement, SECOND, cid, forward)
                walk.extend(loop * abs(power))
        result = result + NormalCurve.from_walk(walk)
    if result.is_essential:
        return least_representative(result)
    return result


def band_surgery_candidates(c1, c2):
    """
    Cut-and-paste resolutions of c1 along the subarcs of c2.

    The pair is first brought into minimal position. For every subarc of c2
    between consecutive crossings with c1, c1 is cut at the two crossings
    and each of its halves is closed up along the subarc. Returns the
    essential results, each meeting c2 fewer times than c1 does.
    Raises PreconditionError when i(c1, c2) < 2.
    """
    target = intersection_number(c1, c2)
    if target < 2:
        raise PreconditionError(f"band surgery needs at least two crossings, found {target}")
    _, _, arrangement, survivors = minimal_position(c1, c2)
    alive = set(survivors)
    order = [cid for cid in arrangement.sequence(SECOND) if cid in alive]
    found = set()
    for k, x in enumerate(order):
        y = order[(k + 1) % len(order)]
        band = arrangement.path(SECOND, x, y)
        for walk in (band + arrangement.path(FIRST, y, x),
                     arrangement.path(FIRST, x, y) + reverse_walk(band)):
            try:
                resolved = NormalCurve.from_walk(walk)
            except InvalidCurveError:
                logger.debug("resolution at crossings %d, %d is not simple", x, y)
                continue
            if not resolved.is_essential:
                continue
            if intersection_number(resolved, c2) < target:
                found.add(resolved)
    return sorted(found)


def neighborhood_boundary(c1, c2):
    """
    Boundary of a regular neighborhood of two curves meeting once.

    Read as the commutator of the two loops based at their single crossing,
    then slid to its least representative.
    """
    if intersection_number(c1, c2) != 1:
        raise PreconditionError("curves must meet exactly once")
    _, _, arrangement, survivors = minimal_position(c1, c2)
    x = survivors[0]
    first = _loop_from(arrangement, FIRST, x, True)
    second = _loop_from(arrangement, SECOND, x, True)
    circle = NormalCurve.from_walk(first + second + reverse_walk(first) + reverse_walk(second))
    return least_representative(circle)
