"""
Fixed combinatorial model of the closed orientable genus-2 surface.

The surface is the octagon with side word a b A B c d C D, fanned from its
first corner into six triangles. All eight corners of the octagon become a
single vertex V0, the four side pairs become the edges a, b, c, d and the five
fan diagonals become e4..e8. Every curve in the package is a normal curve with
respect to this triangulation and is keyed by its 9 edge weights.
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import NamedTuple

import numpy as np

from .errors import InvalidCurveError

logger = logging.getLogger(__name__)

MODEL_VERSION = "octagon-fan-v1"

EDGE_NAMES = ("a", "b", "c", "d", "e4", "e5", "e6", "e7", "e8")

# Sides of each triangle in counterclockwise order as (edge, forward) pairs.
# Side i runs from corner i to corner i + 1. Diagonals point away from the
# fan corner.
OCTAGON_FAN = (
    ((0, True), (1, True), (4, False)),
    ((4, True), (0, False), (5, False)),
    ((5, True), (1, False), (6, False)),
    ((6, True), (2, True), (7, False)),
    ((7, True), (3, True), (8, False)),
    ((8, True), (2, False), (3, False)),
)


class Corner(NamedTuple):
    triangle: int
    vertex: int


class Crossing(NamedTuple):
    """One passage of a traced curve through an edge.

    `index` counts the curve's points on the edge from tail to head and
    `direction` is +1 when the curve moves from the triangle on the left of
    the edge to the triangle on its right.
    """
    edge: int
    index: int
    direction: int


@dataclass(frozen=True)
class Triangulation:
    """A one-vertex triangulation given by oriented triangle sides."""
    triangles: tuple

    def __post_init__(self):
        self.check()

    @cached_property
    def edge_count(self):
        return 1 + max(edge for tri in self.triangles for edge, _ in tri)

    @cached_property
    def left_triangle(self):
        """Triangle holding each edge as a forward side (on the edge's left)."""
        left = [None] * self.edge_count
        for t, tri in enumerate(self.triangles):
            for edge, forward in tri:
                if forward:
                    left[edge] = t
        return tuple(left)

    @cached_property
    def right_triangle(self):
        right = [None] * self.edge_count
        for t, tri in enumerate(self.triangles):
            for edge, forward in tri:
                if not forward:
                    right[edge] = t
        return tuple(right)

    @cached_property
    def side_of(self):
        """Maps (edge, triangle) to the side index of the edge in that triangle."""
        return {(edge, t): s
                for t, tri in enumerate(self.triangles)
                for s, (edge, _) in enumerate(tri)}

    @property
    def euler_characteristic(self):
        return 1 - self.edge_count + len(self.triangles)

    def other_triangle(self, edge, triangle):
        if self.left_triangle[edge] == triangle:
            return self.right_triangle[edge]
        return self.left_triangle[edge]

    def direction_leaving(self, edge, triangle):
        """Sign of the crossing that leaves `triangle` through `edge`."""
        return 1 if self.left_triangle[edge] == triangle else -1

    def rotate(self, corner, counterclockwise=True):
        """
        Steps around the vertex from one triangle corner to the next.

        Returns the (edge, direction) crossed and the corner reached. A
        counterclockwise step leaves the corner through the side ending there,
        a clockwise step through the side starting there.
        """
        t, k = corner
        side = (k - 1) % 3 if counterclockwise else k
        edge = self.triangles[t][side][0]
        step = (edge, self.direction_leaving(edge, t))
        t_next = self.other_triangle(edge, t)
        j = self.side_of[(edge, t_next)]
        k_next = j if counterclockwise else (j + 1) % 3
        return step, Corner(t_next, k_next)

    def vertex_cycle(self, start=Corner(0, 0)):
        """All corners met while walking counterclockwise once around the vertex."""
        corners = [start]
        _, corner = self.rotate(start)
        while corner != start:
            corners.append(corner)
            _, corner = self.rotate(corner)
        return corners

    def check(self):
        # 1. Every edge is glued once forward and once reversed, in different triangles.
        for edge in range(self.edge_count):
            left, right = self.left_triangle[edge], self.right_triangle[edge]
            if left is None or right is None or left == right:
                raise ValueError(f"edge {edge} is not glued to two distinct triangle sides")
        if len(self.side_of) != 3 * len(self.triangles):
            raise ValueError("a triangle uses the same edge twice")
        # 2. Walking around the vertex must visit every corner: one vertex, connected.
        if len(self.vertex_cycle()) != 3 * len(self.triangles):
            raise ValueError("triangulation has more than one vertex")
        if self.euler_characteristic != -2:
            raise ValueError(f"euler characteristic {self.euler_characteristic} is not genus 2")


TRIANGULATION = Triangulation(OCTAGON_FAN)
EDGE_COUNT = TRIANGULATION.edge_count


@dataclass(frozen=True)
class NormalVerdict:
    """Outcome of validate_normal with the first violated constraint, if any."""
    valid: bool
    triangle: int = None
    message: str = "ok"
    diagnostics: tuple = field(default=())

    def __bool__(self):
        return self.valid


def validate_normal(weights):
    """
    Checks that a weight vector is the normal coordinate vector of a multicurve.

    Args:
        weights: 9 non-negative integers in edge order (a, b, c, d, e4..e8).

    Returns:
        NormalVerdict: valid, or the first triangle whose parity or triangle
        inequality fails, plus one diagnostic line per triangle.
    """
    if len(weights) != EDGE_COUNT:
        return NormalVerdict(False, None, f"expected {EDGE_COUNT} weights, got {len(weights)}")
    if any(int(w) != w or w < 0 for w in weights):
        return NormalVerdict(False, None, "weights must be non-negative integers")

    first_bad = None
    diagnostics = []
    for t, tri in enumerate(TRIANGULATION.triangles):
        sides = [weights[edge] for edge, _ in tri]
        problems = []
        if sum(sides) % 2:
            problems.append(f"odd side sum {sum(sides)}")
        for s in range(3):
            if 2 * sides[s] > sum(sides):
                problems.append(f"side {EDGE_NAMES[tri[s][0]]}={sides[s]} exceeds the other two")
        diagnostics.append(f"T{t} {tuple(sides)}: " + ("; ".join(problems) or "ok"))
        if problems and first_bad is None:
            first_bad = (t, f"triangle T{t}: {problems[0]}")

    if first_bad is not None:
        return NormalVerdict(False, first_bad[0], first_bad[1], tuple(diagnostics))
    return NormalVerdict(True, diagnostics=tuple(diagnostics))


def _corner_counts(sides):
    """Normal arcs cutting off each corner; corner i sits between side i - 1 and side i."""
    w0, w1, w2 = sides
    return ((w2 + w0 - w1) // 2, (w0 + w1 - w2) // 2, (w1 + w2 - w0) // 2)


def _flip(width, forward, position):
    """Converts between a position along a triangle side and an index along its edge."""
    return position if forward else width - 1 - position


def _arc_exit(sides, counts, side, position):
    """Follows the normal arc entering at (side, position) to its other endpoint."""
    if position < counts[side]:
        prev = (side - 1) % 3
        return prev, sides[prev] - 1 - position
    return (side + 1) % 3, sides[side] - 1 - position


@lru_cache(maxsize=65536)
def trace_components(weights):
    """
    Traces the normal multicurve with the given weights into closed orbits.

    Each component is returned as a tuple of Crossing records in the order the
    curve meets the edges, starting at its least (edge, index) point moving in
    direction +1.
    """
    tri = TRIANGULATION
    seen = set()
    orbits = []
    for edge in range(EDGE_COUNT):
        for index in range(weights[edge]):
            if (edge, index) in seen:
                continue
            start = Crossing(edge, index, 1)
            orbit = []
            current = start
            while True:
                orbit.append(current)
                seen.add((current.edge, current.index))
                e, i, d = current
                t = tri.right_triangle[e] if d == 1 else tri.left_triangle[e]
                s = tri.side_of[(e, t)]
                sides = [weights[x] for x, _ in tri.triangles[t]]
                position = _flip(weights[e], tri.triangles[t][s][1], i)
                s_out, p_out = _arc_exit(sides, _corner_counts(sides), s, position)
                e_out, forward_out = tri.triangles[t][s_out]
                current = Crossing(e_out, _flip(weights[e_out], forward_out, p_out),
                                   tri.direction_leaving(e_out, t))
                if current == start:
                    break
                if len(orbit) > sum(weights):
                    raise InvalidCurveError(f"tracing of {weights} did not close up")
            orbits.append(tuple(orbit))
    return tuple(orbits)


def _state_slot(edge, triangle):
    """State slots: a point on `edge` about to run through `triangle`."""
    return 2 * edge + (1 if TRIANGULATION.right_triangle[edge] == triangle else 0)


@lru_cache(maxsize=1)
def _slot_table():
    tri = TRIANGULATION
    table = []
    for edge in range(EDGE_COUNT):
        for triangle in (tri.left_triangle[edge], tri.right_triangle[edge]):
            s = tri.side_of[(edge, triangle)]
            sides = tri.triangles[triangle]
            exits = []
            for s_out in ((s - 1) % 3, (s + 1) % 3):
                e_out, forward_out = sides[s_out]
                exits.append((s_out, e_out, forward_out,
                              _state_slot(e_out, tri.other_triangle(e_out, triangle))))
            table.append((edge, s, sides[s][1], tuple(e for e, _ in sides), tuple(exits)))
    return tuple(table)


def batch_component_counts(rows, max_weight, chunk=None):
    """
    Number of components of every normal multicurve in `rows` at once.

    Mirrors trace_components: every point on an edge, paired with the
    triangle the curve runs through next, is a state, and the next-state
    map is built with array arithmetic for a whole block of weight vectors.
    Each component is two orbits of that map, one per direction; orbits are
    counted by pointer doubling on the least state label.

    Args:
        rows: integer array of shape (count, 9), every row a valid normal vector.
        max_weight: an upper bound on every weight in `rows`.
    """
    rows = np.asarray(rows, dtype=np.int32).reshape(-1, EDGE_COUNT)
    n = max(1, int(max_weight))
    size = 2 * EDGE_COUNT * n
    chunk = chunk or max(1, 1_000_000 // size)
    k = np.arange(n, dtype=np.int32)[None, :]
    own = np.arange(size, dtype=np.int32)
    steps = size.bit_length()
    counts = np.zeros(len(rows), dtype=np.int64)
    for start in range(0, len(rows), chunk):
        block = rows[start:start + chunk]
        nxt = np.empty((len(block), size), dtype=np.int32)
        valid = np.empty((len(block), size), dtype=bool)
        for slot, (edge, s, forward, side_edges, exits) in enumerate(_slot_table()):
            w = [block[:, e][:, None] for e in side_edges]
            w0, w1, w2 = w
            corner = ((w2 + w0 - w1) // 2, (w0 + w1 - w2) // 2, (w1 + w2 - w0) // 2)[s]
            width = w[s]
            position = k if forward else width - 1 - k
            targets = []
            for s_out, e_out, forward_out, slot_out in exits:
                if s_out == (s - 1) % 3:
                    p_out = w[s_out] - 1 - position
                else:
                    p_out = width - 1 - position
                index = p_out if forward_out else w[s_out] - 1 - p_out
                targets.append(slot_out * n + index)
            columns = slice(slot * n, (slot + 1) * n)
            inside = k < width
            valid[:, columns] = inside
            step = np.where(position < corner, targets[0], targets[1])
            nxt[:, columns] = np.where(inside, step, own[columns])
        label = np.broadcast_to(own, nxt.shape).copy()
        for _ in range(steps):
            label = np.minimum(label, np.take_along_axis(label, nxt, axis=1))
            nxt = np.take_along_axis(nxt, nxt, axis=1)
        counts[start:start + len(block)] = ((label == own) & valid).sum(axis=1) // 2
    return counts


def reduce_walk(walk):
    """Cyclically cancels back-and-forth passages through the same edge."""
    stack = []
    for step in walk:
        if stack and stack[-1][0] == step[0] and stack[-1][1] == -step[1]:
            stack.pop()
        else:
            stack.append(step)
    lo, hi = 0, len(stack) - 1
    while lo < hi and stack[lo][0] == stack[hi][0] and stack[lo][1] == -stack[hi][1]:
        lo += 1
        hi -= 1
    return tuple(stack[lo:hi + 1])


def reverse_walk(walk):
    return tuple((edge, -direction) for edge, direction in reversed(walk))


def canonical_walk(walk):
    """Least rotation of the walk or of its reverse; the key of an unoriented cyclic walk."""
    if not walk:
        return ()
    candidates = []
    for seq in (tuple(walk), reverse_walk(walk)):
        candidates.extend(seq[i:] + seq[:i] for i in range(len(seq)))
    return min(candidates)


def _walk_text(walk):
    return "".join(chr(65 + 2 * edge + (direction > 0)) for edge, direction in walk)


def same_cyclic_walk(w1, w2):
    """True when w2 is a rotation of w1 or of its reverse."""
    if len(w1) != len(w2):
        return False
    doubled = _walk_text(w1) * 2
    return _walk_text(w2) in doubled or _walk_text(reverse_walk(w2)) in doubled


def walk_weights(walk):
    weights = [0] * EDGE_COUNT
    for edge, _ in walk:
        weights[edge] += 1
    return tuple(weights)


@dataclass(frozen=True, order=True)
class NormalCurve:
    """
    A normal multicurve on the genus-2 surface, keyed by its 9 edge weights.

    Weights are listed in edge order a, b, c, d, e4..e8. Construction
    validates parity and triangle inequalities and raises InvalidCurveError
    on failure.
    """
    weights: tuple

    def __post_init__(self):
        verdict = validate_normal(tuple(self.weights))
        if not verdict:
            raise InvalidCurveError(f"{list(self.weights)} is not normal: {verdict.message}")
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))

    @classmethod
    def empty(cls):
        return cls((0,) * EDGE_COUNT)

    @classmethod
    def from_walk(cls, walk):
        """
        Builds the normal curve realizing a closed walk in the dual graph.

        The walk is cyclically reduced first. Raises InvalidCurveError when
        the reduced walk is not carried by a single simple normal curve.
        """
        walk = reduce_walk(walk)
        curve = cls(walk_weights(walk))
        if walk and (curve.component_count != 1
                     or not same_cyclic_walk(curve.walk, walk)):
            raise InvalidCurveError("walk does not describe a simple closed curve")
        return curve

    def __add__(self, other):
        return NormalCurve(tuple(x + y for x, y in zip(self.weights, other.weights)))

    @property
    def key(self):
        return ".".join(str(w) for w in self.weights)

    @property
    def total_weight(self):
        return sum(self.weights)

    @property
    def is_empty(self):
        return not any(self.weights)

    @cached_property
    def traced(self):
        return trace_components(self.weights)

    @property
    def component_count(self):
        return len(self.traced)

    @property
    def is_connected(self):
        return self.component_count == 1

    @property
    def is_vertex_linking(self):
        return self.weights == (2,) * EDGE_COUNT

    @property
    def is_essential(self):
        return self.is_connected and not self.is_vertex_linking

    @cached_property
    def walk(self):
        """The (edge, direction) sequence of a connected curve."""
        require_connected(self)
        return tuple((c.edge, c.direction) for c in self.traced[0])

    def components(self):
        return components(self)

    def to_dict(self):
        return {"key": self.key, "weights": list(self.weights)}

    def __repr__(self):
        return f"<NormalCurve {self.key}>"


def require_connected(curve, essential=False):
    if curve.component_count != 1:
        raise InvalidCurveError(f"{curve!r} has {curve.component_count} components, expected 1")
    if essential and curve.is_vertex_linking:
        raise InvalidCurveError(f"{curve!r} is the vertex-linking curve")


def components(curve):
    """Splits a multicurve into its connected components, in tracing order."""
    return [NormalCurve(walk_weights([(c.edge, c.direction) for c in orbit]))
            for orbit in curve.traced]


def homology_vector(curve):
    """
    Signed crossing counts of a curve with the edge loops a, b, c, d.

    These are the algebraic intersection numbers with a symplectic basis, so
    they determine the integral homology class of the curve.
    """
    counts = [0, 0, 0, 0]
    for orbit in curve.traced:
        for crossing in orbit:
            if crossing.edge < 4:
                counts[crossing.edge] += crossing.direction
    return tuple(counts)


def homology_class_mod2(curve):
    """Z/2 homology class in the cellular basis dual to the edges a, b, c, d."""
    require_connected(curve)
    return tuple(w % 2 for w in curve.weights[:4])


def algebraic_intersection(c1, c2):
    """Algebraic intersection number, up to one global sign convention."""
    x, y = homology_vector(c1), homology_vector(c2)
    return x[0] * y[1] - x[1] * y[0] + x[2] * y[3] - x[3] * y[2]


def is_separating(curve):
    require_connected(curve, essential=True)
    return not any(homology_class_mod2(curve))


def vertex_loop(corner, counterclockwise=True):
    """The walk once around the vertex starting and ending at `corner`."""
    steps = []
    step, current = TRIANGULATION.rotate(corner, counterclockwise)
    steps.append(step)
    while current != corner:
        step, current = TRIANGULATION.rotate(current, counterclockwise)
        steps.append(step)
    return tuple(steps)


def edge_pushoff(edge):
    """
    The normal curve parallel to the edge loop `edge`.

    It runs beside the edge inside the triangle on the edge's left and closes
    up by turning counterclockwise around the vertex from the edge's tail to
    its head.
    """
    tri = TRIANGULATION
    t = tri.left_triangle[edge]
    s = tri.side_of[(edge, t)]
    stop = Corner(t, (s + 1) % 3)
    steps = []
    current = Corner(t, s)
    while current != stop:
        step, current = tri.rotate(current)
        steps.append(step)
    return NormalCurve.from_walk(steps)


def arc_corners(curve):
    """
    For each arc of a connected curve, the triangle corner it turns around.

    Arc j lies between crossing j and crossing j + 1 of the traced curve.
    """
    tri = TRIANGULATION
    orbit = curve.traced[0]
    corners = []
    for j, entry in enumerate(orbit):
        leave = orbit[(j + 1) % len(orbit)]
        t = tri.right_triangle[entry.edge] if entry.direction == 1 else tri.left_triangle[entry.edge]
        s_in, s_out = tri.side_of[(entry.edge, t)], tri.side_of[(leave.edge, t)]
        vertex = (s_in + 1) % 3 if s_out == (s_in + 1) % 3 else s_in
        corners.append(Corner(t, vertex))
    return corners

