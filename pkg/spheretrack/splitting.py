"""
The genus-2 Heegaard splitting of a lens space L(p, q) as data.

A HeegaardDiagram holds the meridians alpha1, alpha2 of V and beta1, beta2
of W as normal curves. Words of curves in pi1(V) and pi1(W) are read from
signed crossings with these meridians, which gives disk detection,
primitivity, dual disks, common duals and the Haken circle of a dual pair.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from math import gcd

import numpy as np
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form
from sympy.polys.domains import ZZ

from .arrangement import (FIRST, SECOND, Arrangement, band_surgery_candidates,
                          dehn_twist, intersection_number, is_isotopic, minimal_position,
                          neighborhood_boundary, representative_rank)
from .errors import (CacheMismatchError, ConfigError, PreconditionError,
                     SphereTrackError)
from .surface import (EDGE_COUNT, MODEL_VERSION, NormalCurve, algebraic_intersection,
                      batch_component_counts, edge_pushoff, homology_class_mod2, homology_vector,
                      is_separating, walk_weights)
from .words import (WORD_LENGTH_CAP, FreeWord, abelianization, canonical,
                    is_primitive, is_trivial)

logger = logging.getLogger(__name__)

SIDES = ("V", "W")


def opposite(side):
    return "W" if side == "V" else "V"


def check_lens_parameters(p, q):
    """Raises ConfigError unless p >= 2, 1 <= q <= p/2 and gcd(p, q) = 1."""
    if p < 2:
        raise ConfigError(f"p must be at least 2, got {p}")
    if not 1 <= q or 2 * q > p:
        raise ConfigError(f"q must satisfy 1 <= q <= p/2, got q={q} for p={p}")
    if gcd(p, q) != 1:
        raise ConfigError(f"p and q must be coprime, got gcd({p}, {q}) = {gcd(p, q)}")


def _euclid_steps(p, q):
    """Twists turning the class of b into q a + p b, as ('a' | 'b', power) from first to last."""
    steps = []
    x, y = q, p
    while (x, y) != (0, 1):
        if x >= y:
            k = x // y
            x -= k * y
            steps.append(("a", k))
        else:
            k = (y - 1) // x
            y -= k * x
            steps.append(("b", k))
    return list(reversed(steps))


def slope_curve(p, q):
    """
    A simple closed curve in the first handle with homology class q a + p b.

    Starts from the push-off of the edge loop b and applies Dehn twists along
    the push-offs of a and b following the Euclidean algorithm; at each step
    the sign of the twist is the one whose homology matches.
    """
    loops = {"a": edge_pushoff(0), "b": edge_pushoff(1)}
    curve = loops["b"]
    x, y = 0, 1
    for generator, power in _euclid_steps(p, q):
        if generator == "a":
            x += power * y
        else:
            y += power * x
        for sign in (1, -1):
            twisted = dehn_twist(curve, loops[generator], sign * power)
            v = homology_vector(twisted)
            if (abs(v[0]), abs(v[1]), v[2], v[3]) == (y, x, 0, 0):
                curve = twisted
                break
        else:
            raise SphereTrackError(f"no twist reached the class {x} a + {y} b")
    return curve


@dataclass(frozen=True)
class HeegaardDiagram:
    """
    Meridians of the standard genus-2 splitting of L(p, q).

    Words are read along the traced orientation of each curve: a crossing
    counts +1 when the meridian passes from the curve's right to its left.
    The meridian systems are traced as two-component multicurves, which fixes
    the orientation of every meridian once for all reads.
    """
    p: int
    q: int
    alpha1: NormalCurve
    alpha2: NormalCurve
    beta1: NormalCurve
    beta2: NormalCurve
    model_version: str = MODEL_VERSION

    @property
    def meridians(self):
        return {"V": (self.alpha1, self.alpha2), "W": (self.beta1, self.beta2)}

    def system(self, side):
        first, second = self.meridians[side]
        return first + second

    @cached_property
    def _generator_of_component(self):
        table = {}
        for side, (first, _) in self.meridians.items():
            system = self.system(side)
            table[side] = tuple(
                1 if walk_weights([(c.edge, c.direction) for c in orbit]) == first.weights else 2
                for orbit in system.traced)
        return table

    @cached_property
    def _meridian_homology(self):
        return {side: tuple(homology_vector(c) for c in curves) for side, curves in self.meridians.items()}

    def to_dict(self):
        return {
            "p": self.p,
            "q": self.q,
            "model_version": self.model_version,
            "sign_convention": "traced orientation; +1 when the meridian crosses from right to left",
            "alpha1": list(self.alpha1.weights),
            "alpha2": list(self.alpha2.weights),
            "beta1": list(self.beta1.weights),
            "beta2": list(self.beta2.weights),
        }

    @classmethod
    def from_dict(cls, payload):
        if payload.get("model_version") != MODEL_VERSION:
            raise CacheMismatchError(
                f"preset model version {payload.get('model_version')!r} differs from {MODEL_VERSION!r}")
        return cls(payload["p"], payload["q"],
                   *(NormalCurve(tuple(payload[name])) for name in ("alpha1", "alpha2", "beta1", "beta2")))

    def __repr__(self):
        return f"<HeegaardDiagram L({self.p},{self.q})>"


def read_word(diagram, side, curve, cap=WORD_LENGTH_CAP):
    """
    The cyclic word of signed crossings of a connected curve with the
    meridians of one side, in canonical form.
    """
    arrangement = Arrangement(curve, diagram.system(side))
    generators = diagram._generator_of_component[side]
    letters = []
    for cid in arrangement.sequence(FIRST):
        crossing = arrangement.crossings[cid]
        component = arrangement.chords[SECOND][crossing.second].component
        letters.append(generators[component] * crossing.sign)
    return canonical(FreeWord(tuple(letters)), cap)


def word_in_V(diagram, curve, cap=WORD_LENGTH_CAP):
    return read_word(diagram, "V", curve, cap)


def word_in_W(diagram, curve, cap=WORD_LENGTH_CAP):
    return read_word(diagram, "W", curve, cap)


def bounds_disk(diagram, side, curve):
    return is_trivial(read_word(diagram, side, curve, cap=None))


def homology_matrix(diagram):
    """Rows: abelianized words of beta1 and beta2 in pi1(V); presents H1 of L(p, q)."""
    return Matrix([list(abelianization(word_in_V(diagram, beta, cap=None)))
                   for beta in (diagram.beta1, diagram.beta2)])


def first_homology_invariants(diagram):
    """Diagonal of the Smith normal form of the presentation matrix, as absolute values."""
    form = smith_normal_form(homology_matrix(diagram), domain=ZZ)
    return sorted(abs(int(form[i, i])) for i in range(min(form.shape)))


def diagram_checks(diagram):
    """Named sanity checks of a diagram; every value is True for a good preset."""
    a1, a2, b1, b2 = diagram.alpha1, diagram.alpha2, diagram.beta1, diagram.beta2
    checks = {
        "i(alpha1,alpha2)=0": intersection_number(a1, a2) == 0,
        "i(beta1,beta2)=0": intersection_number(b1, b2) == 0,
        "i(alpha2,beta2)=1": intersection_number(a2, b2) == 1,
        "i(alpha1,beta2)=0": intersection_number(a1, b2) == 0,
        "i(alpha2,beta1)=0": intersection_number(a2, b1) == 0,
        f"i(alpha1,beta1)={diagram.p}": intersection_number(a1, b1) == diagram.p,
        "meridian systems split into their curves": all(
            sorted(c.weights for c in diagram.system(side).components())
            == sorted(c.weights for c in diagram.meridians[side]) for side in SIDES),
        f"H1 = Z/{diagram.p}": first_homology_invariants(diagram) == [1, diagram.p],
    }
    for name, curve in (("alpha1", a1), ("alpha2", a2), ("beta1", b1), ("beta2", b2)):
        checks[f"{name} essential non-separating"] = curve.is_essential and not is_separating(curve)
    return checks


def disjoint_system(first, second):
    """
    Normal representatives of two disjoint meridians that are disjoint as
    normal curves, so that their sum traces back into exactly these two.
    """
    first, second, _, survivors = minimal_position(first, second)
    if survivors:
        raise SphereTrackError(f"{first!r} and {second!r} are not disjoint")
    return first, second


@lru_cache(maxsize=64)
def build_diagram(p, q):
    """
    Builds the standard diagram of L(p, q).

    alpha1, alpha2 and beta2 are push-offs of the edge loops a, c and d;
    beta1 is the slope curve q a + p b in the first handle. Each meridian
    system is slid over the vertex until its two curves are disjoint as
    normal curves.

    Raises:
        ConfigError: for p < 2, q outside [1, p/2] or gcd(p, q) != 1.
    """
    check_lens_parameters(p, q)
    alpha1, alpha2 = disjoint_system(edge_pushoff(0), edge_pushoff(2))
    beta1, beta2 = disjoint_system(slope_curve(p, q), edge_pushoff(3))
    diagram = HeegaardDiagram(p, q, alpha1, alpha2, beta1, beta2)
    failed = [name for name, ok in diagram_checks(diagram).items() if not ok]
    if failed:
        raise SphereTrackError(f"diagram for L({p},{q}) failed: {', '.join(failed)}")
    logger.info("Built diagram for L(%d,%d): beta1 weights %s", p, q, list(diagram.beta1.weights))
    return diagram


@dataclass(frozen=True)
class DiskClass:
    """An essential non-separating disk on one side, with its boundary words."""
    side: str
    boundary: NormalCurve
    word_self: FreeWord
    word_other: FreeWord

    @property
    def key(self):
        return f"{self.side}:{self.boundary.key}"

    @property
    def is_primitive(self):
        return is_primitive(self.word_other)

    def to_dict(self):
        return {
            "key": self.key,
            "side": self.side,
            "weights": list(self.boundary.weights),
            "word_other": str(self.word_other),
        }

    def __repr__(self):
        return f"<DiskClass {self.key}>"


@dataclass(frozen=True)
class DualPair:
    """A disk in V and a disk in W whose boundaries meet once."""
    v_disk: DiskClass
    w_disk: DiskClass

    @property
    def key(self):
        return f"({self.v_disk.key}|{self.w_disk.key})"

    def to_dict(self):
        return {"key": self.key, "v_disk": self.v_disk.key, "w_disk": self.w_disk.key}

    def __repr__(self):
        return f"<DualPair {self.key}>"


def make_disk(diagram, side, curve, cap=WORD_LENGTH_CAP):
    """The DiskClass bounded by `curve` on `side`, or None when it bounds no such disk."""
    if not curve.is_essential or is_separating(curve):
        return None
    if any(algebraic_intersection(curve, m) for m in diagram.meridians[side]):
        return None
    word_self = read_word(diagram, side, curve, cap=None)
    if not is_trivial(word_self):
        return None
    return DiskClass(side, curve, word_self, read_word(diagram, opposite(side), curve, cap))


def seed_disk(diagram, name):
    """DiskClass of one of the four meridians, by attribute name."""
    side = "V" if name.startswith("alpha") else "W"
    return make_disk(diagram, side, getattr(diagram, name))


def is_primitive_disk(diagram, disk):
    return is_primitive(disk.word_other)


def _normal_array(max_weight, first_edge=None):
    n = max_weight
    values = range(n + 1) if first_edge is None else [first_edge]
    rows = np.array([[a, b] + [0] * (EDGE_COUNT - 2) for a in values for b in range(n + 1)],
                    dtype=np.int16).reshape(-1, EDGE_COUNT)

    def fill(rows, s1, s2, column):
        lo = np.abs(rows[:, s1] - rows[:, s2])
        hi = np.minimum(rows[:, s1] + rows[:, s2], n)
        blocks = []
        for v in range(n + 1):
            mask = (lo <= v) & (v <= hi) & ((rows[:, s1] + rows[:, s2] + v) % 2 == 0)
            block = rows[mask].copy()
            block[:, column] = v
            blocks.append(block)
        return np.concatenate(blocks)

    def free(rows, column):
        blocks = []
        for v in range(n + 1):
            block = rows.copy()
            block[:, column] = v
            blocks.append(block)
        return np.concatenate(blocks)

    rows = fill(rows, 0, 1, 4)
    rows = fill(rows, 4, 0, 5)
    rows = fill(rows, 5, 1, 6)
    rows = free(rows, 2)
    rows = fill(rows, 6, 2, 7)
    rows = free(rows, 3)
    rows = fill(rows, 7, 3, 8)
    e8, c, d = rows[:, 8], rows[:, 2], rows[:, 3]
    closes = ((e8 + c + d) % 2 == 0) & (e8 <= c + d) & (c <= e8 + d) & (d <= e8 + c)
    rows = rows[closes & (rows.sum(axis=1) > 0)]
    return rows[np.lexsort(rows.T[::-1])]


def normal_vectors(max_weight, first_edge=None):
    """
    Every non-zero normal weight vector with all weights <= max_weight.

    Edges are filled triangle by triangle so each new weight is bounded by
    the two already known sides. `first_edge` restricts edge a to one value,
    which splits the lattice into independent blocks.
    """
    return [tuple(int(w) for w in row) for row in _normal_array(max_weight, first_edge)]


def side_parity_mask(diagram, side, rows):
    """
    Rows that can bound a disk on `side` by their Z/2 homology alone.

    A disk boundary is non-separating, so its class is non-zero, and it has
    zero intersection with both meridians of its own side.
    """
    u = np.asarray(rows)[:, :4] % 2
    keep = u.any(axis=1)
    for meridian in diagram.meridians[side]:
        v = homology_class_mod2(meridian)
        keep &= (u[:, 0] * v[1] + u[:, 1] * v[0] + u[:, 2] * v[3] + u[:, 3] * v[2]) % 2 == 0
    return keep


def disk_candidates(diagram, side, max_weight, first_edge=None):
    """Connected normal vectors passing the parity test, as an array in lattice order."""
    rows = _normal_array(max_weight, first_edge)
    rows = rows[side_parity_mask(diagram, side, rows)]
    return rows[batch_component_counts(rows, max_weight) == 1]


def _disk_block(args):
    diagram, side, max_weight, first_edge, cap = args
    found = []
    for row in disk_candidates(diagram, side, max_weight, first_edge):
        disk = make_disk(diagram, side, NormalCurve(tuple(int(w) for w in row)), cap)
        if disk is not None:
            found.append(disk)
    return found


def _representative_order(disk):
    return representative_rank(disk.boundary)


def deduplicate(disks):
    """Keeps one disk per isotopy class: least max weight, then total weight, then weights."""
    kept = {}
    for disk in sorted(disks, key=_representative_order):
        bucket = kept.setdefault(homology_class_mod2(disk.boundary), [])
        if not any(algebraic_intersection(disk.boundary, other.boundary) == 0
                   and is_isotopic(disk.boundary, other.boundary) for other in bucket):
            bucket.append(disk)
    return sorted((d for bucket in kept.values() for d in bucket), key=lambda d: d.boundary.weights)


# Disk sets restored from the on-disk cache, keyed by (p, q, side, max_weight).
_PRELOADED = {}


def preload_disks(diagram, side, max_weight, disks):
    _PRELOADED[(diagram.p, diagram.q, side, max_weight)] = tuple(disks)


@lru_cache(maxsize=256)
def _enumerate_disks(diagram, side, max_weight, workers, cap):
    blocks = [(diagram, side, max_weight, a, cap) for a in range(max_weight + 1)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_disk_block, blocks))
    else:
        results = [_disk_block(block) for block in blocks]
    candidates = [disk for block in results for disk in block]
    disks = tuple(deduplicate(candidates))
    logger.info("L(%d,%d) side %s budget %d: %d candidates, %d disk classes",
                diagram.p, diagram.q, side, max_weight, len(candidates), len(disks))
    return disks


def enumerate_disks(diagram, side, max_weight, workers=1, cap=WORD_LENGTH_CAP):
    """
    Disks on `side` whose boundary has every edge weight <= max_weight.

    One representative per isotopy class, sorted by weights. The lattice is
    split by the weight of edge a across `workers` processes; the result
    does not depend on the worker count.
    """
    if max_weight < 1:
        raise ConfigError(f"max_weight must be at least 1, got {max_weight}")
    preloaded = _PRELOADED.get((diagram.p, diagram.q, side, max_weight))
    if preloaded is not None and cap == WORD_LENGTH_CAP:
        return preloaded
    return _enumerate_disks(diagram, side, max_weight, workers, cap)


def enumerate_primitive_disks(diagram, side, max_weight, workers=1, cap=WORD_LENGTH_CAP):
    return tuple(d for d in enumerate_disks(diagram, side, max_weight, workers, cap) if d.is_primitive)


def find_disk(disks, curve):
    """The member of `disks` whose boundary is isotopic to `curve`, or None."""
    for disk in disks:
        if disk.boundary == curve:
            return disk
    for disk in disks:
        if (homology_class_mod2(disk.boundary) == homology_class_mod2(curve)
                and is_isotopic(disk.boundary, curve)):
            return disk
    return None


def are_dual(d1, d2):
    if d1.side == d2.side:
        return False
    if abs(algebraic_intersection(d1.boundary, d2.boundary)) != 1:
        return False
    return intersection_number(d1.boundary, d2.boundary) == 1


def are_disjoint(d1, d2):
    if d1.boundary == d2.boundary:
        return False
    if algebraic_intersection(d1.boundary, d2.boundary) != 0:
        return False
    return intersection_number(d1.boundary, d2.boundary) == 0


def dual_disks(diagram, disk, max_weight, workers=1):
    """
    Opposite-side disks at budget whose boundary meets disk.boundary once.

    Raises:
        PreconditionError: when `disk` is not primitive.
    """
    if not disk.is_primitive:
        raise PreconditionError(f"{disk!r} is not primitive")
    duals = tuple(other for other in enumerate_disks(diagram, opposite(disk.side), max_weight, workers)
                  if are_dual(disk, other))
    for other in duals:
        if not other.is_primitive:
            raise SphereTrackError(f"dual {other!r} of {disk!r} is not primitive")
    return duals


def is_primitive_pair(e1, e2):
    return (e1.side == e2.side and e1.key != e2.key and e1.is_primitive and e2.is_primitive
            and are_disjoint(e1, e2))


def common_duals(diagram, e1, e2, max_weight, workers=1):
    """
    Disks dual to both members of a primitive pair, at budget.

    A non-empty result is conclusive; an empty one is evidence at this budget.

    Raises:
        PreconditionError: when {e1, e2} is not a primitive pair.
    """
    if not is_primitive_pair(e1, e2):
        raise PreconditionError(f"{e1!r} and {e2!r} do not form a primitive pair")
    second = {d.key for d in dual_disks(diagram, e2, max_weight, workers)}
    return tuple(d for d in dual_disks(diagram, e1, max_weight, workers) if d.key in second)


def primitive_pairs(diagram, side, max_weight, workers=1):
    disks = enumerate_primitive_disks(diagram, side, max_weight, workers)
    return [(e1, e2) for e1, e2 in combinations(disks, 2) if are_disjoint(e1, e2)]


def primitive_triples(diagram, side, max_weight, workers=1):
    disks = enumerate_primitive_disks(diagram, side, max_weight, workers)
    adjacent = {(e1.key, e2.key) for e1, e2 in primitive_pairs(diagram, side, max_weight, workers)}
    adjacent |= {(k2, k1) for k1, k2 in adjacent}
    return [triple for triple in combinations(disks, 3)
            if all((x.key, y.key) in adjacent for x, y in combinations(triple, 2))]


def dual_pairs(diagram, max_weight, workers=1):
    """Every (primitive V-disk, dual W-disk) pair at budget, sorted by key."""
    pairs = [DualPair(v, w)
             for v in enumerate_primitive_disks(diagram, "V", max_weight, workers)
             for w in dual_disks(diagram, v, max_weight, workers)]
    return sorted(pairs, key=lambda pair: pair.key)


def haken_circle(pair):
    """
    The circle in which the Haken sphere of a dual pair meets the surface.

    It is the boundary of a regular neighborhood of the two disk
    boundaries, which meet once; the result is essential, separating and
    disjoint from both boundaries.
    """
    circle = neighborhood_boundary(pair.v_disk.boundary, pair.w_disk.boundary)
    if not circle.is_essential or not is_separating(circle):
        raise SphereTrackError(f"Haken circle of {pair!r} is not an essential separating curve")
    for boundary in (pair.v_disk.boundary, pair.w_disk.boundary):
        if intersection_number(circle, boundary) != 0:
            raise SphereTrackError(f"Haken circle of {pair!r} meets {boundary!r}")
    return circle


def dual_surgery_step(diagram, base, from_dual, toward_dual):
    """
    Surgery on one dual of `base` along a subarc of another dual.

    Returns the resolutions of from_dual along toward_dual that bound disks
    on the duals' side and are again dual to `base`; each meets toward_dual
    fewer times than from_dual does.

    Raises:
        PreconditionError: when the duals are disjoint or not duals of base.
    """
    if not (are_dual(base, from_dual) and are_dual(base, toward_dual)):
        raise PreconditionError("from_dual and toward_dual must both be duals of base")
    crossings = intersection_number(from_dual.boundary, toward_dual.boundary)
    if crossings < 2:
        raise PreconditionError(f"duals meet {crossings} times; disjoint duals are joined by an edge")
    results = []
    for curve in band_surgery_candidates(from_dual.boundary, toward_dual.boundary):
        disk = make_disk(diagram, from_dual.side, curve)
        if disk is None or not are_dual(base, disk):
            continue
        if intersection_number(curve, toward_dual.boundary) >= crossings:
            continue
        results.append(disk)
    return sorted(results, key=lambda d: d.key)
