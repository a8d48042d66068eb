"""Boolean homotopy fingerprinting of paths and trees.

A network is reduced to two bit groups: crossings of the segments joining
obstacle-center pairs, and crossings of four cardinal rays per obstacle
anchored at its center and ending outside the scene's convex hull. Each
bit is the OR over branches of the branch's crossing parity. The
booleanization cannot tell a double loop crossing from no crossing; that
known limitation is inherited deliberately (loops never survive the
optimizer anyway).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DegenerateGeometryError, NotATreeError
from .geometry import (Disk, Point2, PolyPath, Segment, convex_hull,
                       crossing_parity)

PERTURB_STEP = 1e-6  # radians, applied when a vertex sits on a segment
MAX_PERTURB_TRIES = 48
CARDINAL_ORDER = "NESW"
_CARDINAL_DIRS = {"N": (0.0, 1.0), "E": (1.0, 0.0),
                  "S": (0.0, -1.0), "W": (-1.0, 0.0)}


@dataclass(frozen=True)
class HVector:
    """Crossing fingerprint: obstacle-pair bits then 4 cardinal bits per
    obstacle (N, E, S, W)."""

    h1: tuple
    h2: tuple
    phi: int

    def __post_init__(self):
        if len(self.h1) != self.phi * (self.phi - 1) // 2:
            raise ValueError("h1 has wrong length")
        if len(self.h2) != 4 * self.phi:
            raise ValueError("h2 has wrong length")

    @property
    def dimension(self) -> int:
        return self.phi * (self.phi + 7) // 2

    def nesw(self, obstacle: int) -> tuple:
        return self.h2[4 * obstacle: 4 * obstacle + 4]

    def serialize(self) -> str:
        groups = ["".join(str(b) for b in self.h1)]
        for i in range(self.phi):
            groups.append("".join(str(b) for b in self.nesw(i)))
        return ";".join(groups)

    @classmethod
    def deserialize(cls, text: str) -> "HVector":
        groups = text.split(";")
        h1 = tuple(int(c) for c in groups[0])
        h2 = tuple(int(c) for g in groups[1:] for c in g)
        return cls(h1, h2, len(groups) - 1)


@dataclass(frozen=True)
class CardinalRays:
    """Per obstacle, four segments from its center to points far outside
    the scene (N, E, S, W)."""

    segments: tuple  # tuple of 4-tuples of Segment
    reach: float


def build_cardinal_rays(obstacles: Sequence[Disk],
                        scene_points: Sequence[Point2] = ()) -> CardinalRays:
    """Rays of length twice the scene diameter: strictly outside any convex
    hull of the obstacles and the given points while keeping finite
    coordinates."""
    xs, ys = [], []
    for ob in obstacles:
        xs.extend([ob.center.x - ob.radius, ob.center.x + ob.radius])
        ys.extend([ob.center.y - ob.radius, ob.center.y + ob.radius])
    for p in scene_points:
        xs.append(p.x)
        ys.append(p.y)
    if xs:
        diameter = math.hypot(max(xs) - min(xs), max(ys) - min(ys))
    else:
        diameter = 0.0
    reach = max(2.0 * diameter, 1.0)
    rays = []
    for ob in obstacles:
        c = ob.center
        rays.append(tuple(
            Segment(c, Point2(c.x + reach * dx, c.y + reach * dy))
            for dx, dy in (_CARDINAL_DIRS[k] for k in CARDINAL_ORDER)))
    return CardinalRays(tuple(rays), reach)


# ---------------------------------------------------------------------------
# branch decomposition
# ---------------------------------------------------------------------------

def branches(edges: Iterable[tuple], terminals: Iterable = ()) -> list[tuple]:
    """Edge-disjoint decomposition of a tree into branches.

    Input edges are (u, v) node-id pairs. A branch is a maximal path whose
    interior nodes have degree 2 and are not terminals; its endpoints are
    leaves, junctions (degree > 2), or terminals. Every edge appears in
    exactly one branch.
    """
    edge_list = [tuple(e) for e in edges]
    if not edge_list:
        return []
    adj: dict = {}
    for u, v in edge_list:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    n_nodes = len(adj)
    if len(edge_list) != n_nodes - 1:
        raise NotATreeError(
            f"{len(edge_list)} edges over {n_nodes} nodes is not a tree")
    # Connectivity check: a cycle plus an isolated piece could still match
    # the edge count.
    seen = set()
    stack = [edge_list[0][0]]
    while stack:
        x = stack.pop()
        if x in seen:
            continue
        seen.add(x)
        stack.extend(adj[x])
    if len(seen) != n_nodes:
        raise NotATreeError("edge set is disconnected")

    for lst in adj.values():
        lst.sort()
    terminal_set = set(terminals)
    is_end = {u: (len(adj[u]) != 2 or u in terminal_set) for u in adj}
    if not any(is_end.values()):
        raise NotATreeError("no branch endpoints found")

    used = set()  # both directions marked once a branch consumes an edge
    out = []
    for start in sorted(u for u in adj if is_end[u]):
        for nxt in adj[start]:
            if (start, nxt) in used:
                continue
            path = [start, nxt]
            used.add((start, nxt))
            used.add((nxt, start))
            while not is_end[path[-1]]:
                prev, cur = path[-2], path[-1]
                follow = next(w for w in adj[cur] if w != prev)
                used.add((cur, follow))
                used.add((follow, cur))
                path.append(follow)
            out.append(tuple(path))
    return out


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def _rotated_about(seg: Segment, pivot: Point2, angle: float) -> Segment:
    if angle == 0.0:
        return seg
    ca, sa = math.cos(angle), math.sin(angle)

    def rot(p: Point2) -> Point2:
        dx, dy = p.x - pivot.x, p.y - pivot.y
        return Point2(pivot.x + ca * dx - sa * dy,
                      pivot.y + sa * dx + ca * dy)

    return Segment(rot(seg.a), rot(seg.b))


def _parity_bit(branch_paths: Sequence[PolyPath], seg: Segment,
                pivot: Point2) -> int:
    """OR over branches of that branch's crossing parity of ``seg``,
    nudging the segment by tiny rotations about ``pivot`` whenever a
    crossing is ill-defined."""
    for k in range(MAX_PERTURB_TRIES):
        trial = _rotated_about(seg, pivot, k * PERTURB_STEP if k % 2 == 0
                               else -((k + 1) // 2) * PERTURB_STEP)
        try:
            bit = 0
            for path in branch_paths:
                if crossing_parity(path, trial) % 2:
                    bit = 1
            return bit
        except DegenerateGeometryError:
            continue
    raise DegenerateGeometryError(
        "could not resolve crossing parity after perturbation")


def classify(branch_paths: Sequence[PolyPath], obstacles: Sequence[Disk],
             rays: CardinalRays) -> HVector:
    """Fingerprint a network given as its branch geometries.

    Each entry of ``branch_paths`` must be one branch of the network (for
    a plain path network, the whole path is the single branch).
    """
    phi = len(obstacles)
    h1 = []
    for i in range(phi):
        for j in range(i + 1, phi):
            ci, cj = obstacles[i].center, obstacles[j].center
            if ci.dist(cj) <= 1e-12:
                h1.append(0)  # nested obstacles: no pair segment exists
                continue
            h1.append(_parity_bit(branch_paths, Segment(ci, cj), ci))
    h2 = []
    for i in range(phi):
        for seg in rays.segments[i]:
            h2.append(_parity_bit(branch_paths, seg, obstacles[i].center))
    return HVector(tuple(h1), tuple(h2), phi)


# ---------------------------------------------------------------------------
# counting and partitions
# ---------------------------------------------------------------------------

def max_homotopies(f: int, phi: int) -> int:
    """Upper bound on loop-free homotopy classes: phi obstacles into f
    bins."""
    if f < 1 or phi < 0:
        raise ValueError("need f >= 1 and phi >= 0")
    return f ** phi

def face_count(m: int) -> int:
    """Usable obstacle bins for m terminals in convex position: the
    closed-up network has m + 1 faces and the exterior one is discarded.
    The two-terminal case degenerates to the two sides of a path."""
    if m < 2:
        raise ValueError("need at least 2 terminals")
    return m


def bell_number(phi: int) -> int:
    """Number of set partitions of phi obstacles (Bell triangle)."""
    if phi < 0:
        raise ValueError("phi must be >= 0")
    row = [1]
    for _ in range(phi):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def partition_of(classification, obstacles: Sequence[Disk],
                 branch_paths: Sequence[PolyPath],
                 samples_per_arc: int = 64) -> frozenset:
    """Group obstacles by the face of the planar subdivision induced by
    the network plus the convex-hull closure of its leaf endpoints.

    Obstacles in the unbounded face form one group. The ``classification``
    argument is accepted for signature parity with ``classify`` and is not
    consulted.
    """
    from shapely.geometry import LineString, Point as ShPoint
    from shapely.ops import polygonize, unary_union

    from .geometry import Arc

    lines = []
    endpoint_count: dict = {}
    for path in branch_paths:
        coords = []
        for elem in path.elements:
            if isinstance(elem, Arc):
                pts = [elem.point_at(t / samples_per_arc)
                       for t in range(samples_per_arc + 1)]
            else:
                pts = [elem.a, elem.b]
            if coords:
                pts = pts[1:]
            coords.extend((p.x, p.y) for p in pts)
        lines.append(LineString(coords))
        for p in (path.start, path.end):
            key = (round(p.x, 9), round(p.y, 9))
            endpoint_count[key] = endpoint_count.get(key, 0) + 1

    leaves = [Point2(x, y) for (x, y), c in endpoint_count.items() if c == 1]
    hull = convex_hull(leaves)
    if len(hull) >= 2:
        ring = hull + [hull[0]] if len(hull) > 2 else hull
        for a, b in zip(ring, ring[1:]):
            lines.append(LineString([(a.x, a.y), (b.x, b.y)]))

    faces = list(polygonize(unary_union(lines)))
    groups: dict = {}
    for i, ob in enumerate(obstacles):
        face_id = -1  # unbounded face
        pt = ShPoint(ob.center.x, ob.center.y)
        for fi, face in enumerate(faces):
            if face.contains(pt):
                face_id = fi
                break
        groups.setdefault(face_id, set()).add(i)
    return frozenset(frozenset(v) for v in groups.values())
