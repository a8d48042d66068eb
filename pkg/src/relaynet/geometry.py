"""Exact planar primitives: points, disks, tangents, bitangents, arcs,
crossing tests, and clearance distances.

All predicates use a single absolute tolerance ``TOL`` (coordinates are
assumed to be O(1)-O(100) in scene units). Tangency always counts as
clear. Arc intersections are solved in closed form (circle-circle,
circle-line); sampling appears only in test oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import DegenerateGeometryError

TOL = 1e-9
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinates ({self.x}, {self.y})")

    def dist(self, other: "Point2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def __iter__(self):
        yield self.x
        yield self.y


@dataclass(frozen=True)
class Disk:
    center: Point2
    radius: float

    def __post_init__(self):
        if not self.radius > 0.0:
            raise ValueError(f"disk radius must be positive, got {self.radius}")

    def contains(self, p: Point2, tol: float = TOL) -> bool:
        """Strict interior membership (boundary points are outside)."""
        return p.dist(self.center) < self.radius - tol


@dataclass(frozen=True)
class Segment:
    a: Point2
    b: Point2

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError("degenerate segment: a == b")

    @property
    def length(self) -> float:
        return self.a.dist(self.b)

    def point_at(self, t: float) -> Point2:
        return Point2(self.a.x + t * (self.b.x - self.a.x),
                      self.a.y + t * (self.b.y - self.a.y))

    def reversed(self) -> "Segment":
        return Segment(self.b, self.a)


@dataclass(frozen=True)
class Arc:
    """Circular arc on a disk boundary.

    Swept from ``start_angle`` to ``end_angle`` in the given orientation
    ("ccw" or "cw"); the swept angle is normalized into (0, 2*pi).
    """

    disk: Disk
    start_angle: float
    end_angle: float
    orientation: str = "ccw"

    def __post_init__(self):
        if self.orientation not in ("ccw", "cw"):
            raise ValueError(f"bad orientation {self.orientation!r}")
        if not 0.0 < self.sweep < TWO_PI:
            raise ValueError("arc sweep must be in (0, 2*pi)")

    @property
    def sweep(self) -> float:
        """Swept angle in (0, 2*pi)."""
        if self.orientation == "ccw":
            d = (self.end_angle - self.start_angle) % TWO_PI
        else:
            d = (self.start_angle - self.end_angle) % TWO_PI
        return d if d != 0.0 else TWO_PI

    @property
    def length(self) -> float:
        return self.disk.radius * self.sweep

    def angle_at(self, t: float) -> float:
        if self.orientation == "ccw":
            return self.start_angle + t * self.sweep
        return self.start_angle - t * self.sweep

    def point_at(self, t: float) -> Point2:
        ang = self.angle_at(t)
        c = self.disk.center
        r = self.disk.radius
        return Point2(c.x + r * math.cos(ang), c.y + r * math.sin(ang))

    @property
    def a(self) -> Point2:
        return self.point_at(0.0)

    @property
    def b(self) -> Point2:
        return self.point_at(1.0)

    def reversed(self) -> "Arc":
        flip = "cw" if self.orientation == "ccw" else "ccw"
        return Arc(self.disk, self.end_angle, self.start_angle, flip)

    def covered_from(self) -> float:
        """Start of the ccw angular interval the arc covers."""
        return self.start_angle if self.orientation == "ccw" else self.end_angle

    def angle_param(self, ang: float) -> float:
        """Parameter in [0, 1) of an absolute angle measured along the
        arc's orientation from its start (>1 for angles off the arc)."""
        if self.orientation == "ccw":
            return ((ang - self.start_angle) % TWO_PI) / self.sweep
        return ((self.start_angle - ang) % TWO_PI) / self.sweep


Element = Union[Segment, Arc]


@dataclass(frozen=True)
class PolyPath:
    """Chain of segments and arcs; consecutive elements share endpoints."""

    elements: tuple

    def __post_init__(self):
        elems = tuple(self.elements)
        object.__setattr__(self, "elements", elems)
        if not elems:
            raise ValueError("empty poly-path")
        for prev, nxt in zip(elems, elems[1:]):
            if prev.b.dist(nxt.a) > 1e-9:
                raise ValueError("poly-path elements are not contiguous")

    @property
    def length(self) -> float:
        return sum(e.length for e in self.elements)

    @property
    def start(self) -> Point2:
        return self.elements[0].a

    @property
    def end(self) -> Point2:
        return self.elements[-1].b

    def vertices(self) -> list[Point2]:
        pts = [self.start]
        pts.extend(e.b for e in self.elements)
        return pts


# ---------------------------------------------------------------------------
# tangents and bitangents
# ---------------------------------------------------------------------------

def tangent_points(p: Point2, d: Disk) -> list[Point2]:
    """Points on d's boundary where a line through p touches the circle.

    Two points for an exterior p, one degenerate point for p on the
    boundary, none for p strictly inside.
    """
    c = d.center
    r = d.radius
    dist = p.dist(c)
    if dist < r - TOL:
        return []
    if dist <= r + TOL:
        return [p]
    # Tangency sits at central angle +-acos(r/dist) off the direction to p.
    base = math.atan2(p.y - c.y, p.x - c.x)
    off = math.acos(max(-1.0, min(1.0, r / dist)))
    return [
        Point2(c.x + r * math.cos(base + off), c.y + r * math.sin(base + off)),
        Point2(c.x + r * math.cos(base - off), c.y + r * math.sin(base - off)),
    ]


def bitangents(d1: Disk, d2: Disk) -> list[Segment]:
    """Common tangent segments between two circles.

    Disjoint circles have four (two external then two internal); circles
    with intersecting boundaries only the two external ones; a circle
    contained in (or internally tangent to) the other has none. Each
    segment runs tangency point to tangency point.
    """
    c1, r1 = d1.center, d1.radius
    c2, r2 = d2.center, d2.radius
    dx, dy = c2.x - c1.x, c2.y - c1.y
    dist = math.hypot(dx, dy)
    if dist <= abs(r1 - r2) + TOL:
        return []
    ux, uy = dx / dist, dy / dist

    out: list[Segment] = []

    def add_pair(sign_r2: float) -> None:
        # Unit normal n with n.(c2-c1) = r1 - sign_r2*r2 defines a line
        # tangent to both circles; the two mirror normals give the pair.
        k = (r1 - sign_r2 * r2) / dist
        if abs(k) > 1.0:
            return
        s = math.sqrt(max(0.0, 1.0 - k * k))
        for flip in (1.0, -1.0):
            nx = k * ux - flip * s * uy
            ny = k * uy + flip * s * ux
            p1 = Point2(c1.x + r1 * nx, c1.y + r1 * ny)
            p2 = Point2(c2.x + sign_r2 * r2 * nx, c2.y + sign_r2 * r2 * ny)
            if p1.dist(p2) > TOL:
                out.append(Segment(p1, p2))

    add_pair(1.0)  # external pair: exists whenever not contained
    if dist >= r1 + r2 + TOL:
        add_pair(-1.0)  # internal pair: only for disjoint circles
    return out


# ---------------------------------------------------------------------------
# clearance predicates
# ---------------------------------------------------------------------------

def _point_segment_distance(p: Point2, s: Segment) -> float:
    ax, ay = s.a.x, s.a.y
    vx, vy = s.b.x - ax, s.b.y - ay
    wx, wy = p.x - ax, p.y - ay
    t = (wx * vx + wy * vy) / (vx * vx + vy * vy)
    t = max(0.0, min(1.0, t))
    return math.hypot(wx - t * vx, wy - t * vy)


def point_segment_distance(p: Point2, s: Segment) -> float:
    """Euclidean distance from a point to a closed segment."""
    return _point_segment_distance(p, s)


def segment_clear(s: Segment, obstacles: Sequence[Disk],
                  skip: Iterable[int] = ()) -> bool:
    """True iff the segment's interior avoids every obstacle interior.

    Tangency counts as clear. Obstacles whose index is in ``skip`` are
    ignored.
    """
    skip = set(skip)
    for i, ob in enumerate(obstacles):
        if i in skip:
            continue
        if _point_segment_distance(ob.center, s) < ob.radius - TOL:
            return False
    return True


def _inside_interval(host: Disk, other: Disk) -> tuple[float, float] | None:
    """Angular interval (center, half-width) of host's boundary strictly
    inside ``other``; None when empty."""
    c0, r0 = host.center, host.radius
    r1 = other.radius - TOL  # shrink: tangency is not inside
    if r1 <= 0.0:
        return None
    dist = c0.dist(other.center)
    if dist >= r0 + r1:
        return None
    if dist + r0 <= r1:
        return (0.0, math.pi)  # whole boundary inside
    if dist + r1 <= r0:
        return None  # other nested inside host: boundary stays outside
    cos_half = (dist * dist + r0 * r0 - r1 * r1) / (2.0 * dist * r0)
    cos_half = max(-1.0, min(1.0, cos_half))
    base = math.atan2(other.center.y - c0.y, other.center.x - c0.x)
    return (base, math.acos(cos_half))


def arc_clear(a: Arc, obstacles: Sequence[Disk]) -> bool:
    """True iff no point of the arc lies strictly inside another obstacle.

    The arc's own host disk is skipped (the arc lives on its boundary).
    """
    sweep = a.sweep
    lo = a.covered_from()
    eps = 1e-12
    for ob in obstacles:
        if ob == a.disk:
            continue
        hit = _inside_interval(a.disk, ob)
        if hit is None:
            continue
        base, half = hit
        if half >= math.pi:  # whole boundary inside
            return False
        # Overlap of the open interval (base-half, base+half) with the
        # ccw arc interval [lo, lo+sweep] on the circle.
        b0 = (base - half - lo) % TWO_PI
        width = 2.0 * half
        if b0 < sweep - eps:
            return False
        if b0 + width - TWO_PI > eps:
            return False
    return True


# ---------------------------------------------------------------------------
# transversal crossing counts
# ---------------------------------------------------------------------------

def _cross(ax: float, ay: float, bx: float, by: float) -> float:
    return ax * by - ay * bx


def _segment_segment_crossings(e: Segment, s: Segment) -> int:
    rx, ry = e.b.x - e.a.x, e.b.y - e.a.y
    dx, dy = s.b.x - s.a.x, s.b.y - s.a.y
    den = _cross(rx, ry, dx, dy)
    el = e.length
    sl = s.length
    if abs(den) <= TOL * el * sl:
        # Parallel; a collinear overlap makes the count ill-defined.
        if (_point_segment_distance(e.a, s) < TOL
                or _point_segment_distance(e.b, s) < TOL
                or _point_segment_distance(s.a, e) < TOL
                or _point_segment_distance(s.b, e) < TOL):
            raise DegenerateGeometryError("collinear segment overlap")
        return 0
    qx, qy = s.a.x - e.a.x, s.a.y - e.a.y
    t = _cross(qx, qy, dx, dy) / den
    u = _cross(qx, qy, rx, ry) / den
    t_tol = TOL / el
    u_tol = TOL / sl
    if t < -t_tol or t > 1.0 + t_tol or u < -u_tol or u > 1.0 + u_tol:
        return 0
    if t < t_tol or t > 1.0 - t_tol or u < u_tol or u > 1.0 - u_tol:
        raise DegenerateGeometryError("crossing at a segment endpoint")
    return 1


def _arc_segment_crossings(a: Arc, s: Segment) -> int:
    c = a.disk.center
    r = a.disk.radius
    dx, dy = s.b.x - s.a.x, s.b.y - s.a.y
    fx, fy = s.a.x - c.x, s.a.y - c.y
    qa = dx * dx + dy * dy
    qb = 2.0 * (fx * dx + fy * dy)
    qc = fx * fx + fy * fy - r * r
    disc = qb * qb - 4.0 * qa * qc
    if disc <= 0.0:
        if disc > -4.0 * qa * TOL * (2.0 * r):
            # Grazing contact: ambiguous between 0 and 2 crossings.
            t = -qb / (2.0 * qa)
            if -TOL / s.length < t < 1.0 + TOL / s.length:
                p = s.point_at(max(0.0, min(1.0, t)))
                ang = math.atan2(p.y - c.y, p.x - c.x)
                tp = a.angle_param(ang) * a.sweep
                if tp < a.sweep + TOL / r:
                    raise DegenerateGeometryError("segment grazes arc")
        return 0
    sq = math.sqrt(disc)
    count = 0
    u_tol = TOL / s.length
    ang_tol = TOL / r
    for t in ((-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)):
        if t < -u_tol or t > 1.0 + u_tol:
            continue
        if t < u_tol or t > 1.0 - u_tol:
            raise DegenerateGeometryError("circle crossing at segment endpoint")
        p = s.point_at(t)
        ang = math.atan2(p.y - c.y, p.x - c.x)
        off = a.angle_param(ang) * a.sweep  # arc-angle offset from start
        if off < ang_tol or abs(off - a.sweep) < ang_tol:
            raise DegenerateGeometryError("crossing at an arc endpoint")
        if off < a.sweep:
            count += 1
    return count


def _element_crossings(elem: Element, s: Segment) -> int:
    if isinstance(elem, Segment):
        return _segment_segment_crossings(elem, s)
    return _arc_segment_crossings(elem, s)


def crossing_parity(path: PolyPath, s: Segment) -> int:
    """Number of transversal crossings of ``s`` by the path.

    The raw count is returned; callers reduce mod 2. Raises
    DegenerateGeometryError when a path endpoint lies on ``s`` or any
    incidence makes the count ill-defined (callers perturb and retry).
    """
    if (_point_segment_distance(path.start, s) < TOL
            or _point_segment_distance(path.end, s) < TOL):
        raise DegenerateGeometryError("path endpoint lies on the segment")
    return sum(_element_crossings(e, s) for e in path.elements)


# ---------------------------------------------------------------------------
# clearances
# ---------------------------------------------------------------------------

def pair_clearance(d1: Disk, d2: Disk) -> float:
    """Boundary-to-boundary gap between two disks (negative if they
    overlap)."""
    return d1.center.dist(d2.center) - d1.radius - d2.radius


def terminal_clearance(t: Point2, d: Disk) -> float:
    """Gap between a point and a disk boundary (negative inside)."""
    return t.dist(d.center) - d.radius


def convex_hull(points: Sequence[Point2]) -> list[Point2]:
    """Andrew's monotone chain; returns hull vertices in ccw order."""
    pts = sorted(set((p.x, p.y) for p in points))
    if len(pts) <= 2:
        return [Point2(x, y) for x, y in pts]

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2:
                ox, oy = out[-2]
                ax, ay = out[-1]
                if (ax - ox) * (p[1] - oy) - (ay - oy) * (p[0] - ox) <= 0:
                    out.pop()
                else:
                    break
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    return [Point2(x, y) for x, y in hull]
