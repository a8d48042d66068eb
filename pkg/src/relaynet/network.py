"""Network state model: scenario validation, transmission cost and
feasibility, the directed communication graph, strong connectivity,
squared-weight MST range assignment, and an exact small-instance radius
oracle.

Cost is the sum of squared transmission radii. A state is feasible when
no transmission disk overlaps a no-transmission zone; infeasibility is an
explicit sentinel value (``INFEASIBLE``), never a floating-point infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ._kernels import clearance_matrix, longest_incident, mst_edges
from .errors import BudgetExceededError, InvalidScenarioError, NoSolutionError
from .geometry import TOL, Disk, Point2

EDGE_TOL = 1e-9  # slack on dist <= r for communication edges


class _Infeasible:
    """Tagged sentinel for Eq-style infeasible cost."""

    __slots__ = ()

    def __repr__(self):
        return "INFEASIBLE"


INFEASIBLE = _Infeasible()


def is_feasible_cost(value) -> bool:
    return value is not INFEASIBLE


@dataclass(frozen=True)
class Scenario:
    """Problem instance: fixed terminals, disk obstacles, relay budget."""

    terminals: tuple
    obstacles: tuple
    relay_budget: int
    units: str = "km"

    def __post_init__(self):
        object.__setattr__(self, "terminals", tuple(self.terminals))
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        if len(self.terminals) < 2:
            raise InvalidScenarioError("need at least 2 terminals")
        if self.relay_budget < 0:
            raise InvalidScenarioError("relay budget must be >= 0")
        for i, a in enumerate(self.terminals):
            for j in range(i + 1, len(self.terminals)):
                if a.dist(self.terminals[j]) <= TOL:
                    raise InvalidScenarioError(
                        f"terminals {i} and {j} coincide")
        for ti, t in enumerate(self.terminals):
            for oi, ob in enumerate(self.obstacles):
                if ob.contains(t):
                    raise InvalidScenarioError(
                        f"terminal {ti} lies inside obstacle {oi}")
        for i, a in enumerate(self.obstacles):
            for j in range(i + 1, len(self.obstacles)):
                b = self.obstacles[j]
                if (a.center.dist(b.center) <= TOL
                        and abs(a.radius - b.radius) <= TOL):
                    raise InvalidScenarioError(
                        f"obstacles {i} and {j} coincide")

    @property
    def m(self) -> int:
        return len(self.terminals)

    @property
    def phi(self) -> int:
        return len(self.obstacles)


@dataclass
class NetworkState:
    """Decision variables: relay positions plus per-node radii.

    Inactive relays carry radius 0 and are excluded from the communication
    graph, the feasibility constraints, and the MST.
    """

    relay_positions: list
    radii_terminals: list
    radii_relays: list
    active: list = field(default_factory=list)

    def __post_init__(self):
        if not self.active:
            self.active = [True] * len(self.relay_positions)
        if len(self.active) != len(self.relay_positions):
            raise ValueError("active mask length mismatch")
        if len(self.radii_relays) != len(self.relay_positions):
            raise ValueError("relay radii length mismatch")
        for flag, r in zip(self.active, self.radii_relays):
            if r < 0 or (not flag and r != 0.0):
                raise ValueError("inactive relays must have radius 0")
        if any(r < 0 for r in self.radii_terminals):
            raise ValueError("radii must be non-negative")

    def active_relay_positions(self) -> list:
        return [p for p, a in zip(self.relay_positions, self.active) if a]

    def copy(self) -> "NetworkState":
        return NetworkState(list(self.relay_positions),
                            list(self.radii_terminals),
                            list(self.radii_relays), list(self.active))


def _node_arrays(s: Scenario, st: NetworkState):
    pts = list(s.terminals) + st.active_relay_positions()
    radii = list(st.radii_terminals) + [
        r for r, a in zip(st.radii_relays, st.active) if a]
    xs = np.array([p.x for p in pts], dtype=np.float64)
    ys = np.array([p.y for p in pts], dtype=np.float64)
    return pts, np.array(radii, dtype=np.float64), xs, ys


def cost(s: Scenario, st: NetworkState):
    """Sum of squared radii, or INFEASIBLE when any transmission disk
    overlaps an obstacle (tangency is feasible)."""
    _, radii, xs, ys = _node_arrays(s, st)
    if s.obstacles:
        ox = np.array([o.center.x for o in s.obstacles])
        oy = np.array([o.center.y for o in s.obstacles])
        orad = np.array([o.radius for o in s.obstacles])
        clear = clearance_matrix(xs, ys, ox, oy, orad)
        if np.any(clear + EDGE_TOL < radii[:, None]):
            return INFEASIBLE
    return float(np.dot(radii, radii))


def comm_adjacency(s: Scenario, st: NetworkState) -> list:
    """Directed adjacency over terminals followed by active relays:
    u -> v iff dist(u, v) <= r_u + tolerance."""
    pts, radii, xs, ys = _node_arrays(s, st)
    n = len(pts)
    dx = xs[:, None] - xs[None, :]
    dy = ys[:, None] - ys[None, :]
    d = np.sqrt(dx * dx + dy * dy)
    reach = d <= (radii[:, None] + EDGE_TOL)
    np.fill_diagonal(reach, False)
    return [list(np.flatnonzero(reach[i])) for i in range(n)]


def _closure(adj: list, start: int) -> set:
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def is_strongly_connected(st: NetworkState, s: Scenario) -> bool:
    """Strong connectivity of the communication graph restricted to
    terminals plus active relays."""
    adj = comm_adjacency(s, st)
    n = len(adj)
    if n <= 1:
        return True
    fwd = _closure(adj, 0)
    if len(fwd) != n:
        return False
    rev: list = [[] for _ in range(n)]
    for u, outs in enumerate(adj):
        for v in outs:
            rev[v].append(u)
    return len(_closure(rev, 0)) == n


# ---------------------------------------------------------------------------
# MST range assignment
# ---------------------------------------------------------------------------

def mst_squared(points: Sequence[Point2]) -> list:
    """MST edge list under squared Euclidean weights (identical tree to
    the Euclidean MST; squared weights per the cost metric)."""
    if len(points) < 2:
        raise ValueError("need at least 2 points")
    xs = np.array([p.x for p in points])
    ys = np.array([p.y for p in points])
    us, vs, _ = mst_edges(xs, ys)
    return [(int(u), int(v)) for u, v in zip(us, vs)]


def range_assignment_from_tree(tree: Sequence[tuple],
                               points: Sequence[Point2]) -> list:
    """Radius per node = length of its longest incident tree edge; the
    resulting communication graph contains every tree edge in both
    directions, hence is strongly connected."""
    us = np.array([e[0] for e in tree], dtype=np.int64)
    vs = np.array([e[1] for e in tree], dtype=np.int64)
    lens = np.array([points[u].dist(points[v]) for u, v in tree])
    return [float(r) for r in longest_incident(len(points), us, vs, lens)]


# ---------------------------------------------------------------------------
# exact small-instance radius assignment
# ---------------------------------------------------------------------------

BRUTE_FORCE_LIMIT = 8


def brute_force_optimum(s: Scenario, relay_positions: Sequence[Point2] = ()
                        ) -> list:
    """Exact minimum-cost feasible strongly connected radius assignment
    for fixed node positions (terminals plus the given relay positions).

    Radius candidates are restricted to pairwise distances, which is
    lossless for fixed positions: in an optimal assignment each radius
    equals the distance to the farthest node it must reach.
    """
    pts = list(s.terminals) + list(relay_positions)
    n = len(pts)
    if n > BRUTE_FORCE_LIMIT:
        raise BudgetExceededError(
            f"{n} nodes exceed the brute-force limit {BRUTE_FORCE_LIMIT}")
    dist = [[pts[i].dist(pts[j]) for j in range(n)] for i in range(n)]
    caps = []
    for p in pts:
        cap = math.inf
        for ob in s.obstacles:
            cap = min(cap, p.dist(ob.center) - ob.radius)
        caps.append(cap + EDGE_TOL)

    candidates = []
    for v in range(n):
        nn = min(dist[v][u] for u in range(n) if u != v)
        opts = sorted({dist[v][u] for u in range(n)
                       if u != v and nn <= dist[v][u] <= caps[v]})
        if not opts:
            raise NoSolutionError(
                f"node {v} cannot reach any neighbor without overlapping "
                "an obstacle")
        candidates.append(opts)
    min_sq = [c[0] ** 2 for c in candidates]
    tail_bound = [0.0] * (n + 1)
    for v in range(n - 1, -1, -1):
        tail_bound[v] = tail_bound[v + 1] + min_sq[v]

    # Incumbent: MST range assignment (when obstacle-feasible).
    best = math.inf
    best_radii: Optional[list] = None
    mst_radii = range_assignment_from_tree(mst_squared(pts), pts)
    if all(r <= caps[v] for v, r in enumerate(mst_radii)):
        best = sum(r * r for r in mst_radii)
        best_radii = list(mst_radii)

    def strongly_connected(radii) -> bool:
        masks = []
        for u in range(n):
            mask = 0
            for v in range(n):
                if v != u and dist[u][v] <= radii[u] + EDGE_TOL:
                    mask |= 1 << v
            masks.append(mask)
        for adj in (masks, _transpose_masks(masks, n)):
            seen = 1
            frontier = 1
            while frontier:
                nxt = 0
                u = 0
                f = frontier
                while f:
                    if f & 1:
                        nxt |= adj[u]
                    f >>= 1
                    u += 1
                frontier = nxt & ~seen
                seen |= nxt
            if seen != (1 << n) - 1:
                return False
        return True

    radii = [0.0] * n

    def dfs(v: int, partial: float) -> None:
        nonlocal best, best_radii
        if partial + tail_bound[v] >= best:
            return
        if v == n:
            if strongly_connected(radii):
                best = partial
                best_radii = list(radii)
            return
        for r in candidates[v]:
            total = partial + r * r
            if total + tail_bound[v + 1] >= best:
                break  # candidates ascend; everything further is worse
            radii[v] = r
            dfs(v + 1, total)
        radii[v] = 0.0

    dfs(0, 0.0)
    if best_radii is None:
        raise NoSolutionError("no strongly connected assignment exists")
    return best_radii


def _transpose_masks(masks, n):
    out = [0] * n
    for u in range(n):
        m = masks[u]
        v = 0
        while m:
            if m & 1:
                out[v] |= 1 << u
            m >>= 1
            v += 1
    return out


# ---------------------------------------------------------------------------
# tightness family for the MST 2-approximation
# ---------------------------------------------------------------------------

def mst_tight_instance(n: int, eps: float) -> list:
    """Point family on which the MST range assignment is ~2x the optimum.

    For n <= 8 the construction is exact: n/2 unit "rods" fanned around a
    tiny arc, rod feet eps apart and rod tips exactly 1 apart. The MST is
    the foot chain plus all rods, so the assignment gives every node
    radius exactly 1 (cost n), while the optimum runs the tip chain at
    radius ~1 with one down-link and serves the remaining feet at radius
    eps: cost (n/2+1) + (n/2-1)*eps^2.

    Larger n cannot realize both properties at once (the feet cluster
    inside an eps-scale ball, so only a handful of tips can stay mutually
    >= 1 apart); the generator then falls back to a collinear family with
    gaps alternating (1-eps) and eps whose measured assignment/optimum
    ratio still approaches 2.
    """
    if n < 4 or n % 2:
        raise ValueError("n must be even and >= 4")
    if not 0.0 < eps < 0.5:
        raise ValueError("eps must be in (0, 0.5)")
    k = n // 2
    if n <= 8:
        rho = eps / (1.0 - eps)
        # Tiny bump keeps tip chords strictly above the rod length so the
        # MST picks every rod deterministically.
        step = 2.0 * math.asin((1.0 - eps) / 2.0) * (1.0 + 1e-9)
        pts = []
        for i in range(k):
            a = i * step
            pts.append(Point2(rho * math.cos(a), rho * math.sin(a)))
        for i in range(k):
            a = i * step
            pts.append(Point2((rho + 1.0) * math.cos(a),
                              (rho + 1.0) * math.sin(a)))
        return pts
    pts = [Point2(float(i), 0.0) for i in range(k + 1)]
    pts.extend(Point2(i - eps, 0.0) for i in range(1, k))
    return pts


def mst_tight_optimum_formula(n: int, eps: float) -> float:
    """Reference optimum for the tightness family: (n/2+1)+(n/2-1)eps^2."""
    return (n / 2 + 1) + (n / 2 - 1) * eps * eps
