"""Closed-form optima for the two analytically solvable cases: a relay
chain wrapping a unit obstacle between two opposite terminals, and a
single relay serving three terminals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import NoSolutionError, OutOfClosedFormError
from .geometry import Point2
from .network import Scenario, brute_force_optimum

_BISECT_ITERS = 200


def d_min(n: int) -> float:
    """Smallest half-separation d at which n relays can wrap the unit
    obstacle with all radii equal: 1 / (1 - 2 sin(pi / (2 + 2n))).

    The denominator vanishes at n = 2 (sin(pi/6) = 1/2), so at least
    three relays are required.
    """
    if n <= 2:
        raise NoSolutionError(
            "at least 3 relays are needed to wrap the unit obstacle")
    return 1.0 / (1.0 - 2.0 * math.sin(math.pi / (2.0 + 2.0 * n)))


@dataclass(frozen=True)
class ChainSolution:
    relay_positions: tuple
    common_radius: float
    cost: float


def _chain_walk(n: int, d: float, r: float):
    """Greedy chain construction around the margin circle rho = 1 + r.

    Nodes hop straight-line distance <= r along the tangent-arc-tangent
    path from (d, 0) to (-d, 0); arc hops are chords of the margin
    circle, so every node keeps obstacle clearance exactly r. Returns the
    relay positions when at most n relays suffice, else None.
    """
    rho = 1.0 + r
    if r <= 0.0 or rho > d + 1e-12:
        return None
    beta = math.acos(min(1.0, rho / d))
    exit_phi = math.pi - beta
    tangency = Point2(rho * math.cos(beta), rho * math.sin(beta))
    exit_pt = Point2(rho * math.cos(exit_phi), rho * math.sin(exit_phi))
    t1 = Point2(-d, 0.0)

    cur = Point2(d, 0.0)
    mode = "entry"
    phi = 0.0
    relays: list = []
    for _ in range(n):
        if cur.dist(t1) <= r + 1e-12:
            return relays
        if mode == "entry":
            remaining = cur.dist(tangency)
            if remaining > r + 1e-15:
                ux = (tangency.x - cur.x) / remaining
                uy = (tangency.y - cur.y) / remaining
                cur = Point2(cur.x + r * ux, cur.y + r * uy)
            else:
                # Seam hop onto the margin circle, forward of the tangency.
                dl = math.hypot(cur.x, cur.y)
                cos_t = (dl * dl + rho * rho - r * r) / (2.0 * dl * rho)
                phi = (math.atan2(cur.y, cur.x)
                       + math.acos(max(-1.0, min(1.0, cos_t))))
                if phi <= exit_phi:
                    cur = Point2(rho * math.cos(phi), rho * math.sin(phi))
                    mode = "arc"
                else:
                    cur = _exit_hop(cur, r, exit_pt, t1)
                    mode = "exit"
        elif mode == "arc":
            alpha = 2.0 * math.asin(min(1.0, r / (2.0 * rho)))
            if phi + alpha <= exit_phi:
                phi += alpha
                cur = Point2(rho * math.cos(phi), rho * math.sin(phi))
            else:
                cur = _exit_hop(cur, r, exit_pt, t1)
                mode = "exit"
        else:
            gap = cur.dist(t1)
            cur = Point2(cur.x + r * (t1.x - cur.x) / gap,
                         cur.y + r * (t1.y - cur.y) / gap)
        relays.append(cur)
    return relays if cur.dist(t1) <= r + 1e-12 else None


def _exit_hop(cur: Point2, r: float, exit_pt: Point2, t1: Point2) -> Point2:
    """Farthest point on the exit tangent segment within hop range."""
    vx, vy = t1.x - exit_pt.x, t1.y - exit_pt.y
    wx, wy = exit_pt.x - cur.x, exit_pt.y - cur.y
    qa = vx * vx + vy * vy
    qb = 2.0 * (vx * wx + vy * wy)
    qc = wx * wx + wy * wy - r * r
    disc = max(0.0, qb * qb - 4.0 * qa * qc)
    s = (-qb + math.sqrt(disc)) / (2.0 * qa)
    s = max(0.0, min(1.0, s))
    return Point2(exit_pt.x + s * vx, exit_pt.y + s * vy)


def semicircle_chain(n: int, d: float) -> ChainSolution:
    """Minimum-cost equal-radius chain between terminals (+-d, 0) around
    the unit obstacle at the origin.

    At d = d_min(n) the relays sit evenly on the semicircle of radius d
    with angular spacing pi/(n+1); for larger d the chain runs two
    tangent lines joined by an arc on the margin circle. Below d_min the
    optimum no longer has equal radii and is left to the numeric chain
    optimizer.
    """
    dmin = d_min(n)
    if d < dmin - 1e-9:
        raise OutOfClosedFormError(
            f"d={d} below d_min({n})={dmin}: radii become unequal; use the "
            "numeric chain optimizer")
    if abs(d - dmin) <= 1e-9:
        step = math.pi / (n + 1)
        relays = tuple(Point2(d * math.cos(k * step), d * math.sin(k * step))
                       for k in range(1, n + 1))
        r = 2.0 * d * math.sin(step / 2.0)
        return ChainSolution(relays, r, (n + 2) * r * r)

    lo, hi = 1e-9, d - 1.0
    if _chain_walk(n, d, hi) is None:
        raise NoSolutionError(f"no equal-radius chain with {n} relays at d={d}")
    for _ in range(_BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        if _chain_walk(n, d, mid) is None:
            lo = mid
        else:
            hi = mid
    relays = _chain_walk(n, d, hi)
    return ChainSolution(tuple(relays), hi, (n + 2) * hi * hi)


# ---------------------------------------------------------------------------
# three terminals, one relay
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TriRelaySolution:
    relay_position: Optional[Point2]
    candidate_kind: str  # midpoint_second_edge | quarter_bisector | circumcenter | no_relay
    radii: tuple  # (r_A, r_B, r_C, r_relay) in input vertex order
    cost: float


def _chain_cost_and_radii(a: Point2, b: Point2, c: Point2, dpt: Point2):
    """Two-neighbor relay layout: C talks via A, relay D sits between A
    and B. Returns (cost, radii dict)."""
    ac = a.dist(c)
    ad = a.dist(dpt)
    bd = b.dist(dpt)
    r_c = ac
    r_a = max(ad, ac)
    r_b = bd
    r_d = max(ad, bd)
    cost = r_c ** 2 + r_a ** 2 + r_b ** 2 + r_d ** 2
    return cost, (r_a, r_b, r_c, r_d)


def _star_cost_and_radii(a: Point2, b: Point2, c: Point2, dpt: Point2):
    """Three-neighbor relay layout: every terminal talks to D."""
    ra, rb, rc = a.dist(dpt), b.dist(dpt), c.dist(dpt)
    rd = max(ra, rb, rc)
    return ra ** 2 + rb ** 2 + rc ** 2 + rd ** 2, (ra, rb, rc, rd)


def _circumcenter(a: Point2, b: Point2, c: Point2) -> Optional[Point2]:
    d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y))
    if abs(d) < 1e-14:
        return None
    ux = ((a.x ** 2 + a.y ** 2) * (b.y - c.y)
          + (b.x ** 2 + b.y ** 2) * (c.y - a.y)
          + (c.x ** 2 + c.y ** 2) * (a.y - b.y)) / d
    uy = ((a.x ** 2 + a.y ** 2) * (c.x - b.x)
          + (b.x ** 2 + b.y ** 2) * (a.x - c.x)
          + (c.x ** 2 + c.y ** 2) * (b.x - a.x)) / d
    return Point2(ux, uy)


def star_candidate_positions(a: Point2, b: Point2, c: Point2) -> list:
    """The candidate relay locations for a triangle, as (kind, point)
    pairs: midpoint of the second largest edge, quarter point of the
    longest edge's perpendicular bisector, and the circumcenter."""
    pts = (a, b, c)
    out = []
    sides = sorted((pts[i].dist(pts[j]), i, j)
                   for i, j in ((0, 1), (1, 2), (0, 2)))
    _, mi, mj = sides[1]
    out.append(("midpoint_second_edge",
                Point2(0.5 * (pts[mi].x + pts[mj].x),
                       0.5 * (pts[mi].y + pts[mj].y))))
    _, li, lj = sides[2]
    lk = 3 - li - lj
    p, q, opp = pts[li], pts[lj], pts[lk]
    ex, ey = q.x - p.x, q.y - p.y
    el = math.hypot(ex, ey)
    if el > 1e-12:
        nx, ny = -ey / el, ex / el
        h = (opp.x - p.x) * nx + (opp.y - p.y) * ny
        out.append(("quarter_bisector",
                    Point2(0.5 * (p.x + q.x) + nx * h / 4.0,
                           0.5 * (p.y + q.y) + ny * h / 4.0)))
    cc = _circumcenter(a, b, c)
    if cc is not None:
        out.append(("circumcenter", cc))
    return out


def three_terminal_one_relay(a: Point2, b: Point2, c: Point2) -> TriRelaySolution:
    """Optimal single-relay placement for three terminals.

    Evaluates the three candidate locations (midpoint of the second
    largest edge, quarter-height point on the longest edge's perpendicular
    bisector, circumcenter) plus the no-relay baseline, and returns the
    cheapest. Collinear inputs are handled as a 3-node chain with the
    relay offered at the midpoint of the longest gap.
    """
    pts = (a, b, c)
    area2 = abs((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x))
    scale2 = max(a.dist(b), b.dist(c), a.dist(c)) ** 2
    candidates = []

    # No-relay baseline (the theorem presumes the relay is useful).
    s3 = Scenario(pts, [], 0)
    base = brute_force_optimum(s3)
    candidates.append((sum(r * r for r in base), "no_relay", None,
                       (base[0], base[1], base[2], 0.0)))

    # Sides sorted by length; sides[k] = (length, i, j) with (i, j) vertex
    # indices and opposite = the third one.
    sides = sorted((pts[i].dist(pts[j]), i, j)
                   for i, j in ((0, 1), (1, 2), (0, 2)))

    if area2 > 1e-12 * scale2:
        # (i) midpoint of the second largest edge; transmit via the
        # shortest side. Shared vertex of shortest and middle sides plays
        # the hub role.
        _, si, sj = sides[0]
        _, mi, mj = sides[1]
        hub = si if si in (mi, mj) else sj
        spoke = sj if hub == si else si  # far end of the shortest side
        far = mj if hub == mi else mi  # far end of the middle side
        dpt = Point2(0.5 * (pts[hub].x + pts[far].x),
                     0.5 * (pts[hub].y + pts[far].y))
        cost, (r_hub, r_far, r_spoke, r_d) = _chain_cost_and_radii(
            pts[hub], pts[far], pts[spoke], dpt)
        radii = [0.0, 0.0, 0.0]
        radii[hub], radii[far], radii[spoke] = r_hub, r_far, r_spoke
        candidates.append((cost, "midpoint_second_edge", dpt,
                           (radii[0], radii[1], radii[2], r_d)))

        # (ii) quarter point of the perpendicular bisector of the longest
        # edge, on the side of the opposite vertex.
        _, li, lj = sides[2]
        lk = 3 - li - lj
        p, q, opp = pts[li], pts[lj], pts[lk]
        mx, my = 0.5 * (p.x + q.x), 0.5 * (p.y + q.y)
        ex, ey = q.x - p.x, q.y - p.y
        el = math.hypot(ex, ey)
        nx, ny = -ey / el, ex / el
        h = (opp.x - p.x) * nx + (opp.y - p.y) * ny  # signed height
        dpt = Point2(mx + nx * h / 4.0, my + ny * h / 4.0)
        cost, (r_p, r_q, r_opp, r_d) = _star_cost_and_radii(p, q, opp, dpt)
        radii = [0.0, 0.0, 0.0]
        radii[li], radii[lj], radii[lk] = r_p, r_q, r_opp
        candidates.append((cost, "quarter_bisector", dpt,
                           (radii[0], radii[1], radii[2], r_d)))

        # (iii) circumcenter.
        cc = _circumcenter(a, b, c)
        if cc is not None:
            cost, radii4 = _star_cost_and_radii(a, b, c, cc)
            candidates.append((cost, "circumcenter", cc, radii4))
    else:
        # Collinear: relay at the midpoint of the largest gap, if useful.
        order = sorted(range(3), key=lambda i: (pts[i].x, pts[i].y))
        g1 = pts[order[0]].dist(pts[order[1]])
        g2 = pts[order[1]].dist(pts[order[2]])
        lo, hi = (order[0], order[1]) if g1 >= g2 else (order[1], order[2])
        dpt = Point2(0.5 * (pts[lo].x + pts[hi].x),
                     0.5 * (pts[lo].y + pts[hi].y))
        try:
            with_relay = brute_force_optimum(s3, [dpt])
            cost = sum(r * r for r in with_relay)
            candidates.append((cost, "midpoint_second_edge", dpt,
                               tuple(with_relay)))
        except NoSolutionError:
            pass

    candidates.sort(key=lambda t: t[0])
    cost, kind, dpt, radii4 = candidates[0]
    return TriRelaySolution(dpt, kind, tuple(radii4), cost)


# ---------------------------------------------------------------------------
# two-relay symmetric construction (why three relays are needed)
# ---------------------------------------------------------------------------

def symmetric_two_relay_links(d: float, theta: float) -> tuple[bool, bool]:
    """Link feasibility for two relays placed symmetrically at
    [d,0] + (d-1)[-cos t, sin t] and [-d,0] + (d-1)[cos t, sin t] around
    the unit obstacle.

    Returns (relays_can_link, relays_reach_their_terminal). Each relay's
    radius is capped by its obstacle clearance |position| - 1; the relay
    sits exactly d-1 from its terminal. The two regions never intersect,
    which is why two relays can never bridge the obstacle.
    """
    if d <= 1.0:
        raise ValueError("terminals must lie outside the unit obstacle")
    rx = d - (d - 1.0) * math.cos(theta)
    ry = (d - 1.0) * math.sin(theta)
    reach = math.hypot(rx, ry) - 1.0  # max radius from obstacle clearance
    gap = 2.0 * rx  # relay-relay distance (mirror symmetry)
    relays_link = gap <= reach
    terminal_link = reach >= d - 1.0
    return relays_link, terminal_link
