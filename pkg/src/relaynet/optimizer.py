"""Heuristic network evolution: the MST-based relay movement loop, the
star-creation / radius-equilibration / relay-migration refinements, and
the no-overlap movement constraint.

One optimizer run is sequential; runs with different seeds or initial
states share no mutable state and may execute concurrently. Identical
(scenario, initial state, config) inputs produce identical traces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ._kernels import clearance_matrix, longest_incident, mst_edges
from .analytic import star_candidate_positions, three_terminal_one_relay
from .geometry import Point2
from .homotopy import branches
from .network import (NetworkState, Scenario, cost, is_feasible_cost)


@dataclass
class OptimizerConfig:
    max_steps: int = 6000
    stability_window: int = 25
    stability_rel_tol: float = 1e-5
    leaf_steer_rate: float = 0.2
    neighbor_move_rate: float = 0.5
    stuck_steps_before_radial: int = 5
    equilibration_enabled: bool = True
    seed: int = 0
    snapshot_stride: int = 0  # 0 disables topology snapshots
    star_trial_relax_steps: int = 60  # lookahead sweeps per discrete trial
    star_plateau_window: int = 10  # plateau length that triggers a trial

    def __post_init__(self):
        if not (0.0 < self.leaf_steer_rate <= 1.0
                and 0.0 < self.neighbor_move_rate <= 1.0):
            raise ValueError("movement rates must be in (0, 1]")
        if self.stability_window < 1:
            raise ValueError("stability window must be >= 1")


@dataclass
class OptimizerTrace:
    costs: list = field(default_factory=list)  # math.inf when infeasible
    feasible: list = field(default_factory=list)
    n_active: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)  # (step, NetworkState)
    converged: bool = False
    steps: int = 0

    def to_csv(self) -> str:
        lines = ["step,cost,feasible,n_active_relays"]
        for i, (c, f, n) in enumerate(zip(self.costs, self.feasible,
                                          self.n_active)):
            cs = "inf" if not f else repr(c)
            lines.append(f"{i},{cs},{int(f)},{n}")
        return "\n".join(lines) + "\n"


def random_initial_state(s: Scenario, n_relays: Optional[int] = None,
                         seed: int = 0) -> NetworkState:
    """Relays placed uniformly over the scene bounding box (10% margin),
    resampled away from obstacle interiors."""
    n = s.relay_budget if n_relays is None else n_relays
    rng = np.random.default_rng(seed)
    xs = [p.x for p in s.terminals] + [o.center.x for o in s.obstacles]
    ys = [p.y for p in s.terminals] + [o.center.y for o in s.obstacles]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    mx = 0.1 * max(x1 - x0, y1 - y0, 1.0)
    positions = []
    for _ in range(n):
        for _attempt in range(64):
            p = Point2(float(rng.uniform(x0 - mx, x1 + mx)),
                       float(rng.uniform(y0 - mx, y1 + mx)))
            if not any(o.contains(p) for o in s.obstacles):
                break
        positions.append(p)
    return NetworkState(positions, [0.0] * s.m, [0.0] * n, [True] * n)


# ---------------------------------------------------------------------------
# tree bookkeeping
# ---------------------------------------------------------------------------

def mst_and_radii(points: Sequence[Point2]):
    """MST edge list and longest-incident-edge radii for a point set."""
    xs = np.array([p.x for p in points])
    ys = np.array([p.y for p in points])
    us, vs, lens = mst_edges(xs, ys)
    radii = longest_incident(len(points), us, vs, lens)
    return list(zip(us.tolist(), vs.tolist())), radii


def _adjacency(tree):
    deg: dict = {}
    adj: dict = {}
    for u, v in tree:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    for lst in adj.values():
        lst.sort()
    return deg, adj


def _tree_view(s: Scenario, positions, active):
    """Node list (terminals then active relays), MST, radii, and the map
    from tree node index to relay slot."""
    pts = list(s.terminals)
    slot_of = {}
    for slot, (p, a) in enumerate(zip(positions, active)):
        if a:
            slot_of[len(pts)] = slot
            pts.append(p)
    if len(pts) >= 2:
        tree, radii = mst_and_radii(pts)
    else:
        tree, radii = [], np.zeros(len(pts))
    return pts, tree, radii, slot_of


def _assigned_state(s: Scenario, positions, active) -> NetworkState:
    pts, tree, radii, _ = _tree_view(s, positions, active)
    m = s.m
    r_T = [float(r) for r in radii[:m]]
    r_D = [0.0] * len(positions)
    i = m
    for slot, a in enumerate(active):
        if a:
            r_D[slot] = float(radii[i])
            i += 1
    return NetworkState(list(positions), r_T, r_D, list(active))


def _measured_cost(s: Scenario, positions, active):
    c = cost(s, _assigned_state(s, positions, active))
    return c if is_feasible_cost(c) else None


# ---------------------------------------------------------------------------
# per-step primitives (exposed for direct testing)
# ---------------------------------------------------------------------------

def steer_leaf_relays(points: Sequence[Point2], tree: Sequence[tuple],
                      n_terminals: int, rate: float) -> dict:
    """Movements for relays on leaf branches whose leaf end is a relay:
    every relay on such a branch steers toward the branch's anchor end
    (the nearest junction or terminal) by ``rate`` times its distance."""
    deg, _ = _adjacency(tree)
    moves: dict = {}
    for br in branches(tree, terminals=range(n_terminals)):
        for leaf, anchor in ((br[0], br[-1]), (br[-1], br[0])):
            if deg.get(leaf, 0) == 1 and leaf >= n_terminals:
                target = points[anchor]
                for node in br:
                    if node != anchor and node >= n_terminals:
                        p = points[node]
                        moves[node] = (rate * (target.x - p.x),
                                       rate * (target.y - p.y))
    return moves


def average_neighbor_move(points: Sequence[Point2], tree: Sequence[tuple],
                          relay: int, rate: float) -> tuple:
    """Displacement toward the centroid of the relay's tree neighbors."""
    nx = []
    ny = []
    for u, v in tree:
        if u == relay:
            nx.append(points[v].x)
            ny.append(points[v].y)
        elif v == relay:
            nx.append(points[u].x)
            ny.append(points[u].y)
    if not nx:
        return (0.0, 0.0)
    cx = sum(nx) / len(nx)
    cy = sum(ny) / len(ny)
    p = points[relay]
    return (rate * (cx - p.x), rate * (cy - p.y))


def no_overlap_adjust(proposed: tuple, pos: Point2, radius: float,
                      obstacles, stuck_steps: int,
                      stuck_threshold: int) -> tuple:
    """No-overlap movement constraint.

    Overlapping relays ignore the proposed move and move radially away
    from the overlapped obstacles, unless that increases the overlap
    count, in which case they move only after being stuck for
    ``stuck_threshold`` consecutive steps. Clear relays have moves that
    would create an overlap cancelled.
    """
    def overlaps(px, py, r):
        hit = []
        for i, ob in enumerate(obstacles):
            if math.hypot(px - ob.center.x, py - ob.center.y) \
                    < ob.radius + r - 1e-9:
                hit.append(i)
        return hit

    now = overlaps(pos.x, pos.y, radius)
    if now:
        dx = dy = 0.0
        depth = 0.0
        for i in now:
            ob = obstacles[i]
            vx, vy = pos.x - ob.center.x, pos.y - ob.center.y
            dist = math.hypot(vx, vy)
            if dist < 1e-12:
                vx, vy, dist = 1.0, 0.0, 1.0  # dead center: pick +x
            dx += vx / dist
            dy += vy / dist
            depth = max(depth, ob.radius + radius - dist)
        norm = math.hypot(dx, dy)
        if norm < 1e-12:
            return (0.0, 0.0)  # surrounded symmetrically
        move = (dx / norm * depth, dy / norm * depth)
        after = overlaps(pos.x + move[0], pos.y + move[1], radius)
        if len(after) > len(now) and stuck_steps < stuck_threshold:
            return (0.0, 0.0)
        return move
    after = overlaps(pos.x + proposed[0], pos.y + proposed[1], radius)
    if after:
        return (0.0, 0.0)
    return proposed


def _sweep_once(s: Scenario, positions, active, cfg: OptimizerConfig,
                stuck) -> dict:
    """One relay-movement sweep (leaf steering / neighbor averaging with
    the no-overlap rule). Mutates positions; returns slot -> moved flag."""
    node_points, tree, radii, slot_of = _tree_view(s, positions, active)
    steered = steer_leaf_relays(node_points, tree, s.m, cfg.leaf_steer_rate)
    moved = {}
    for node in sorted(slot_of):
        slot = slot_of[node]
        if node in steered:
            move = steered[node]  # steering bypasses the overlap rule
        else:
            move = average_neighbor_move(node_points, tree, node,
                                         cfg.neighbor_move_rate)
            if s.obstacles:
                move = no_overlap_adjust(
                    move, node_points[node], float(radii[node]), s.obstacles,
                    stuck[slot] if stuck else 0,
                    cfg.stuck_steps_before_radial)
        moved[slot] = (abs(move[0]) + abs(move[1])) > 1e-15
        if moved[slot]:
            p = positions[slot]
            positions[slot] = Point2(p.x + move[0], p.y + move[1])
    return moved


# ---------------------------------------------------------------------------
# advanced refinements (star creation, junction centering, migration)
# ---------------------------------------------------------------------------

def _branch_stats(points, br):
    length = 0.0
    for a, b in zip(br, br[1:]):
        length += points[a].dist(points[b])
    interior = len(br) - 2
    return length, interior, length / (interior + 1)


def _star_donor(node_points, tree, m, forbidden) -> Optional[int]:
    """Relay that a star may consume: an interior node of the densest
    branch (smallest average spacing) with at least three interior
    relays, taken from the branch middle where its removal disturbs the
    spacing least."""
    best = None
    for br in branches(tree, terminals=range(m)):
        if len(br) < 5:  # need >= 3 interior relays
            continue
        interior = [x for x in br[1:-1] if x >= m and x not in forbidden]
        if len(interior) < 3:
            continue
        _, _, spacing = _branch_stats(node_points, br)
        donor = interior[len(interior) // 2]
        if best is None or spacing < best[0]:
            best = (spacing, donor)
    return None if best is None else best[1]


def try_star_creation(s: Scenario, positions: list, active: list,
                      cfg: OptimizerConfig) -> bool:
    """Attempt a star at each degree-2 terminal.

    Star locations come from the single-relay candidate set for the local
    triangle (edge midpoint, quarter bisector, circumcenter); the relay
    placed there is an inactive one, one of the terminal's chain
    neighbors (the feet then being the neighbor's continuation), or a
    donor from the densest branch. Every variant is relaxed for the same
    number of sweeps as the unchanged baseline and kept only when its
    measured total cost improves by a margin above the stability noise
    floor. Returns True on any change.
    """
    changed = False
    m = s.m
    relax = cfg.star_trial_relax_steps

    def relaxed_cost(pos, act):
        pos = list(pos)
        act = list(act)
        for _ in range(relax):
            _sweep_once(s, pos, act, cfg, None)
        return _measured_cost(s, pos, act)

    base = relaxed_cost(positions, active)
    if base is None:
        return False

    for t in range(m):
        node_points, tree, radii, slot_of = _tree_view(s, positions, active)
        deg, adj = _adjacency(tree)
        if deg.get(t, 0) != 2:
            continue
        u, w = adj[t]
        pt = node_points[t]

        trials = []  # (slot, activate, triangle feet)

        def feet_ok(f1, f2):
            return min(pt.dist(f1), pt.dist(f2), f1.dist(f2)) > 1e-9

        for cand, other in ((u, w), (w, u)):
            if cand < m:
                continue
            cont = [v for v in adj[cand] if v != t]
            if not cont:
                continue
            f1, f2 = node_points[cont[0]], node_points[other]
            if feet_ok(f1, f2):
                trials.append((slot_of[cand], None, f1, f2))
        donor = _star_donor(node_points, tree, m, forbidden={u, w})
        if donor is not None and feet_ok(node_points[u], node_points[w]):
            trials.append((slot_of[donor], None, node_points[u],
                           node_points[w]))
        inactive = [i for i, a in enumerate(active) if not a]
        if inactive and feet_ok(node_points[u], node_points[w]):
            trials.append((inactive[0], inactive[0], node_points[u],
                           node_points[w]))

        margin = max(1e-12, 200.0 * cfg.stability_rel_tol * base)
        best = None
        for slot, activate, f1, f2 in trials:
            for _kind, target in star_candidate_positions(pt, f1, f2):
                trial_pos = list(positions)
                trial_act = list(active)
                trial_pos[slot] = target
                if activate is not None:
                    trial_act[activate] = True
                c = relaxed_cost(trial_pos, trial_act)
                if c is not None and c < base - margin \
                        and (best is None or c < best[0]):
                    best = (c, trial_pos, trial_act)
        if best is None:
            # No star pays off here: equilibrate the two incident radii
            # instead, under the same measured-cost guard.
            eq = _equalized_neighbor_positions(node_points, t, u, w)
            trial_pos = list(positions)
            any_move = False
            for nb, target in eq.items():
                if nb >= m:
                    trial_pos[slot_of[nb]] = target
                    any_move = True
            if any_move:
                c = relaxed_cost(trial_pos, active)
                if c is not None and c < base - margin:
                    best = (c, trial_pos, list(active))
        if best is not None:
            positions[:] = best[1]
            active[:] = best[2]
            base = best[0]
            changed = True
    return changed


def smooth_refinements(s: Scenario, positions: list, active: list,
                       rate: float) -> bool:
    """Per-step refinement: drift junction relays toward their neighbors'
    centroid (the local minimizer of summed squared edge lengths)."""
    changed = False
    m = s.m
    node_points, tree, radii, slot_of = _tree_view(s, positions, active)
    if len(node_points) < 2:
        return False
    deg, adj = _adjacency(tree)
    for node in sorted(deg):
        if deg[node] < 3 or node < m:
            continue
        cx = sum(node_points[v].x for v in adj[node]) / deg[node]
        cy = sum(node_points[v].y for v in adj[node]) / deg[node]
        slot = slot_of[node]
        p = positions[slot]
        moved = Point2(p.x + rate * (cx - p.x), p.y + rate * (cy - p.y))
        if moved != p:
            positions[slot] = moved
            changed = True
    return changed


def _equalized_neighbor_positions(node_points, t, u, w):
    """Positions moving a degree-2 terminal's neighbors so both incident
    edges take the mean of the two current lengths."""
    tp = node_points[t]
    lu = tp.dist(node_points[u])
    lw = tp.dist(node_points[w])
    mean = 0.5 * (lu + lw)
    out = {}
    for nb, ln in ((u, lu), (w, lw)):
        if ln < 1e-12:
            continue
        pb = node_points[nb]
        out[nb] = Point2(tp.x + (pb.x - tp.x) * mean / ln,
                         tp.y + (pb.y - tp.y) * mean / ln)
    return out


def migration_candidates(s: Scenario, positions: list, active: list):
    """Candidate adjacent-branch migrations per the density-imbalance
    rule: fires only when the integer criterion
    ceil(L_lrg/R_lrg) < ceil(L_sml/R_sml) holds and the two-branch cost
    model L_s^2/N_s + L_l^2/(N_l+2) strictly improves at the actual
    lengths (equal-length pairs need at least two extra relays). Each
    candidate is (slot, new position)."""
    m = s.m
    node_points, tree, radii, slot_of = _tree_view(s, positions, active)
    brs = branches(tree, terminals=range(m))
    by_end: dict = {}
    for bi, br in enumerate(brs):
        by_end.setdefault(br[0], []).append(bi)
        by_end.setdefault(br[-1], []).append(bi)
    out = []
    seen = set()
    for end in sorted(by_end):
        here = by_end[end]
        for ai in range(len(here)):
            for bi in range(ai + 1, len(here)):
                a, b = brs[here[ai]], brs[here[bi]]
                la, na, ra = _branch_stats(node_points, a)
                lb, nb_, rb = _branch_stats(node_points, b)
                if abs(ra - rb) <= 1e-12:
                    continue
                (l_s, n_s, sml), (l_l, n_l, lrg) = (
                    ((la, na, a), (lb, nb_, b)) if ra < rb
                    else ((lb, nb_, b), (la, na, a)))
                if n_s < n_l + 1 or n_s < 1:
                    continue
                before = l_s * l_s / (n_s + 1) + l_l * l_l / (n_l + 1)
                after = l_s * l_s / n_s + l_l * l_l / (n_l + 2)
                if after >= before - 1e-9 * before:
                    continue
                sml_path = sml if sml[0] == end else sml[::-1]
                lrg_path = lrg if lrg[0] == end else lrg[::-1]
                donor = sml_path[1]
                if donor < m or (here[ai], here[bi]) in seen:
                    continue
                seen.add((here[ai], here[bi]))
                first = node_points[lrg_path[1]]
                anchor = node_points[end]
                out.append((slot_of[donor],
                            Point2(0.5 * (anchor.x + first.x),
                                   0.5 * (anchor.y + first.y))))
    return out


def migration_pass(s: Scenario, positions: list, active: list) -> bool:
    """Apply the first candidate adjacent-branch migration, if any."""
    cands = migration_candidates(s, positions, active)
    if not cands:
        return False
    slot, target = cands[0]
    positions[slot] = target
    return True


def rebalance_candidates(s: Scenario, positions: list, active: list,
                         top_k: int = 3):
    """Candidate global rebalances: a relay from one of the densest
    branches moved into one of the sparsest (or into an empty
    junction-junction branch). Complements adjacent migration, whose
    integer criterion only captures equal-length pairs."""
    node_points, tree, radii, slot_of = _tree_view(s, positions, active)
    brs = branches(tree, terminals=range(s.m))
    if len(brs) < 2:
        return []
    stats = [_branch_stats(node_points, br) for br in brs]
    donors = sorted((i for i in range(len(brs))
                     if any(x >= s.m for x in brs[i][1:-1])),
                    key=lambda i: stats[i][2])[:top_k]
    recipients = sorted(range(len(brs)), key=lambda i: -stats[i][2])[:top_k]
    recipients += [i for i in range(len(brs))
                   if stats[i][1] == 0 and i not in recipients]
    out = []
    for di in donors:
        interior = [x for x in brs[di][1:-1] if x >= s.m]
        donor = interior[len(interior) // 2]
        for ri in recipients:
            if ri == di:
                continue
            anchor = node_points[brs[ri][0]]
            first = node_points[brs[ri][1]]
            out.append((slot_of[donor],
                        Point2(0.5 * (anchor.x + first.x),
                               0.5 * (anchor.y + first.y))))
    return out


def recycle_collapsed_relays(s: Scenario, positions: list,
                             active: list) -> bool:
    """Deactivate relays that have collapsed onto a terminal or another
    relay (leaf steering parks relays on their anchors asymptotically).

    A collapsed relay spans a zero-length tree edge, distorting degree
    bookkeeping while contributing nothing; deactivated ones return to
    the pool that star creation and reinforcement may redeploy."""
    changed = False
    kept = [(p.x, p.y) for p in s.terminals]
    for slot, (p, a) in enumerate(zip(positions, active)):
        if not a:
            continue
        if any(math.hypot(p.x - x, p.y - y) < 1e-7 for x, y in kept):
            active[slot] = False
            changed = True
        else:
            kept.append((p.x, p.y))
    return changed


def reinforcement_candidates(s: Scenario, positions: list, active: list):
    """Candidate redeployments of an inactive relay into the sparsest
    branch, halfway between that branch's anchor and its first node."""
    inactive = [i for i, a in enumerate(active) if not a]
    if not inactive:
        return []
    node_points, tree, radii, slot_of = _tree_view(s, positions, active)
    brs = branches(tree, terminals=range(s.m))
    if not brs:
        return []
    worst = max(brs, key=lambda br: _branch_stats(node_points, br)[2])
    anchor = node_points[worst[0]]
    first = node_points[worst[1]]
    return [(inactive[0], Point2(0.5 * (anchor.x + first.x),
                                 0.5 * (anchor.y + first.y)))]


def apply_best_relay_move(s: Scenario, positions: list, active: list,
                          cfg: OptimizerConfig, candidates,
                          activate: bool = False) -> bool:
    """Trial framework shared by the discrete refinements: each candidate
    (slot, new position) is applied to a copy, relaxed for the configured
    number of sweeps, and measured; the best candidate beating the
    equally-relaxed baseline by the stability noise margin is committed."""
    if not candidates:
        return False

    def relaxed_cost(pos, act):
        pos = list(pos)
        act = list(act)
        for _ in range(cfg.star_trial_relax_steps):
            _sweep_once(s, pos, act, cfg, None)
        return _measured_cost(s, pos, act)

    base = relaxed_cost(positions, active)
    if base is None:
        return False
    margin = max(1e-12, 200.0 * cfg.stability_rel_tol * base)
    best = None
    for slot, target in candidates:
        trial_pos = list(positions)
        trial_act = list(active)
        trial_pos[slot] = target
        if activate:
            trial_act[slot] = True
        c = relaxed_cost(trial_pos, trial_act)
        if c is not None and c < base - margin \
                and (best is None or c < best[0]):
            best = (c, trial_pos, trial_act)
    if best is None:
        return False
    positions[:] = best[1]
    active[:] = best[2]
    return True


def equilibrate(s: Scenario, positions: list, active: list, rate: float,
                cfg: Optional[OptimizerConfig] = None) -> bool:
    """One full advanced-refinement pass: star creation at degree-2
    terminals (cost-guarded), local radius equilibration, and relay
    migration between unbalanced adjacent branches. Mutates in place;
    returns True on any change."""
    cfg = cfg or OptimizerConfig()
    changed = try_star_creation(s, positions, active, cfg)
    changed = smooth_refinements(s, positions, active, rate) or changed
    changed = apply_best_relay_move(
        s, positions, active, cfg,
        migration_candidates(s, positions, active)) or changed
    return changed


# ---------------------------------------------------------------------------
# main loop
# ---------------------------------------------------------------------------

def optimize(s: Scenario, initial: NetworkState,
             cfg: OptimizerConfig) -> tuple:
    """Run the MST-based evolution from the given initial state.

    Returns (final state, trace). The final state carries radii assigned
    from its MST; the trace records cost and feasibility per step.
    Non-convergence is reported through ``trace.converged``, not raised.
    """
    positions = list(initial.relay_positions)
    active = list(initial.active)
    n_relays = len(positions)
    m = s.m
    trace = OptimizerTrace()
    stuck = [0] * n_relays
    overlap_run = [0] * n_relays
    deactivate_after = 10 * cfg.stuck_steps_before_radial
    refine_tried_at = -10 ** 9
    refine_exhausted = not cfg.equilibration_enabled

    for step in range(cfg.max_steps):
        state = _assigned_state(s, positions, active)
        c = cost(s, state)
        feasible = is_feasible_cost(c)
        trace.costs.append(c if feasible else math.inf)
        trace.feasible.append(feasible)
        trace.n_active.append(sum(active))
        if cfg.snapshot_stride and step % cfg.snapshot_stride == 0:
            trace.snapshots.append((step, state.copy()))
        trace.steps = step + 1

        if _stable(trace, cfg) and refine_exhausted:
            trace.converged = feasible
            return _assigned_state(s, positions, active), trace

        if cfg.equilibration_enabled:
            recycle_collapsed_relays(s, positions, active)
            # Discrete refinements fire on cost plateaus only; the smooth
            # ones run every step.
            if (_plateau(trace, cfg.star_plateau_window,
                         10.0 * cfg.stability_rel_tol)
                    and step - refine_tried_at >= cfg.star_plateau_window):
                refine_tried_at = step
                did = try_star_creation(s, positions, active, cfg)
                if not did:
                    did = apply_best_relay_move(
                        s, positions, active, cfg,
                        migration_candidates(s, positions, active))
                if not did:
                    did = apply_best_relay_move(
                        s, positions, active, cfg,
                        rebalance_candidates(s, positions, active))
                if not did:
                    did = apply_best_relay_move(
                        s, positions, active, cfg,
                        reinforcement_candidates(s, positions, active),
                        activate=True)
                refine_exhausted = not did
            smooth_refinements(s, positions, active, cfg.neighbor_move_rate)

        moved = _sweep_once(s, positions, active, cfg, stuck)

        if s.obstacles:
            _, _, radii, slot_of = _tree_view(s, positions, active)
            node_radius = {slot_of[n_]: float(radii[n_]) for n_ in slot_of}
            clear = clearance_matrix(
                np.array([p.x for p in positions]),
                np.array([p.y for p in positions]),
                np.array([o.center.x for o in s.obstacles]),
                np.array([o.center.y for o in s.obstacles]),
                np.array([o.radius for o in s.obstacles]))
            for slot in range(n_relays):
                if not active[slot]:
                    continue
                stuck[slot] = 0 if moved.get(slot) else stuck[slot] + 1
                r = node_radius.get(slot, 0.0)
                if float(clear[slot].min()) < r - 1e-9:
                    overlap_run[slot] += 1
                else:
                    overlap_run[slot] = 0
                if (overlap_run[slot] >= deactivate_after
                        and stuck[slot] >= deactivate_after):
                    active[slot] = False

    final = _assigned_state(s, positions, active)
    trace.converged = bool(trace.feasible and trace.feasible[-1]
                           and _stable(trace, cfg))
    return final, trace


def _has_degree2_terminal(s, positions, active) -> bool:
    _, tree, _, _ = _tree_view(s, positions, active)
    deg, _ = _adjacency(tree)
    return any(deg.get(t, 0) == 2 for t in range(s.m))


def _plateau(trace: OptimizerTrace, window: int, tol: float) -> bool:
    if len(trace.costs) < window:
        return False
    tail = trace.costs[-window:]
    if not all(trace.feasible[-window:]):
        return False
    hi = max(tail)
    return hi > 0 and (hi - min(tail)) / hi < tol


def _stable(trace: OptimizerTrace, cfg: OptimizerConfig) -> bool:
    w = cfg.stability_window
    if len(trace.costs) < w:
        return False
    tail = trace.costs[-w:]
    if not all(trace.feasible[-w:]):
        return False
    hi = max(tail)
    lo = min(tail)
    return hi > 0 and (hi - lo) / hi < cfg.stability_rel_tol


# ---------------------------------------------------------------------------
# chain-topology numeric optimizer
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChainNumericResult:
    relay_positions: tuple
    radii: tuple  # (r_t2, relays..., r_t1)
    cost: float


def optimize_chain(n: int, d: float, iters: int = 20000,
                   move_tol: float = 1e-14) -> ChainNumericResult:
    """Iterative chain optimizer for two terminals at (+-d, 0) separated
    by the unit obstacle.

    Relays average toward their neighbors' midpoint and are projected
    tangentially onto their clearance margin (1 + own radius) instead of
    cancelling blocked moves, so spacing keeps equalizing along the
    obstacle boundary; terminal hops are clamped to the terminal
    clearance d - 1. Deterministic and obstacle-feasible on exit.
    """
    if n < 1:
        raise ValueError("need at least one relay")
    t2 = Point2(d, 0.0)
    t1 = Point2(-d, 0.0)
    # Seed along the upper detour.
    seed_r = max(d, 1.0 + 1e-6)
    pos = [(seed_r * math.cos(k * math.pi / (n + 1)),
            seed_r * math.sin(k * math.pi / (n + 1))) for k in range(1, n + 1)]

    rate = 0.8
    for _ in range(iters):
        chain = [(t2.x, t2.y)] + pos + [(t1.x, t1.y)]
        hops = [math.hypot(chain[i][0] - chain[i + 1][0],
                           chain[i][1] - chain[i + 1][1])
                for i in range(len(chain) - 1)]
        new_pos = []
        max_move = 0.0
        for i in range(n):
            px, py = pos[i]
            ax, ay = chain[i]
            bx, by = chain[i + 2]
            tx = px + rate * (0.5 * (ax + bx) - px)
            ty = py + rate * (0.5 * (ay + by) - py)
            # Radius this relay would need: its longer adjacent hop.
            r = max(hops[i], hops[i + 1])
            margin = 1.0 + r
            norm = math.hypot(tx, ty)
            if norm < margin:
                if norm < 1e-12:
                    tx, ty = 0.0, margin
                else:
                    tx, ty = tx * margin / norm, ty * margin / norm
            new_pos.append((tx, ty))
            max_move = max(max_move, math.hypot(tx - px, ty - py))
        # Clamp terminal hops to the terminal clearance d - 1.
        for term, idx in ((t2, 0), (t1, n - 1)):
            px, py = new_pos[idx]
            hop = math.hypot(px - term.x, py - term.y)
            if hop > d - 1.0:
                f = (d - 1.0) / hop
                new_pos[idx] = (term.x + (px - term.x) * f,
                                term.y + (py - term.y) * f)
        pos = new_pos
        if max_move < move_tol:
            break

    chain = [(t2.x, t2.y)] + pos + [(t1.x, t1.y)]
    hops = [math.hypot(chain[i][0] - chain[i + 1][0],
                       chain[i][1] - chain[i + 1][1])
            for i in range(len(chain) - 1)]
    radii = [hops[0]] + [max(hops[i], hops[i + 1]) for i in range(n)] \
        + [hops[-1]]
    return ChainNumericResult(
        tuple(Point2(x, y) for x, y in pos), tuple(radii),
        float(sum(r * r for r in radii)))
