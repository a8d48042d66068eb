"""Pre-scan pipeline: obstacle-free baseline, Steiner-tree seed, homotopy
generation by terminal-edge removal, convergence-likelihood filtering,
relay seeding, and candidate evolution.

Candidate evolutions are independent; RELAYNET_THREADS caps the worker
pool. Results are aggregated order-independently and then sorted by
(cost, generation, fingerprint), so runs are deterministic.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from .errors import (DegenerateGeometryError, NoSolutionError, NoTreeError)
from .geometry import Point2, PolyPath, Segment, crossing_parity
from .homotopy import (CardinalRays, HVector, branches, build_cardinal_rays,
                       classify)
from .network import (NetworkState, Scenario, cost, is_feasible_cost,
                      is_strongly_connected)
from .optimizer import (OptimizerConfig, mst_and_radii, optimize,
                        random_initial_state)
from .steiner import SteinerTree, solve_stpg, tree_adjacency
from .visgraph import GeoGraph, augment, build_graph, oriented_geometry


@dataclass
class PrescanConfig:
    relays: Optional[int] = None  # overrides the scenario budget
    generations: int = 7
    cl_threshold: float = 10.0  # percent
    keep_redundant: bool = False
    arcs: str = "shortest"
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)


@dataclass(frozen=True)
class HomotopyCandidate:
    tree: SteinerTree
    hvector: HVector
    generation: int
    graph: GeoGraph  # the (possibly edge-reduced) graph the tree solves
    length: float


@dataclass(frozen=True)
class EvolvedEntry:
    candidate_index: int  # -1 for the obstacle-free baseline
    state: NetworkState
    hvector: Optional[HVector]
    cost: float
    converged: bool


@dataclass
class PrescanResult:
    candidates: list
    evolved: list  # EvolvedEntry, ranked by (cost, generation, hvector)
    discarded: list  # (candidate_index, CL percent)
    failed: list  # (candidate_index, reason)
    s0_direct: bool = False

    def final_classes(self) -> set:
        return {e.hvector.serialize() for e in self.evolved
                if e.hvector is not None}

    def min_cost(self) -> Optional[float]:
        return self.evolved[0].cost if self.evolved else None


# ---------------------------------------------------------------------------
# geometry adapters
# ---------------------------------------------------------------------------

def steiner_branch_paths(g: GeoGraph, tree: SteinerTree) -> list:
    """Branch decomposition of a graph tree as oriented poly-paths."""
    adj = tree_adjacency(g, tree)
    edge_pairs = []
    pair_edge = {}
    for eid in tree.edge_ids:
        e = g.edge_by_id(eid)
        edge_pairs.append((e.u, e.v))
        pair_edge[(e.u, e.v)] = eid
        pair_edge[(e.v, e.u)] = eid
    paths = []
    for br in branches(edge_pairs, terminals=tree.terminal_set):
        elems = []
        for a, b in zip(br, br[1:]):
            elems.append(oriented_geometry(g.edge_by_id(pair_edge[(a, b)]), a))
        paths.append(PolyPath(tuple(elems)))
    return paths


def point_tree_branch_paths(points: Sequence[Point2], tree: Sequence[tuple],
                            terminals: Sequence[int]) -> list:
    """Branch poly-paths of a straight-edge tree over point nodes."""
    paths = []
    for br in branches(tree, terminals=terminals):
        elems = []
        for a, b in zip(br, br[1:]):
            if points[a].dist(points[b]) > 1e-12:
                elems.append(Segment(points[a], points[b]))
        if elems:
            paths.append(PolyPath(tuple(elems)))
    return paths


def classify_state(s: Scenario, st: NetworkState,
                   rays: CardinalRays) -> Optional[HVector]:
    """Fingerprint an evolved network via its MST branches; None when the
    state has no classifiable geometry."""
    pts = list(s.terminals) + st.active_relay_positions()
    if len(pts) < 2:
        return None
    tree, _ = mst_and_radii(pts)
    paths = point_tree_branch_paths(pts, tree, range(s.m))
    if not paths:
        return None
    return classify(paths, s.obstacles, rays)


# ---------------------------------------------------------------------------
# gap traversal and convergence likelihood
# ---------------------------------------------------------------------------

def _crosses(branch_paths, seg: Segment, pivot: Point2) -> bool:
    """Whether any branch crosses the segment at least once, retrying
    with tiny rotations about ``pivot`` on degenerate incidences."""
    from .homotopy import MAX_PERTURB_TRIES, PERTURB_STEP, _rotated_about
    for k in range(MAX_PERTURB_TRIES):
        angle = (k + 1) // 2 * PERTURB_STEP * (1 if k % 2 == 0 else -1)
        trial = _rotated_about(seg, pivot, angle)
        try:
            return any(crossing_parity(p, trial) > 0 for p in branch_paths)
        except DegenerateGeometryError:
            continue
    raise DegenerateGeometryError("gap crossing unresolvable")


def gap_traversals(branch_paths: Sequence[PolyPath], s: Scenario) -> list:
    """Obstacle-obstacle and terminal-obstacle gaps whose connecting
    segment the network crosses. Entries are ((kind, i, j), gap_length)
    with gap_length the boundary-to-boundary clearance.

    Connecting segments run center to center (crossings can only occur in
    the corridor, since network geometry never enters a disk interior);
    the terminal end of a TO segment is nudged off the terminal so branch
    endpoints sitting there stay off the segment.
    """
    out = []
    obs = s.obstacles
    for i in range(len(obs)):
        for j in range(i + 1, len(obs)):
            ci, cj = obs[i].center, obs[j].center
            d = ci.dist(cj)
            gap = d - obs[i].radius - obs[j].radius
            if gap <= 1e-12 or d <= 1e-12:
                continue
            if _crosses(branch_paths, Segment(ci, cj), ci):
                out.append((("OO", i, j), gap))
    for t in range(s.m):
        pt = s.terminals[t]
        for i, ob in enumerate(obs):
            d = pt.dist(ob.center)
            gap = d - ob.radius
            if gap <= 1e-12:
                continue
            delta = 1e-6 * d
            ux, uy = (ob.center.x - pt.x) / d, (ob.center.y - pt.y) / d
            seg = Segment(Point2(pt.x + ux * delta, pt.y + uy * delta),
                          ob.center)
            if _crosses(branch_paths, seg, ob.center):
                out.append((("TO", t, i), gap))
    return out


def convergence_likelihood(tree_length: float,
                           branch_paths: Sequence[PolyPath], s: Scenario,
                           n: int) -> float:
    """Gap-clearance score in percent: the minimum over traversed gaps of
    1 - 2*R_avg/D_OO' (obstacle pairs) and 1 - R_avg/D_TO (terminal-
    obstacle pairs), with R_avg = L/n. A network crossing no gap scores
    100; scores may be negative for gaps tighter than the spacing."""
    if n < 1:
        raise ValueError("need at least one relay")
    r_avg = tree_length / n
    worst = None
    for (kind, _i, _j), gap in gap_traversals(branch_paths, s):
        frac = 2.0 * r_avg / gap if kind == "OO" else r_avg / gap
        value = 1.0 - frac
        if worst is None or value < worst:
            worst = value
    return 100.0 if worst is None else worst * 100.0


# ---------------------------------------------------------------------------
# relay seeding
# ---------------------------------------------------------------------------

def _path_point_at(path: PolyPath, target: float) -> Point2:
    walked = 0.0
    for elem in path.elements:
        el = elem.length
        if walked + el >= target or elem is path.elements[-1]:
            t = (target - walked) / el if el > 0 else 0.0
            return elem.point_at(max(0.0, min(1.0, t)))
        walked += el
    return path.end


def seed_relays(branch_paths: Sequence[PolyPath], n: int) -> list:
    """Distribute n relays along the tree, apportioned to branches by
    length (largest remainder) and uniformly spaced within each branch:
    a single branch of length L gets spacing L/(n+1)."""
    if n < 1:
        raise ValueError("need at least one relay")
    lengths = [p.length for p in branch_paths]
    total = sum(lengths)
    if total <= 0:
        raise NoSolutionError("tree has no length to seed along")
    quotas = [n * ln / total for ln in lengths]
    counts = [int(math.floor(q)) for q in quotas]
    remainder = n - sum(counts)
    order = sorted(range(len(quotas)),
                   key=lambda i: (-(quotas[i] - counts[i]), i))
    for i in order[:remainder]:
        counts[i] += 1
    positions = []
    for path, cnt in zip(branch_paths, counts):
        for k in range(1, cnt + 1):
            positions.append(_path_point_at(path, path.length * k / (cnt + 1)))
    return positions


# ---------------------------------------------------------------------------
# homotopy generation
# ---------------------------------------------------------------------------

MAX_CUTS_PER_TERMINAL = 16


def homgen(initial: Sequence[HomotopyCandidate], base_graph: GeoGraph,
           max_generations: int, rays: CardinalRays,
           keep_redundant: bool = False) -> list:
    """Breadth-first homotopy generation.

    For each saved candidate and each terminal, the tree edge incident to
    that terminal is removed from the candidate's graph and the Steiner
    tree re-solved. Dense line-of-sight graphs mostly re-route through a
    near-parallel edge of the same class, so the cut is iterated on the
    accumulating reduced graph until the fingerprint changes (bounded per
    terminal); the first new fingerprint is appended with the next
    generation number. By default redundant fingerprints are discarded
    regardless of their graph (the symmetric-intermediate limitation);
    ``keep_redundant`` keys saved pairs by (fingerprint, removed-edge
    set) instead, at the price of a larger frontier.
    """
    obstacles = base_graph.obstacles
    saved = list(initial)

    def key_of(cand: HomotopyCandidate):
        if keep_redundant:
            return (cand.hvector.serialize(),
                    cand.graph.removed_edge_ids(base_graph))
        return cand.hvector.serialize()

    seen = {key_of(c) for c in saved}
    idx = 0
    while idx < len(saved):
        cand = saved[idx]
        idx += 1
        if cand.generation >= max_generations:
            continue
        for term in sorted(cand.tree.terminal_set):
            graph = cand.graph
            tree = cand.tree
            for _cut in range(MAX_CUTS_PER_TERMINAL):
                incident = tree_adjacency(graph, tree).get(term, [])
                if not incident:
                    break
                graph = graph.without_edges({incident[0][1]})
                try:
                    tree = solve_stpg(graph, cand.tree.terminal_set)
                except NoTreeError:
                    break
                paths = steiner_branch_paths(graph, tree)
                hv = classify(paths, obstacles, rays)
                child = HomotopyCandidate(tree, hv, cand.generation + 1,
                                          graph, tree.total_length)
                k = key_of(child)
                if k not in seen:
                    seen.add(k)
                    saved.append(child)
                    break
    return saved


# ---------------------------------------------------------------------------
# the pipeline
# ---------------------------------------------------------------------------

def _evolve_candidate(s: Scenario, idx: int, cand: HomotopyCandidate,
                      n: int, cfg: PrescanConfig, rays: CardinalRays):
    paths = steiner_branch_paths(cand.graph, cand.tree)
    relays = seed_relays(paths, n)
    initial = NetworkState(relays, [0.0] * s.m, [0.0] * n, [True] * n)
    final, trace = optimize(s, initial, cfg.optimizer)
    c = cost(s, final)
    if not is_feasible_cost(c) or not is_strongly_connected(final, s):
        return ("failed", idx, "infeasible" if not is_feasible_cost(c)
                else "not strongly connected")
    hv = classify_state(s, final, rays)
    return ("evolved", idx, EvolvedEntry(idx, final, hv, float(c),
                                         trace.converged))


def prescan(s: Scenario, cfg: Optional[PrescanConfig] = None) -> PrescanResult:
    """Run the full pre-scan pipeline on a scenario.

    The obstacle-free optimum is evolved first and returned alone when it
    already satisfies the obstacle constraints. Otherwise homotopy
    candidates are generated over the augmented visibility graph, scored
    for convergence likelihood, and every candidate above the threshold
    is seeded with relays and evolved.
    """
    cfg = cfg or PrescanConfig()
    n = cfg.relays if cfg.relays is not None else s.relay_budget
    if n < 1:
        raise NoSolutionError("prescan needs a positive relay budget")

    rays = build_cardinal_rays(s.obstacles, s.terminals)

    # Obstacle-free baseline.
    free = Scenario(s.terminals, [], n, s.units)
    baseline_initial = random_initial_state(free, n, seed=cfg.optimizer.seed)
    base_final, base_trace = optimize(free, baseline_initial, cfg.optimizer)
    base_cost = cost(s, base_final)
    if is_feasible_cost(base_cost) and is_strongly_connected(base_final, s):
        entry = EvolvedEntry(-1, base_final,
                             classify_state(s, base_final, rays),
                             float(base_cost), base_trace.converged)
        return PrescanResult([], [entry], [], [], s0_direct=True)

    g = build_graph(s.terminals, s.obstacles, arcs=cfg.arcs)
    gt = augment(g)
    terminal_nodes = sorted(gt.terminal_index.values())
    try:
        root = solve_stpg(gt, terminal_nodes)
    except NoTreeError as exc:
        raise NoSolutionError(f"terminals cannot be connected: {exc}")
    root_paths = steiner_branch_paths(gt, root)
    gen0 = HomotopyCandidate(root, classify(root_paths, s.obstacles, rays),
                             0, gt, root.total_length)
    candidates = homgen([gen0], gt, cfg.generations, rays,
                        keep_redundant=cfg.keep_redundant)

    to_evolve = []
    discarded = []
    for idx, cand in enumerate(candidates):
        paths = steiner_branch_paths(cand.graph, cand.tree)
        cl = convergence_likelihood(cand.length, paths, s, n)
        if cl > cfg.cl_threshold:
            to_evolve.append(idx)
        else:
            discarded.append((idx, cl))

    workers = max(1, int(os.environ.get("RELAYNET_THREADS", "1")))
    results = []
    if workers > 1 and len(to_evolve) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_evolve_candidate, s, idx,
                                   candidates[idx], n, cfg, rays)
                       for idx in to_evolve]
            results = [f.result() for f in futures]
    else:
        results = [_evolve_candidate(s, idx, candidates[idx], n, cfg, rays)
                   for idx in to_evolve]

    evolved = []
    failed = []
    for tag, idx, payload in results:
        if tag == "evolved":
            evolved.append(payload)
        else:
            failed.append((idx, payload))
    evolved.sort(key=lambda e: (e.cost, candidates[e.candidate_index].generation,
                                e.hvector.serialize() if e.hvector else ""))
    return PrescanResult(list(candidates), evolved, discarded, failed)


def summary(result: PrescanResult, n: int, generations: int) -> dict:
    """Table-style summary: candidate counts, CL survivors, distinct
    final classes, and the minimum cost."""
    return {
        "n": n,
        "generations": generations,
        "n_pre": len(result.candidates),
        "n_cl_pass": len(result.candidates) - len(result.discarded),
        "n_fin": len(result.final_classes()),
        "min_cost": result.min_cost(),
    }
