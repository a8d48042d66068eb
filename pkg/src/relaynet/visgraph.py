"""Tangent/bitangent visibility graph over disk obstacles, its
line-of-sight augmentation, and deterministic shortest / k-shortest path
queries.

Nodes are terminals and tangency points; edges are tangent segments,
bitangent segments, boundary arcs, and (in the augmented graph) every
unobstructed straight chord between node pairs. All tie-breaking is
lexicographic on node-id sequences so repeated runs are byte-identical.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import InvalidScenarioError, NoPathError
from .geometry import (TOL, Arc, Disk, Element, Point2, PolyPath, Segment,
                       arc_clear, segment_clear)

MERGE_TOL = 1e-7  # tangent points closer than this are one node


@dataclass(frozen=True)
class GeoNode:
    id: int
    position: Point2
    kind: str  # "terminal" | "tangent_point"
    host_obstacle: Optional[int] = None


@dataclass(frozen=True)
class GeoEdge:
    id: int
    u: int
    v: int
    geometry: Element  # oriented u -> v
    weight: float


class GeoGraph:
    """Immutable undirected multigraph of nodes, geometric edges, and the
    obstacle set they were built against."""

    def __init__(self, nodes: Sequence[GeoNode], edges: Sequence[GeoEdge],
                 terminal_index: dict[int, int], obstacles: Sequence[Disk]):
        self.nodes = list(nodes)
        self.edges = list(edges)
        self.terminal_index = dict(terminal_index)
        self.obstacles = list(obstacles)
        self._adj: dict[int, list[GeoEdge]] = {n.id: [] for n in self.nodes}
        for e in self.edges:
            self._adj[e.u].append(e)
            self._adj[e.v].append(e)
        for lst in self._adj.values():
            lst.sort(key=lambda e: e.id)

    def adjacent(self, node_id: int) -> list[GeoEdge]:
        return self._adj[node_id]

    def edge_by_id(self, edge_id: int) -> GeoEdge:
        return self._edge_map[edge_id]

    @property
    def _edge_map(self) -> dict[int, GeoEdge]:
        m = getattr(self, "_edge_map_cache", None)
        if m is None:
            m = {e.id: e for e in self.edges}
            self._edge_map_cache = m
        return m

    def without_edges(self, edge_ids: Iterable[int]) -> "GeoGraph":
        """Copy of the graph with the given edges removed (ids stable)."""
        drop = set(edge_ids)
        kept = [e for e in self.edges if e.id not in drop]
        return GeoGraph(self.nodes, kept, self.terminal_index, self.obstacles)

    def removed_edge_ids(self, base: "GeoGraph") -> frozenset[int]:
        mine = {e.id for e in self.edges}
        return frozenset(e.id for e in base.edges if e.id not in mine)


def _other(edge: GeoEdge, node_id: int) -> int:
    return edge.v if edge.u == node_id else edge.u


def oriented_geometry(edge: GeoEdge, from_node: int) -> Element:
    return edge.geometry if edge.u == from_node else edge.geometry.reversed()


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

class _Builder:
    def __init__(self, terminals, obstacles):
        self.obstacles = list(obstacles)
        self.nodes: list[GeoNode] = []
        self.anchors: dict[int, list[int]] = {i: [] for i in range(len(obstacles))}
        self.edges: list[GeoEdge] = []
        self._edge_keys = set()
        self.terminal_index = {}
        for i, t in enumerate(terminals):
            nid = self._new_node(t, "terminal", None)
            self.terminal_index[i] = nid
            for oi, ob in enumerate(self.obstacles):
                if abs(t.dist(ob.center) - ob.radius) <= TOL:
                    self.anchors[oi].append(nid)

    def _new_node(self, pos, kind, host):
        node = GeoNode(len(self.nodes), pos, kind, host)
        self.nodes.append(node)
        return node.id

    def anchor_node(self, pos: Point2, host: int) -> int:
        """Node for a tangency point on an obstacle, merging duplicates."""
        for nid in self.anchors[host]:
            if self.nodes[nid].position.dist(pos) < MERGE_TOL:
                return nid
        nid = self._new_node(pos, "tangent_point", host)
        self.anchors[host].append(nid)
        return nid

    def add_edge(self, u: int, v: int, geometry: Element) -> None:
        if u == v:
            return
        if u > v:
            u, v = v, u
            geometry = geometry.reversed()
        if isinstance(geometry, Segment):
            key = (u, v, "seg")
            weight = geometry.length
        else:
            key = (u, v, geometry.orientation,
                   round(geometry.sweep / TOL))
            weight = geometry.length
        if key in self._edge_keys or weight <= TOL:
            return
        self._edge_keys.add(key)
        self.edges.append(GeoEdge(len(self.edges), u, v, geometry, weight))

    def has_segment_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v, "seg") in self._edge_keys

    def build(self) -> GeoGraph:
        return GeoGraph(self.nodes, self.edges, self.terminal_index,
                        self.obstacles)


def _angle_on(ob: Disk, p: Point2) -> float:
    return math.atan2(p.y - ob.center.y, p.x - ob.center.x)


def build_graph(terminals: Sequence[Point2], obstacles: Sequence[Disk],
                arcs: str = "shortest") -> GeoGraph:
    """Visibility graph of tangents, bitangents, and boundary arcs.

    ``arcs`` selects whether only the shorter arc between each tangency
    pair is kept ("shortest") or both ("both"); "both" lets path queries
    wrap the far side of an obstacle.
    """
    if arcs not in ("shortest", "both"):
        raise ValueError(f"arcs must be 'shortest' or 'both', got {arcs!r}")
    for i, t in enumerate(terminals):
        for oi, ob in enumerate(obstacles):
            if ob.contains(t):
                raise InvalidScenarioError(
                    f"terminal {i} lies inside obstacle {oi}")

    b = _Builder(terminals, obstacles)

    # Direct terminal-terminal sight lines.
    m = len(terminals)
    for i in range(m):
        for j in range(i + 1, m):
            if terminals[i].dist(terminals[j]) <= TOL:
                continue
            seg = Segment(terminals[i], terminals[j])
            if segment_clear(seg, obstacles):
                b.add_edge(b.terminal_index[i], b.terminal_index[j], seg)

    # Terminal -> obstacle tangents.
    from .geometry import tangent_points
    for i in range(m):
        t = terminals[i]
        for oi, ob in enumerate(obstacles):
            for q in tangent_points(t, ob):
                if t.dist(q) <= TOL:
                    continue  # terminal on the boundary: anchor only
                seg = Segment(t, q)
                if segment_clear(seg, obstacles):
                    b.add_edge(b.terminal_index[i], b.anchor_node(q, oi), seg)

    # Obstacle-obstacle bitangents.
    from .geometry import bitangents
    for oi in range(len(obstacles)):
        for oj in range(oi + 1, len(obstacles)):
            for seg in bitangents(obstacles[oi], obstacles[oj]):
                if segment_clear(seg, obstacles):
                    b.add_edge(b.anchor_node(seg.a, oi),
                               b.anchor_node(seg.b, oj), seg)

    # Boundary arcs between anchor pairs on each obstacle.
    for oi, ob in enumerate(obstacles):
        anchor_ids = sorted(b.anchors[oi])
        for ai in range(len(anchor_ids)):
            for aj in range(ai + 1, len(anchor_ids)):
                u, v = anchor_ids[ai], anchor_ids[aj]
                au = _angle_on(ob, b.nodes[u].position)
                av = _angle_on(ob, b.nodes[v].position)
                ccw = Arc(ob, au, av, "ccw")
                cw = Arc(ob, au, av, "cw")
                if arcs == "both":
                    candidates = [ccw, cw]
                elif abs(ccw.sweep - cw.sweep) <= TOL:
                    candidates = [ccw, cw]  # antipodal: both are shortest
                else:
                    candidates = [ccw if ccw.sweep < cw.sweep else cw]
                for arc in candidates:
                    if arc_clear(arc, obstacles):
                        b.add_edge(u, v, arc)

    return b.build()


def augment(g: GeoGraph) -> GeoGraph:
    """Line-of-sight augmentation: adds a straight edge for every clear
    node pair not already joined by a segment edge."""
    b = _Builder([], g.obstacles)
    b.nodes = list(g.nodes)
    b.terminal_index = dict(g.terminal_index)
    for e in g.edges:
        b._edge_keys.add(_edge_key(e))
    b.edges = list(g.edges)

    n = len(g.nodes)
    for u in range(n):
        pu = g.nodes[u].position
        for v in range(u + 1, n):
            pv = g.nodes[v].position
            if b.has_segment_edge(u, v) or pu.dist(pv) <= TOL:
                continue
            seg = Segment(pu, pv)
            if segment_clear(seg, g.obstacles):
                b.add_edge(u, v, seg)
    return b.build()


def _edge_key(e: GeoEdge):
    if isinstance(e.geometry, Segment):
        return (e.u, e.v, "seg")
    return (e.u, e.v, e.geometry.orientation, round(e.geometry.sweep / TOL))


# ---------------------------------------------------------------------------
# deterministic path queries
# ---------------------------------------------------------------------------

def _dijkstra(g: GeoGraph, src: int, dst: int,
              removed_edges: frozenset = frozenset(),
              removed_nodes: frozenset = frozenset()):
    """Minimum (weight, node-sequence, edge-sequence) path between nodes.

    With strictly positive weights the first settlement of a node carries
    the lexicographically minimal path among all minimum-weight ones, so
    the result is fully deterministic. Returns None when unreachable.
    """
    if src in removed_nodes or dst in removed_nodes:
        return None
    heap = [(0.0, (src,), ())]
    done = set()
    while heap:
        w, nseq, eseq = heapq.heappop(heap)
        node = nseq[-1]
        if node in done:
            continue
        done.add(node)
        if node == dst:
            return (w, nseq, eseq)
        for e in g.adjacent(node):
            if e.id in removed_edges:
                continue
            nxt = _other(e, node)
            if nxt in removed_nodes or nxt in done:
                continue
            heapq.heappush(heap, (w + e.weight, nseq + (nxt,), eseq + (e.id,)))
    return None


def path_geometry(g: GeoGraph, node_seq: Sequence[int],
                  edge_seq: Sequence[int]) -> PolyPath:
    elems = []
    for frm, eid in zip(node_seq, edge_seq):
        elems.append(oriented_geometry(g.edge_by_id(eid), frm))
    return PolyPath(tuple(elems))


def shortest_path(g: GeoGraph, a: int, b: int) -> PolyPath:
    """Shortest path between two terminals (by terminal ordinal)."""
    res = shortest_path_nodes(g, g.terminal_index[a], g.terminal_index[b])
    return path_geometry(g, res[1], res[2])


def shortest_path_nodes(g: GeoGraph, src: int, dst: int):
    res = _dijkstra(g, src, dst)
    if res is None:
        raise NoPathError(f"no path between nodes {src} and {dst}")
    return res


def _path_weight(g: GeoGraph, edge_seq: Sequence[int]) -> float:
    w = 0.0
    for eid in edge_seq:
        w += g.edge_by_id(eid).weight
    return w


def yen_k_paths(g: GeoGraph, a: int, b: int, k: int) -> list[PolyPath]:
    """The k shortest loopless paths between two terminals, ordered by
    (weight, node sequence); fewer are returned when fewer exist."""
    return [path_geometry(g, nseq, eseq)
            for _, nseq, eseq in yen_k_paths_nodes(g, g.terminal_index[a],
                                                   g.terminal_index[b], k)]


def yen_k_paths_nodes(g: GeoGraph, src: int, dst: int, k: int):
    """Yen's algorithm on the multigraph; returns (weight, nodes, edges)
    triples sorted by (weight, nodes, edges)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    first = _dijkstra(g, src, dst)
    if first is None:
        return []
    accepted = [first]
    candidates: list = []
    seen = {(first[1], first[2])}

    while len(accepted) < k:
        _, prev_nodes, prev_edges = accepted[-1]
        for i in range(len(prev_nodes) - 1):
            root_nodes = prev_nodes[:i + 1]
            root_edges = prev_edges[:i]
            removed_edges = set()
            for _, nseq, eseq in accepted:
                if nseq[:i + 1] == root_nodes and eseq[:i] == root_edges:
                    removed_edges.add(eseq[i])
            removed_nodes = frozenset(root_nodes[:-1])
            spur = _dijkstra(g, root_nodes[-1], dst,
                             frozenset(removed_edges), removed_nodes)
            if spur is None:
                continue
            nodes = root_nodes + spur[1][1:]
            edges = root_edges + spur[2]
            if (nodes, edges) in seen:
                continue
            seen.add((nodes, edges))
            heapq.heappush(candidates, (_path_weight(g, edges), nodes, edges))
        if not candidates:
            break
        accepted.append(heapq.heappop(candidates))
    return accepted
