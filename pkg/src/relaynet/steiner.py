"""Exact Steiner tree in graphs, dynamic programming over
(terminal-subset, node) states.

Exponential only in the terminal count, which the paper-scale experiments
keep at five or fewer; a hard state budget guards against misuse. Ties in
total weight are resolved by comparing sorted edge-id tuples, so results
are deterministic.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable

from .errors import BudgetExceededError, NoTreeError
from .visgraph import GeoGraph

EXACT_TERMINAL_LIMIT = 8
MAX_STATES = 10 ** 8


@dataclass(frozen=True)
class SteinerTree:
    edge_ids: tuple[int, ...]
    total_length: float
    terminal_set: frozenset[int]

    def node_ids(self, g: GeoGraph) -> frozenset[int]:
        ids = set(self.terminal_set)
        for eid in self.edge_ids:
            e = g.edge_by_id(eid)
            ids.add(e.u)
            ids.add(e.v)
        return frozenset(ids)


def _merge_edges(a: tuple, b: tuple) -> tuple:
    return tuple(sorted(set(a) | set(b)))


def solve_stpg(g: GeoGraph, terminals: Iterable[int],
               exact_limit: int = EXACT_TERMINAL_LIMIT) -> SteinerTree:
    """Minimum-total-weight tree spanning the given terminal node ids.

    Raises NoTreeError when the terminals are not connected in ``g`` and
    BudgetExceededError beyond the configured exact limits.
    """
    ts = sorted(set(terminals))
    if len(ts) < 2:
        raise ValueError("need at least 2 terminals")
    if len(ts) > exact_limit:
        raise BudgetExceededError(
            f"{len(ts)} terminals exceed the exact limit {exact_limit}")
    n_nodes = len(g.nodes)
    if (1 << len(ts)) * n_nodes > MAX_STATES:
        raise BudgetExceededError("state budget exceeded")

    node_ids = [node.id for node in g.nodes]
    root = ts[0]
    others = ts[1:]
    full = (1 << len(others)) - 1

    # dp[mask] maps node -> (cost, sorted edge-id tuple)
    dp: list[dict] = [dict() for _ in range(full + 1)]

    def grow(mask: int) -> None:
        # Dijkstra-style relaxation of dp[mask] across the whole graph.
        table = dp[mask]
        heap = [(cost, edges, v) for v, (cost, edges) in table.items()]
        heapq.heapify(heap)
        while heap:
            cost, edges, v = heapq.heappop(heap)
            cur = table.get(v)
            if cur is not None and (cur[0], cur[1]) < (cost, edges):
                continue
            for e in g.adjacent(v):
                u = e.v if e.u == v else e.u
                if e.id in edges:
                    continue
                ncost = cost + e.weight
                nedges = tuple(sorted(edges + (e.id,)))
                old = table.get(u)
                if old is None or (ncost, nedges) < old:
                    table[u] = (ncost, nedges)
                    heapq.heappush(heap, (ncost, nedges, u))

    if not others:
        raise ValueError("need at least 2 terminals")

    for i, t in enumerate(others):
        dp[1 << i][t] = (0.0, ())
        grow(1 << i)

    for mask in range(1, full + 1):
        if mask & (mask - 1) == 0:
            continue  # singleton: already grown
        low = mask & (-mask)
        table = dp[mask]
        sub = (mask - 1) & mask
        while sub:
            if sub & low:  # fix the lowest bit in one side to halve work
                rest = mask ^ sub
                t_sub = dp[sub]
                t_rest = dp[rest]
                for v, (c1, e1) in t_sub.items():
                    other = t_rest.get(v)
                    if other is None:
                        continue
                    cand = (c1 + other[0], _merge_edges(e1, other[1]))
                    old = table.get(v)
                    if old is None or cand < old:
                        table[v] = cand
            sub = (sub - 1) & mask
        grow(mask)

    best = dp[full].get(root)
    if best is None:
        raise NoTreeError("terminals are not connected")
    cost, edges = best
    total = sum(g.edge_by_id(eid).weight for eid in edges)
    return SteinerTree(tuple(edges), total, frozenset(ts))


def tree_adjacency(g: GeoGraph, tree: SteinerTree) -> dict[int, list[tuple[int, int]]]:
    """Node -> list of (neighbor, edge id) within the tree, sorted."""
    adj: dict[int, list[tuple[int, int]]] = {}
    for eid in tree.edge_ids:
        e = g.edge_by_id(eid)
        adj.setdefault(e.u, []).append((e.v, eid))
        adj.setdefault(e.v, []).append((e.u, eid))
    for lst in adj.values():
        lst.sort()
    return adj
