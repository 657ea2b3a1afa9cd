"""Reference shortest-path routines used to cross-check every oracle."""

from __future__ import annotations

import heapq
from typing import Iterable

from .graph import UNREACHABLE, EmbeddedPlanarGraph

__all__ = ["sssp", "distance_avoiding"]


def sssp(g: EmbeddedPlanarGraph, source: int) -> list[int | float]:
    """Single-source shortest path lengths by Dijkstra's algorithm."""
    g.check_vertex(source)
    dist: list[int | float] = [UNREACHABLE] * g.n
    dist[source] = 0
    heap: list[tuple[int, int]] = [(0, source)]
    while heap:
        d, v = heapq.heappop(heap)
        if d > dist[v]:
            continue
        for u, w in g.out_arcs(v):
            nd = d + w
            if nd < dist[u]:
                dist[u] = nd
                heapq.heappush(heap, (nd, u))
    return dist


def distance_avoiding(
    g: EmbeddedPlanarGraph,
    u: int,
    v: int,
    failed: Iterable[int] = (),
) -> int | float:
    """Exact u-to-v distance in the graph with ``failed`` vertices removed.

    The baseline the oracles are judged against: a plain Dijkstra run that
    refuses to enter any failed vertex.
    """
    g.check_vertex(u)
    g.check_vertex(v)
    dead = set(failed)
    for x in dead:
        g.check_vertex(x)
    if u in dead or v in dead:
        raise ValueError("query endpoints must not be failed vertices")
    if u == v:
        return 0
    dist: dict[int, int] = {u: 0}
    heap: list[tuple[int, int]] = [(0, u)]
    while heap:
        d, x = heapq.heappop(heap)
        if d > dist.get(x, UNREACHABLE):
            continue
        if x == v:
            return d
        for y, w in g.out_arcs(x):
            if y in dead:
                continue
            nd = d + w
            if nd < dist.get(y, UNREACHABLE):
                dist[y] = nd
                heapq.heappush(heap, (nd, y))
    return UNREACHABLE
