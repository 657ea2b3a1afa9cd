"""Dijkstra over unions of dense distance graphs.

A union takes several members, each a complete little distance graph on its
own vertex list (or a raw arc set), overlays them on the shared vertex ids,
and runs a single multi-source Dijkstra across the overlay.  Distances in
the union equal distances in the graph the members jointly describe.

Two relaxation strategies are provided.  ``naive`` relaxes a member's whole
row whenever one of its vertices settles.  ``monge`` keeps a linked list of
not-yet-settled vertices per member and only scans those, which is where
dense-row batching saves work; both return identical labels.
"""

from __future__ import annotations

import heapq
from typing import Iterable, Sequence

from .graph import MATRIX_SENTINEL, UNREACHABLE
from .ddg import DdgStore, DenseDistanceGraph, compute_leaf_ddg

__all__ = [
    "SparseMember",
    "DdgUnion",
    "MultiDijkstraResult",
    "multi_dijkstra",
    "Cone",
    "assemble_cone",
    "cone_distances",
]


class SparseMember:
    """Union member backed by raw arcs instead of a distance matrix."""

    __slots__ = ("nodes", "arcs", "piece_id", "_min")

    def __init__(
        self,
        nodes: tuple[int, ...],
        arcs: Sequence[tuple[int, int, int]],
        piece_id: int = -1,
    ):
        self.nodes = nodes
        self.arcs = tuple(arcs)
        self.piece_id = piece_id
        self._min: int | None = None

    @property
    def min_entry(self) -> int:
        if self._min is None:
            self._min = min((w for _, _, w in self.arcs), default=0)
            if self._min > 0:
                self._min = 0
        return self._min

    def __repr__(self) -> str:
        return f"SparseMember(|nodes|={len(self.nodes)}, |arcs|={len(self.arcs)})"


class DdgUnion:
    """Overlay of members on shared vertex ids, ready to run Dijkstra on."""

    __slots__ = (
        "members",
        "vertices",
        "slot_of",
        "dense_in",
        "sparse_adj",
        "union_vertices",
    )

    def __init__(self, members: Sequence):
        self.members = tuple(members)
        seen: set[int] = set()
        total = 0
        for m in self.members:
            total += len(m.nodes)
            seen.update(m.nodes)
        self.union_vertices = total
        self.vertices = tuple(sorted(seen))
        self.slot_of = {v: i for i, v in enumerate(self.vertices)}
        # dense membership: slot -> [(member index, local index)]
        self.dense_in: list[list[tuple[int, int]]] = [[] for _ in self.vertices]
        # sparse arcs: slot -> [(target slot, weight)]
        self.sparse_adj: list[list[tuple[int, int]]] = [[] for _ in self.vertices]
        for mi, m in enumerate(self.members):
            if m.min_entry < 0:
                raise ValueError(f"negative member weight in member {mi}")
            if isinstance(m, SparseMember):
                for t, h, w in m.arcs:
                    self.sparse_adj[self.slot_of[t]].append((self.slot_of[h], w))
            else:
                for li, v in enumerate(m.nodes):
                    self.dense_in[self.slot_of[v]].append((mi, li))


class MultiDijkstraResult:
    """Labels plus work counters from one union Dijkstra run."""

    __slots__ = (
        "vertices",
        "dist",
        "slot_of",
        "strategy",
        "union_vertices",
        "settled",
        "relaxations",
    )

    def __init__(self, vertices, dist, slot_of, strategy, union_vertices, settled, relaxations):
        self.vertices: tuple[int, ...] = vertices
        self.dist: list[int] = dist
        self.slot_of = slot_of
        self.strategy = strategy
        self.union_vertices = union_vertices
        self.settled = settled
        self.relaxations = relaxations

    def raw(self, v: int) -> int:
        slot = self.slot_of.get(v)
        return MATRIX_SENTINEL if slot is None else self.dist[slot]

    def label(self, v: int):
        d = self.raw(v)
        return UNREACHABLE if d >= MATRIX_SENTINEL else d

    def items(self):
        for v, d in zip(self.vertices, self.dist):
            if d < MATRIX_SENTINEL:
                yield v, d


def multi_dijkstra(
    members: Sequence,
    sources: Sequence[tuple[int, int]],
    forbidden: Iterable[int] = (),
    strategy: str = "naive",
) -> MultiDijkstraResult:
    """Multi-source Dijkstra over a union of members.

    ``sources`` is a list of (vertex, starting distance) pairs; every source
    vertex must belong to some member.  ``forbidden`` vertices are settled
    when reached but never relaxed out of (sources override this), so no
    path may pass through them.
    """
    if strategy not in ("naive", "monge"):
        raise ValueError(f"unknown strategy {strategy!r}")
    union = members if isinstance(members, DdgUnion) else DdgUnion(members)
    n = len(union.vertices)
    slot_of = union.slot_of

    dist = [MATRIX_SENTINEL] * n
    is_source = bytearray(n)
    heap: list[tuple[int, int]] = []
    for v, d0 in sources:
        if d0 < 0:
            raise ValueError("source distance must be non-negative")
        slot = slot_of.get(v)
        if slot is None:
            raise ValueError(f"source vertex {v} is not in the union")
        is_source[slot] = 1
        if d0 < dist[slot]:
            dist[slot] = d0
            heapq.heappush(heap, (d0, slot))
    blocked = bytearray(n)
    for v in forbidden:
        slot = slot_of.get(v)
        if slot is not None:
            blocked[slot] = 1

    mems = union.members
    dense_in = union.dense_in
    sparse_adj = union.sparse_adj
    done = bytearray(n)
    settled = 0
    relaxations = 0

    if strategy == "monge":
        # per-member linked list of not-yet-settled local indices
        nxt: list[list[int]] = []
        prv: list[list[int]] = []
        head: list[int] = []
        for m in mems:
            k = len(m.nodes)
            nxt.append(list(range(1, k + 1)))
            prv.append(list(range(-1, k - 1)))
            head.append(0 if k else -1)

    while heap:
        d, u = heapq.heappop(heap)
        if done[u] or d > dist[u]:
            continue
        done[u] = 1
        settled += 1
        if strategy == "monge":
            for mi, li in dense_in[u]:
                nx, pv = nxt[mi][li], prv[mi][li]
                if pv >= 0:
                    nxt[mi][pv] = nx
                else:
                    head[mi] = nx
                if nx < len(mems[mi].nodes):
                    prv[mi][nx] = pv
        if blocked[u] and not is_source[u]:
            continue
        for vslot, w in sparse_adj[u]:
            relaxations += 1
            nd = d + w
            if nd < dist[vslot]:
                dist[vslot] = nd
                heapq.heappush(heap, (nd, vslot))
        for mi, li in dense_in[u]:
            m = mems[mi]
            mat = m.matrix
            k = len(m.nodes)
            row = li * k
            nodes = m.nodes
            if strategy == "naive":
                for lj in range(k):
                    w = mat[row + lj]
                    if w >= MATRIX_SENTINEL:
                        continue
                    relaxations += 1
                    nd = d + w
                    vslot = slot_of[nodes[lj]]
                    if nd < dist[vslot]:
                        dist[vslot] = nd
                        heapq.heappush(heap, (nd, vslot))
            else:
                lj = head[mi]
                while lj < k:
                    w = mat[row + lj]
                    if w < MATRIX_SENTINEL:
                        relaxations += 1
                        nd = d + w
                        vslot = slot_of[nodes[lj]]
                        if nd < dist[vslot]:
                            dist[vslot] = nd
                            heapq.heappush(heap, (nd, vslot))
                    lj = nxt[mi][lj]

    return MultiDijkstraResult(
        union.vertices,
        dist,
        slot_of,
        strategy,
        union.union_vertices,
        settled,
        relaxations,
    )


class Cone:
    """The member family covering all distances out of one vertex.

    Holds the leaf matrix of ``vertex`` (with the vertex itself added as a
    matrix node) plus the strict matrix of every sibling along the leaf's
    root path.  Distances from the vertex inside this union agree with the
    full graph for every union vertex.
    """

    __slots__ = ("vertex", "leaf", "parts", "members")

    def __init__(self, vertex, leaf, parts, members):
        self.vertex: int = vertex
        self.leaf: int = leaf
        self.parts: tuple[tuple[str, int], ...] = parts
        self.members: tuple = members


def assemble_cone(store: DdgStore, v: int) -> Cone:
    tree = store.tree
    leaf = tree.leaf_of[v]
    members = [compute_leaf_ddg(store.graph, tree.pieces[leaf], extras=(v,))]
    parts = [("leaf", leaf)]
    for node in tree.root_path(leaf):
        sib = tree.sibling_of(node)
        if sib is not None:
            members.append(store.strict(sib))
            parts.append(("sibling", sib))
    return Cone(v, leaf, tuple(parts), tuple(members))


def cone_distances(store: DdgStore, v: int, strategy: str = "naive") -> MultiDijkstraResult:
    """Distances from ``v`` to every vertex of its cone."""
    cone = assemble_cone(store, v)
    return multi_dijkstra(cone.members, [(v, 0)], strategy=strategy)
