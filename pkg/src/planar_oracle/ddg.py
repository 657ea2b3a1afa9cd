"""Dense distance graphs over piece boundaries.

Three variants are computed here:

* standard: all-pairs distances between boundary vertices, paths free to
  wander anywhere inside the piece.
* strict internal: paths must stay internally disjoint from the boundary;
  computed by the C-shift construction (every arc whose tail is a boundary
  vertex gets a large constant C added, one Dijkstra per boundary vertex,
  C subtracted afterwards; totals of 2C or more mean the path touched the
  boundary twice and map to the unreachable sentinel).
* strict external (see the external module): distances outside a tuple of
  pieces except at the endpoints.

Matrices store plain integer residuals; the shift constant never survives
into a stored entry, so those residuals are independent of C's actual value.
"""

from __future__ import annotations

import heapq
from array import array
from typing import Iterable, Mapping, Sequence

from .graph import (
    MATRIX_SENTINEL,
    UNREACHABLE,
    EmbeddedPlanarGraph,
)

__all__ = [
    "DenseDistanceGraph",
    "ShiftConstant",
    "PieceDistanceTable",
    "shift_constant_for",
    "compute_ddg",
    "compute_ddg_internal",
    "compute_leaf_ddg",
    "compute_piece_distance_table",
    "minplus_closure",
    "DdgStore",
    "piece_adjacency",
]


class ShiftConstant:
    """Shared placeholder for the boundary-shift constant C = 2 * sum |w(e)|.

    All shifted arithmetic references this one object; stored matrices hold
    residuals with C already removed, so updating ``value`` (the dynamic
    oracle does this on every weight change) invalidates nothing.
    """

    __slots__ = ("value",)

    def __init__(self, value: int):
        if value <= 0:
            raise ValueError("shift constant must be positive")
        self.value = value

    def __repr__(self) -> str:
        return f"ShiftConstant({self.value})"


def shift_constant_for(g: EmbeddedPlanarGraph) -> ShiftConstant:
    """C = 2 * sum of |weights|, floored at 1 so zero-weight graphs work."""
    return ShiftConstant(max(2 * g.total_weight, 1))


class DenseDistanceGraph:
    """Complete digraph on an ordered vertex list, stored as a flat matrix.

    ``matrix[i * len(nodes) + j]`` is the distance from nodes[i] to
    nodes[j]; MATRIX_SENTINEL means unreachable under the variant's rules.
    """

    __slots__ = ("variant", "nodes", "matrix", "source_pieces", "_index", "_min")

    def __init__(
        self,
        variant: str,
        nodes: tuple[int, ...],
        matrix: array,
        source_pieces: tuple[int, ...],
    ):
        if variant not in ("standard", "strict_internal", "strict_external"):
            raise ValueError(f"unknown DDG variant {variant!r}")
        if len(matrix) != len(nodes) * len(nodes):
            raise ValueError("matrix shape does not match the node list")
        self.variant = variant
        self.nodes = nodes
        self.matrix = matrix
        self.source_pieces = source_pieces
        self._index = {v: i for i, v in enumerate(nodes)}
        self._min: int | None = None

    def __len__(self) -> int:
        return len(self.nodes)

    def index_of(self, v: int) -> int:
        return self._index[v]

    def entry(self, i: int, j: int) -> int:
        return self.matrix[i * len(self.nodes) + j]

    def dist(self, s: int, t: int):
        """Distance as a public value: int, or UNREACHABLE."""
        d = self.matrix[self._index[s] * len(self.nodes) + self._index[t]]
        return UNREACHABLE if d >= MATRIX_SENTINEL else d

    @property
    def min_entry(self) -> int:
        """Smallest finite entry (0 for empty matrices); validates sign."""
        if self._min is None:
            m = 0
            for x in self.matrix:
                if x < m:
                    m = x
            self._min = m
        return self._min

    def __repr__(self) -> str:
        return (
            f"DenseDistanceGraph({self.variant}, |nodes|={len(self.nodes)}, "
            f"pieces={self.source_pieces})"
        )


class PieceDistanceTable:
    """In-piece distances from every boundary vertex to every piece vertex."""

    __slots__ = ("piece_id", "sources", "targets", "matrix", "_sidx", "_tidx")

    def __init__(self, piece_id, sources, targets, matrix):
        self.piece_id: int = piece_id
        self.sources: tuple[int, ...] = sources
        self.targets: tuple[int, ...] = targets
        self.matrix: array = matrix
        self._sidx = {v: i for i, v in enumerate(sources)}
        self._tidx = {v: i for i, v in enumerate(targets)}

    def has_target(self, v: int) -> bool:
        return v in self._tidx

    def raw(self, s: int, v: int) -> int:
        return self.matrix[self._sidx[s] * len(self.targets) + self._tidx[v]]

    def dist(self, s: int, v: int):
        d = self.raw(s, v)
        return UNREACHABLE if d >= MATRIX_SENTINEL else d


# ----------------------------------------------------------------------
# piece-local Dijkstra machinery
# ----------------------------------------------------------------------


def piece_adjacency(
    g: EmbeddedPlanarGraph, vertices: Sequence[int], arcs: Iterable[int]
) -> tuple[dict[int, int], list[list[tuple[int, int]]]]:
    """Local index map and out-adjacency lists for a piece subgraph."""
    loc = {v: i for i, v in enumerate(vertices)}
    adj: list[list[tuple[int, int]]] = [[] for _ in vertices]
    for a in arcs:
        adj[loc[g.tails[a]]].append((loc[g.heads[a]], g.weights[a]))
    return loc, adj


def _dijkstra_local(
    n: int,
    adj: list[list[tuple[int, int]]],
    source: int,
    blocked_tails=None,
) -> list[int]:
    """Single-source distances over local adjacency lists.

    ``blocked_tails`` is an optional flag list; flagged vertices (other than
    the source) are settled but never relaxed out of.
    """
    dist = [MATRIX_SENTINEL] * n
    dist[source] = 0
    heap = [(0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        if blocked_tails is not None and blocked_tails[u] and u != source:
            continue
        for v, w in adj[u]:
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


# ----------------------------------------------------------------------
# DDG variants
# ----------------------------------------------------------------------


def compute_ddg(g: EmbeddedPlanarGraph, piece) -> DenseDistanceGraph:
    """Standard DDG: within-piece distances between boundary vertices."""
    nodes = piece.boundary
    loc, adj = piece_adjacency(g, piece.vertices, piece.arcs)
    k = len(nodes)
    matrix = array("q", [MATRIX_SENTINEL]) * (k * k)
    for i, s in enumerate(nodes):
        dist = _dijkstra_local(len(piece.vertices), adj, loc[s])
        row = i * k
        for j, t in enumerate(nodes):
            matrix[row + j] = dist[loc[t]]
    return DenseDistanceGraph("standard", nodes, matrix, (piece.id,))


def compute_ddg_internal(
    g: EmbeddedPlanarGraph, piece, shift: ShiftConstant
) -> DenseDistanceGraph:
    """Strict-internal DDG via the C-shift construction.

    Every arc whose tail lies on the piece boundary gets C added.  A path
    between boundary vertices that stays internally disjoint from the
    boundary pays the shift exactly once; any boundary-touching path pays
    at least 2C.  Entries are d' - C when d' < 2C, sentinel otherwise.
    """
    nodes = piece.boundary
    c = shift.value
    loc, adj = piece_adjacency(g, piece.vertices, piece.arcs)
    boundary_local = [False] * len(piece.vertices)
    for v in nodes:
        boundary_local[loc[v]] = True
    shifted: list[list[tuple[int, int]]] = [
        [(t, w + c) for t, w in row] if boundary_local[u] else row
        for u, row in enumerate(adj)
    ]
    k = len(nodes)
    matrix = array("q", [MATRIX_SENTINEL]) * (k * k)
    twoc = 2 * c
    for i, s in enumerate(nodes):
        dist = _dijkstra_local(len(piece.vertices), shifted, loc[s])
        row = i * k
        for j, t in enumerate(nodes):
            if i == j:
                matrix[row + j] = 0
                continue
            d = dist[loc[t]]
            if d < twoc:
                matrix[row + j] = d - c
    return DenseDistanceGraph("strict_internal", nodes, matrix, (piece.id,))


def compute_leaf_ddg(
    g: EmbeddedPlanarGraph,
    piece,
    failed: frozenset[int] = frozenset(),
    extras: tuple[int, ...] = (),
) -> DenseDistanceGraph:
    """On-the-fly strict-internal DDG of a leaf piece.

    ``failed`` vertices are removed outright; ``extras`` (query endpoints
    living in this leaf) join the boundary as first-class matrix vertices.
    Strictness is enforced by never relaxing out of a non-source matrix
    vertex, which is equivalent to the C-shift and keeps numbers small.
    """
    node_set = (set(piece.boundary) | set(extras)) - failed
    nodes = tuple(sorted(node_set))
    loc, adj = piece_adjacency(g, piece.vertices, piece.arcs)
    if failed:
        dead = [v in failed for v in piece.vertices]
        adj = [
            [] if dead[u] else [(t, w) for t, w in row if not dead[t]]
            for u, row in enumerate(adj)
        ]
    blocked = [False] * len(piece.vertices)
    for v in nodes:
        blocked[loc[v]] = True
    k = len(nodes)
    matrix = array("q", [MATRIX_SENTINEL]) * (k * k)
    for i, s in enumerate(nodes):
        dist = _dijkstra_local(len(piece.vertices), adj, loc[s], blocked)
        row = i * k
        for j, t in enumerate(nodes):
            matrix[row + j] = 0 if i == j else dist[loc[t]]
    return DenseDistanceGraph("strict_internal", nodes, matrix, (piece.id,))


def compute_piece_distance_table(g: EmbeddedPlanarGraph, piece) -> PieceDistanceTable:
    """Plain distances from each boundary vertex to every piece vertex."""
    loc, adj = piece_adjacency(g, piece.vertices, piece.arcs)
    sources = piece.boundary
    targets = piece.vertices
    k = len(targets)
    matrix = array("q", [MATRIX_SENTINEL]) * (len(sources) * k)
    for i, s in enumerate(sources):
        dist = _dijkstra_local(k, adj, loc[s])
        row = i * k
        for j in range(k):
            matrix[row + j] = dist[j]
    return PieceDistanceTable(piece.id, sources, targets, matrix)


def minplus_closure(ddg: DenseDistanceGraph) -> DenseDistanceGraph:
    """All-pairs min-plus closure of a DDG, treating entries as arc weights.

    Used to check that the strict-internal matrix composes back to the
    standard one.  Runs one Dijkstra per node over the complete digraph the
    matrix describes.
    """
    k = len(ddg.nodes)
    out = array("q", [MATRIX_SENTINEL]) * (k * k)
    mat = ddg.matrix
    for i in range(k):
        dist = [MATRIX_SENTINEL] * k
        dist[i] = 0
        heap = [(0, i)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            row = u * k
            for v in range(k):
                w = mat[row + v]
                if w >= MATRIX_SENTINEL:
                    continue
                nd = d + w
                if nd < dist[v]:
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))
        row = i * k
        for j in range(k):
            out[row + j] = dist[j]
    return DenseDistanceGraph("standard", ddg.nodes, out, ddg.source_pieces)


# ----------------------------------------------------------------------
# store
# ----------------------------------------------------------------------


class DdgStore:
    """Lazy cache of strict-internal DDGs, one per decomposition node.

    Non-leaf matrices are what the failure oracle precomputes; leaf
    matrices are cheap and memoized on first use (the failure-free case
    only — leaf DDGs under failures are rebuilt per query).
    """

    def __init__(self, g: EmbeddedPlanarGraph, tree, shift: ShiftConstant):
        self.graph = g
        self.tree = tree
        self.shift = shift
        self._strict: dict[int, DenseDistanceGraph] = {}

    def strict(self, node_id: int) -> DenseDistanceGraph:
        got = self._strict.get(node_id)
        if got is None:
            piece = self.tree.pieces[node_id]
            got = compute_ddg_internal(self.graph, piece, self.shift)
            self._strict[node_id] = got
        return got

    def prefetch_nonleaf(self) -> None:
        for p in self.tree.pieces:
            if not p.is_leaf:
                self.strict(p.id)

    def stored_entry_count(self) -> int:
        return sum(len(d.matrix) for d in self._strict.values())
