"""Exact distance oracle under edge and vertex updates.

The oracle keeps one r-division worth of regions over a snapshot of the
graph, a strict boundary matrix per region, and public vertex/arc ids that
stay stable across internal rebuilds.  Updates touch only the regions they
land in:

* weight changes recompute one region matrix (entries never embed the
  shift constant, so every other region's matrix stays bit-identical),
* edge insertions splice the rotations, re-validate planarity by a full
  face trace (rolling back on failure), and recompute the regions whose
  arc set or boundary grew,
* edge deletions shrink one region, leaving its old boundary as a valid
  superset,
* vertex deletions excise the incident arcs; a deleted boundary vertex is
  remembered and barred from queries instead of rewriting every matrix
  that mentions it, which is sound because strict entries never pass
  through boundary vertices internally.

Every ceil(sqrt(r)) operations the whole structure is rebuilt from the
current graph.  Queries run one union Dijkstra over the endpoint regions'
raw arcs plus all region matrices.
"""

from __future__ import annotations

import heapq
import math
from array import array
from typing import Iterable

from .graph import (
    MATRIX_SENTINEL,
    UNREACHABLE,
    EmbeddedPlanarGraph,
    EmbeddingError,
    trace_faces,
)
from .decomposition import build_decomposition
from .ddg import DenseDistanceGraph
from .frdijkstra import SparseMember, multi_dijkstra

__all__ = ["DynamicOracle"]


class _Region:
    __slots__ = ("vertices", "boundary", "arcs", "ddg")

    def __init__(self, vertices: set[int], boundary: set[int], arcs: set[int]):
        self.vertices = vertices
        self.boundary = boundary
        self.arcs = arcs
        self.ddg: DenseDistanceGraph | None = None


class DynamicOracle:
    """Exact distances on a directed planar graph under updates.

    Vertex and arc ids handed out by this class are stable: deleting or
    rebuilding never renumbers the survivors.
    """

    def __init__(self, g: EmbeddedPlanarGraph, r: int = 32, r_base: int = 4):
        if r < 3:
            raise ValueError("r must be at least 3")
        self.r = r
        self.r_base = max(2, r_base)
        self.rebuild_every = max(1, math.isqrt(r - 1) + 1)

        # mutable public-id state
        self.v_alive: list[bool] = [True] * g.n
        self.arc_tail: list[int] = list(g.tails)
        self.arc_head: list[int] = list(g.heads)
        self.arc_weight: list[int] = list(g.weights)
        self.arc_alive: list[bool] = [True] * g.m
        self.rot: list[list[int]] = [list(row) for row in g.rotation]

        self.weight_sum = sum(abs(w) for w in g.weights)
        self.shift_value = max(2 * self.weight_sum, 1)

        self.regions: list[_Region] = []
        self.region_of_arc: dict[int, int] = {}
        self.deleted_boundary: set[int] = set()
        self.ops_since_rebuild = 0
        self.rebuild_count = 0
        self._rebuild()

    # -- bookkeeping ---------------------------------------------------------

    @property
    def n_alive(self) -> int:
        return sum(self.v_alive)

    @property
    def m_alive(self) -> int:
        return sum(self.arc_alive)

    def _check_alive_vertex(self, v: int) -> None:
        if not (isinstance(v, int) and 0 <= v < len(self.v_alive)) or not self.v_alive[v]:
            raise ValueError(f"vertex {v} does not exist")

    def _check_alive_arc(self, a: int) -> None:
        if not (isinstance(a, int) and 0 <= a < len(self.arc_alive)) or not self.arc_alive[a]:
            raise ValueError(f"arc {a} does not exist")

    def _regions_of_vertex(self, v: int) -> list[int]:
        return [ri for ri, reg in enumerate(self.regions) if v in reg.vertices]

    def _tick(self) -> None:
        self.ops_since_rebuild += 1
        if self.ops_since_rebuild >= self.rebuild_every:
            self._rebuild()

    # -- snapshot / rebuild ----------------------------------------------------

    def export_graph(self) -> tuple[EmbeddedPlanarGraph, list[int], list[int]]:
        """Compact snapshot plus public ids: (graph, vertex ids, arc ids)."""
        pub_v = [v for v in range(len(self.v_alive)) if self.v_alive[v]]
        int_of_v = {p: i for i, p in enumerate(pub_v)}
        pub_a = [a for a in range(len(self.arc_alive)) if self.arc_alive[a]]
        int_of_a = {p: i for i, p in enumerate(pub_a)}
        arcs = [
            (int_of_v[self.arc_tail[a]], int_of_v[self.arc_head[a]], self.arc_weight[a])
            for a in pub_a
        ]
        rotation = [
            [int_of_a[a] for a in self.rot[p] if self.arc_alive[a]] for p in pub_v
        ]
        return EmbeddedPlanarGraph(len(pub_v), arcs, rotation), pub_v, pub_a

    def _rebuild(self) -> None:
        g, pub_v, pub_a = self.export_graph()
        leaf_size = min(32, max(3, self.r))
        tree = build_decomposition(g, leaf_size=leaf_size, r_base=self.r_base, extra_marks=(self.r,))
        self.regions = []
        self.region_of_arc = {}
        for pid in tree.r_division(self.r):
            piece = tree.pieces[pid]
            reg = _Region(
                {pub_v[v] for v in piece.vertices},
                {pub_v[v] for v in piece.boundary},
                {pub_a[a] for a in piece.arcs},
            )
            ri = len(self.regions)
            self.regions.append(reg)
            for a in reg.arcs:
                self.region_of_arc[a] = ri
        # vertices shared by several regions are boundary in all of them
        owner: dict[int, list[int]] = {}
        for ri, reg in enumerate(self.regions):
            for v in reg.vertices:
                owner.setdefault(v, []).append(ri)
        for v, ris in owner.items():
            if len(ris) > 1:
                for ri in ris:
                    self.regions[ri].boundary.add(v)
        for reg in self.regions:
            self._recompute(reg)
        self.deleted_boundary = set()
        self.ops_since_rebuild = 0
        self.rebuild_count += 1

    def _recompute(self, reg: _Region) -> None:
        """Strict boundary-to-boundary matrix of one region, public ids."""
        nodes = tuple(sorted(v for v in reg.boundary if self.v_alive[v]))
        verts = tuple(sorted(v for v in reg.vertices if self.v_alive[v]))
        loc = {v: i for i, v in enumerate(verts)}
        adj: list[list[tuple[int, int]]] = [[] for _ in verts]
        for a in sorted(reg.arcs):
            if self.arc_alive[a]:
                adj[loc[self.arc_tail[a]]].append((loc[self.arc_head[a]], self.arc_weight[a]))
        blocked = [False] * len(verts)
        for v in nodes:
            blocked[loc[v]] = True
        k = len(nodes)
        matrix = array("q", [MATRIX_SENTINEL]) * (k * k)
        for i, s in enumerate(nodes):
            dist = [MATRIX_SENTINEL] * len(verts)
            dist[loc[s]] = 0
            heap = [(0, loc[s])]
            while heap:
                d, x = heapq.heappop(heap)
                if d > dist[x]:
                    continue
                if blocked[x] and x != loc[s]:
                    continue
                for y, w in adj[x]:
                    nd = d + w
                    if nd < dist[y]:
                        dist[y] = nd
                        heapq.heappush(heap, (nd, y))
            row = i * k
            for j, t in enumerate(nodes):
                matrix[row + j] = 0 if i == j else dist[loc[t]]
        reg.ddg = DenseDistanceGraph("strict_internal", nodes, matrix, (-1,))

    # -- operations -------------------------------------------------------------

    def set_weight(self, arc: int, weight: int) -> None:
        self._check_alive_arc(arc)
        if weight < 0:
            raise ValueError("arc weights must be nonnegative")
        old = self.arc_weight[arc]
        self.arc_weight[arc] = weight
        self.weight_sum += abs(weight) - abs(old)
        self.shift_value = max(2 * self.weight_sum, 1)
        self._recompute(self.regions[self.region_of_arc[arc]])
        self._tick()

    def insert_vertex(self) -> int:
        self.v_alive.append(True)
        self.rot.append([])
        self._tick()
        return len(self.v_alive) - 1

    def insert_edge(
        self, tail: int, head: int, weight: int, tail_pos: int = 0, head_pos: int = 0
    ) -> int:
        """Add an arc, splicing it into the two rotations at the given
        positions; raises EmbeddingError (and changes nothing) if the spliced
        rotation system is not planar."""
        self._check_alive_vertex(tail)
        self._check_alive_vertex(head)
        if tail == head:
            raise ValueError("self-loops are not allowed")
        if weight < 0:
            raise ValueError("arc weights must be nonnegative")
        for a in self.rot[tail]:
            if self.arc_alive[a] and self.arc_tail[a] == tail and self.arc_head[a] == head:
                raise ValueError(f"arc {tail}->{head} already exists")
        if not (0 <= tail_pos <= len(self.rot[tail])):
            raise ValueError("tail rotation position out of range")
        if not (0 <= head_pos <= len(self.rot[head])):
            raise ValueError("head rotation position out of range")

        arc = len(self.arc_alive)
        self.arc_tail.append(tail)
        self.arc_head.append(head)
        self.arc_weight.append(weight)
        self.arc_alive.append(True)
        self.rot[tail].insert(tail_pos, arc)
        self.rot[head].insert(head_pos, arc)
        try:
            self._validate_planar()
        except EmbeddingError:
            self.rot[tail].remove(arc)
            self.rot[head].remove(arc)
            self.arc_alive[arc] = False
            del self.arc_tail[arc:], self.arc_head[arc:], self.arc_weight[arc:], self.arc_alive[arc:]
            raise

        self.weight_sum += abs(weight)
        self.shift_value = max(2 * self.weight_sum, 1)

        rt = self._regions_of_vertex(tail)
        rh = self._regions_of_vertex(head)
        both = sorted(set(rt) & set(rh))
        if both:
            ri = both[0]
        elif rt:
            ri = rt[0]
        elif rh:
            ri = rh[0]
        else:
            ri = len(self.regions)
            self.regions.append(_Region(set(), set(), set()))
        reg = self.regions[ri]
        reg.arcs.add(arc)
        reg.vertices.add(tail)
        reg.vertices.add(head)
        self.region_of_arc[arc] = ri

        touched = {ri}
        for z in (tail, head):
            homes = self._regions_of_vertex(z)
            if len(homes) > 1:
                for rj in homes:
                    if z not in self.regions[rj].boundary:
                        self.regions[rj].boundary.add(z)
                        touched.add(rj)
        for rj in sorted(touched):
            self._recompute(self.regions[rj])
        self._tick()
        return arc

    def delete_edge(self, arc: int) -> None:
        self._check_alive_arc(arc)
        self.arc_alive[arc] = False
        self.rot[self.arc_tail[arc]].remove(arc)
        self.rot[self.arc_head[arc]].remove(arc)
        self.weight_sum -= abs(self.arc_weight[arc])
        self.shift_value = max(2 * self.weight_sum, 1)
        ri = self.region_of_arc.pop(arc)
        reg = self.regions[ri]
        reg.arcs.discard(arc)
        self._recompute(reg)
        self._tick()

    def delete_vertex(self, v: int) -> None:
        """Remove a vertex and every arc touching it."""
        self._check_alive_vertex(v)
        incident = [a for a in self.rot[v] if self.arc_alive[a]]
        touched: set[int] = set()
        for a in incident:
            self.arc_alive[a] = False
            other = self.arc_head[a] if self.arc_tail[a] == v else self.arc_tail[a]
            self.rot[other].remove(a)
            self.weight_sum -= abs(self.arc_weight[a])
            touched.add(self.region_of_arc.pop(a))
        self.rot[v] = []
        self.shift_value = max(2 * self.weight_sum, 1)
        self.v_alive[v] = False
        homes = self._regions_of_vertex(v)
        for ri in homes:
            reg = self.regions[ri]
            if v in reg.boundary:
                self.deleted_boundary.add(v)
            reg.vertices.discard(v)
            reg.boundary.discard(v)
            touched.add(ri)
        for ri in sorted(touched):
            self._recompute(self.regions[ri])
        self._tick()

    def _validate_planar(self) -> None:
        """Face trace plus per-component Euler over the current alive graph."""
        alive_arcs = [a for a in range(len(self.arc_alive)) if self.arc_alive[a]]
        rot_map = {
            v: [a for a in self.rot[v] if self.arc_alive[a]]
            for v in range(len(self.v_alive))
            if self.v_alive[v]
        }
        if not alive_arcs:
            return
        faces = trace_faces(alive_arcs, self.arc_tail, self.arc_head, rot_map)
        # union-find over alive arcs' endpoints
        parent: dict[int, int] = {}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a in alive_arcs:
            for z in (self.arc_tail[a], self.arc_head[a]):
                parent.setdefault(z, z)
            rt, rh = find(self.arc_tail[a]), find(self.arc_head[a])
            if rt != rh:
                parent[rt] = rh
        comp_v: dict[int, int] = {}
        for z in parent:
            root = find(z)
            comp_v[root] = comp_v.get(root, 0) + 1
        comp_e: dict[int, int] = {}
        comp_f: dict[int, set[int]] = {}
        face_of: dict[int, list[int]] = {}
        for fi, face in enumerate(faces):
            for d in face:
                face_of.setdefault(d >> 1, []).append(fi)
        for a in alive_arcs:
            root = find(self.arc_tail[a])
            comp_e[root] = comp_e.get(root, 0) + 1
            comp_f.setdefault(root, set()).update(face_of[a])
        for root, nv in comp_v.items():
            ne = comp_e.get(root, 0)
            nf = len(comp_f.get(root, ()))
            if nv - ne + nf != 2:
                raise EmbeddingError(
                    f"edge insertion breaks planarity: V={nv} E={ne} F={nf}"
                )

    # -- queries ------------------------------------------------------------------

    def _raw_member(self, v: int) -> SparseMember:
        homes = self._regions_of_vertex(v)
        if not homes:
            return SparseMember((v,), (), piece_id=-1)
        reg = self.regions[homes[0]]
        verts = tuple(sorted(z for z in reg.vertices if self.v_alive[z]))
        arcs = [
            (self.arc_tail[a], self.arc_head[a], self.arc_weight[a])
            for a in sorted(reg.arcs)
            if self.arc_alive[a]
        ]
        return SparseMember(verts if verts else (v,), arcs, piece_id=homes[0])

    def distance(self, u: int, v: int, strategy: str = "monge"):
        """Current length of the shortest path from u to v."""
        self._check_alive_vertex(u)
        self._check_alive_vertex(v)
        if u == v:
            return 0
        members = [self._raw_member(u), self._raw_member(v)]
        for reg in self.regions:
            if reg.ddg is not None and len(reg.ddg.nodes):
                members.append(reg.ddg)
        res = multi_dijkstra(
            members, [(u, 0)], forbidden=self.deleted_boundary, strategy=strategy
        )
        return res.label(v)
