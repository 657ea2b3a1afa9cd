"""Distance oracle trading space against the number of supported failures.

Build time fixes an r-division of the decomposition tree and a failure
budget k, then precomputes, for every (k+1)-subset T of the division:

* ext(T): the strict-external matrix over the union of the tuple's
  boundaries (paths outside the tuple pieces), and
* directional tables: for every boundary vertex y of the tuple and every
  piece Q that can play the exit role for this tuple (a sibling of an
  ancestor of a tuple piece), the distances from y to the boundary of Q in
  the whole graph, avoiding every other tuple-boundary vertex in between,

together with plain boundary-to-everything tables for each such Q.

A query picks a tuple that covers u and the failed vertices (one piece
each), reads the precomputed matrices, and runs one small union Dijkstra;
the answer combines the label of v itself with label(y) + table hops
through the boundary of the piece family around v.  Queries whose layout
the main path cannot serve fall back to a direct assembly that is slower
but still exact.
"""

from __future__ import annotations

import itertools
from array import array
from typing import Iterable, Sequence

from .graph import MATRIX_SENTINEL, UNREACHABLE, EmbeddedPlanarGraph
from .decomposition import (
    DecompositionTree,
    build_decomposition,
    highest_excluding_ancestor,
)
from .ddg import (
    DdgStore,
    DenseDistanceGraph,
    PieceDistanceTable,
    compute_leaf_ddg,
    compute_piece_distance_table,
    shift_constant_for,
)
from .external import ExternalDdgBuilder
from .frdijkstra import multi_dijkstra

__all__ = ["TradeoffOracle"]


class TradeoffOracle:
    """Exact failure oracle with per-tuple precomputation.

    ``r`` must be a value of the tree's marked sequence; ``k`` is the
    largest failed-set size queries may use.
    """

    def __init__(
        self,
        g: EmbeddedPlanarGraph,
        r: int,
        k: int,
        leaf_size: int = 32,
        r_base: int = 4,
        strategy: str = "monge",
        tree: DecompositionTree | None = None,
    ):
        if k < 0:
            raise ValueError("k must be non-negative")
        if strategy not in ("naive", "monge"):
            raise ValueError(f"unknown strategy {strategy!r}")
        self.graph = g
        self.tree = tree if tree is not None else build_decomposition(g, leaf_size, r_base)
        if r not in self.tree.r_sequence:
            raise ValueError(
                f"r={r} is not in the marked sequence {self.tree.r_sequence}"
            )
        self.r = r
        self.k = k
        self.strategy = strategy
        self.shift = shift_constant_for(g)
        self.store = DdgStore(g, self.tree, self.shift)
        self.ext_builder = ExternalDdgBuilder(g, self.tree, self.shift, self.store)
        self.rdiv: tuple[int, ...] = self.tree.r_division(r)

        self.ext: dict[tuple[int, ...], DenseDistanceGraph] = {}
        # (tuple, exit piece, boundary vertex) -> raw distance row over the
        # exit piece's boundary
        self.vor: dict[tuple[tuple[int, ...], int, int], array] = {}
        self.exits: dict[tuple[int, ...], tuple[int, ...]] = {}
        self.piece_tables: dict[int, PieceDistanceTable] = {}
        # Search result of the most recent query, kept for instrumentation.
        self.last_result = None
        self._build()

    # -- build ---------------------------------------------------------------

    def _exit_family(self, ids: tuple[int, ...]) -> tuple[int, ...]:
        tree = self.tree
        fam: set[int] = set()
        for pid in ids:
            for node in tree.root_path(pid):
                sib = tree.sibling_of(node)
                if sib is not None:
                    fam.add(sib)
        return tuple(sorted(fam))

    def _tuple_members(self, ids: tuple[int, ...]) -> list:
        """Members tiling the graph minus the tuple pieces' interiors: the
        unmarked siblings along every tuple piece's root path, where marked
        means containing a tuple piece.  The tuple matrices themselves stay
        out; their interiors host the failures at query time, so no stored
        path may run through them."""
        tree = self.tree
        marked: set[int] = set()
        for pid in ids:
            marked.update(tree.root_path(pid))
        members = []
        seen: set[int] = set()
        for pid in ids:
            for node in tree.root_path(pid):
                sib = tree.sibling_of(node)
                if sib is None or sib in seen or sib in marked:
                    continue
                seen.add(sib)
                members.append(self.store.strict(sib))
        return members

    def _build(self) -> None:
        tree = self.tree
        for combo in itertools.combinations(self.rdiv, self.k + 1):
            ids = tuple(sorted(combo))
            self.ext[ids] = self.ext_builder.ext(ids, r=self.r)
            exits = self._exit_family(ids)
            self.exits[ids] = exits
            for q in exits:
                if q not in self.piece_tables:
                    self.piece_tables[q] = compute_piece_distance_table(
                        self.graph, tree.pieces[q]
                    )
            members = self._tuple_members(ids)
            covered: set[int] = set()
            for m in members:
                covered.update(m.nodes)
            bset = sorted({v for pid in ids for v in tree.pieces[pid].boundary})
            for y in bset:
                if y not in covered:
                    # every arc at y lies inside a tuple piece, so the only
                    # usable middle segment from y is the empty one
                    for q in exits:
                        qb = tree.pieces[q].boundary
                        self.vor[(ids, q, y)] = array(
                            "q", [0 if s == y else MATRIX_SENTINEL for s in qb]
                        )
                    continue
                res = multi_dijkstra(
                    members,
                    [(y, 0)],
                    forbidden=[w for w in bset if w != y],
                    strategy="monge",
                )
                for q in exits:
                    qb = tree.pieces[q].boundary
                    self.vor[(ids, q, y)] = array("q", [res.raw(s) for s in qb])

    # -- query helpers ---------------------------------------------------------

    def _canonical_rdiv(self, w: int) -> int:
        rmarks = set(self.rdiv)
        for node in self.tree.root_path(self.tree.leaf_of[w]):
            if node in rmarks:
                return node
        raise AssertionError("root path misses the r-division")

    def _pieces_containing(self, w: int) -> list[int]:
        return [pid for pid in self.rdiv if self.tree.pieces[pid].contains(w)]

    def _validate(self, u: int, v: int, failed: Iterable[int]) -> tuple[int, ...]:
        self.graph.check_vertex(u)
        self.graph.check_vertex(v)
        x = tuple(sorted(set(failed)))
        for f in x:
            self.graph.check_vertex(f)
        if len(x) > self.k:
            raise ValueError(f"more than k={self.k} failed vertices")
        if u in x or v in x:
            raise ValueError("query endpoint is a failed vertex")
        return x

    # -- query -----------------------------------------------------------------

    def distance(self, u: int, v: int, failed: Iterable[int] = (), strategy=None):
        x = self._validate(u, v, failed)
        if u == v:
            return 0
        strategy = strategy or self.strategy
        plan = self._plan(u, v, x)
        if plan is None:
            return self._fallback(u, v, x, strategy)
        ids, q = plan
        return self._main(u, v, x, ids, q, strategy)

    def _plan(self, u: int, v: int, x: tuple[int, ...]):
        """Choose the tuple and exit piece, or None when only the fallback
        layout works."""
        tree = self.tree
        anchors_needed = (u,) + x
        # trigger: two covered vertices inside one division piece
        for pid in self.rdiv:
            piece = tree.pieces[pid]
            if sum(1 for w in anchors_needed if piece.contains(w)) >= 2:
                return None
        free_v = [
            pid
            for pid in self._pieces_containing(v)
            if not any(tree.pieces[pid].contains(w) for w in anchors_needed)
        ]
        if not free_v:
            return None
        r_v = free_v[0]
        q_node = highest_excluding_ancestor(tree, r_v, anchors_needed)
        s_node = tree.sibling_of(q_node)
        if s_node is None:
            return None
        spiece = tree.pieces[s_node]
        inside_s = [w for w in anchors_needed if spiece.contains(w)]
        if u in inside_s:
            i = u
        else:
            i = min(inside_s)
        arc = None
        for a in spiece.arcs:
            if self.graph.tails[a] == i or self.graph.heads[a] == i:
                arc = a
                break
        if arc is None:
            return None
        # descend to the division piece owning that arc
        rmarks = set(self.rdiv)
        node = s_node
        while node not in rmarks:
            for c in tree.pieces[node].children:
                if _arc_in(tree.pieces[c], arc):
                    node = c
                    break
            else:
                return None
        r_i = node
        anchors = {i: r_i}
        for w in anchors_needed:
            if w != i:
                anchors[w] = self._canonical_rdiv(w)
        chosen = sorted(set(anchors.values()))
        if len(chosen) != len(anchors):
            return None
        pads: list[int] = []
        need = self.k + 1 - len(chosen)
        if need:
            taken = set(chosen)
            for pid in self.rdiv:
                if len(pads) == need:
                    break
                if pid in taken:
                    continue
                if self.tree.is_ancestor(q_node, pid):
                    continue
                if tree.pieces[pid].contains(v):
                    continue
                pads.append(pid)
            if len(pads) < need:
                return None
        ids = tuple(sorted(chosen + pads))
        return ids, q_node

    def _assembly(self, ids, u, v, x, extras_for):
        """Union members for a chosen tuple under failures: per-resident leaf
        matrices and unmarked siblings up to the piece top, strict matrices
        for pieces with no resident inside, plus ext of the tuple.

        A resident whose home leaf lies outside the piece necessarily sits
        on the piece boundary, so the strict matrix already exposes it as a
        node and no finer cover is needed for it."""
        tree = self.tree
        marked: set[int] = set()
        for f in x:
            for node in tree.root_path(tree.leaf_of[f]):
                if not tree.pieces[node].on_boundary(f):
                    marked.add(node)
        stored = self.ext.get(ids)
        members = [stored if stored is not None else self.ext_builder.ext(ids, r=self.r)]
        seen_leaf: set[int] = set()
        seen_sib: set[int] = set()
        for pid in ids:
            piece = tree.pieces[pid]
            residents = [w for w in (*extras_for, *x) if piece.contains(w)]
            inner = [w for w in residents if tree.is_ancestor(pid, tree.leaf_of[w])]
            if not inner:
                members.append(self.store.strict(pid))
                continue
            for w in inner:
                leaf = tree.leaf_of[w]
                if leaf not in seen_leaf:
                    seen_leaf.add(leaf)
                    lpiece = tree.pieces[leaf]
                    members.append(
                        compute_leaf_ddg(
                            self.graph,
                            lpiece,
                            failed=frozenset(f for f in x if lpiece.contains(f)),
                            extras=tuple(
                                e for e in extras_for if lpiece.contains(e)
                            ),
                        )
                    )
                node = leaf
                while node != pid:
                    sib = tree.sibling_of(node)
                    if sib is not None and sib not in seen_sib and sib not in marked:
                        seen_sib.add(sib)
                        members.append(self.store.strict(sib))
                    node = tree.pieces[node].parent
        return members

    def _main(self, u, v, x, ids, q_node, strategy):
        tree = self.tree
        members = self._assembly(ids, u, v, x, extras_for=(u,))
        res = multi_dijkstra(members, [(u, 0)], forbidden=x, strategy=strategy)
        self.last_result = res
        best = res.raw(v)
        qb = tree.pieces[q_node].boundary
        ptable = self.piece_tables[q_node]
        xset = set(x)
        bset = sorted({w for pid in ids for w in tree.pieces[pid].boundary})
        for y in bset:
            if y in xset:
                continue
            dy = res.raw(y)
            if dy >= MATRIX_SENTINEL:
                continue
            row = self.vor[(ids, q_node, y)]
            for si, s in enumerate(qb):
                omega = row[si]
                if omega >= MATRIX_SENTINEL:
                    continue
                hop = ptable.raw(s, v)
                if hop >= MATRIX_SENTINEL:
                    continue
                cand = dy + omega + hop
                if cand < best:
                    best = cand
        return UNREACHABLE if best >= MATRIX_SENTINEL else best

    def _fallback(self, u, v, x, strategy):
        """Direct assembly when the precomputed layout cannot serve the
        query: cover v, u and the failed set by division pieces (shared
        pieces reused), pad to size k+1 when possible, and run one union
        Dijkstra with v reachable directly."""
        tree = self.tree
        chosen: list[int] = []
        for w in (v, u, *x):
            if any(tree.pieces[pid].contains(w) for pid in chosen):
                continue
            chosen.append(self._canonical_rdiv(w))
        for pid in self.rdiv:
            if len(chosen) >= self.k + 1:
                break
            if pid not in chosen:
                chosen.append(pid)
        ids = tuple(sorted(set(chosen)))
        members = self._assembly(ids, u, v, x, extras_for=(u, v))
        res = multi_dijkstra(members, [(u, 0)], forbidden=x, strategy=strategy)
        self.last_result = res
        return res.label(v)


def _arc_in(piece, arc: int) -> bool:
    arcs = piece.arcs
    lo, hi = 0, len(arcs)
    while lo < hi:
        mid = (lo + hi) // 2
        if arcs[mid] < arc:
            lo = mid + 1
        else:
            hi = mid
    return lo < len(arcs) and arcs[lo] == arc
