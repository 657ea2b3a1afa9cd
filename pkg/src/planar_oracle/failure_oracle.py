"""Exact distance oracle under vertex failures.

Build time precomputes the decomposition tree and the strict matrix of
every internal node.  A query with failed set X assembles a small union of
matrices that jointly cover every path from u that avoids X:

* for each anchor vertex w in {u, v} plus X, the matrix of w's home leaf is
  rebuilt on the fly with the failed vertices deleted (and u, v added as
  matrix nodes when they live there), and
* walking from each anchor leaf to the root, the stored strict matrix of
  every sibling hanging off the path joins in, except siblings whose piece
  has a failed vertex strictly inside it; such a piece is exactly one whose
  stored matrix may hide a failed vertex on an internal path, and the walk
  from that failed vertex's own leaf re-covers its arcs with finer pieces.

One multi-source Dijkstra over the union, never relaxing out of a failed
vertex, then yields the exact label of v.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .graph import EmbeddedPlanarGraph, UNREACHABLE
from .decomposition import DecompositionTree, build_decomposition
from .ddg import DdgStore, compute_leaf_ddg, shift_constant_for
from .frdijkstra import MultiDijkstraResult, multi_dijkstra

__all__ = ["FailureAssembly", "FailureOracle"]


class FailureAssembly:
    """The member family one query runs Dijkstra over, with provenance."""

    __slots__ = ("members", "parts", "marked", "anchor_leaves")

    def __init__(self, members, parts, marked, anchor_leaves):
        self.members: tuple = members
        # parts[i] describes members[i]: ("leaf", piece id) or ("sibling", piece id)
        self.parts: tuple[tuple[str, int], ...] = parts
        self.marked: frozenset[int] = marked
        self.anchor_leaves: tuple[int, ...] = anchor_leaves


class FailureOracle:
    """Exact shortest-path lengths avoiding a set of failed vertices."""

    def __init__(
        self,
        g: EmbeddedPlanarGraph,
        leaf_size: int = 32,
        r_base: int = 4,
        strategy: str = "monge",
        tree: DecompositionTree | None = None,
    ):
        if strategy not in ("naive", "monge"):
            raise ValueError(f"unknown strategy {strategy!r}")
        self.graph = g
        self.tree = tree if tree is not None else build_decomposition(g, leaf_size, r_base)
        self.shift = shift_constant_for(g)
        self.store = DdgStore(g, self.tree, self.shift)
        self.strategy = strategy
        self.store.prefetch_nonleaf()

    # -- assembly ----------------------------------------------------------

    def _validate(self, u: int, v: int, failed: Iterable[int]) -> frozenset[int]:
        self.graph.check_vertex(u)
        self.graph.check_vertex(v)
        x = frozenset(failed)
        for f in x:
            self.graph.check_vertex(f)
        if u in x or v in x:
            raise ValueError("query endpoint is a failed vertex")
        return x

    def _marked(self, x: frozenset[int]) -> frozenset[int]:
        """Nodes whose stored matrix is invalidated: ancestors of a failed
        vertex's leaf holding that vertex strictly inside."""
        tree = self.tree
        marked: set[int] = set()
        for f in x:
            for node in tree.root_path(tree.leaf_of[f]):
                if not tree.pieces[node].on_boundary(f):
                    marked.add(node)
        return frozenset(marked)

    def assemble(self, u: int, v: int, failed: Iterable[int] = ()) -> FailureAssembly:
        x = self._validate(u, v, failed)
        tree = self.tree
        marked = self._marked(x)
        endpoints = (u, v)

        anchor_leaves: list[int] = []
        seen_leaves: set[int] = set()
        for w in (u, v, *sorted(x)):
            leaf = tree.leaf_of[w]
            if leaf not in seen_leaves:
                seen_leaves.add(leaf)
                anchor_leaves.append(leaf)

        members = []
        parts = []
        seen_sibs: set[int] = set()
        for leaf in anchor_leaves:
            piece = tree.pieces[leaf]
            extras = tuple(w for w in endpoints if piece.contains(w))
            members.append(
                compute_leaf_ddg(
                    self.graph,
                    piece,
                    failed=frozenset(f for f in x if piece.contains(f)),
                    extras=extras,
                )
            )
            parts.append(("leaf", leaf))
            for node in tree.root_path(leaf):
                sib = tree.sibling_of(node)
                if sib is None or sib in seen_sibs or sib in marked:
                    continue
                seen_sibs.add(sib)
                members.append(self.store.strict(sib))
                parts.append(("sibling", sib))
        return FailureAssembly(tuple(members), tuple(parts), marked, tuple(anchor_leaves))

    # -- queries -----------------------------------------------------------

    def query_result(
        self,
        u: int,
        v: int,
        failed: Iterable[int] = (),
        strategy: str | None = None,
    ) -> MultiDijkstraResult:
        asm = self.assemble(u, v, failed)
        return multi_dijkstra(
            asm.members,
            [(u, 0)],
            forbidden=frozenset(failed),
            strategy=strategy or self.strategy,
        )

    def distance(
        self,
        u: int,
        v: int,
        failed: Iterable[int] = (),
        strategy: str | None = None,
    ):
        """Length of the shortest u-to-v path avoiding ``failed``."""
        x = self._validate(u, v, failed)
        if u == v:
            return 0
        return self.query_result(u, v, x, strategy).label(v)

    # -- introspection -----------------------------------------------------

    def stored_matrix_entries(self) -> int:
        return self.store.stored_entry_count()
