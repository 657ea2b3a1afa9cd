"""Recursive separator decomposition of an embedded planar graph.

Each tree node is a piece: a subgraph given by an arc set plus the vertices
those arcs touch.  An internal node's two children partition its arcs.  For a
connected piece the partition comes from a fundamental-cycle separator: the
piece is triangulated (star vertices planted in every face of size four or
more), a BFS tree is built, and among all non-tree edges the fundamental
cycle whose two enclosed regions are most balanced is chosen.  Disconnected
pieces are split by grouping whole connected components.

A vertex of a piece is *boundary* if some arc outside the piece touches it.
Pieces of at most ``leaf_size`` vertices become leaves.  Nodes are additionally
marked for a geometric sequence of r-divisions.
"""

from __future__ import annotations

import json
from collections import deque
from typing import Iterable, Sequence

from .graph import EmbeddedPlanarGraph, EmbeddingError, sorted_contains, trace_faces

__all__ = [
    "Piece",
    "DecompositionTree",
    "build_decomposition",
    "extract_r_division",
    "highest_excluding_ancestor",
    "TREE_DEBUG_SCHEMA",
]


class Piece:
    """One node of the decomposition tree."""

    __slots__ = (
        "id",
        "parent",
        "children",
        "depth",
        "vertices",
        "boundary",
        "arcs",
        "separator",
        "_tree",
        "_holes",
    )

    def __init__(self, pid, parent, depth, vertices, boundary, arcs, separator):
        self.id: int = pid
        self.parent: int | None = parent
        self.children: tuple[int, ...] = ()
        self.depth: int = depth
        self.vertices: tuple[int, ...] = vertices  # sorted
        self.boundary: tuple[int, ...] = boundary  # sorted
        self.arcs: tuple[int, ...] = arcs  # sorted
        self.separator: tuple[int, ...] = separator  # cycle used to split this piece
        self._tree: DecompositionTree | None = None
        self._holes: tuple[tuple[int, ...], ...] | None = None

    def contains(self, v: int) -> bool:
        return sorted_contains(self.vertices, v)

    def on_boundary(self, v: int) -> bool:
        return sorted_contains(self.boundary, v)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def holes(self) -> tuple[tuple[int, ...], ...]:
        """Boundary vertices grouped by the piece face they lie on.

        A boundary vertex can sit on several faces; it is filed under the
        first face (in trace order) that touches it, so the groups partition
        the boundary.  Boundary vertices with no arc inside the piece form
        their own group.
        """
        if self._holes is None:
            self._holes = self._compute_holes()
        return self._holes

    def _compute_holes(self) -> tuple[tuple[int, ...], ...]:
        g = self._tree.graph
        if not self.boundary:
            return ()
        bset = set(self.boundary)
        assigned: dict[int, int] = {}
        if self.arcs:
            arcset = set(self.arcs)
            rot = {v: [a for a in g.rotation[v] if a in arcset] for v in self.vertices}
            faces = trace_faces(self.arcs, g.tails, g.heads, rot)
            for fi, face in enumerate(faces):
                for d in face:
                    a = d >> 1
                    v = g.tails[a] if d & 1 == 0 else g.heads[a]
                    if v in bset and v not in assigned:
                        assigned[v] = fi
        for v in self.boundary:
            assigned.setdefault(v, -1)
        groups: dict[int, list[int]] = {}
        for v in self.boundary:
            groups.setdefault(assigned[v], []).append(v)
        return tuple(tuple(sorted(vs)) for _, vs in sorted(groups.items()))

    def __repr__(self) -> str:
        kind = "leaf" if self.is_leaf else "internal"
        return f"Piece(id={self.id}, {kind}, |V|={len(self.vertices)}, |bd|={len(self.boundary)})"


class DecompositionTree:
    """Binary piece tree with r-division marks and per-vertex home leaves."""

    def __init__(
        self,
        graph: EmbeddedPlanarGraph,
        pieces: list[Piece],
        leaf_size: int,
        r_base: int,
        r_sequence: tuple[int, ...],
        marks: dict[int, tuple[int, ...]],
        leaf_of: tuple[int, ...],
    ):
        self.graph = graph
        self.pieces = pieces
        self.leaf_size = leaf_size
        self.r_base = r_base
        self.r_sequence = r_sequence
        self._marks = marks
        self.leaf_of = leaf_of
        for p in pieces:
            p._tree = self
        # Euler intervals for O(1) ancestor tests.
        self._tin = [0] * len(pieces)
        self._tout = [0] * len(pieces)
        clock = 0
        stack: list[tuple[int, bool]] = [(0, False)]
        while stack:
            node, done = stack.pop()
            if done:
                self._tout[node] = clock
                continue
            self._tin[node] = clock
            clock += 1
            stack.append((node, True))
            for c in reversed(pieces[node].children):
                stack.append((c, False))

    # -- navigation -------------------------------------------------------

    @property
    def root(self) -> Piece:
        return self.pieces[0]

    def parent_of(self, node: int) -> int | None:
        return self.pieces[node].parent

    def sibling_of(self, node: int) -> int | None:
        par = self.pieces[node].parent
        if par is None:
            return None
        a, b = self.pieces[par].children
        return b if node == a else a

    def root_path(self, node: int) -> Iterable[int]:
        """Node ids from ``node`` up to and including the root."""
        cur: int | None = node
        while cur is not None:
            yield cur
            cur = self.pieces[cur].parent

    def is_ancestor(self, anc: int, node: int) -> bool:
        """True when ``anc`` equals ``node`` or properly contains it."""
        return self._tin[anc] <= self._tin[node] and self._tout[node] <= self._tout[anc]

    def leaves(self) -> list[int]:
        return [p.id for p in self.pieces if p.is_leaf]

    # -- r-divisions --------------------------------------------------------

    def r_division(self, r: int) -> tuple[int, ...]:
        if r not in self._marks:
            raise ValueError(f"r={r} is not in the marked sequence {self.r_sequence}")
        return self._marks[r]

    # -- debug ----------------------------------------------------------------

    def debug_json(self) -> str:
        nodes = []
        for p in self.pieces:
            nodes.append(
                {
                    "id": p.id,
                    "parent": p.parent,
                    "children": list(p.children),
                    "depth": p.depth,
                    "vertices": list(p.vertices),
                    "boundary": list(p.boundary),
                    "arcs": list(p.arcs),
                    "separator": list(p.separator),
                }
            )
        doc = {
            "leaf_size": self.leaf_size,
            "r_base": self.r_base,
            "r_sequence": list(self.r_sequence),
            "r_divisions": {str(r): list(v) for r, v in sorted(self._marks.items())},
            "nodes": nodes,
        }
        return json.dumps(doc, indent=2, sort_keys=True)


TREE_DEBUG_SCHEMA = {
    "type": "object",
    "required": ["leaf_size", "r_base", "r_sequence", "r_divisions", "nodes"],
    "properties": {
        "leaf_size": {"type": "integer", "minimum": 1},
        "r_base": {"type": "integer", "minimum": 2},
        "r_sequence": {"type": "array", "items": {"type": "integer"}},
        "r_divisions": {
            "type": "object",
            "additionalProperties": {"type": "array", "items": {"type": "integer"}},
        },
        "nodes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": [
                    "id",
                    "parent",
                    "children",
                    "depth",
                    "vertices",
                    "boundary",
                    "arcs",
                    "separator",
                ],
                "properties": {
                    "id": {"type": "integer"},
                    "parent": {"type": ["integer", "null"]},
                    "children": {"type": "array", "items": {"type": "integer"}},
                    "depth": {"type": "integer"},
                    "vertices": {"type": "array", "items": {"type": "integer"}},
                    "boundary": {"type": "array", "items": {"type": "integer"}},
                    "arcs": {"type": "array", "items": {"type": "integer"}},
                    "separator": {"type": "array", "items": {"type": "integer"}},
                },
            },
        },
    },
}


# ----------------------------------------------------------------------
# construction
# ----------------------------------------------------------------------


def build_decomposition(
    g: EmbeddedPlanarGraph,
    leaf_size: int = 32,
    r_base: int = 4,
    extra_marks: Sequence[int] = (),
) -> DecompositionTree:
    """Decompose ``g`` recursively and mark a geometric family of r-divisions.

    ``leaf_size`` caps leaf piece vertex counts; ``r_base`` is the growth
    factor of the marked sequence leaf_size*b, leaf_size*b^2, ..., n.  Values
    in ``extra_marks`` get marked in addition to the geometric sequence.
    """
    if leaf_size < 3:
        raise ValueError("leaf_size must be at least 3")
    if r_base < 2:
        raise ValueError("r_base must be at least 2")

    pieces: list[Piece] = []
    root = Piece(0, None, 0, tuple(range(g.n)), (), tuple(range(g.m)), ())
    pieces.append(root)

    stack = [0]
    while stack:
        pid = stack.pop()
        piece = pieces[pid]
        if len(piece.vertices) <= leaf_size:
            continue
        sep, sides = _split_piece(g, piece.vertices, piece.arcs)
        piece.separator = sep
        child_ids = []
        for i, (verts, arcs) in enumerate(sides):
            sibling_arcs = sides[1 - i][1]
            touched = set()
            for a in sibling_arcs:
                touched.add(g.tails[a])
                touched.add(g.heads[a])
            bd = tuple(
                v for v in verts if v in touched or sorted_contains(piece.boundary, v)
            )
            child = Piece(len(pieces), pid, piece.depth + 1, verts, bd, arcs, ())
            pieces.append(child)
            child_ids.append(child.id)
        piece.children = tuple(child_ids)
        stack.append(child_ids[1])
        stack.append(child_ids[0])

    # home leaf per vertex: the smallest-id leaf containing it
    leaf_of = [-1] * g.n
    for p in pieces:
        if p.is_leaf:
            for v in p.vertices:
                if leaf_of[v] == -1:
                    leaf_of[v] = p.id
    if g.n and min(leaf_of) < 0:
        raise AssertionError("some vertex landed in no leaf")

    rs: list[int] = []
    r = leaf_size * r_base
    while r < g.n:
        rs.append(r)
        r *= r_base
    rs.append(max(g.n, 1))
    for r in extra_marks:
        if r not in rs:
            rs.append(r)
    rs.sort()

    marks: dict[int, tuple[int, ...]] = {}
    for r in rs:
        marks[r] = tuple(
            p.id
            for p in pieces
            if len(p.vertices) <= r
            and (p.parent is None or len(pieces[p.parent].vertices) > r)
        )

    return DecompositionTree(
        g, pieces, leaf_size, r_base, tuple(rs), marks, tuple(leaf_of)
    )


def extract_r_division(tree: DecompositionTree, r: int) -> tuple[int, ...]:
    """The marked antichain of piece ids for a value in the r-sequence."""
    return tree.r_division(r)


def highest_excluding_ancestor(
    tree: DecompositionTree,
    node: int,
    forbidden: Iterable[int],
) -> int:
    """Highest ancestor of ``node`` whose vertex set avoids ``forbidden``.

    With nothing forbidden this is the root.  Raises ValueError if a
    forbidden vertex already sits inside the starting piece.
    """
    forb = sorted(set(forbidden))
    piece = tree.pieces[node]
    if any(piece.contains(x) for x in forb):
        raise ValueError("forbidden vertex inside the starting piece")
    best = node
    cur = piece.parent
    while cur is not None:
        p = tree.pieces[cur]
        if any(p.contains(x) for x in forb):
            break
        best = cur
        cur = p.parent
    return best


# ----------------------------------------------------------------------
# splitting machinery
# ----------------------------------------------------------------------


def _split_piece(g, verts, arcs):
    """Partition a piece's arcs into two sides; returns (separator, sides).

    Side vertex sets are induced by the side's arcs, so every produced piece
    is arc-induced.  Components of a disconnected piece are packed whole,
    with an empty separator; isolated vertices travel with the packing.  A
    component holding more than two thirds of the vertices is cycle-split
    first and the rest distributed onto the lighter side, which keeps every
    side within 2|P|/3 + |separator|.
    """
    comps = _components(g, verts, arcs)
    if len(comps) > 1:
        giant_vs, giant_arcs = comps[0]
        if 3 * len(giant_vs) > 2 * len(verts):
            sep, sides = _cycle_split(g, giant_vs, giant_arcs)
            return sep, _pack_components(comps[1:], sides)
        return (), _pack_components(comps)
    return _cycle_split(g, verts, arcs)


def _components(g, verts, arcs):
    idx = {v: i for i, v in enumerate(verts)}
    parent = list(range(len(verts)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in arcs:
        t, h = find(idx[g.tails[a]]), find(idx[g.heads[a]])
        if t != h:
            parent[t] = h
    groups: dict[int, list[int]] = {}
    for i, v in enumerate(verts):
        groups.setdefault(find(i), []).append(v)
    comp_arcs: dict[int, list[int]] = {r: [] for r in groups}
    for a in arcs:
        comp_arcs[find(idx[g.tails[a]])].append(a)
    out = []
    for r, vs in groups.items():
        out.append((tuple(sorted(vs)), tuple(sorted(comp_arcs[r]))))
    out.sort(key=lambda cv: (-len(cv[0]), cv[0][0]))
    return out


def _pack_components(comps, initial=None):
    """Greedy-balance whole components into two sides (descending, lighter
    side first), optionally on top of a pair of starting sides."""
    if initial is None:
        sides = [([], []), ([], [])]
    else:
        sides = [(list(vs), list(ars)) for vs, ars in initial]
    weights = [len(sides[0][0]), len(sides[1][0])]
    for vs, ars in comps:
        i = 0 if weights[0] <= weights[1] else 1
        sides[i][0].extend(vs)
        sides[i][1].extend(ars)
        weights[i] += len(vs)
    return [
        (tuple(sorted(sides[0][0])), tuple(sorted(sides[0][1]))),
        (tuple(sorted(sides[1][0])), tuple(sorted(sides[1][1]))),
    ]


def _cycle_split(g, verts, arcs):
    """Fundamental-cycle split of a connected piece."""
    p = len(verts)
    loc = {v: i for i, v in enumerate(verts)}
    arcset = set(arcs)
    rot = {v: [a for a in g.rotation[v] if a in arcset] for v in verts}
    piece_faces = trace_faces(arcs, g.tails, g.heads, rot)

    # --- triangulated auxiliary graph ---------------------------------
    hedges: list[tuple[int, int]] = []  # local endpoint pairs
    hedge_of_arc: dict[int, int] = {}
    for a in arcs:
        hedge_of_arc[a] = len(hedges)
        hedges.append((loc[g.tails[a]], loc[g.heads[a]]))
    eface: list[list[int]] = [[] for _ in arcs]

    def origin_loc(d):
        a = d >> 1
        return loc[g.tails[a]] if d & 1 == 0 else loc[g.heads[a]]

    n_aux = p
    face_id = 0
    for face in piece_faces:
        size = len(face)
        if size <= 3:
            for d in face:
                eface[hedge_of_arc[d >> 1]].append(face_id)
            face_id += 1
        else:
            apex = n_aux
            n_aux += 1
            base = face_id
            apex_edges = []
            for d in face:
                apex_edges.append(len(hedges))
                hedges.append((apex, origin_loc(d)))
                eface.append([])
            for i, d in enumerate(face):
                eface[hedge_of_arc[d >> 1]].append(base + i)
                eface[apex_edges[i]].append(base + (i - 1) % size)
                eface[apex_edges[i]].append(base + i)
            face_id += size
    n_faces = face_id

    # --- BFS tree over the auxiliary graph -----------------------------
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n_aux)]
    for ei, (u, v) in enumerate(hedges):
        adj[u].append((v, ei))
        adj[v].append((u, ei))
    for rows in adj:
        rows.sort()
    par = [-1] * n_aux
    par_edge = [-1] * n_aux
    depth = [-1] * n_aux
    depth[0] = 0
    tree_edge = [False] * len(hedges)
    q = deque([0])
    while q:
        u = q.popleft()
        for v, ei in adj[u]:
            if depth[v] == -1:
                depth[v] = depth[u] + 1
                par[v] = u
                par_edge[v] = ei
                tree_edge[ei] = True
                q.append(v)

    nontree = [ei for ei in range(len(hedges)) if not tree_edge[ei]]
    if not nontree:
        return _fallback_split(g, verts, arcs)
    if len(nontree) != n_faces - 1:
        raise EmbeddingError(
            f"piece embedding is not planar: {len(nontree)} non-tree edges "
            f"for {n_faces} faces"
        )

    # --- dual tree spanned by the non-tree edges -----------------------
    dadj: list[list[tuple[int, int]]] = [[] for _ in range(n_faces)]
    for ei in nontree:
        f1, f2 = eface[ei]
        dadj[f1].append((f2, ei))
        dadj[f2].append((f1, ei))
    for rows in dadj:
        rows.sort()
    dpar = [-1] * n_faces
    ddepth = [-1] * n_faces
    dchildren: list[list[int]] = [[] for _ in range(n_faces)]
    ddepth[0] = 0
    order = [0]
    q = deque([0])
    while q:
        f = q.popleft()
        for f2, ei in dadj[f]:
            if ddepth[f2] == -1:
                ddepth[f2] = ddepth[f] + 1
                dpar[f2] = f
                dchildren[f].append(f2)
                order.append(f2)
                q.append(f2)
    subtree = [1] * n_faces
    for f in reversed(order):
        if dpar[f] != -1:
            subtree[dpar[f]] += subtree[f]

    def child_face(ei):
        f1, f2 = eface[ei]
        return f1 if ddepth[f1] > ddepth[f2] else f2

    cands = sorted(
        nontree,
        key=lambda ei: (
            max(subtree[child_face(ei)], n_faces - subtree[child_face(ei)]),
            ei,
        ),
    )

    best = None  # (max_side, (separator, sides))
    for rank, ei in enumerate(cands):
        result = _evaluate_candidate(
            g, verts, arcs, p, hedges, hedge_of_arc, eface,
            par, par_edge, depth, dchildren, child_face(ei), ei,
        )
        if result is None:
            continue
        sep, sides, max_side = result
        # contract: each side keeps at most 2|P|/3 + |separator| vertices
        if 3 * max_side <= 2 * p + 3 * len(sep):
            return sep, sides
        if best is None or max_side < best[0]:
            best = (max_side, (sep, sides))
        if rank >= 4096 and best is not None:
            break
    if best is not None:
        return best[1]
    return _fallback_split(g, verts, arcs)


def _evaluate_candidate(
    g, verts, arcs, p, hedges, hedge_of_arc, eface,
    par, par_edge, depth, dchildren, inside_root, ei,
):
    """Work out the split one fundamental cycle would produce.

    Returns (separator, sides, max_side), or None when the cycle fails to
    separate any arcs.  Arcs on the cycle itself join the enclosed side.
    """
    u, v = hedges[ei]
    cycle_edges = {ei}
    cycle_verts: set[int] = set()
    a, b = u, v
    while depth[a] > depth[b]:
        cycle_verts.add(a)
        cycle_edges.add(par_edge[a])
        a = par[a]
    while depth[b] > depth[a]:
        cycle_verts.add(b)
        cycle_edges.add(par_edge[b])
        b = par[b]
    while a != b:
        cycle_verts.add(a)
        cycle_verts.add(b)
        cycle_edges.add(par_edge[a])
        cycle_edges.add(par_edge[b])
        a = par[a]
        b = par[b]
    cycle_verts.add(a)

    inside_faces = bytearray(len(dchildren))
    stack = [inside_root]
    while stack:
        f = stack.pop()
        inside_faces[f] = 1
        stack.extend(dchildren[f])

    arcs_a: list[int] = []
    arcs_b: list[int] = []
    for arc in arcs:
        he = hedge_of_arc[arc]
        if he in cycle_edges or inside_faces[eface[he][0]]:
            arcs_a.append(arc)
        else:
            arcs_b.append(arc)
    if not arcs_a or not arcs_b:
        return None

    va: set[int] = set()
    for arc in arcs_a:
        va.add(g.tails[arc])
        va.add(g.heads[arc])
    vb: set[int] = set()
    for arc in arcs_b:
        vb.add(g.tails[arc])
        vb.add(g.heads[arc])
    sep = tuple(sorted(verts[x] for x in cycle_verts if x < p))
    sides = [
        (tuple(sorted(va)), tuple(arcs_a)),
        (tuple(sorted(vb)), tuple(arcs_b)),
    ]
    return sep, sides, max(len(va), len(vb))


def _fallback_split(g, verts, arcs):
    """Halve the arc list when no usable cycle exists (degenerate pieces)."""
    if len(arcs) < 2:
        raise EmbeddingError("cannot split a piece with fewer than two arcs")
    half = len(arcs) // 2
    arcs_a, arcs_b = arcs[:half], arcs[half:]
    va = {g.tails[a] for a in arcs_a} | {g.heads[a] for a in arcs_a}
    vb = {g.tails[a] for a in arcs_b} | {g.heads[a] for a in arcs_b}
    sep = tuple(sorted(va & vb))
    return sep, [
        (tuple(sorted(va)), tuple(arcs_a)),
        (tuple(sorted(vb)), tuple(arcs_b)),
    ]
