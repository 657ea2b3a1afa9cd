"""Directed planar graphs with an explicit combinatorial embedding.

A graph is given by its arcs (tail, head, weight) plus, for every vertex, the
clockwise cyclic order of incident arcs.  Both the out-arcs and the in-arcs of
a vertex appear in its rotation, so each arc shows up in exactly two
rotations: once at its tail and once at its head.  Planarity is not taken on
faith: the loader traces the faces induced by the rotation system and checks
Euler's formula per connected component.
"""

from __future__ import annotations

import bisect
from typing import Iterable, Mapping, Sequence

__all__ = [
    "UNREACHABLE",
    "MATRIX_SENTINEL",
    "GraphFormatError",
    "EmbeddingError",
    "WeightOverflowError",
    "EmbeddedPlanarGraph",
    "load_graph",
    "loads_graph",
    "save_graph",
    "dumps_graph",
    "trace_faces",
    "dart_origin",
    "dart_target",
]

UNREACHABLE = float("inf")
"""Sentinel distance: compares greater than every finite length."""

MATRIX_SENTINEL = 1 << 62
"""Stand-in for UNREACHABLE inside integer distance matrices."""

# Sum of absolute arc weights must fit a 63-bit signed budget so that the
# doubled sum used as a shift constant cannot overflow 64-bit storage.
_MAX_WEIGHT_SUM = (1 << 62) - 1


class GraphFormatError(ValueError):
    """Malformed graph text; carries the 1-based offending line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class EmbeddingError(ValueError):
    """The rotation system does not describe a planar embedding."""


class WeightOverflowError(ValueError):
    """Total absolute weight exceeds the 63-bit accumulation budget."""


def dart_origin(dart: int, tails: Sequence[int], heads: Sequence[int]) -> int:
    arc = dart >> 1
    return tails[arc] if dart & 1 == 0 else heads[arc]


def dart_target(dart: int, tails: Sequence[int], heads: Sequence[int]) -> int:
    arc = dart >> 1
    return heads[arc] if dart & 1 == 0 else tails[arc]


def trace_faces(
    arc_ids: Iterable[int],
    tails: Sequence[int],
    heads: Sequence[int],
    rotation: Mapping[int, Sequence[int]],
) -> list[list[int]]:
    """Return the faces of an embedded (sub)graph as dart cycles.

    Darts encode a traversal direction of an arc: ``2*a`` walks arc ``a`` from
    tail to head, ``2*a + 1`` walks it backwards.  The successor of a dart is
    found at its target vertex: take the rotation entry after the dart's arc.
    Every dart lies on exactly one face; the list of orbits is returned in
    order of each face's smallest dart.
    """
    pos: dict[int, dict[int, int]] = {}
    for v, rot in rotation.items():
        pos[v] = {a: i for i, a in enumerate(rot)}

    darts: list[int] = []
    for a in arc_ids:
        darts.append(2 * a)
        darts.append(2 * a + 1)
    darts.sort()

    seen: set[int] = set()
    faces: list[list[int]] = []
    for start in darts:
        if start in seen:
            continue
        face = []
        d = start
        while d not in seen:
            seen.add(d)
            face.append(d)
            v = dart_target(d, tails, heads)
            rot = rotation[v]
            i = pos[v][d >> 1]
            a2 = rot[(i + 1) % len(rot)]
            d = 2 * a2 if tails[a2] == v else 2 * a2 + 1
        if d != start:  # orbit must close where it began
            raise EmbeddingError("rotation system produced a broken face walk")
        faces.append(face)
    return faces


class EmbeddedPlanarGraph:
    """Immutable directed planar graph with a validated embedding.

    Parallel arcs (same ordered endpoint pair) and self-loops are rejected.
    Disconnected inputs are accepted; queries across components simply come
    back unreachable.
    """

    __slots__ = (
        "n",
        "arcs",
        "rotation",
        "tails",
        "heads",
        "weights",
        "face_count",
        "component_count",
        "total_weight",
        "_out",
        "_in",
    )

    def __init__(
        self,
        n: int,
        arcs: Sequence[tuple[int, int, int]],
        rotation: Sequence[Sequence[int]],
    ):
        self.n = n
        self.arcs = tuple((int(t), int(h), int(w)) for t, h, w in arcs)
        self.rotation = tuple(tuple(r) for r in rotation)
        self.tails = tuple(a[0] for a in self.arcs)
        self.heads = tuple(a[1] for a in self.arcs)
        self.weights = tuple(a[2] for a in self.arcs)
        self._validate_shape()
        self.component_count = self._count_components()
        self.face_count = self._check_euler()
        self.total_weight = sum(abs(w) for w in self.weights)
        if self.total_weight > _MAX_WEIGHT_SUM:
            raise WeightOverflowError(
                f"sum of |weights| {self.total_weight} exceeds 63-bit budget"
            )
        out: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        inc: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for t, h, w in self.arcs:
            out[t].append((h, w))
            inc[h].append((t, w))
        self._out = tuple(tuple(x) for x in out)
        self._in = tuple(tuple(x) for x in inc)

    # ------------------------------------------------------------------
    # validation
    # ------------------------------------------------------------------

    def _validate_shape(self) -> None:
        n, m = self.n, len(self.arcs)
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        if len(self.rotation) != n:
            raise EmbeddingError(
                f"expected {n} rotation rows, got {len(self.rotation)}"
            )
        seen_pairs: set[tuple[int, int]] = set()
        for i, (t, h, w) in enumerate(self.arcs):
            if not (0 <= t < n and 0 <= h < n):
                raise ValueError(f"arc {i} endpoint out of range")
            if t == h:
                raise ValueError(f"arc {i} is a self-loop")
            if w < 0:
                raise ValueError(f"arc {i} has negative weight {w}")
            if (t, h) in seen_pairs:
                raise ValueError(f"arc {i} duplicates ordered pair {(t, h)}")
            seen_pairs.add((t, h))
        # Each arc appears exactly once in its tail's rotation and once in
        # its head's rotation, and nowhere else.
        counted = [0] * m
        for v, rot in enumerate(self.rotation):
            local: set[int] = set()
            for a in rot:
                if not (0 <= a < m):
                    raise EmbeddingError(f"vertex {v}: unknown arc id {a}")
                if self.tails[a] != v and self.heads[a] != v:
                    raise EmbeddingError(
                        f"vertex {v}: arc {a} is not incident to it"
                    )
                if a in local:
                    raise EmbeddingError(f"vertex {v}: arc {a} listed twice")
                local.add(a)
                counted[a] += 1
        for a, c in enumerate(counted):
            if c != 2:
                raise EmbeddingError(
                    f"arc {a} appears {c} times across rotations, expected 2"
                )

    def _count_components(self) -> int:
        n = self.n
        if n == 0:
            return 0
        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for t, h, _ in self.arcs:
            rt, rh = find(t), find(h)
            if rt != rh:
                parent[rt] = rh
        return len({find(v) for v in range(n)})

    def _check_euler(self) -> int:
        """Trace all faces and check V - E + F = 2 on each arc component."""
        if not self.arcs:
            return 1 if self.n else 0
        rot_map = {v: self.rotation[v] for v in range(self.n)}
        faces = trace_faces(range(len(self.arcs)), self.tails, self.heads, rot_map)
        face_of_arc: dict[int, list[int]] = {}
        for fi, face in enumerate(faces):
            for d in face:
                face_of_arc.setdefault(d >> 1, []).append(fi)

        # Group arcs into components, then count V/E/F per component.
        label = [-1] * self.n
        next_label = 0
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for t, h, _ in self.arcs:
            adj[t].append(h)
            adj[h].append(t)
        for s in range(self.n):
            if label[s] != -1 or not adj[s]:
                continue
            stack = [s]
            label[s] = next_label
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if label[y] == -1:
                        label[y] = next_label
                        stack.append(y)
            next_label += 1

        verts = [0] * next_label
        edges = [0] * next_label
        comp_faces: list[set[int]] = [set() for _ in range(next_label)]
        for v in range(self.n):
            if label[v] != -1:
                verts[label[v]] += 1
        for a, (t, h, _) in enumerate(self.arcs):
            edges[label[t]] += 1
            for fi in face_of_arc[a]:
                comp_faces[label[t]].add(fi)
        for c in range(next_label):
            if verts[c] - edges[c] + len(comp_faces[c]) != 2:
                raise EmbeddingError(
                    "Euler check failed on a component: "
                    f"V={verts[c]} E={edges[c]} F={len(comp_faces[c])}"
                )
        # Isolated vertices live inside existing faces and add none of
        # their own; arc-bearing components each contribute their face sets,
        # of which the unbounded ones merge into a single outer face.
        return len(faces) - (next_label - 1)

    # ------------------------------------------------------------------
    # accessors
    # ------------------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.arcs)

    def out_arcs(self, v: int) -> tuple[tuple[int, int], ...]:
        """(head, weight) pairs for arcs leaving ``v``."""
        return self._out[v]

    def in_arcs(self, v: int) -> tuple[tuple[int, int], ...]:
        return self._in[v]

    def check_vertex(self, v: int) -> int:
        if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < self.n:
            raise ValueError(f"vertex id {v!r} out of range [0, {self.n})")
        return v

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EmbeddedPlanarGraph):
            return NotImplemented
        return (
            self.n == other.n
            and self.arcs == other.arcs
            and self.rotation == other.rotation
        )

    def __hash__(self):
        return hash((self.n, self.arcs, self.rotation))

    def __repr__(self) -> str:
        return f"EmbeddedPlanarGraph(n={self.n}, m={self.m}, faces={self.face_count})"


# ----------------------------------------------------------------------
# text format
# ----------------------------------------------------------------------
#
#   line 1:             "<n> <m>"
#   lines 2 .. m+1:     "<tail> <head> <weight>"      (0-based vertex ids)
#   lines m+2 .. m+n+1: clockwise rotation of vertex i as arc indices
#   '#' starts a comment; blank lines are ignored.


def loads_graph(text: str) -> EmbeddedPlanarGraph:
    rows: list[tuple[int, list[str]]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            rows.append((line_no, body.split()))

    if not rows:
        raise GraphFormatError(1, "empty input")
    line_no, head = rows[0]
    if len(head) != 2:
        raise GraphFormatError(line_no, "expected '<n> <m>' header")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise GraphFormatError(line_no, "header fields must be integers") from None
    if n < 0 or m < 0:
        raise GraphFormatError(line_no, "header counts must be nonnegative")
    if len(rows) != 1 + m + n:
        raise GraphFormatError(
            line_no,
            f"expected {m} arc lines and {n} rotation lines, got {len(rows) - 1}",
        )

    arcs: list[tuple[int, int, int]] = []
    for line_no, fields in rows[1 : 1 + m]:
        if len(fields) != 3:
            raise GraphFormatError(line_no, "expected '<tail> <head> <weight>'")
        try:
            t, h, w = int(fields[0]), int(fields[1]), int(fields[2])
        except ValueError:
            raise GraphFormatError(line_no, "arc fields must be integers") from None
        if w < 0:
            raise GraphFormatError(line_no, "arc weights must be nonnegative")
        arcs.append((t, h, w))

    rotation: list[list[int]] = []
    for line_no, fields in rows[1 + m :]:
        if fields == ["-"]:
            rotation.append([])
            continue
        try:
            rotation.append([int(x) for x in fields])
        except ValueError:
            raise GraphFormatError(line_no, "rotation entries must be arc ids") from None

    try:
        return EmbeddedPlanarGraph(n, arcs, rotation)
    except (EmbeddingError, WeightOverflowError):
        raise
    except ValueError as exc:
        raise GraphFormatError(rows[0][0], str(exc)) from None


def load_graph(path: str) -> EmbeddedPlanarGraph:
    with open(path, "r", encoding="ascii") as fh:
        return loads_graph(fh.read())


def dumps_graph(g: EmbeddedPlanarGraph) -> str:
    out = [f"{g.n} {g.m}\n"]
    for t, h, w in g.arcs:
        out.append(f"{t} {h} {w}\n")
    for rot in g.rotation:
        out.append((" ".join(str(a) for a in rot) if rot else "-") + "\n")
    return "".join(out)


def save_graph(g: EmbeddedPlanarGraph, path: str) -> None:
    """Write the text format byte-deterministically."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(dumps_graph(g))


def sorted_contains(ordered: Sequence[int], x: int) -> bool:
    """Membership test on a sorted id sequence in logarithmic time."""
    i = bisect.bisect_left(ordered, x)
    return i < len(ordered) and ordered[i] == x
