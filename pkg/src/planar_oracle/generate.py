"""Deterministic generator suite for embedded planar test graphs."""

from __future__ import annotations

import math
import random

from .graph import EmbeddedPlanarGraph

__all__ = ["generate_grid", "generate_random_triangulation"]


def _weight_stream(max_weight: int | None, seed: int):
    """Yield arc weights: all ones, or seeded uniform draws in [1, max_weight]."""
    if max_weight is None:
        while True:
            yield 1
    else:
        if max_weight < 1:
            raise ValueError("max_weight must be at least 1")
        rng = random.Random(seed)
        while True:
            yield rng.randint(1, max_weight)


def generate_grid(
    rows: int,
    cols: int,
    max_weight: int | None = None,
    seed: int = 0,
) -> EmbeddedPlanarGraph:
    """Build a rows x cols grid with antiparallel arcs on every lattice edge.

    Vertex (r, c) gets id r*cols + c.  Rotations list neighbours clockwise
    (up, right, down, left); within each neighbour the incoming arc precedes
    the outgoing one, which keeps the rotation system consistent at both ends.
    Identical arguments produce bit-identical graphs.
    """
    if rows < 1 or cols < 1:
        raise ValueError("grid dimensions must be positive")
    n = rows * cols
    weights = _weight_stream(max_weight, seed)

    def vid(r: int, c: int) -> int:
        return r * cols + c

    arcs: list[tuple[int, int, int]] = []
    # arc ids by direction, keyed on the ordered vertex pair
    arc_id: dict[tuple[int, int], int] = {}
    for r in range(rows):
        for c in range(cols):
            v = vid(r, c)
            if c + 1 < cols:
                u = vid(r, c + 1)
                for t, h in ((v, u), (u, v)):
                    arc_id[(t, h)] = len(arcs)
                    arcs.append((t, h, next(weights)))
            if r + 1 < rows:
                u = vid(r + 1, c)
                for t, h in ((v, u), (u, v)):
                    arc_id[(t, h)] = len(arcs)
                    arcs.append((t, h, next(weights)))

    rotation: list[list[int]] = []
    for r in range(rows):
        for c in range(cols):
            v = vid(r, c)
            rot: list[int] = []
            for dr, dc in ((-1, 0), (0, 1), (1, 0), (0, -1)):  # up right down left
                rr, cc = r + dr, c + dc
                if 0 <= rr < rows and 0 <= cc < cols:
                    u = vid(rr, cc)
                    rot.append(arc_id[(u, v)])  # incoming first
                    rot.append(arc_id[(v, u)])
            rotation.append(rot)

    return EmbeddedPlanarGraph(n, arcs, rotation)


def generate_random_triangulation(
    n: int,
    max_weight: int | None = None,
    seed: int = 0,
) -> EmbeddedPlanarGraph:
    """Grow a random stacked triangulation on ``n`` vertices.

    Starting from a triangle, each step picks a face uniformly at random and
    plants a new vertex at its centroid, joined to the three corners.  Every
    undirected edge then becomes a pair of antiparallel arcs.  Coordinates are
    internal scaffolding only: they order each rotation by clockwise angle and
    are discarded afterwards.
    """
    if n < 3:
        raise ValueError("triangulation needs at least 3 vertices")
    rng = random.Random(seed)

    pts: list[tuple[float, float]] = [(0.0, 0.0), (4.0, 0.0), (2.0, 3.0)]
    undirected: list[tuple[int, int]] = [(0, 1), (1, 2), (0, 2)]
    faces: list[tuple[int, int, int]] = [(0, 1, 2)]
    for _ in range(n - 3):
        fi = rng.randrange(len(faces))
        a, b, c = faces[fi]
        v = len(pts)
        pts.append(
            (
                (pts[a][0] + pts[b][0] + pts[c][0]) / 3.0,
                (pts[a][1] + pts[b][1] + pts[c][1]) / 3.0,
            )
        )
        undirected.extend([(a, v), (b, v), (c, v)])
        faces[fi] = (a, b, v)
        faces.append((b, c, v))
        faces.append((a, c, v))

    weights = _weight_stream(max_weight, seed + 1)
    arcs: list[tuple[int, int, int]] = []
    incident: list[list[int]] = [[] for _ in range(n)]
    for u, v in undirected:
        for t, h in ((u, v), (v, u)):
            incident[t].append(len(arcs))
            incident[h].append(len(arcs))
            arcs.append((t, h, next(weights)))

    rotation: list[list[int]] = []
    for v in range(n):
        px, py = pts[v]

        def angle_key(aid: int) -> tuple[float, int, int]:
            t, h, _ = arcs[aid]
            u = h if t == v else t
            theta = math.atan2(pts[u][1] - py, pts[u][0] - px)
            # clockwise order: decreasing angle; incoming arc before outgoing
            return (-theta, 0 if h == v else 1, aid)

        rotation.append(sorted(incident[v], key=angle_key))

    return EmbeddedPlanarGraph(n, arcs, rotation)
