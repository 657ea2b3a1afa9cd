"""Recursive decomposition: partition, balance, marks, and diagnostics."""

import json
import random

import jsonschema
import pytest

from planar_oracle.decomposition import (
    TREE_DEBUG_SCHEMA,
    build_decomposition,
    extract_r_division,
    highest_excluding_ancestor,
)


@pytest.fixture(scope="module")
def tree8(grid8):
    return build_decomposition(grid8, leaf_size=8, r_base=4)


@pytest.fixture(scope="module")
def tree_tri(tri200):
    return build_decomposition(tri200, leaf_size=16, r_base=4)


def test_root_covers_everything(grid8, tree8):
    root = tree8.root
    assert root.vertices == tuple(range(grid8.n))
    assert root.arcs == tuple(range(grid8.m))
    assert root.boundary == ()


def test_children_partition_arcs(tree8):
    for p in tree8.pieces:
        if p.is_leaf:
            continue
        a, b = (tree8.pieces[c] for c in p.children)
        assert set(a.arcs) | set(b.arcs) == set(p.arcs)
        assert not set(a.arcs) & set(b.arcs)


def test_children_cover_vertices(tree8):
    for p in tree8.pieces:
        if p.is_leaf:
            continue
        a, b = (tree8.pieces[c] for c in p.children)
        assert set(a.vertices) | set(b.vertices) == set(p.vertices)


def test_boundary_definition(grid8, tree8):
    # v is boundary of P iff it touches arcs both inside and outside P
    incident = [set() for _ in range(grid8.n)]
    for a in range(grid8.m):
        incident[grid8.tails[a]].add(a)
        incident[grid8.heads[a]].add(a)
    for p in tree8.pieces:
        inside = set(p.arcs)
        expect = {
            v
            for v in p.vertices
            if incident[v] & inside and incident[v] - inside
        }
        assert set(p.boundary) == expect


def test_split_makes_progress(tree8, tree_tri):
    for tree in (tree8, tree_tri):
        for p in tree.pieces:
            if p.is_leaf:
                continue
            for c in p.children:
                assert len(tree.pieces[c].vertices) < len(p.vertices)


def test_leaf_sizes(tree8, tree_tri):
    for tree, cap in ((tree8, 8), (tree_tri, 16)):
        for leaf in tree.leaves():
            assert len(tree.pieces[leaf].vertices) <= cap


def test_balance_contract(grid8):
    tree = build_decomposition(grid8, leaf_size=8, r_base=4)
    for p in tree.pieces:
        if p.is_leaf or not p.separator:
            continue
        sides = [len(tree.pieces[c].vertices) for c in p.children]
        assert 3 * max(sides) <= 2 * len(p.vertices) + 3 * len(p.separator)


def test_marks_are_antichains(tree8):
    for r in tree8.r_sequence:
        marks = tree8.r_division(r)
        for a in marks:
            for b in marks:
                if a != b:
                    assert not tree8.is_ancestor(a, b)


def test_one_mark_per_root_path(tree8):
    for r in tree8.r_sequence:
        marks = set(tree8.r_division(r))
        for leaf in tree8.leaves():
            hits = [node for node in tree8.root_path(leaf) if node in marks]
            assert len(hits) == 1


def test_r_division_alias(tree8):
    r = tree8.r_sequence[0]
    assert extract_r_division(tree8, r) == tree8.r_division(r)
    with pytest.raises(ValueError):
        tree8.r_division(r + 1)


def test_leaf_of(grid8, tree8):
    for v in range(grid8.n):
        leaf = tree8.leaf_of[v]
        piece = tree8.pieces[leaf]
        assert piece.is_leaf
        assert piece.contains(v)
        # ties break to the smallest piece id
        others = [
            p.id for p in tree8.pieces if p.is_leaf and p.contains(v)
        ]
        assert leaf == min(others)


def test_is_ancestor_matches_root_path(tree8):
    rng = random.Random(0)
    ids = [p.id for p in tree8.pieces]
    for _ in range(300):
        a, b = rng.choice(ids), rng.choice(ids)
        assert tree8.is_ancestor(a, b) == (a in set(tree8.root_path(b)))


def test_sibling_of(tree8):
    assert tree8.sibling_of(0) is None
    for p in tree8.pieces:
        if p.id == 0:
            continue
        sib = tree8.sibling_of(p.id)
        assert sib is not None and sib != p.id
        assert tree8.pieces[sib].parent == p.parent


def test_highest_excluding_ancestor(tree8):
    rng = random.Random(1)
    for _ in range(60):
        leaf = rng.choice(tree8.leaves())
        piece = tree8.pieces[leaf]
        outside = [
            v for v in tree8.root.vertices if not piece.contains(v)
        ]
        forb = rng.sample(outside, min(3, len(outside)))
        top = highest_excluding_ancestor(tree8, leaf, forb)
        assert tree8.is_ancestor(top, leaf)
        assert not any(tree8.pieces[top].contains(x) for x in forb)
        par = tree8.pieces[top].parent
        if par is not None:
            assert any(tree8.pieces[par].contains(x) for x in forb)


def test_highest_excluding_rejects_inside(tree8):
    leaf = tree8.leaves()[0]
    inside = tree8.pieces[leaf].vertices[0]
    with pytest.raises(ValueError):
        highest_excluding_ancestor(tree8, leaf, [inside])


def test_holes_partition_boundary(tree8):
    for p in tree8.pieces:
        flat = [v for hole in p.holes for v in hole]
        assert sorted(flat) == list(p.boundary)


def test_debug_json_schema(tree8):
    doc = json.loads(tree8.debug_json())
    jsonschema.validate(doc, TREE_DEBUG_SCHEMA)
    assert len(doc["nodes"]) == len(tree8.pieces)


def test_degenerate_graphs(single, disconnected, path12):
    t1 = build_decomposition(single, leaf_size=3)
    assert t1.root.is_leaf
    t2 = build_decomposition(disconnected, leaf_size=3)
    assert set(t2.root.vertices) == set(range(disconnected.n))
    t3 = build_decomposition(path12, leaf_size=4)
    for leaf in t3.leaves():
        assert len(t3.pieces[leaf].vertices) <= 4


def test_construction_validation(grid4):
    with pytest.raises(ValueError):
        build_decomposition(grid4, leaf_size=2)
    with pytest.raises(ValueError):
        build_decomposition(grid4, leaf_size=8, r_base=1)
