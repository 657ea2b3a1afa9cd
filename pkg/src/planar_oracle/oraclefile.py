"""Byte-deterministic oracle files.

Layout (little-endian, fixed-width): a four-byte magic, a format version,
a kind byte, the graph in its text form, the build parameters, the shift
constant, the decomposition tree, and the stored matrices.  Trade-off
files append the per-tuple external matrices, the directional tables and
the piece tables.  Unreachable entries are written as -1.  All dictionary
sections are emitted in sorted key order, so building the same oracle
twice produces identical bytes.
"""

from __future__ import annotations

import io
import struct
import sys
from array import array
from typing import BinaryIO

from .graph import MATRIX_SENTINEL, EmbeddedPlanarGraph, dumps_graph, loads_graph
from .decomposition import DecompositionTree, Piece
from .ddg import DdgStore, DenseDistanceGraph, PieceDistanceTable, ShiftConstant
from .external import ExternalDdgBuilder
from .failure_oracle import FailureOracle
from .tradeoff_oracle import TradeoffOracle

__all__ = ["save_oracle", "load_oracle", "OracleFileError"]

_MAGIC = b"PODX"
_VERSION = 1
_KIND_FAILURE = 1
_KIND_TRADEOFF = 2


class OracleFileError(ValueError):
    """Corrupt or unsupported oracle file."""


# -- low-level helpers -------------------------------------------------------


def _w_u32(fh: BinaryIO, x: int) -> None:
    fh.write(struct.pack("<I", x))


def _w_i64(fh: BinaryIO, x: int) -> None:
    fh.write(struct.pack("<q", x))


def _w_ids(fh: BinaryIO, ids) -> None:
    _w_u32(fh, len(ids))
    fh.write(struct.pack(f"<{len(ids)}I", *ids) if ids else b"")


def _w_matrix(fh: BinaryIO, mat: array) -> None:
    _w_u32(fh, len(mat))
    out = array("q", (x if x < MATRIX_SENTINEL else -1 for x in mat))
    if sys.byteorder == "big":
        out.byteswap()
    fh.write(out.tobytes())


def _w_blob(fh: BinaryIO, data: bytes) -> None:
    _w_u32(fh, len(data))
    fh.write(data)


class _Reader:
    def __init__(self, fh: BinaryIO):
        self.fh = fh

    def take(self, size: int) -> bytes:
        data = self.fh.read(size)
        if len(data) != size:
            raise OracleFileError("truncated oracle file")
        return data

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def i64(self) -> int:
        return struct.unpack("<q", self.take(8))[0]

    def ids(self) -> tuple[int, ...]:
        k = self.u32()
        return struct.unpack(f"<{k}I", self.take(4 * k)) if k else ()

    def matrix(self) -> array:
        k = self.u32()
        mat = array("q")
        mat.frombytes(self.take(8 * k))
        if sys.byteorder == "big":
            mat.byteswap()
        for i, x in enumerate(mat):
            if x < 0:
                mat[i] = MATRIX_SENTINEL
        return mat

    def blob(self) -> bytes:
        return self.take(self.u32())


# -- tree section -------------------------------------------------------------


def _write_tree(fh: BinaryIO, tree: DecompositionTree) -> None:
    _w_u32(fh, tree.leaf_size)
    _w_u32(fh, tree.r_base)
    _w_ids(fh, tree.r_sequence)
    _w_u32(fh, len(tree.pieces))
    for p in tree.pieces:
        _w_i64(fh, -1 if p.parent is None else p.parent)
        _w_u32(fh, p.depth)
        _w_ids(fh, p.vertices)
        _w_ids(fh, p.boundary)
        _w_ids(fh, p.arcs)
        _w_ids(fh, p.separator)
    _w_u32(fh, len(tree._marks))
    for r in sorted(tree._marks):
        _w_u32(fh, r)
        _w_ids(fh, tree._marks[r])
    _w_ids(fh, tree.leaf_of)


def _read_tree(rd: _Reader, g: EmbeddedPlanarGraph) -> DecompositionTree:
    leaf_size = rd.u32()
    r_base = rd.u32()
    r_sequence = rd.ids()
    count = rd.u32()
    pieces: list[Piece] = []
    for pid in range(count):
        parent = rd.i64()
        depth = rd.u32()
        vertices = rd.ids()
        boundary = rd.ids()
        arcs = rd.ids()
        separator = rd.ids()
        pieces.append(
            Piece(
                pid,
                None if parent < 0 else parent,
                depth,
                vertices,
                boundary,
                arcs,
                separator,
            )
        )
    kids: dict[int, list[int]] = {}
    for p in pieces:
        if p.parent is not None:
            kids.setdefault(p.parent, []).append(p.id)
    for pid, ch in kids.items():
        pieces[pid].children = tuple(sorted(ch))
    marks: dict[int, tuple[int, ...]] = {}
    for _ in range(rd.u32()):
        r = rd.u32()
        marks[r] = rd.ids()
    leaf_of = rd.ids()
    return DecompositionTree(g, pieces, leaf_size, r_base, r_sequence, marks, leaf_of)


def _write_ddg(fh: BinaryIO, ddg: DenseDistanceGraph) -> None:
    variant = {"standard": 0, "strict_internal": 1, "strict_external": 2}[ddg.variant]
    _w_u32(fh, variant)
    _w_ids(fh, ddg.nodes)
    _w_ids(fh, ddg.source_pieces)
    _w_matrix(fh, ddg.matrix)


def _read_ddg(rd: _Reader) -> DenseDistanceGraph:
    variant = ("standard", "strict_internal", "strict_external")[rd.u32()]
    nodes = rd.ids()
    source_pieces = rd.ids()
    matrix = rd.matrix()
    return DenseDistanceGraph(variant, nodes, matrix, source_pieces)


# -- top level ----------------------------------------------------------------


def save_oracle(oracle, path: str) -> None:
    """Write a failure or trade-off oracle; same build, same bytes."""
    if isinstance(oracle, TradeoffOracle):
        kind = _KIND_TRADEOFF
    elif isinstance(oracle, FailureOracle):
        kind = _KIND_FAILURE
    else:
        raise TypeError(f"cannot serialize {type(oracle).__name__}")

    buf = io.BytesIO()
    buf.write(_MAGIC)
    buf.write(struct.pack("<HB", _VERSION, kind))
    _w_blob(buf, dumps_graph(oracle.graph).encode("ascii"))
    _w_u32(buf, 1 if oracle.strategy == "monge" else 0)
    _w_i64(buf, oracle.shift.value)
    _write_tree(buf, oracle.tree)

    if kind == _KIND_FAILURE:
        stored = [p.id for p in oracle.tree.pieces if not p.is_leaf]
        _w_u32(buf, len(stored))
        for pid in stored:
            _w_u32(buf, pid)
            _write_ddg(buf, oracle.store.strict(pid))
    else:
        _w_u32(buf, oracle.r)
        _w_u32(buf, oracle.k)
        # The stored set must depend only on the tree, not on which strict
        # matrices queries happened to pull in, or the bytes would drift.
        stored = sorted(
            {p.id for p in oracle.tree.pieces if not p.is_leaf} | set(oracle.rdiv)
        )
        _w_u32(buf, len(stored))
        for pid in stored:
            _w_u32(buf, pid)
            _write_ddg(buf, oracle.store.strict(pid))
        _w_u32(buf, len(oracle.ext))
        for ids in sorted(oracle.ext):
            _w_ids(buf, ids)
            _write_ddg(buf, oracle.ext[ids])
        _w_u32(buf, len(oracle.vor))
        for key in sorted(oracle.vor):
            ids, q, y = key
            _w_ids(buf, ids)
            _w_u32(buf, q)
            _w_u32(buf, y)
            _w_matrix(buf, oracle.vor[key])
        _w_u32(buf, len(oracle.piece_tables))
        for node in sorted(oracle.piece_tables):
            table = oracle.piece_tables[node]
            _w_u32(buf, node)
            _w_ids(buf, table.sources)
            _w_ids(buf, table.targets)
            _w_matrix(buf, table.matrix)

    with open(path, "wb") as fh:
        fh.write(buf.getvalue())


def load_oracle(path: str):
    """Read back an oracle written by save_oracle."""
    with open(path, "rb") as fh:
        rd = _Reader(fh)
        if rd.take(4) != _MAGIC:
            raise OracleFileError("not an oracle file")
        version, kind = struct.unpack("<HB", rd.take(3))
        if version != _VERSION:
            raise OracleFileError(f"unsupported oracle file version {version}")
        if kind not in (_KIND_FAILURE, _KIND_TRADEOFF):
            raise OracleFileError(f"unknown oracle kind {kind}")
        g = loads_graph(rd.blob().decode("ascii"))
        strategy = "monge" if rd.u32() else "naive"
        shift_value = rd.i64()
        tree = _read_tree(rd, g)

        if kind == _KIND_FAILURE:
            strict = {}
            for _ in range(rd.u32()):
                pid = rd.u32()
                strict[pid] = _read_ddg(rd)
            return _restore_failure(g, tree, shift_value, strategy, strict)

        r = rd.u32()
        k = rd.u32()
        strict = {}
        for _ in range(rd.u32()):
            pid = rd.u32()
            strict[pid] = _read_ddg(rd)
        ext = {}
        for _ in range(rd.u32()):
            ids = rd.ids()
            ext[ids] = _read_ddg(rd)
        vor = {}
        for _ in range(rd.u32()):
            ids = rd.ids()
            q = rd.u32()
            y = rd.u32()
            vor[(ids, q, y)] = rd.matrix()
        tables = {}
        for _ in range(rd.u32()):
            node = rd.u32()
            sources = rd.ids()
            targets = rd.ids()
            matrix = rd.matrix()
            tables[node] = PieceDistanceTable(node, sources, targets, matrix)
        return _restore_tradeoff(
            g, tree, shift_value, strategy, r, k, strict, ext, vor, tables
        )


def _restore_failure(g, tree, shift_value, strategy, strict) -> FailureOracle:
    oracle = object.__new__(FailureOracle)
    oracle.graph = g
    oracle.tree = tree
    oracle.shift = ShiftConstant(shift_value)
    oracle.store = DdgStore(g, tree, oracle.shift)
    oracle.store._strict.update(strict)
    oracle.strategy = strategy
    return oracle


def _restore_tradeoff(
    g, tree, shift_value, strategy, r, k, strict, ext, vor, tables
) -> TradeoffOracle:
    oracle = object.__new__(TradeoffOracle)
    oracle.graph = g
    oracle.tree = tree
    oracle.r = r
    oracle.k = k
    oracle.strategy = strategy
    oracle.shift = ShiftConstant(shift_value)
    oracle.store = DdgStore(g, tree, oracle.shift)
    oracle.store._strict.update(strict)
    oracle.ext_builder = ExternalDdgBuilder(g, tree, oracle.shift, oracle.store)
    oracle.rdiv = tree.r_division(r)
    oracle.ext = ext
    oracle.vor = vor
    oracle.exits = {ids: oracle._exit_family(ids) for ids in sorted(ext)}
    oracle.piece_tables = tables
    oracle.last_result = None
    return oracle
