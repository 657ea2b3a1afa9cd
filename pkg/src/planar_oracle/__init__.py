"""Exact distance oracles for directed planar graphs with vertex failures.

The package stores a directed planar graph as a combinatorial embedding,
decomposes it with cycle separators, and summarizes pieces by dense
distance matrices over their boundaries.  On top of that sit three
query structures: a failure oracle (distances avoiding any failed set),
a space/time trade-off oracle for a fixed failure budget, and a dynamic
oracle that tracks edge and vertex updates.  Every answer is an exact
integer, verifiable against the brute-force baseline in
:mod:`planar_oracle.baseline`.
"""

from .graph import (
    MATRIX_SENTINEL,
    UNREACHABLE,
    EmbeddedPlanarGraph,
    EmbeddingError,
    GraphFormatError,
    dumps_graph,
    load_graph,
    loads_graph,
    save_graph,
    trace_faces,
)
from .generate import generate_grid, generate_random_triangulation
from .baseline import distance_avoiding, sssp
from .decomposition import DecompositionTree, Piece, build_decomposition
from .ddg import (
    DdgStore,
    DenseDistanceGraph,
    PieceDistanceTable,
    ShiftConstant,
    compute_ddg,
    compute_ddg_internal,
    compute_leaf_ddg,
    compute_piece_distance_table,
    minplus_closure,
    shift_constant_for,
)
from .frdijkstra import (
    Cone,
    DdgUnion,
    MultiDijkstraResult,
    SparseMember,
    assemble_cone,
    cone_distances,
    multi_dijkstra,
)
from .external import ExternalDdgBuilder, compute_ddg_external
from .failure_oracle import FailureOracle
from .tradeoff_oracle import TradeoffOracle
from .dynamic_oracle import DynamicOracle
from .oraclefile import OracleFileError, load_oracle, save_oracle
from .bench import BenchReport, bench_config, run_bench

__version__ = "0.1.0"

__all__ = [
    "BenchReport",
    "Cone",
    "DdgStore",
    "DdgUnion",
    "DecompositionTree",
    "DenseDistanceGraph",
    "DynamicOracle",
    "EmbeddedPlanarGraph",
    "EmbeddingError",
    "ExternalDdgBuilder",
    "FailureOracle",
    "GraphFormatError",
    "MATRIX_SENTINEL",
    "MultiDijkstraResult",
    "OracleFileError",
    "Piece",
    "PieceDistanceTable",
    "ShiftConstant",
    "SparseMember",
    "TradeoffOracle",
    "UNREACHABLE",
    "assemble_cone",
    "bench_config",
    "build_decomposition",
    "compute_ddg",
    "compute_ddg_external",
    "compute_ddg_internal",
    "compute_leaf_ddg",
    "compute_piece_distance_table",
    "cone_distances",
    "distance_avoiding",
    "dumps_graph",
    "generate_grid",
    "generate_random_triangulation",
    "load_graph",
    "load_oracle",
    "loads_graph",
    "minplus_closure",
    "multi_dijkstra",
    "run_bench",
    "save_graph",
    "save_oracle",
    "shift_constant_for",
    "sssp",
    "trace_faces",
    "__version__",
]
