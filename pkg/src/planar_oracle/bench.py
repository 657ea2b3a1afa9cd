"""Benchmark sweeps over graph size, division granularity and failure budget.

Each configuration builds one oracle, saves it to measure its on-disk
size, answers a seeded batch of random queries, and cross-checks every
answer against the brute-force baseline.  Timings vary between runs;
every other report field is deterministic for a fixed seed.

The PLANAR_ORACLE_THREADS environment variable caps how many
configurations run in parallel (worker processes).
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import random
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from math import isqrt

from .baseline import distance_avoiding
from .failure_oracle import FailureOracle
from .generate import generate_grid, generate_random_triangulation
from .oraclefile import save_oracle
from .tradeoff_oracle import TradeoffOracle

__all__ = ["BenchReport", "bench_config", "run_bench", "thread_cap"]

_FIELDS = (
    "mode",
    "n",
    "r",
    "k",
    "build_ms",
    "bytes_on_disk",
    "mean_query_us",
    "p95_query_us",
    "union_vertex_count_mean",
    "verified",
)


class BenchReport:
    """Ordered per-configuration records, exportable as CSV or JSON."""

    def __init__(self, records: list[dict]):
        self.records = list(records)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=_FIELDS, lineterminator="\n")
        w.writeheader()
        for rec in self.records:
            w.writerow(rec)
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"records": self.records}, indent=2) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown report format {fmt!r}")


def bench_config(
    kind: str,
    n: int,
    mode: str,
    seed: int = 0,
    r: int = 64,
    k: int = 1,
    leaf_size: int = 32,
    r_base: int = 4,
    strategy: str = "monge",
    queries: int = 50,
    max_weight: int | None = 16,
) -> dict:
    """One sweep point.  kind is grid | tri, mode is failure | tradeoff.
    max_weight=None benches the unit-weight instance."""
    if kind not in ("grid", "tri"):
        raise ValueError(f"unknown graph kind {kind!r}")
    if mode not in ("failure", "tradeoff"):
        raise ValueError(f"unknown oracle mode {mode!r}")
    return {
        "kind": kind,
        "n": n,
        "mode": mode,
        "seed": seed,
        "r": r,
        "k": k,
        "leaf_size": leaf_size,
        "r_base": r_base,
        "strategy": strategy,
        "queries": queries,
        "max_weight": max_weight,
    }


def _make_graph(cfg: dict):
    mw = cfg.get("max_weight")
    if cfg["kind"] == "grid":
        side = max(2, isqrt(cfg["n"]))
        return generate_grid(side, side, max_weight=mw, seed=cfg["seed"])
    return generate_random_triangulation(cfg["n"], max_weight=mw, seed=cfg["seed"])


def _sample_queries(cfg: dict, n: int) -> list[tuple[int, int, tuple[int, ...]]]:
    rng = random.Random(f"bench:{cfg['seed']}:{cfg['kind']}:{n}:{cfg['mode']}")
    out = []
    for qi in range(cfg["queries"]):
        u = rng.randrange(n)
        v = rng.randrange(n)
        while v == u:
            v = rng.randrange(n)
        want = cfg["k"] if cfg["mode"] == "tradeoff" else qi % 5
        want = min(want, n - 2)
        x: set[int] = set()
        while len(x) < want:
            c = rng.randrange(n)
            if c != u and c != v:
                x.add(c)
        out.append((u, v, tuple(sorted(x))))
    return out


def _run_one(cfg: dict) -> dict:
    g = _make_graph(cfg)

    t0 = time.perf_counter()
    if cfg["mode"] == "failure":
        oracle = FailureOracle(
            g,
            leaf_size=cfg["leaf_size"],
            r_base=cfg["r_base"],
            strategy=cfg["strategy"],
        )
    else:
        oracle = TradeoffOracle(
            g,
            r=cfg["r"],
            k=cfg["k"],
            leaf_size=cfg["leaf_size"],
            r_base=cfg["r_base"],
            strategy=cfg["strategy"],
        )
    build_ms = (time.perf_counter() - t0) * 1e3

    fd, path = tempfile.mkstemp(suffix=".pox")
    os.close(fd)
    try:
        save_oracle(oracle, path)
        size = os.path.getsize(path)
    finally:
        os.unlink(path)

    batch = _sample_queries(cfg, g.n)
    times = []
    unions = []
    verified = True
    for u, v, x in batch:
        t0 = time.perf_counter()
        if cfg["mode"] == "failure":
            res = oracle.query_result(u, v, x)
            times.append(time.perf_counter() - t0)
            got = res.label(v)
            unions.append(res.union_vertices)
        else:
            got = oracle.distance(u, v, x)
            times.append(time.perf_counter() - t0)
            unions.append(oracle.last_result.union_vertices)
        if got != distance_avoiding(g, u, v, x):
            verified = False

    times_us = sorted(t * 1e6 for t in times)
    p95 = times_us[max(0, math.ceil(0.95 * len(times_us)) - 1)] if times_us else 0.0
    return {
        "mode": cfg["mode"],
        "n": g.n,
        "r": cfg["r"] if cfg["mode"] == "tradeoff" else 0,
        "k": cfg["k"],
        "build_ms": round(build_ms, 3),
        "bytes_on_disk": size,
        "mean_query_us": round(sum(times_us) / len(times_us), 1) if times_us else 0.0,
        "p95_query_us": round(p95, 1),
        "union_vertex_count_mean": round(sum(unions) / len(unions), 2) if unions else 0.0,
        "verified": verified,
    }


def thread_cap(requested: int | None = None) -> int:
    """Worker count: the smaller of the request (default cpu count, max 4)
    and the PLANAR_ORACLE_THREADS environment cap."""
    workers = requested if requested else min(4, os.cpu_count() or 1)
    env = os.environ.get("PLANAR_ORACLE_THREADS")
    if env is not None:
        try:
            workers = min(workers, max(1, int(env)))
        except ValueError:
            raise ValueError(
                f"PLANAR_ORACLE_THREADS must be an integer, got {env!r}"
            ) from None
    return max(1, workers)


def run_bench(configs: list[dict], threads: int | None = None) -> BenchReport:
    """Run every configuration and collect records in input order."""
    workers = thread_cap(threads)
    if workers == 1 or len(configs) <= 1:
        return BenchReport([_run_one(c) for c in configs])
    with ProcessPoolExecutor(max_workers=min(workers, len(configs))) as pool:
        return BenchReport(list(pool.map(_run_one, configs)))
