"""Benchmark harness: configs, determinism, rendering, thread caps."""

import csv
import io
import json

import pytest

from planar_oracle.bench import BenchReport, bench_config, run_bench, thread_cap


def small_configs():
    return [
        bench_config("grid", 36, "failure", leaf_size=8, queries=6, max_weight=9),
        bench_config(
            "grid", 36, "tradeoff", r=32, k=1, leaf_size=8, r_base=4,
            queries=6, max_weight=9,
        ),
    ]


def test_config_validation():
    with pytest.raises(ValueError):
        bench_config("torus", 64, "failure")
    with pytest.raises(ValueError):
        bench_config("grid", 64, "exactly")


def test_run_inline_and_verified():
    report = run_bench(small_configs(), threads=1)
    assert len(report.records) == 2
    for rec in report.records:
        assert rec["verified"] is True
        assert rec["n"] == 36
        assert rec["bytes_on_disk"] > 0
        assert rec["build_ms"] >= 0
        assert rec["mean_query_us"] > 0
        assert rec["p95_query_us"] >= rec["mean_query_us"] * 0.1
        assert rec["union_vertex_count_mean"] > 0
    modes = [rec["mode"] for rec in report.records]
    assert modes == ["failure", "tradeoff"]


def test_non_timing_fields_deterministic():
    keep = ("mode", "n", "r", "k", "bytes_on_disk", "union_vertex_count_mean", "verified")
    a = run_bench(small_configs(), threads=1)
    b = run_bench(small_configs(), threads=1)
    for ra, rb in zip(a.records, b.records):
        for field in keep:
            assert ra[field] == rb[field]


def test_parallel_matches_inline():
    keep = ("mode", "n", "bytes_on_disk", "union_vertex_count_mean", "verified")
    a = run_bench(small_configs(), threads=1)
    b = run_bench(small_configs(), threads=2)
    for ra, rb in zip(a.records, b.records):
        for field in keep:
            assert ra[field] == rb[field]


def test_csv_rendering():
    report = run_bench(small_configs()[:1], threads=1)
    rows = list(csv.DictReader(io.StringIO(report.to_csv())))
    assert len(rows) == 1
    assert rows[0]["mode"] == "failure"
    assert rows[0]["verified"] == "True"


def test_json_rendering():
    report = run_bench(small_configs()[:1], threads=1)
    doc = json.loads(report.to_json())
    assert doc["records"][0]["mode"] == "failure"
    with pytest.raises(ValueError):
        report.render("yaml")
    assert report.render("json") == report.to_json()
    assert report.render("csv") == report.to_csv()


def test_thread_cap(monkeypatch):
    monkeypatch.delenv("PLANAR_ORACLE_THREADS", raising=False)
    assert thread_cap(3) == 3
    assert thread_cap() >= 1
    monkeypatch.setenv("PLANAR_ORACLE_THREADS", "2")
    assert thread_cap(8) == 2
    assert thread_cap(1) == 1
    monkeypatch.setenv("PLANAR_ORACLE_THREADS", "zero")
    with pytest.raises(ValueError):
        thread_cap(2)


def test_report_round_trip_types():
    report = run_bench(small_configs()[:1], threads=1)
    rec = report.records[0]
    assert isinstance(rec["build_ms"], float)
    assert isinstance(rec["bytes_on_disk"], int)
    assert isinstance(BenchReport(report.records).to_csv(), str)
