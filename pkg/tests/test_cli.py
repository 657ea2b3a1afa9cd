"""End-to-end command line runs, in process, checking files and exit codes."""

import io
import json

import pytest

from planar_oracle import cli
from planar_oracle.baseline import distance_avoiding
from planar_oracle.failure_oracle import FailureOracle
from planar_oracle.generate import generate_grid
from planar_oracle.graph import load_graph
from planar_oracle.oraclefile import load_oracle, save_oracle


@pytest.fixture
def graph_file(tmp_path):
    path = tmp_path / "g.pgr"
    rc = cli.main(
        [
            "gen", "--kind", "grid", "--rows", "6", "--cols", "6",
            "--max-weight", "9", "--seed", "3", "--out", str(path),
        ]
    )
    assert rc == cli.EXIT_OK
    return path


def test_gen_writes_loadable_graph(graph_file):
    g = load_graph(graph_file)
    assert g.n == 36
    assert g == generate_grid(6, 6, max_weight=9, seed=3)


def test_gen_tri(tmp_path):
    path = tmp_path / "t.pgr"
    rc = cli.main(["gen", "--kind", "tri", "--n", "30", "--out", str(path)])
    assert rc == cli.EXIT_OK
    assert load_graph(path).n == 30


def test_gen_needs_sizes(tmp_path):
    rc = cli.main(["gen", "--kind", "tri", "--out", str(tmp_path / "x.pgr")])
    assert rc == cli.EXIT_INVALID


def test_build_query_verify(tmp_path, graph_file, capsys):
    oracle_path = tmp_path / "o.bin"
    rc = cli.main(
        [
            "build", str(graph_file), "--mode", "failure",
            "--leaf-size", "8", "--out", str(oracle_path),
        ]
    )
    assert rc == cli.EXIT_OK

    queries = tmp_path / "q.txt"
    queries.write_text("0 35\n0 35 14\n5 11 0 30\n# comment\n\n")
    out = tmp_path / "answers.txt"
    rc = cli.main(["query", str(oracle_path), "--queries", str(queries), "--out", str(out)])
    assert rc == cli.EXIT_OK
    g = load_graph(graph_file)
    lines = out.read_text().splitlines()
    assert len(lines) == 3
    assert int(lines[0]) == distance_avoiding(g, 0, 35)
    assert int(lines[1]) == distance_avoiding(g, 0, 35, {14})
    assert int(lines[2]) == distance_avoiding(g, 5, 11, {0, 30})

    rc = cli.main(["verify", str(oracle_path), "--random", "40", "--seed", "1"])
    capsys.readouterr()
    assert rc == cli.EXIT_OK


def test_query_to_stdout_and_stdin(tmp_path, graph_file, capsys, monkeypatch):
    oracle_path = tmp_path / "o.bin"
    assert (
        cli.main(
            [
                "build", str(graph_file), "--mode", "failure",
                "--leaf-size", "8", "--out", str(oracle_path),
            ]
        )
        == cli.EXIT_OK
    )
    capsys.readouterr()
    monkeypatch.setattr("sys.stdin", io.StringIO("1 34\n"))
    rc = cli.main(["query", str(oracle_path)])
    assert rc == cli.EXIT_OK
    got = capsys.readouterr().out.strip()
    g = load_graph(graph_file)
    assert int(got) == distance_avoiding(g, 1, 34)


def test_query_unreachable_word(tmp_path, capsys):
    gpath = tmp_path / "p.pgr"
    assert cli.main(["gen", "--rows", "1", "--cols", "4", "--out", str(gpath)]) == 0
    opath = tmp_path / "p.bin"
    assert (
        cli.main(["build", str(gpath), "--leaf-size", "3", "--out", str(opath)]) == 0
    )
    capsys.readouterr()
    import sys

    old = sys.stdin
    sys.stdin = io.StringIO("0 3 2\n")
    try:
        rc = cli.main(["query", str(opath)])
    finally:
        sys.stdin = old
    assert rc == cli.EXIT_OK
    assert capsys.readouterr().out.strip() == "UNREACHABLE"


def test_build_tradeoff_and_verify(tmp_path, graph_file):
    oracle_path = tmp_path / "to.bin"
    rc = cli.main(
        [
            "build", str(graph_file), "--mode", "tradeoff", "--r", "32",
            "--k", "1", "--leaf-size", "8", "--out", str(oracle_path),
        ]
    )
    assert rc == cli.EXIT_OK
    rc = cli.main(["verify", str(oracle_path), "--random", "30", "--seed", "2"])
    assert rc == cli.EXIT_OK


def test_verify_reports_mismatch(tmp_path, graph_file, capsys):
    # sabotage a stored matrix so loaded answers drift from the baseline
    g = load_graph(graph_file)
    oracle = FailureOracle(g, leaf_size=8, r_base=4)
    for pid, ddg in oracle.store._strict.items():
        for i in range(len(ddg.matrix)):
            if 0 < ddg.matrix[i] < 10**9:
                ddg.matrix[i] += 1
    bad_path = tmp_path / "bad.bin"
    save_oracle(oracle, bad_path)
    rc = cli.main(["verify", str(bad_path), "--random", "60", "--seed", "0"])
    err = capsys.readouterr().err
    assert rc == cli.EXIT_MISMATCH
    assert "MISMATCH" in err


def test_verify_with_query_file(tmp_path, graph_file, capsys):
    opath = tmp_path / "o.bin"
    assert (
        cli.main(
            ["build", str(graph_file), "--leaf-size", "8", "--out", str(opath)]
        )
        == cli.EXIT_OK
    )
    qfile = tmp_path / "q.txt"
    qfile.write_text("0 20\n3 33 17\n")
    rc = cli.main(["verify", str(opath), "--queries", str(qfile)])
    capsys.readouterr()
    assert rc == cli.EXIT_OK


def test_bench_csv(tmp_path, capsys):
    rc = cli.main(
        [
            "bench", "--kind", "grid", "--n", "36", "--mode", "failure,tradeoff",
            "--r", "32", "--k", "1", "--leaf-size", "8", "--queries", "5",
            "--max-weight", "9", "--threads", "1",
        ]
    )
    out = capsys.readouterr().out
    assert rc == cli.EXIT_OK
    header, *rows = [ln for ln in out.splitlines() if ln.strip()]
    assert header.startswith("mode,n,r,k,")
    assert len(rows) == 2


def test_bench_json_to_file(tmp_path):
    out = tmp_path / "report.json"
    rc = cli.main(
        [
            "bench", "--kind", "grid", "--n", "36", "--mode", "failure",
            "--leaf-size", "8", "--queries", "4", "--format", "json",
            "--threads", "1", "--out", str(out),
        ]
    )
    assert rc == cli.EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["records"][0]["verified"] is True


def test_dyn_script(tmp_path, graph_file):
    script = tmp_path / "ops.txt"
    script.write_text(
        "q 0 35\n"
        "w 0 500        # reprice the first arc\n"
        "q 0 35\n"
        "iv\n"
        "ie 0 36 5 0 0\n"
        "ie 36 0 7 0 0\n"
        "q 0 36\n"
        "de 1\n"
        "dv 14\n"
        "q 0 35\n"
    )
    out = tmp_path / "answers.csv"
    rc = cli.main(["dyn", str(graph_file), str(script), "--out", str(out)])
    assert rc == cli.EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "op_index,u,v,distance"
    assert len(lines) == 5
    # the final row reflects all surviving mutations
    from planar_oracle.dynamic_oracle import DynamicOracle

    g = load_graph(graph_file)
    dyn = DynamicOracle(g, r=32)
    dyn.set_weight(0, 500)
    dyn.insert_vertex()
    dyn.insert_edge(0, 36, 5, 0, 0)
    dyn.insert_edge(36, 0, 7, 0, 0)
    dyn.delete_edge(1)
    dyn.delete_vertex(14)
    want = dyn.distance(0, 35)
    assert lines[4] == f"10,0,35,{want}"


def test_dyn_script_error_is_invalid(tmp_path, graph_file):
    script = tmp_path / "bad.txt"
    script.write_text("frobnicate 1 2\n")
    rc = cli.main(["dyn", str(graph_file), str(script)])
    assert rc == cli.EXIT_INVALID


def test_missing_file_is_io_error(tmp_path):
    rc = cli.main(["query", str(tmp_path / "nope.bin")])
    assert rc == cli.EXIT_IO


def test_corrupt_oracle_is_invalid(tmp_path):
    p = tmp_path / "junk.bin"
    p.write_bytes(b"JUNKJUNKJUNK")
    rc = cli.main(["verify", str(p)])
    assert rc == cli.EXIT_INVALID


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2


def test_bad_query_line_is_invalid(tmp_path, graph_file, capsys):
    opath = tmp_path / "o.bin"
    assert (
        cli.main(
            ["build", str(graph_file), "--leaf-size", "8", "--out", str(opath)]
        )
        == cli.EXIT_OK
    )
    qfile = tmp_path / "q.txt"
    qfile.write_text("0\n")
    rc = cli.main(["query", str(opath), "--queries", str(qfile)])
    capsys.readouterr()
    assert rc == cli.EXIT_INVALID
