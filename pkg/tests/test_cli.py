import io
import os

import pytest

from leelattice import cli

DATA = os.path.join(os.path.dirname(__file__), os.pardir, "data")
EX1 = os.path.join(DATA, "example1.txt")
EX2 = os.path.join(DATA, "example2.txt")


def run(*argv):
    buf = io.StringIO()
    code = cli.main(list(argv), out=buf)
    return code, buf.getvalue()


@pytest.mark.parametrize("method", ["code", "sphere", "brute"])
def test_decode_example1(method):
    code, text = run("decode", EX1, "--vector", "0 -6", "--method", method)
    assert code == 0
    assert text.splitlines()[0] == "(-1,-5), distance 2"
    assert f"method: {method}" in text


def test_decode_example2_and_lattice_point():
    code, text = run("decode", EX2, "--vector", "0 7 4 8 0 12 0", "--method", "code")
    assert code == 0 and text.startswith("(0,8,4,8,0,12,0), distance 1")
    code, text = run("decode", EX2, "--vector", "0 8 4 8 0 12 0")
    assert text.startswith("(0,8,4,8,0,12,0), distance 0")


def test_decode_trace_nodes():
    code, text = run("decode", EX1, "--vector", "0 -6", "--trace-nodes")
    rows = cli.read_csv(io.StringIO(text[text.index("depth,count"):]))
    assert rows[0] == {"depth": 0, "count": 1}
    assert "nodes:" in text and "radius:" in text


def test_decode_vectors_file(tmp_path):
    p = tmp_path / "v.txt"
    p.write_text("# two vectors\n0 -6\n2 10\n")
    code, text = run("decode", EX1, "--vectors", str(p))
    assert code == 0
    assert text.count("distance") == 2 and "(2,10), distance 0" in text


def test_decode_infeasible_radius():
    code, text = run("decode", EX1, "--vector", "0 -6", "--radius", "0.5")
    assert code == 1 and text.startswith("none-in-radius")


@pytest.mark.parametrize(
    "argv",
    [
        ["decode", EX1, "--vector", "0 x"],
        ["decode", EX1, "--vector", "1 2 3"],
        ["decode", "/nonexistent/file", "--vector", "0 0"],
        ["count", "--k", "-1", "--R", "2"],
        ["decode", EX1],
        ["frobnicate"],
        ["simulate", "--k", "0:3", "--n", "4", "--trials", "1"],
    ],
)
def test_input_errors_exit_2(argv, capsys):
    code, _ = run(*argv)
    assert code == 2


def test_bad_matrix_file(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("code\n13 2 1\n1\n")
    assert run("decode", str(p), "--vector", "0 0")[0] == 2


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["count", "--k", "0", "--R", "5"], "1"),
        (["count", "--k", "3", "--R", "2"], "44"),
        (["count", "--j", "2", "--R", "1", "--ball"], "5"),
    ],
)
def test_count(argv, expected):
    code, text = run(*argv)
    assert code == 0 and text.strip() == expected


def test_count_per_depth():
    code, text = run("count", "--k", "3", "--R", "2", "--per-depth")
    lines = text.splitlines()
    rows = cli.read_csv(io.StringIO("\n".join(lines[:-1])))
    assert [r["count"] for r in rows] == [1, 5, 13, 25]
    assert lines[-1] == "44"


def test_volume_csv_and_svg(tmp_path):
    out, svg = tmp_path / "v.csv", tmp_path / "v.svg"
    code, text = run("volume", "--max-n", "30", "--out", str(out), "--svg", str(svg))
    assert code == 0 and "crossover n_o = 4" in text
    raw = out.read_bytes()
    assert b"\r" not in raw
    rows = cli.read_csv(io.StringIO(raw.decode()))
    assert len(rows) == 29 and list(rows[0]) == ["n", "euclid", "avg_lee", "ratio"]
    assert rows[0]["ratio"] > 1 and rows[-1]["ratio"] < 1
    assert svg.read_text().startswith("<svg")


def test_volume_stdout_round_trip():
    code, text = run("volume", "--max-n", "6")
    rows = cli.read_csv(io.StringIO(text))
    buf = io.StringIO()
    cli.write_csv(buf, cli.VOLUME_COLUMNS, rows)
    assert buf.getvalue() == text


def test_simulate_short(tmp_path):
    out, trials, svg = tmp_path / "s.csv", tmp_path / "t.csv", tmp_path / "s.svg"
    argv = ["--threads", "2", "simulate", "--trials", "3", "--seed", "42",
            "--out", str(out), "--trials-out", str(trials), "--svg", str(svg)]
    assert run(*argv)[0] == 0
    rows = cli.read_csv(io.StringIO(out.read_text()))
    assert [r["k"] for r in rows] == list(range(1, 17))
    assert all(r["invariant_violations"] == 0 for r in rows)
    assert len(cli.read_csv(io.StringIO(trials.read_text()))) == 48
    first = out.read_text()
    assert run(*argv)[0] == 0
    strip = lambda s: [{k: v for k, v in r.items() if k != "mean_time_us"} for r in cli.read_csv(io.StringIO(s))]
    assert strip(out.read_text()) == strip(first)
    assert "<polyline" in svg.read_text()


@pytest.mark.parametrize("spec, expected", [("1:4", [1, 2, 3, 4]), ("3", [3]), ("1,5,7", [1, 5, 7])])
def test_parse_k_range(spec, expected):
    assert cli.parse_k_range(spec) == expected


def test_bench():
    code, text = run("bench", "--instances", "5")
    rows = cli.read_csv(io.StringIO(text))
    assert len(rows) == 5 and list(rows[0]) == ["code_us", "sphere_us"]
    assert all(r["code_us"] > 0 and r["sphere_us"] > 0 for r in rows)
