import io
import subprocess
import sys

import pytest

from pbadd.cli import EXIT_MISMATCH, EXIT_ORACLE_LIMIT, EXIT_PARSE, main


def run(*argv):
    out = io.StringIO()
    code = main(list(map(str, argv)), out)
    return code, out.getvalue()


@pytest.fixture
def small(tmp_path, small_text):
    p = tmp_path / "small.opb"
    p.write_text(small_text)
    return p


def test_count(small):
    assert run("count", small) == (0, "s mc 3\n")
    assert run("count", small, "--compile", "topdown", "--no-preprocess") == (0, "s mc 3\n")
    assert run("count", small, "--cluster", "tree")[1] == "s mc 3\n"


def test_count_stats(small):
    code, text = run("count", small, "--stats", "--no-preprocess")
    lines = text.splitlines()
    assert code == 0 and lines[-1] == "s mc 3"
    assert all(line.startswith("c ") for line in lines[:-1])
    assert "c mode 0 bottomup" in lines  # k = 3 is not below the 25th percentile
    assert "c variables 2" in lines


def test_count_several_files(small, tmp_path):
    other = tmp_path / "b.opb"
    other.write_text("+1 x1 +1 x2 +1 x3 >= 2 ;\n")
    code, text = run("count", small, other)
    assert code == 0
    assert [l for l in text.splitlines() if l.startswith("s ")] == ["s mc 3", "s mc 4"]


def test_weighted_count(small, tmp_path):
    w = tmp_path / "w.txt"
    w.write_text("w 1 3/10\nw -1 7/10\n")
    # models (1,0) (0,1) (1,1): 3/10 + 7/10 + 3/10
    assert run("count", small, "--weights", w) == (0, "s wmc 13/10\n")
    assert run("oracle", small, "--weights", w) == (0, "s wmc 13/10\n")


def test_oracle_and_compare(small, tmp_path):
    assert run("oracle", small) == (0, "s mc 3\n")
    code, text = run("compare", small)
    assert code == 0 and text.splitlines()[-1] == "s mc 3"


def test_gen_then_compare(tmp_path):
    out = tmp_path / "out.opb"
    assert run("gen", "--family", "knapsack", "-n", 5, "-m", 2, "--seed", 0, "-o", out)[0] == 0
    code, text = run("compare", out)
    assert code == 0
    code, text = run("gen", "--family", "auction", "-n", 4, "-m", 1)
    assert code == 0 and text.startswith("* #variable= 4")


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.opb"
    bad.write_text("+1 x1 >= ;\n")
    assert run("count", bad)[0] == EXIT_PARSE
    assert "bad.opb" in capsys.readouterr().err
    assert run("count", tmp_path / "missing.opb")[0] == EXIT_PARSE
    w = tmp_path / "w.txt"
    w.write_text("w 1 -2\n")
    ok = tmp_path / "ok.opb"
    ok.write_text("+1 x1 >= 1 ;\n")
    assert run("count", ok, "--weights", w)[0] == EXIT_PARSE
    big = tmp_path / "big.opb"
    big.write_text("* #variable= 30\n+1 x1 +1 x2 >= 1 ;\n+1 x3 +1 x4 >= 1 ;\n")
    assert run("oracle", big)[0] == EXIT_ORACLE_LIMIT
    assert run("compare", big)[0] == EXIT_ORACLE_LIMIT


def test_mismatch_exit(small, monkeypatch):
    import pbadd.cli as cli
    monkeypatch.setattr(cli, "_oracle", lambda g, w: 4)
    assert run("compare", small)[0] == EXIT_MISMATCH


def test_deterministic_output(small):
    first = run("count", small, "--stats")
    assert all(run("count", small, "--stats") == first for _ in range(3))


def test_cache_limit_env(small, monkeypatch):
    monkeypatch.setenv("PBADD_CACHE_LIMIT", "2")
    assert run("count", small) == (0, "s mc 3\n")


def test_bench_writes_csv_and_figure(tmp_path):
    code, text = run("bench", "--suite", "corpus", "--size", 6, "--out-dir", tmp_path)
    assert code == 0
    assert (tmp_path / "corpus.csv").exists() and (tmp_path / "corpus_cactus.png").stat().st_size
    assert "c oracle_mismatches 0" in text
    code, _ = run("bench", "--suite", "casestudy", "--k-values", 10, 100, "--unit-coeffs",
                  "--out-dir", tmp_path)
    assert code == 0
    rows = (tmp_path / "casestudy.csv").read_text().splitlines()
    assert len(rows) == 1 + 4
    assert (tmp_path / "casestudy.png").read_bytes()[:4] == b"\x89PNG"


def test_console_entry_point(small):
    proc = subprocess.run([sys.executable, "-m", "pbadd.cli", "count", str(small)],
                          capture_output=True, text=True, check=True)
    assert proc.stdout == "s mc 3\n"
