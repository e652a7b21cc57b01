import math

import pytest

from anchorjoin.cli import ConfigError, RunConfig, default_T, main, run
from anchorjoin.dataset import load_dataset

from .conftest import FIVE, GRAM_TABLE


def read_pairs(path):
    return [tuple(map(int, l.split("\t"))) for l in path.read_text().splitlines() if not l.startswith("#")]


def read_metrics(path):
    rows = [l for l in path.read_text().splitlines() if not l.startswith("#")]
    assert rows[0] == "metric,value"
    return {k: float(v) for k, v in (r.split(",") for r in rows[1:])}


def test_load_five():
    recs = load_dataset(FIVE)
    assert [len(r.data) for r in recs] == [21, 22, 21, 21, 21]
    assert [r.index for r in recs] == list(range(5))


def test_load_single_and_crlf(tmp_path):
    p = tmp_path / "one.txt"
    p.write_bytes(b"ACGT")
    assert len(load_dataset(p)) == 1
    lf, crlf = tmp_path / "lf.txt", tmp_path / "crlf.txt"
    lf.write_bytes(b"ACGT\nTTGA\n")
    crlf.write_bytes(b"ACGT\r\nTTGA\r\n")
    assert load_dataset(lf) == load_dataset(crlf)


@pytest.mark.parametrize("content", [b"", b"\n", b"ACGT\n\nTTT\n", b"ACGT\n  \n"])
def test_load_rejects(tmp_path, content):
    p = tmp_path / "bad.txt"
    p.write_bytes(content)
    with pytest.raises(ValueError):
        load_dataset(p)


def test_load_missing(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_dataset(tmp_path / "nope.txt")


def test_default_T():
    assert default_T(50) == 10 and default_T(4) == 1 and default_T(0) == 1 and default_T(11) == 3


def test_join_running_example(tmp_path):
    out = tmp_path / "pairs.tsv"
    rc = main(["join", "-i", str(FIVE), "-o", str(out), "-K", "4", "-T", "3", "-q", "3",
               "--fixture-hash", str(GRAM_TABLE)])
    assert rc == 0
    assert read_pairs(out) == [(0, 1, 4), (2, 3, 1), (2, 4, 4)]
    meta = [l for l in out.read_text().splitlines() if l.startswith("#")]
    assert "# K=4" in meta and "# T=3" in meta and "# q=3" in meta and "# seed=0" in meta


@pytest.mark.parametrize("engine", ["minjoin", "minhash", "brute"])
def test_eval_engines(tmp_path, engine):
    out = tmp_path / "m.csv"
    assert main(["eval", "-i", str(FIVE), "-o", str(out), "-K", "4", "--engine", engine]) == 0
    m = read_metrics(out)
    assert m["precision"] == 1.0
    if engine == "brute":
        assert m["recall"] == 1.0


def test_stats_cdf(tmp_path):
    out = tmp_path / "cdf.csv"
    timings = tmp_path / "t.csv"
    assert main(["stats", "-T", "100", "-q", "9", "--length", "5000", "--runs", "200",
                 "-o", str(out), "--timings", str(timings)]) == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "anchors,count,frequency"
    table = [tuple(map(float, r.split(","))) for r in rows[1:]]
    assert sum(c for _, c, _ in table) == 200
    assert table[-1][2] == 1.0
    width = 2 * math.sqrt(100)
    mass = sum(c for a, c, _ in table if abs(a - 100) <= width) / 200
    assert mass >= 0.9
    assert timings.read_text().startswith("stage,millis\n")


def test_gen_join_eval_reproducible(tmp_path):
    outs = []
    for run_id in range(2):
        d = tmp_path / f"data{run_id}.txt"
        truth = tmp_path / f"truth{run_id}.tsv"
        pairs = tmp_path / f"pairs{run_id}.tsv"
        metrics = tmp_path / f"m{run_id}.csv"
        assert main(["gen", "-o", str(d), "--truth", str(truth), "-n", "120", "--length", "300",
                     "--clusters", "20", "--k-plant", "10", "--seed", "3"]) == 0
        assert main(["join", "-i", str(d), "-o", str(pairs), "-K", "10", "-T", "10", "--seed", "5",
                     "--threads", str(1 + 2 * run_id)]) == 0
        assert main(["eval", "-i", str(d), "-o", str(metrics), "-K", "10", "-T", "10", "--seed", "5"]) == 0
        outs.append([p.read_bytes() for p in (d, truth, pairs, metrics)])
    assert outs[0] == outs[1]
    planted = [l for l in (tmp_path / "truth0.tsv").read_text().splitlines() if not l.startswith("#")]
    assert len(planted) == 40


def test_pair_file_sorted_unique(tmp_path):
    d = tmp_path / "d.txt"
    main(["gen", "-o", str(d), "-n", "60", "--length", "100", "--clusters", "15", "--cluster-size", "4",
          "--k-plant", "5", "--seed", "1"])
    out = tmp_path / "p.tsv"
    main(["join", "-i", str(d), "-o", str(out), "-K", "10", "-T", "5"])
    pairs = [(a, b) for a, b, _ in read_pairs(out)]
    assert pairs == sorted(set(pairs)) and all(a < b for a, b in pairs)


def test_sweep(tmp_path):
    out = tmp_path / "m.csv"
    assert main(["eval", "-i", str(FIVE), "-o", str(out), "-K", "10", "--sweep-T"]) == 0
    m = read_metrics(out)
    assert {"recall@T=2", "recall@T=10"} <= set(m)


@pytest.mark.parametrize(
    "argv",
    [
        ["join", "-i", str(FIVE), "-K", "4", "--engine", "brute", "--fixture-hash", str(GRAM_TABLE)],
        ["join", "-i", str(FIVE), "-K", "4", "-R", "3", "--fixture-hash", str(GRAM_TABLE)],
        ["join", "-i", str(FIVE)],
        ["join", "-i", str(FIVE), "-K", "4", "-T", "0"],
        ["join", "-i", "/nonexistent/file", "-K", "4"],
    ],
)
def test_bad_configs(argv, capsys):
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_unwritable_output(tmp_path):
    assert main(["join", "-i", str(FIVE), "-K", "4", "-o", str(tmp_path / "no" / "such" / "dir.tsv")]) == 2


def test_run_validates():
    with pytest.raises(ConfigError):
        run(RunConfig(command="frobnicate"))
