import json
import subprocess
import sys

import pytest

from cli_runner import parse_error, run, tree_bytes, write_dataset, write_graphon, write_k3


@pytest.fixture
def k3(tmp_path):
    return write_k3(tmp_path / "k3.json")


def test_motif(k3):
    assert run("motif", "--graph", k3, "--motif", "C3") == (0, "0.222222222222\n", "")
    assert run("motif", "--graph", k3, "--motif", "K2")[1] == "0.666666666667\n"


def test_motif_errors(tmp_path, k3):
    code, out, err = run("motif", "--graph", k3, "--motif", "Q9")
    assert code == 2 and out == ""
    assert parse_error(err)["error"] == "ParseError"
    bad = tmp_path / "bad.json"
    bad.write_text('{"k": 2, "weights": [[0, 0.5], [0.1, 0]]}')
    code, _, err = run("motif", "--graph", bad, "--motif", "C3")
    assert code == 2 and "bad.json" in parse_error(err)["message"]
    code, _, err = run("motif", "--graph", tmp_path / "missing.json", "--motif", "C3")
    assert code == 2 and "error" in parse_error(err)


def test_spectrum(k3):
    code, out, _ = run("spectrum", "--graph", k3, "--channel", "adjacency")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "index,value,mass"
    assert [float(l.split(",")[1]) for l in lines[1:]] == pytest.approx([-1 / 3, -1 / 3, 2 / 3])
    code, out, _ = run("spectrum", "--graph", k3, "--channel", "laplacian", "--r", "1")
    assert out.splitlines()[0] == "lap_low_1,lap_high_1"
    assert [float(x) for x in out.splitlines()[1].split(",")] == pytest.approx([-1, 0], abs=1e-12)
    code, _, err = run("spectrum", "--graph", k3, "--r", "2")
    assert code == 2 and parse_error(err)["error"] == "DomainError"


def test_sample_is_deterministic(tmp_path):
    g = write_graphon(tmp_path / "g.json", [[0.8, 0.2], [0.2, 0.8]])
    for name in ("a", "b"):
        assert run("sample", "--graphon", g, "--k", 10, "--n", 3, "--seed", 7, "--out", tmp_path / name)[0] == 0
    assert tree_bytes(tmp_path / "a") == tree_bytes(tmp_path / "b")
    assert len(list((tmp_path / "a").iterdir())) == 3
    run("sample", "--graphon", g, "--k", 10, "--n", 3, "--seed", 8, "--out", tmp_path / "c")
    assert tree_bytes(tmp_path / "a") != tree_bytes(tmp_path / "c")


def test_distance_and_test(tmp_path):
    lo = write_graphon(tmp_path / "lo.json", [[0.1]])
    hi = write_graphon(tmp_path / "hi.json", [[0.9]])
    run("sample", "--graphon", lo, "--k", 8, "--n", 4, "--seed", 1, "--out", tmp_path / "A")
    run("sample", "--graphon", hi, "--k", 8, "--n", 4, "--seed", 2, "--out", tmp_path / "B")
    code, out, _ = run("distance", "--group-a", tmp_path / "A", "--group-b", tmp_path / "B", "--mode", "motif:K2")
    assert code == 0 and 0.5 < float(out) < 1
    code, out, _ = run("distance", "--group-a", tmp_path / "A", "--group-b", tmp_path / "A", "--mode", "spectral")
    assert code == 0 and float(out) == 0
    code, out, _ = run("test", "--group-a", tmp_path / "A", "--group-b", tmp_path / "A", "--mode", "motif:C3")
    report = json.loads(out)
    assert code == 3 and report["verdict"] == "inconclusive" and report["distance"] == 0
    code, out, _ = run("test", "--group-a", tmp_path / "A", "--group-b", tmp_path / "B", "--mode", "spectral")
    assert code == 3 and json.loads(out)["params"]["best_v"] >= 1


def test_group_errors(tmp_path):
    (tmp_path / "empty").mkdir()
    code, _, err = run("distance", "--group-a", tmp_path / "empty", "--group-b", tmp_path / "empty",
                       "--mode", "spectral")
    assert code == 2 and parse_error(err)["error"] == "ParseError"
    code, _, err = run("distance", "--group-a", tmp_path, "--group-b", tmp_path, "--mode", "cosine")
    assert code == 2


def test_classify(tmp_path):
    ds = write_dataset(tmp_path / "ds.json")
    args = ["classify", "--dataset", ds, "--channels", "number,fa", "--r", 2, "--lambda", 0.05,
            "--permutations", 19, "--seed", 7]
    code, out, err = run(*args)
    assert code == 0
    header, row = out.splitlines()
    assert header == "loocv_accuracy,p_value,n_permutations"
    accuracy, p, n_perm = row.split(",")
    assert float(accuracy) >= 0.9 and float(p) == pytest.approx(0.05) and n_perm == "19"
    assert err.splitlines()[0] == "fold,id,label,prediction,correct"
    assert len(err.splitlines()) == 13
    assert run(*args) == (code, out, err)
    log = tmp_path / "folds.csv"
    code, out2, err2 = run(*args, "--fold-log", log)
    assert out2 == out and err2 == "" and log.read_text() == err


def test_experiments(tmp_path):
    g = write_graphon(tmp_path / "g.json", [[0.5]])
    code, out, _ = run("experiment", "concentration", "--graphon", g, "--motif", "K2", "--k", 50,
                       "--eps", 0.2, "--trials", 5, "--seed", 3)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "trial,statistic,bound" and len(lines) == 6
    code, out, _ = run("experiment", "mean-wasserstein", "--n", 10, "--trials", 4, "--seed", 3)
    assert code == 0 and len(out.splitlines()) == 5
    assert float(out.splitlines()[1].split(",")[2]) == pytest.approx(3.6462 * 10 ** (-1 / 3))


def test_module_entry_point(k3):
    proc = subprocess.run([sys.executable, "-m", "decograph", "motif", "--graph", str(k3), "--motif", "C3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "0.222222222222\n"
