import json
import subprocess
import sys

import numpy as np
import pytest

from ltar.cli import main
from ltar.io import read_series


def run(*args):
    return main([str(a) for a in args])


def test_generate_ltar1(tmp_path):
    out = tmp_path / "a.txt"
    assert run("generate", "ltar1", "--n", 2000, "--seed", 7, "-o", out) == 0
    assert out.read_text().splitlines()[1] == "# ell=3 depth=3 count=2000"
    again = tmp_path / "b.txt"
    run("generate", "ltar1", "--n", 2000, "--seed", 7, "-o", again)
    assert out.read_bytes() == again.read_bytes()


def test_generate_graph(tmp_path):
    out = tmp_path / "g.txt"
    assert run("generate", "graph", "--nodes", 20, "--n", 300, "--seed", 7, "-o", out) == 0
    assert read_series(out).obs_shape == (20, 1, 20)


def test_generate_to_stdout(capsys):
    assert run("generate", "ltar1", "--n", 3) == 0
    assert capsys.readouterr().out.startswith("#LTAR-SERIES v1\n")


def test_fit_recovers_ground_truth(tmp_path):
    series, model = tmp_path / "a.txt", tmp_path / "m.json"
    run("generate", "ltar1", "--n", 2000, "--seed", 7, "-o", series)
    assert run("fit", series, "--p", 1, "--transform", "dct", "-o", model) == 0
    doc = json.loads(model.read_text())
    A = np.moveaxis(np.array(doc["A"][0]).reshape(3, 3, 3), 0, -1)
    truth = np.stack([-0.2 * np.eye(3), 0.2 * np.eye(3), -0.2 * np.eye(3)], axis=2)
    # loose bound: the tight acceptance bound lives in test_acceptance
    assert np.abs(A - truth).max() < 0.1


def test_fit_echoes_differencing(tmp_path):
    series, model = tmp_path / "g.txt", tmp_path / "m.json"
    run("generate", "graph", "--nodes", 4, "--n", 400, "-o", series)
    assert run("fit", series, "--p", 2, "--d", 1, "--s", 50, "-o", model) == 0
    doc = json.loads(model.read_text())
    assert (doc["p"], doc["d"], doc["s"]) == (2, 1, 50)
    assert len(doc["retained_tails"]) == 53


def test_forecast_modes_and_errors(tmp_path):
    series, model = tmp_path / "a.txt", tmp_path / "m.json"
    run("generate", "ltar1", "--n", 500, "--seed", 1, "-o", series)
    run("fit", series, "--p", 1, "-o", model)
    single, multi, errs = tmp_path / "s.txt", tmp_path / "mm.txt", tmp_path / "e.csv"
    assert run("forecast", model, "--steps", 1, "--mode", "multi", "-o", multi) == 0
    assert run("forecast", model, "--steps", 1, "--mode", "single", "--truth", series, "--errors-out", errs, "-o", single) == 0
    assert single.read_bytes() == multi.read_bytes()
    assert errs.read_text().startswith("step,error\n1,")
    assert run("forecast", model, "--steps", 3, "--mode", "single") == 2


def test_forecast_error_csv_for_exact_noiseless_model(tmp_path):
    from ltar.datagen import ground_truth_theta
    from ltar.io import save_model, write_series
    from ltar.model import simulate_ltar

    theta = ground_truth_theta()
    y = simulate_ltar(theta, 40, seed=3)
    save_model(theta, tmp_path / "m.json")
    write_series(y[:20], tmp_path / "h.txt")
    write_series(y[20:], tmp_path / "t.txt")
    code = run("forecast", tmp_path / "m.json", "--history", tmp_path / "h.txt", "--steps", 20,
               "--truth", tmp_path / "t.txt", "--errors-out", tmp_path / "e.csv", "-o", tmp_path / "f.txt")
    assert code == 0
    rows = (tmp_path / "e.csv").read_text().splitlines()[1:]
    assert len(rows) == 20 and max(float(r.split(",")[1]) for r in rows) < 1e-6


def test_eval_writes_csv_and_summary(tmp_path, capsys):
    series, model = tmp_path / "a.txt", tmp_path / "m.json"
    run("generate", "ltar1", "--n", 300, "--seed", 2, "-o", series)
    run("fit", series, "--p", 1, "-o", model)
    assert run("eval", model, "--test", series, "--mode", "multi", "-o", tmp_path / "e.csv") == 0
    assert "horizon=300" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["fit", "x.txt", "--p", "0"],
        ["bench", "speedup", "--trials", "0"],
        ["bench", "scaling", "--n", "100,200"],
        ["generate", "graph", "--nodes", "5"],
        ["forecast", "m.json", "--steps", "2", "--mode", "sideways"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors_exit_1(argv, capsys):
    assert main(argv) == 1
    err = capsys.readouterr().err
    assert err.count("\n") == 1 and err.startswith("error:")


def test_data_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("#LTAR-SERIES v1\n# ell=1 depth=2 count=2\n1,2\n\n3,x\n")
    assert run("fit", bad, "--p", 1) == 2
    assert "line 5" in capsys.readouterr().err
    assert run("fit", tmp_path / "missing.txt", "--p", 1) == 2
    short = tmp_path / "short.txt"
    run("generate", "ltar1", "--n", 3, "-o", short)
    assert run("fit", short, "--p", 1) == 2


def test_singular_without_fallback_exits_3(tmp_path):
    flat = tmp_path / "flat.txt"
    flat.write_text("#LTAR-SERIES v1\n# ell=1 depth=1 count=6\n" + "\n\n".join(["1"] * 6) + "\n")
    assert run("fit", flat, "--p", 1, "--no-ridge") == 3
    assert run("fit", flat, "--p", 1, "-o", tmp_path / "m.json") == 0


def test_bench_scaling(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert run("bench", "scaling", "--n", "100,200,400,800", "--ell", 3, "--m", 3, "--p", 1, "--trials", 1, "-o", out) == 0
    assert out.read_text().startswith("n,seconds\n")
    assert "slope" in capsys.readouterr().err


def test_bench_speedup_small(tmp_path):
    out = tmp_path / "b.csv"
    assert run("bench", "speedup", "--nodes", 4, "--n", 200, "--p", 2, "--workers", 2, "--trials", 2, "-o", out) == 0
    assert out.read_text().splitlines()[0] == "workers,trial,seconds"


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "ltar.cli", "fit", str(tmp_path / "nope"), "--p", "1"], capture_output=True, text=True)
    assert proc.returncode == 2 and proc.stderr.startswith("error:")
