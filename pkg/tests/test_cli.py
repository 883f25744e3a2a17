import csv
import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from deform_gsp.cli import log_returns, main
from deform_gsp.errors import NonpositivePrice


def _run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def _json_lines(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def _table(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture
def p2_files(tmp_path):
    (tmp_path / "p2.csv").write_text("i,j,w\n0,1,1\n")
    (tmp_path / "x.csv").write_text("1\n-1\n")
    return tmp_path


@pytest.fixture
def k3_file(tmp_path):
    (tmp_path / "k3.csv").write_text("0,1,1\n0,2,1\n1,2,1\n")
    return tmp_path / "k3.csv"


def test_learn_p2(capsys, p2_files):
    out = p2_files / "res"
    code, stdout, _ = _run(capsys, "learn", "--graph", p2_files / "p2.csv", "--signals",
                           p2_files / "x.csv", "--gamma", 1, "--K", 1, "--out", out)
    assert code == 0
    (res,) = _json_lines(stdout)
    assert res["r_star"] == -1.0 and res["nmse"] <= 1e-12
    assert {"result.json", "trace.csv", "reconstruction.csv", "manifest.json"} <= {
        p.name for p in out.iterdir()}
    manifest = json.loads((out / "manifest.json").read_text())
    assert set(manifest["inputs"]) == {"p2.csv", "x.csv"}


def test_learn_usage_errors(capsys, p2_files):
    with pytest.raises(SystemExit) as exc:
        main(["learn", "--graph", str(p2_files / "p2.csv"), "--gamma", "1", "--K", "1"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["learn", "--graph", str(p2_files / "p2.csv"), "--signals", str(p2_files / "x.csv"),
              "--gamma", "1.5", "--K", "1"])
    assert exc.value.code == 2
    assert "gamma must lie in [0,1]" in capsys.readouterr().err


def test_learn_module_error_exits_one(capsys, p2_files):
    code, _, err = _run(capsys, "learn", "--graph", p2_files / "p2.csv", "--signals",
                        p2_files / "x.csv", "--gamma", 1, "--K", 5, "--out", p2_files / "o")
    assert code == 1 and "error" in err


def test_spectrum_pep_p2(capsys, p2_files):
    code, stdout, _ = _run(capsys, "spectrum", "--graph", p2_files / "p2.csv", "--pep")
    (res,) = _json_lines(stdout)
    assert code == 0 and res["infinite_algebraic"] == 2
    assert sorted(round(re, 8) for re, _ in res["finite"]) == [-1.0, 1.0]


def test_spectrum_karate_and_k3(capsys, k3_file, tmp_path):
    code, stdout, _ = _run(capsys, "spectrum", "--graph", "karate", "--r", 1, "--out", tmp_path / "s")
    (res,) = _json_lines(stdout)
    assert code == 0 and len(res["eigenvalues"]) == 34 and abs(res["eigenvalues"][0]) < 1e-10
    assert (tmp_path / "s" / "eigenvectors.csv").exists()
    _, stdout, _ = _run(capsys, "spectrum", "--graph", k3_file, "--pep")
    assert _json_lines(stdout)[0]["max_finite_modulus"] == pytest.approx(1.0, abs=1e-7)


def test_simulate(capsys, p2_files):
    traj = p2_files / "traj.csv"
    code, stdout, _ = _run(capsys, "simulate", "--graph", p2_files / "p2.csv", "--r", 1,
                           "--phi0", "1,0", "--dt", 1, "--steps", 20, "--out", traj)
    assert code == 0
    np.testing.assert_allclose(_json_lines(stdout)[0]["final"], [0.5, 0.5], atol=1e-10)
    rows = _table(traj)
    assert list(rows[0]) == ["t", "phi_0", "phi_1"] and len(rows) == 21
    code, _, err = _run(capsys, "simulate", "--graph", p2_files / "p2.csv", "--r", 1, "--phi0",
                        "1,0", "--dt", 5, "--steps", 3, "--method", "euler", "--out", traj)
    assert code == 1 and "lambda_max" in err
    code, _, _ = _run(capsys, "simulate", "--graph", p2_files / "p2.csv", "--r", 1, "--phi0",
                      "1,0", "--dt", 0.1, "--steps", 0, "--out", traj)
    rows = _table(traj)
    assert code == 0 and len(rows) == 1 and float(rows[0]["phi_0"]) == 1.0


def test_log_returns_function():
    np.testing.assert_array_equal(log_returns([[5, 5, 5]]), [[0, 0]])
    np.testing.assert_allclose(log_returns([[1, np.e, np.e**3]]), [[1, 2]], atol=1e-15)
    with pytest.raises(NonpositivePrice, match="row 1, column 2"):
        log_returns([[1, 2, 3], [1, 2, 0]])


def test_logreturns_then_learn(capsys, tmp_path):
    rng = np.random.default_rng(0)
    prices = 100 * np.exp(np.cumsum(0.01 * rng.standard_normal((10, 20)), axis=1))
    np.savetxt(tmp_path / "prices.csv", prices, delimiter=",")
    code, _, _ = _run(capsys, "logreturns", "--prices", tmp_path / "prices.csv", "--out",
                      tmp_path / "ret.csv")
    assert code == 0
    X = np.loadtxt(tmp_path / "ret.csv", delimiter=",")
    assert X.shape == (10, 19)
    edges = [f"{i},{(i + 1) % 10},1" for i in range(10)]
    (tmp_path / "ring.csv").write_text("\n".join(edges) + "\n")
    code, stdout, _ = _run(capsys, "learn", "--graph", tmp_path / "ring.csv", "--signals",
                           tmp_path / "ret.csv", "--gamma", 0.5, "--K", 3, "--step", 0.1,
                           "--out", tmp_path / "o")
    assert code == 0 and -1 <= _json_lines(stdout)[0]["r_star"] <= 1
    (tmp_path / "bad.csv").write_text("1,2\n0,3\n")
    code, _, err = _run(capsys, "logreturns", "--prices", tmp_path / "bad.csv", "--out",
                        tmp_path / "r2.csv")
    assert code == 1 and "row 1, column 0" in err


def test_unknown_preset(capsys, tmp_path):
    code, _, err = _run(capsys, "experiment", "nope", "--out", tmp_path)
    assert code == 1 and "unknown preset" in err


PRESET_ARGS = {
    "gamma-sweep": ["--n", 60, "--trials", 3, "--kinds", "bipartite,clustered"],
    "dynamic-nmse": ["--n", 15, "--length", 8, "--M", 5],
    "nmse-vs-r": ["--n", 12, "--M", 5],
    "nmse-vs-sparsity": ["--n", 10, "--M", 4, "--gammas", "0.5,1.0"],
}


def _files(d):
    return {p.name: p.read_bytes() for p in sorted(Path(d).iterdir())}


@pytest.mark.parametrize("preset", sorted(PRESET_ARGS))
def test_presets_are_deterministic(capsys, tmp_path, preset):
    outs = []
    for run in ("a", "b"):
        code, stdout, _ = _run(capsys, "experiment", preset, "--seed", 7, "--step", 0.1,
                               "--out", tmp_path / run, *PRESET_ARGS[preset])
        assert code == 0
        assert _json_lines(stdout)[0]["preset"] == preset
        outs.append(_files(tmp_path / run))
    assert outs[0] == outs[1]


def test_preset_contents(capsys, tmp_path):
    _run(capsys, "experiment", "gamma-sweep", "--seed", 1, "--step", 0.1, "--out", tmp_path / "g",
         *PRESET_ARGS["gamma-sweep"])
    rows = _table(tmp_path / "g" / "gamma_sweep.csv")
    assert {float(r["mean_r_star"]) for r in rows if r["graph"] == "bipartite"} == {-1.0}
    _run(capsys, "experiment", "dynamic-nmse", "--seed", 1, "--step", 0.1, "--out", tmp_path / "d",
         *PRESET_ARGS["dynamic-nmse"])
    for r in _table(tmp_path / "d" / "dynamic_nmse.csv"):
        assert float(r["nmse_deformed"]) <= min(float(r["nmse_r1"]), float(r["nmse_rminus1"])) + 1e-12
    _run(capsys, "experiment", "nmse-vs-sparsity", "--seed", 1, "--step", 0.1, "--out",
         tmp_path / "s", *PRESET_ARGS["nmse-vs-sparsity"])
    rows = [r for r in _table(tmp_path / "s" / "nmse_vs_sparsity.csv") if float(r["gamma"]) == 1.0]
    errs = [float(r["nmse"]) for r in rows]
    assert [int(r["K"]) for r in rows] == list(range(1, 11))
    assert np.all(np.diff(errs) <= 1e-12)


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "deform_gsp", "spectrum", "--graph", "karate",
                           "--pep"], capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["structure"]["connected_components"] == 1
