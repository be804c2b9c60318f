import json
import subprocess
import sys

import numpy as np
import pytest

from graphfourier import io
from graphfourier.cli import run


def test_gen_constant(tmp_path):
    out = tmp_path / "f.csv"
    assert run(["gen", "--kind", "constant", "--c", "0.3", "--n", "1024", "--out", str(out)]) == 0
    f = io.read_function(out)
    assert len(f) == 1024
    np.testing.assert_array_equal(f.values, 0.3)


def test_decay_constant_graph(tmp_path, capsys):
    f, m, d = tmp_path / "f.csv", tmp_path / "m.json", tmp_path / "d.csv"
    assert run(["gen", "--kind", "constant", "--c", "0.3", "--n", "512", "--out", str(f)]) == 0
    assert run(["measure", "--function", str(f), "--out", str(m)]) == 0
    capsys.readouterr()
    assert run(["decay", "--measure", str(m), "--rmin", "8", "--rmax", "256",
                "--summary", str(tmp_path / "s.json"), "--out", str(d)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["exponent_s"] <= 0.05
    assert json.loads((tmp_path / "s.json").read_text()) == summary
    rows = io.read_decay_rows(d)
    assert [r["R"] for r in rows] == [8, 16, 32, 64, 128]


def test_stochastic_commands_need_seed(tmp_path, capsys):
    assert run(["gen", "--kind", "fbm", "--hurst", "0.5", "--out", str(tmp_path / "b.csv")]) == 2
    err = capsys.readouterr().err
    assert "--seed" in err and err.count("\n") == 1
    assert not (tmp_path / "b.csv").exists()
    assert run(["verify-lemmas", "--skip-sweep"]) == 2


def test_reproducible_outputs(tmp_path):
    paths = []
    for name in ("a", "b"):
        f, m = tmp_path / f"{name}.csv", tmp_path / f"{name}.json"
        assert run(["gen", "--kind", "fbm", "--hurst", "0.3", "--n", "256", "--seed", "9",
                    "--out", str(f)]) == 0
        assert run(["measure", "--function", str(f), "--base", "random", "--seed", "4",
                    "--out", str(m)]) == 0
        paths.append((f, m))
    (fa, ma), (fb, mb) = paths
    assert fa.read_bytes() == fb.read_bytes()
    assert ma.read_bytes() == mb.read_bytes()


@pytest.mark.parametrize("argv", [
    ["decay", "--bogus"],
    ["nonsense"],
    ["gen", "--kind", "spline", "--out", "x.csv"],
    ["gen", "--kind", "weierstrass", "--a", "0.1", "--b", "2", "--out", "x.csv"],
    ["energy", "--measure", "missing.json", "--s", "1.5", "--delta", "0.1", "--out", "e.csv"],
    ["ft", "--measure", "m.json", "--xi", "1,2,3"],
])
def test_validation_errors_exit_2(argv, tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert run(argv) == 2
    err = capsys.readouterr().err
    assert err.strip() and err.count("\n") == 1
    assert not list(tmp_path.glob("*.csv"))


def test_malformed_file_exit_2(tmp_path, capsys):
    bad = tmp_path / "m.json"
    bad.write_text('{"atoms": [[0, 0]], "weights": [2.0]}')
    assert run(["slice", "--measure", str(bad), "--t", "0", "--delta", "0.1",
                "--out", str(tmp_path / "s.json")]) == 2
    assert not (tmp_path / "s.json").exists()


def test_ft_and_slice(tmp_path, capsys):
    m = tmp_path / "m.json"
    assert run(["measure", "--shape", "dirac", "--at", "0.3,0.7", "--out", str(m)]) == 0
    capsys.readouterr()
    assert run(["ft", "--measure", str(m), "--xi", "0,0", "--xi", "1,1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "xi1,xi2,re,im,modulus"
    assert float(lines[1].split(",")[2]) == 1.0
    s = tmp_path / "s.json"
    assert run(["slice", "--measure", str(m), "--t", "0.3", "--delta", "0.05", "--out", str(s)]) == 0
    d = json.loads(s.read_text())
    assert d["atoms"] == [0.7] and d["tube_mass"] == pytest.approx(10.0)
    assert run(["slice", "--measure", str(m), "--t", "0.9", "--delta", "0.05", "--out", str(s)]) == 0
    assert json.loads(s.read_text())["tube_mass"] == 0.0


def test_energy_and_boxdim(tmp_path, capsys):
    m, e, f = tmp_path / "m.json", tmp_path / "e.csv", tmp_path / "f.csv"
    assert run(["measure", "--shape", "square", "--m", "4000", "--seed", "1", "--out", str(m)]) == 0
    assert run(["energy", "--measure", str(m), "--s", "1.5", "--delta", "0.05",
                "--t-grid", "0.1:0.9:5", "--tau", "1.8", "--out", str(e)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["integral_estimate"] > 0 and out["rhs_bound_estimate"] > 0
    assert len(io.read_energy_rows(e)) == 5
    assert run(["gen", "--kind", "polynomial", "--coeffs", "0,0,1", "--n", "4096", "--out", str(f)]) == 0
    capsys.readouterr()
    assert run(["boxdim", "--function", str(f)]) == 0
    assert json.loads(capsys.readouterr().out)["box_dimension"] == pytest.approx(1.0, abs=0.05)


def test_goodfn_and_transport(tmp_path, capsys):
    f, g, side, m, h, out = (tmp_path / n for n in ("f.csv", "g.csv", "g.json", "m.json", "h.csv", "t.json"))
    assert run(["gen", "--kind", "polynomial", "--coeffs", "0.2,0.5", "--n", "4097", "--out", str(f)]) == 0
    assert run(["goodfn", "--function", str(f), "--M", "4", "--epsilon", "0.1",
                "--out", str(g), "--sidecar", str(side)]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["sup_error"] < 0.2
    gf = io.read_goodfn(g, side)
    gf.check_invariants()
    # transport the good-function graph measure to a shifted copy
    io.write_function(type(gf.fn)(gf.fn.xs, gf.fn.values + 0.01), h)
    assert run(["measure", "--function", str(g), "--out", str(m)]) == 0
    assert run(["transport-check", "--g", str(g), "--h", str(h), "--measure", str(m),
                "--xi", "3,4", "--xi", "0,50", "--out", str(out)]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["violations"] == 0
    assert rep["sup_distance"] == pytest.approx(0.01)


def test_verify_lemmas_fast_suites(capsys):
    assert run(["verify-lemmas", "--seed", "7", "--trials", "50", "--skip-sweep"]) == 0
    table = capsys.readouterr().out.splitlines()
    rows = {line.split()[0]: line.split() for line in table[1:]}
    assert set(rows) == {"transport", "goodfn", "cos_min", "projection"}
    assert rows["transport"][2] == "0" and rows["goodfn"][2] == "0"
    assert float(rows["cos_min"][3]) == pytest.approx(-1.125, abs=1e-9)
    assert all(r[-1] == "PASS" for r in rows.values())


def test_module_entry_point(tmp_path):
    out = tmp_path / "f.csv"
    proc = subprocess.run([sys.executable, "-m", "graphfourier", "gen", "--kind", "constant",
                           "--c", "1", "--n", "8", "--out", str(out)], capture_output=True)
    assert proc.returncode == 0
    proc = subprocess.run([sys.executable, "-m", "graphfourier", "gen", "--wat"],
                          capture_output=True, text=True)
    assert proc.returncode == 2 and proc.stderr.count("\n") == 1


def test_internal_error_exit_1(tmp_path, capsys, monkeypatch):
    import graphfourier.cli as cli

    def broken(*args, **kwargs):
        raise RuntimeError("boom")

    monkeypatch.setattr(cli, "box_dimension", broken)
    f = tmp_path / "f.csv"
    assert run(["gen", "--kind", "constant", "--c", "0", "--n", "2048", "--out", str(f)]) == 0
    assert run(["boxdim", "--function", str(f)]) == 1
    assert "internal error" in capsys.readouterr().err


def test_failed_suite_exit_1(monkeypatch, capsys):
    import graphfourier.cli as cli
    from graphfourier.suites import SuiteResult

    monkeypatch.setattr(cli.suites, "projection_suite",
                        lambda seed: SuiteResult("projection identity", 1, 1, 1.0))
    assert run(["verify-lemmas", "--seed", "1", "--trials", "10", "--skip-sweep"]) == 1
    assert "FAIL" in capsys.readouterr().out
