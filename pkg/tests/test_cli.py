import json
import subprocess
import sys

import numpy as np
import pytest

from fraclayer.cli import main
from fraclayer.output import read_csv


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_ml_examples(capsys):
    assert run(capsys, "ml", "--a", "1", "--b", "1", "--z", "1")[1] == "2.7182818284590451\n"
    assert run(capsys, "ml", "--a", "0.5", "--b", "2", "--z", "0")[1] == "1\n"
    code, out, _ = run(capsys, "ml", "--a", "0.5", "--b", "1", "--z", "-1")
    assert code == 0 and out.startswith("0.427583")


def test_ml_grid_csv(capsys):
    code, out, _ = run(capsys, "ml", "--a", "2", "--b", "1", "--z-grid=-4:0:5")
    header, data = read_csv(out)
    assert code == 0 and header == ["z", "value"]
    assert np.allclose(data[:, 1], np.cos(np.sqrt(-data[:, 0])), atol=1e-12)


@pytest.mark.parametrize(
    "argv",
    [
        ["ml", "--a", "-1", "--b", "1", "--z", "1"],
        ["ml", "--a", "1", "--b", "1"],
        ["ml", "--a", "x", "--b", "1", "--z", "1"],
        ["layer", "--problem", "conv", "--x", "0,2"],
        ["layer", "--problem", "conv", "--eps", "1.5"],
        ["layer", "--problem", "bogus"],
        ["solve", "--kind", "reac", "--eps", "0"],
        ["solve", "--kind", "conv", "--n", "1"],
        ["verify", "--eps", "2"],
        ["nosuch"],
        [],
    ],
)
def test_argument_errors_exit_2(capsys, argv):
    assert main(argv) == 2


def test_layer_conv_endpoints(capsys):
    code, out, _ = run(capsys, "layer", "--problem", "conv", "--eps", "1e-4", "--x", "0,0.25,1")
    header, data = read_csv(out)
    assert code == 0 and header == ["x", "value"]
    assert data[0, 1] == 1.0 and data[2, 1] == 0.0
    assert data[1, 1] == pytest.approx(0.5, abs=1e-3)


def test_layer_reac0_tail(capsys):
    # x = 1 with eps = 1e-6 is xi = 1e4
    code, out, _ = run(capsys, "layer", "--problem", "reac0", "--eps", "1e-6", "--x", "1")
    assert read_csv(out)[1][0, 1] == pytest.approx(5.64e-3, rel=1e-2)


def test_layer_other_problems(capsys):
    for problem in ("reac1", "classical"):
        code, out, _ = run(capsys, "layer", "--problem", problem, "--x", "0:1:11")
        assert code == 0 and read_csv(out)[1].shape == (11, 2)


def test_numerical_failure_exit_3(capsys, monkeypatch):
    from fraclayer import cli
    from fraclayer.laplace import LaplaceConvergenceError

    def boom(*args, **kwargs):
        raise LaplaceConvergenceError("forced")

    monkeypatch.setattr(cli, "reac_layer0", boom)
    code, _, err = run(capsys, "layer", "--problem", "reac0", "--x", "0.5")
    assert code == 3 and "numerical failure" in err


def test_solve_conv_summary(tmp_path, capsys):
    path = tmp_path / "u.csv"
    code, out, _ = run(capsys, "solve", "--kind", "conv", "--eps", "1e-2", "--n", "1024", "--out", str(path))
    assert code == 0
    err = float(out.split("oracle_error=")[1].split()[0])
    assert err <= 0.05
    header, data = read_csv(path.read_text())
    assert header == ["x", "u"] and data.shape == (1025, 2)
    assert data[0, 1] == 0.0 and data[-1, 1] == 0.0


def test_solve_classical_layer(capsys):
    code, out, err = run(capsys, "solve", "--kind", "classical", "--eps", "1e-2")
    assert code == 0
    assert float(err.split("oracle_error=")[1].split()[0]) <= 0.02
    assert read_csv(out)[0] == ["x", "u"]


def test_verify_passes_and_is_deterministic(tmp_path, capsys):
    code1, out1, _ = run(capsys, "verify", "--csv", str(tmp_path / "a.csv"))
    code2, out2, _ = run(capsys, "verify", "--csv", str(tmp_path / "b.csv"))
    assert code1 == code2 == 0
    assert out1 == out2
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    row = next(line for line in out1.splitlines() if line.startswith("theta_scaling"))
    assert "-8.86305" in row and "-8.862269e-01" in row


def test_verify_large_eps_fails_limit_law(capsys):
    code, out, _ = run(capsys, "verify", "--eps", "0.5")
    assert code == 1
    assert any(line.startswith("limit_law") and "FAIL" in line for line in out.splitlines())


def test_verify_tolerance_override(tmp_path, capsys):
    tol = tmp_path / "tol.json"
    tol.write_text(json.dumps({"caputo_refinement": 100.0}))
    code, out, _ = run(capsys, "verify", "--tolerances", str(tol))
    assert code == 1
    assert "caputo_refinement" in [l.split()[0] for l in out.splitlines() if "FAIL" in l]
    tol.write_text(json.dumps({"nonsense": 1.0}))
    assert main(["verify", "--tolerances", str(tol)]) == 2


def test_figures(tmp_path, capsys):
    code, out, _ = run(capsys, "figures", "--out", str(tmp_path / "a"))
    assert code == 0
    for name in ("fig1.csv", "fig1.svg", "fig2.csv", "fig2.svg"):
        assert (tmp_path / "a" / name).exists()
    header, data = read_csv((tmp_path / "a" / "fig2.csv").read_text())
    assert header == ["x", "u", "u_exact", "layer_correction"]
    assert data[0, 0] == 0.0 and data[0, 1] == 0.0 and data[-1, 1] == 0.0
    header, data = read_csv((tmp_path / "a" / "fig1.csv").read_text())
    assert header == ["x", "u", "v0", "v1"]


def test_figures_unwritable(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["figures", "--out", str(blocker / "sub")]) == 2


def test_help_per_subcommand():
    for cmd in ("ml", "layer", "solve", "verify", "figures"):
        out = subprocess.run([sys.executable, "-m", "fraclayer", cmd, "--help"], capture_output=True, text=True)
        assert out.returncode == 0 and "usage" in out.stdout
