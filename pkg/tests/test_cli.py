import subprocess
import sys

import numpy as np
import pytest

from rabiahm.cli import EXIT_USAGE, figure_config, main, read_config_file
from rabiahm.spectra import parse_spectrum_line


def _read_csv(path):
    lines = path.read_text().splitlines()
    comments = [l for l in lines if l.startswith("#")]
    header = lines[len(comments)]
    data = np.loadtxt(path, delimiter=",", comments="#", skiprows=len(comments) + 1, ndmin=2)
    return comments, header, data


def test_simulate_writes_requested_columns(tmp_path):
    out = tmp_path / "run.csv"
    rc = main(["simulate", "--state", "number:6", "--models", "jcm,rh", "--tmax", "20", "--steps", "81", "-o", str(out)])
    assert rc == 0
    comments, header, data = _read_csv(out)
    assert header == "t,P_RH,P_JCM"
    assert data.shape == (81, 3)
    assert data[0, 1:].tolist() == [1.0, 1.0]
    assert "# models=rh,jcm" in comments
    # 12 significant digits
    row = out.read_text().splitlines()[len(comments) + 2].split(",")
    assert all(len(x.lstrip("-").replace(".", "").lstrip("0")) <= 12 for x in row)


def test_config_roundtrip_is_bit_stable(tmp_path):
    first, second, third = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
    args = ["--state", "coherent:1.5,0.5", "--g", "0.2", "--models", "rh,ahm1,ahm2,jcm", "--tmax", "15", "--steps", "50"]
    assert main(["simulate", *args, "-o", str(first)]) == 0
    assert main(["simulate", *args, "-o", str(second)]) == 0
    assert main(["simulate", "--config", str(first), "-o", str(third)]) == 0
    assert first.read_bytes() == second.read_bytes() == third.read_bytes()


def test_flags_override_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("g=0.3\nstate=number:2\nmodels=rh\ntmax=5\nsteps=6\n# not a key\n")
    out = tmp_path / "out.csv"
    assert main(["simulate", "--config", str(cfg), "--g", "0.05", "-o", str(out)]) == 0
    echoed = read_config_file(out)
    assert echoed["g"] == "0.05"
    assert echoed["state"] == "number:2"
    assert echoed["n_max"] == "42"


@pytest.mark.parametrize(
    "argv",
    [
        ["simulate", "--models", ""],
        ["simulate", "--models", "rh,bogus"],
        ["simulate", "--state", "squeezed:1"],
        ["simulate", "--state", "coherent:8", "--n-max", "80"],
        ["simulate", "--steps", "1"],
        ["simulate", "--omega", "-1"],
        ["simulate", "--nu", "0.9", "--models", "ahm1"],
        ["simulate", "--config", "/nonexistent/run.cfg"],
        ["spectrum", "--n-max", "5"],
    ],
)
def test_config_errors_exit_2(argv, capsys):
    assert main(argv) == EXIT_USAGE
    assert "error" in capsys.readouterr().err


def test_insufficient_cutoff_message_is_actionable(capsys):
    main(["simulate", "--state", "coherent:8", "--n-max", "80"])
    assert "n_max >=" in capsys.readouterr().err


def test_argparse_usage_exit_code():
    proc = subprocess.run([sys.executable, "-m", "rabiahm", "figure", "fig9"], capture_output=True, text=True)
    assert proc.returncode == 2


@pytest.mark.parametrize(
    "name, kind, value, t_end",
    [("fig2", "number", 6, 100.0), ("fig3", "number", 100, 40.0), ("fig4", "coherent", 2, 100.0), ("fig5", "coherent", 8, 700.0)],
)
def test_figure_presets(name, kind, value, t_end):
    cfg = figure_config(name)
    assert (cfg.params.omega, cfg.params.g) == (1.0, 0.1)
    assert cfg.state.kind == kind
    assert (cfg.state.n if kind == "number" else cfg.state.alpha) == value
    assert cfg.grid.t_end == t_end
    assert cfg.grid.steps == (14000 if name == "fig5" else 4000)


def test_figure_command(tmp_path):
    out = tmp_path / "fig2.csv"
    assert main(["figure", "fig2", "-o", str(out)]) == 0
    _, header, data = _read_csv(out)
    assert header == "t,P_RH,P_AHM1,P_JCM"
    assert data.shape == (4000, 4)


@pytest.mark.parametrize("model", ["h1", "h2"])
def test_spectrum_dump(model, capsys):
    assert main(["spectrum", "--model", model, "--n-max", "30"]) == 0
    lines = capsys.readouterr().out.splitlines()
    body = [l for l in lines if not l.startswith("#")]
    interior_pairs = 30 - 5 - 3 + 1
    assert len(body) == 2 * interior_pairs + 3
    parsed = [parse_spectrum_line(l) for l in body]
    assert all(res < 1e-10 for _, _, res, _ in parsed)
    if model == "h1":
        assert ("chi0", -0.5) in [(label, value) for label, value, _, _ in parsed]


@pytest.fixture(scope="module")
def verify_run():
    proc = subprocess.run([sys.executable, "-m", "rabiahm", "verify"], capture_output=True, text=True)
    return proc


def test_verify_report_format(verify_run):
    lines = verify_run.stdout.splitlines()
    checks = [l for l in lines if l.startswith("CHECK ")]
    assert checks and all(l.endswith((" PASS", " FAIL")) for l in checks)
    names = {l.split()[1]: l for l in checks}
    assert "threshold=<1e-10" in names["algebra.u_interior_unitarity"]
    assert "threshold=<1e-08" in names["oracle.ahm1_vs_propagation.number6"]
    assert "symmetry.p_h1_g_vs_p_h2_minus_g.number6" in names
    failed = [l for l in checks if l.endswith("FAIL")]
    assert verify_run.returncode == (1 if failed else 0)
