import csv
import json

import pytest

from rftsolve.cli import main
from rftsolve.config import RunConfig, load_config, parse_config
from rftsolve.errors import ParseError, ValidationError
from rftsolve.spectrum import CSV_HEADER

GOLDEN_HEADER = "T,gamma_re,gamma_im,F_re,F_im,rho,iters,residual"


def write(tmp_path, text, name="run.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


SMALL = """# small waveguide run
mode = waveguide
d = 2
W_over_lambda = 5.5
L_over_ell = 1.0
T_count = 7
N_x = 64
"""


def test_defaults_filled():
    cfg = parse_config("mode=waveguide\nd=2\nW_over_lambda=25.5\nL_over_ell=5\n")
    assert isinstance(cfg, RunConfig)
    assert (cfg.N_x, cfg.eta, cfg.tol, cfg.T_count) == (1024, 1e-6, 1e-10, 199)
    assert cfg.deterministic is True


def test_slab_requires_n_mu():
    with pytest.raises(ValidationError) as info:
        parse_config("mode=slab\nd=2\nL_over_ell=0.2\n")
    assert any("N_mu" in e for e in info.value.errors)


def test_all_errors_reported():
    with pytest.raises(ValidationError) as info:
        parse_config("mode=waveguide\nd=0\nL_over_ell=-1\neta=-3\n")
    assert len(info.value.errors) >= 3


def test_unparsable():
    with pytest.raises(ParseError):
        parse_config("this is not a config\n")
    with pytest.raises(ParseError):
        load_config("/nonexistent/run.cfg")


def test_check_command(tmp_path, capsys):
    assert main(["check", "--config", write(tmp_path, SMALL)]) == 0
    assert main(["check", "--config", write(tmp_path, "mode=slab\nd=2\nL_over_ell=1\n", "bad.cfg")]) == 1
    assert "N_mu" in capsys.readouterr().err


def test_solve_writes_outputs(tmp_path):
    cfg = write(tmp_path, SMALL)
    out = tmp_path / "out"
    assert main(["solve", "--config", cfg, "--output-dir", str(out)]) == 0
    lines = (out / "spectrum.csv").read_text().splitlines()
    assert lines[0] == GOLDEN_HEADER == ",".join(CSV_HEADER)
    rows = list(csv.reader(lines[1:]))
    assert len(rows) == 7 and all(int(r[6]) < 20000 for r in rows)
    summary = json.loads((out / "summary.json").read_text())
    assert summary["status"] == "ok"
    assert summary["config"]["W_over_lambda"] == 5.5
    names = {c["name"] for c in summary["invariants"]}
    assert len(summary["points"]) == 7 and len(names) >= 5
    assert "wall_time_s" in summary and "version" in summary


def test_rerun_is_byte_identical(tmp_path):
    cfg = write(tmp_path, SMALL)
    for d in ("a", "b"):
        assert main(["solve", "--config", cfg, "--output-dir", str(tmp_path / d), "--threads", "2"]) == 0
    assert (tmp_path / "a/spectrum.csv").read_bytes() == (tmp_path / "b/spectrum.csv").read_bytes()


def test_grazing_mode_surfaces_in_summary(tmp_path):
    cfg = write(tmp_path, SMALL.replace("W_over_lambda = 5.5", "W_over_lambda = 1.0"))
    assert load_config(cfg).W_over_lambda == 1.0
    out = tmp_path / "out"
    assert main(["solve", "--config", cfg, "--output-dir", str(out)]) == 1
    summary = json.loads((out / "summary.json").read_text())
    assert summary["status"] == "failed" and "GrazingMode" in summary["error"]


def test_partial_failure_exit_code(tmp_path):
    cfg = write(tmp_path, SMALL.replace("L_over_ell = 1.0", "L_over_ell = 5.0") + "max_iter = 3\n")
    out = tmp_path / "out"
    assert main(["solve", "--config", cfg, "--output-dir", str(out)]) == 2
    summary = json.loads((out / "summary.json").read_text())
    assert summary["status"] == "partial"
    assert all(p["error"].startswith("NoConvergence") for p in summary["points"])


def test_quasiballistic_mode(tmp_path):
    cfg = write(tmp_path, SMALL.replace("waveguide", "quasiballistic", 1))
    out = tmp_path / "out"
    assert main(["solve", "--config", cfg, "--output-dir", str(out)]) == 0
    assert len((out / "spectrum.csv").read_text().splitlines()) == 8


def test_saddle1d_mode(tmp_path):
    cfg = write(tmp_path, "mode = saddle1d\nL_over_ell = 5\nL_over_lambda = 20\n")
    out = tmp_path / "out"
    assert main(["solve", "--config", cfg, "--output-dir", str(out)]) == 0
    lines = (out / "qfield.csv").read_text().splitlines()
    assert lines[0].startswith("x_over_lambda,Q11_re")
    summary = json.loads((out / "summary.json").read_text())
    assert 0 <= summary["oscillation_metric"] < 1e-3


def test_invariants_command(tmp_path, capsys):
    assert main(["invariants", "--config", write(tmp_path, SMALL)]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out


def test_cutoff_modes_dropped_by_config(tmp_path):
    text = SMALL.replace("W_over_lambda = 5.5", "W_over_lambda = 5.0")
    out = tmp_path / "out"
    assert main(["solve", "--config", write(tmp_path, text), "--output-dir", str(out)]) == 1
    cfg = write(tmp_path, text + "drop_cutoff_modes = true\n", "drop.cfg")
    assert main(["solve", "--config", cfg, "--output-dir", str(out)]) == 0
