import subprocess
import sys

import pytest

from descartes_lab.cli import main


def test_success(tmp_path, capsys):
    out = tmp_path / "z.csv"
    rc = main(["zero-scan", "--n", "4,8", "--trials", "10", "--dist", "multiset{1}", "--out", str(out)])
    assert rc == 0
    printed = capsys.readouterr().out.split()
    assert str(out) in printed
    assert (tmp_path / "z.png").exists() and (tmp_path / "z.gp").exists()


def test_no_plots(tmp_path):
    assert main(["ac-scan", "--n", "3,4", "--out", str(tmp_path / "a.csv"), "--no-plots"]) == 0
    assert not (tmp_path / "a.png").exists()


def test_invariant_failure_exits_one(tmp_path, capsys):
    cfg = tmp_path / "d.cfg"
    cfg.write_text("n_list = 12\ntol = 1e-2\n")
    rc = main(["density-scan", "--config", str(cfg), "--out", str(tmp_path / "d.csv"), "--no-plots"])
    assert rc == 1
    assert "FAIL" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["zero-scan", "--dist", "atom0{2}"],
    ["zero-scan", "--n", "8,4"],
    ["zero-scan", "--trials", "0"],
    ["zero-scan", "--config", "/nonexistent/file.cfg"],
    ["warp-scan"],
    ["ac-scan", "--n", "1"],
])
def test_config_errors_exit_two(argv, tmp_path):
    assert main(argv + ["--out", str(tmp_path / "x.csv")]) == 2


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("colour = red\n")
    assert main(["props", "--config", str(cfg), "--out", str(tmp_path / "x.csv")]) == 2


def test_console_script_entry(tmp_path):
    r = subprocess.run([sys.executable, "-m", "descartes_lab.cli", "density-scan", "--n", "2",
                        "--out", str(tmp_path / "d.csv"), "--no-plots"], capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    assert (tmp_path / "d.density_n2.csv").exists()
