import json
import subprocess
import sys

import pytest

from waveguide_nls.cli import main

CONFIG = """
name = "{name}"
dt = {dt}
t_end = {t_end}
orders = [0, 2]
output_dir = "runs/{name}"

[domain]
half_length_pi = 1
nx = 16
ny = 16

[initial]
family = "random_box"
seed = 1
[initial.params]
amplitude = {amplitude}
K = 2
"""


def write_config(directory, name="demo", dt=0.02, t_end=2.0, amplitude=0.2):
    p = directory / f"{name}.toml"
    p.write_text(CONFIG.format(name=name, dt=dt, t_end=t_end, amplitude=amplitude))
    return p


class TestExitCodes:
    def test_usage_error(self, capsys):
        assert main([]) == 2
        assert main(["verify", "--estimate", "nope"]) == 2
        assert main(["verify", "--estimate", "strichartz", "--trials", "0"]) == 2

    def test_simulate_ok(self, tmp_path, capsys):
        cfg = write_config(tmp_path)
        assert main(["simulate", "--config", str(cfg)]) == 0
        assert (tmp_path / "runs/demo/summary.json").exists()
        assert "demo" in capsys.readouterr().out

    def test_simulate_output_override(self, tmp_path, capsys):
        cfg = write_config(tmp_path)
        assert main(["simulate", "--config", str(cfg), "--output", str(tmp_path / "elsewhere")]) == 0
        assert (tmp_path / "elsewhere/summary.json").exists()

    def test_simulate_parameter_error(self, tmp_path, capsys):
        assert main(["simulate", "--config", str(tmp_path / "missing.toml")]) == 2
        bad = write_config(tmp_path, t_end=0.5)
        assert main(["simulate", "--config", str(bad)]) == 2
        assert "error" in capsys.readouterr().err

    def test_simulate_blowup(self, tmp_path, capsys):
        cfg = write_config(tmp_path, name="boom", dt=0.1, t_end=1.0, amplitude=20.0)
        assert main(["simulate", "--config", str(cfg)]) == 3
        assert "blow-up" in capsys.readouterr().err

    def test_analyze(self, tmp_path, capsys):
        cfg = write_config(tmp_path)
        main(["simulate", "--config", str(cfg)])
        run = tmp_path / "runs/demo"
        assert main(["analyze", "--run", str(run)]) == 0
        assert "PASS mass_drift" in capsys.readouterr().out
        # tighten the tolerance past the measured drift: the same run now fails its check
        doc = json.loads((run / "config.json").read_text())
        doc["mass_tolerance"] = 1e-30
        (run / "config.json").write_text(json.dumps(doc))
        assert main(["analyze", "--run", str(run)]) == 4
        assert main(["analyze", "--run", str(tmp_path)]) == 2

    def test_sweep(self, tmp_path, capsys):
        write_config(tmp_path, "one")
        write_config(tmp_path, "two", dt=0.01)
        assert main(["sweep", "--config-dir", str(tmp_path)]) == 0
        assert (tmp_path / "sweep/sweep_table.csv").exists()
        assert main(["sweep", "--config-dir", str(tmp_path)]) == 0
        assert capsys.readouterr().out.count("skipped") == 2

    def test_sweep_blowup(self, tmp_path, capsys):
        write_config(tmp_path, "boom", dt=0.1, t_end=1.0, amplitude=20.0)
        assert main(["sweep", "--config-dir", str(tmp_path)]) == 3

    def test_sweep_empty_dir(self, tmp_path, capsys):
        assert main(["sweep", "--config-dir", str(tmp_path)]) == 2


class TestVerify:
    @pytest.mark.parametrize("estimate,extra", [
        ("strichartz", ["--N", "2", "4"]),
        ("lemma25", ["--N", "2", "4"]),
        ("interpolation", ["--N", "2"]),
        ("bilinear", ["--N", "2", "--N2", "4"]),
        ("trilinear", ["--N", "2", "4", "--s", "1.0", "--b", "0.6", "--bprime", "0.6"]),
    ])
    def test_json_deterministic(self, tmp_path, capsys, estimate, extra):
        args = ["verify", "--estimate", estimate, "--trials", "2", "--seed", "5"] + extra
        assert main(args + ["--output", str(tmp_path / "a.json")]) == 0
        assert main(args + ["--output", str(tmp_path / "b.json")]) == 0
        a = (tmp_path / "a.json").read_text()
        assert a == (tmp_path / "b.json").read_text()
        doc = json.loads(a)
        assert doc["estimate"] == estimate
        assert doc["seeds"][:2] == [5, 6]
        assert doc["summary"]["count"] == len(doc["trials"])

    def test_stdout(self, capsys):
        assert main(["verify", "--estimate", "lemma25", "--trials", "1", "--N", "2"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["parameters"]["b2"] == 0.3

    def test_parameter_errors(self, capsys):
        assert main(["verify", "--estimate", "lemma25", "--b2", "0.2", "--N", "2"]) == 2
        assert main(["verify", "--estimate", "bilinear", "--N", "2", "4", "--N2", "1", "2", "3"]) == 2
        assert main(["verify", "--estimate", "strichartz", "--N", "500"]) == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "waveguide_nls", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and "0.1.0" in out.stdout
