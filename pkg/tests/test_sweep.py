import csv
import json
import math
from dataclasses import replace

import pytest

from waveguide_nls.errors import ParameterError
from waveguide_nls.growth import Cadence, ExperimentConfig, InitialSpec, load_config_dir, run_experiment, sweep
from waveguide_nls.growth.sweep import run_dir_for
from waveguide_nls.spectral import DomainSpec

DOMAIN = DomainSpec(math.pi, 16, 16)


def cfg(name="a", seed=1, **kw):
    base = dict(domain=DOMAIN, dt=0.02, t_end=12.0, name=name, orders=(0, 1.5, 2, 3),
                initial=InitialSpec("random_box", seed, {"amplitude": 0.2, "K": 2}),
                cadence=Cadence(diagnostics=10))
    base.update(kw)
    return ExperimentConfig(**base)


def blowup_cfg():
    return cfg("boom", dt=0.1, t_end=1.0, initial=InitialSpec("random_box", 0, {"amplitude": 20.0, "K": 2}))


class TestSweep:
    def test_one_config_matches_run(self, tmp_path):
        c = cfg()
        res = sweep([c], tmp_path)
        rec = run_experiment(c, write=False)
        rows = {r["s"]: r for r in res.rows}
        assert res.statuses == {c.content_hash(): "completed"}
        assert set(rows) == {1.5, 2.0, 3.0}
        assert rows[2.0]["beta"] == rec.fits[2.0].beta
        assert rows[2.0]["max_C"] == rec.iteration[2.0].max
        assert (run_dir_for(c, tmp_path) / "summary.json").exists()

    def test_bound_column(self, tmp_path):
        res = sweep([cfg(t_end=1.0)], tmp_path)
        assert [r["bound"] for r in res.rows] == [1.0, 2.0, 4.0]
        assert [r["beta_limit"] for r in res.rows] == [1.5, 2.5, 4.5]

    def test_duplicate_skipped(self, tmp_path):
        res = sweep([cfg(t_end=1.0), cfg("other-name", t_end=1.0)], tmp_path)
        assert [r["status"] for r in res.rows[::3]] == ["completed", "duplicate"]
        assert len(list(tmp_path.glob("*-*"))) == 1

    def test_resume(self, tmp_path):
        sweep([cfg(t_end=1.0)], tmp_path)
        res = sweep([cfg(t_end=1.0), cfg(seed=2, t_end=1.0)], tmp_path)
        assert [r["status"] for r in res.rows[::3]] == ["skipped", "completed"]
        assert res.rows[0]["passed"] is True

    def test_failures_recorded(self, tmp_path):
        bad_band = cfg("band", t_end=1.0, initial=InitialSpec("plane_wave", 0, {"n": 7}))
        res = sweep([blowup_cfg(), bad_band, cfg(t_end=1.0)], tmp_path)
        status = {r["name"]: (r["status"], r["error"]) for r in res.rows}
        assert status["boom"][0] == "failed" and status["boom"][1].startswith("blowup")
        assert status["band"][0] == "failed" and status["band"][1].startswith("parameter")
        assert status["a"][0] == "completed"
        assert len(res.failed) == 2
        err = json.loads((run_dir_for(blowup_cfg(), tmp_path) / "error.json").read_text())
        assert err["kind"] == "blowup"

    def test_table_file(self, tmp_path):
        sweep([cfg(t_end=1.0)], tmp_path)
        with open(tmp_path / "sweep_table.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert [r["bound"] for r in rows] == ["1.0", "2.0", "4.0"]
        assert rows[0]["status"] == "completed"

    def test_parallel_matches_serial(self, tmp_path):
        configs = [cfg(seed=1, t_end=1.0), cfg("b", seed=2, t_end=1.0)]
        serial = sweep(configs, tmp_path / "s")
        parallel = sweep(configs, tmp_path / "p", workers=2)
        assert serial.rows == parallel.rows

    def test_errors(self, tmp_path):
        with pytest.raises(ParameterError):
            sweep([], tmp_path)
        with pytest.raises(ParameterError):
            sweep([cfg()], tmp_path, workers=0)
        with pytest.raises(ParameterError):
            load_config_dir(tmp_path)
