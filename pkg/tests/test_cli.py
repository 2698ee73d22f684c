import json
import math
import shutil
import subprocess

import numpy as np
import pytest

from triflow.cli import main
from triflow.config import KEY_MAP, RunConfig, config_from_mapping
from triflow.correlations import CorrelationReport
from triflow.linalg import DensityOperator
from triflow.nonmarkov import NMParams, nm_equilibrium, nm_log_analytic, nm_numeric, nm_surface
from triflow.output import read_table, write_state_file
from triflow.scenarios import DEPHASE_COLUMNS, ScenarioConfig, scenario_bytes

FAST = ["--set", "pointsPerDecade=30", "--set", "tMax=100"]


def ghz_state():
    vec = np.zeros(8, dtype=complex)
    vec[0] = vec[7] = 1 / math.sqrt(2)
    return DensityOperator(matrix=np.outer(vec, vec.conj()), dims=(2, 2, 2))


class TestDephase:
    def test_writes_a_rerunnable_table(self, tmp_path):
        path = str(tmp_path / "run.csv")
        assert main(["dephase", *FAST, "--out", path]) == 0
        columns, meta = read_table(path)
        assert list(columns) == list(DEPHASE_COLUMNS)
        assert meta["command"] == "dephase"
        assert "version" in meta
        assert meta["N"] == "10"
        assert meta["deltaWidth"] == "x10"
        assert meta["pointsPerDecade"] == "30"
        assert set(KEY_MAP) <= set(meta)

    def test_set_overrides_beat_the_config_file(self, tmp_path):
        cfg_file = tmp_path / "run.toml"
        cfg_file.write_text("beta = 0.5\nc1 = -0.6\nc2 = -0.6\nc3 = -0.5\n")
        path = str(tmp_path / "run.csv")
        rc = main([
            "dephase", "--config", str(cfg_file), "--set", "beta=0.25",
            *FAST, "--out", path,
        ])
        assert rc == 0
        _, meta = read_table(path)
        assert meta["beta"] == "0.25"
        assert meta["c3"] == "-0.5"

    def test_metadata_reproduces_the_run(self, tmp_path):
        first = tmp_path / "a.csv"
        rc = main([
            "dephase", "--set", "beta=0.37", "--set", "N=6", "--set", "deltaWidth=x3",
            "--set", "tMax=50", "--set", "pointsPerDecade=20", "--out", str(first),
        ])
        assert rc == 0
        _, meta = read_table(str(first))
        replay = [f"{key}={meta[key]}" for key in KEY_MAP]
        second = tmp_path / "b.csv"
        rc = main(["dephase", *sum((["--set", kv] for kv in replay), []), "--out", str(second)])
        assert rc == 0
        assert first.read_bytes() == second.read_bytes()


class TestNm:
    def test_json_matches_the_library(self, tmp_path):
        path = tmp_path / "nm.json"
        args = ["--set", "N=4", "--set", "beta=5", "--set", "deltaWidth=4"]
        assert main(["nm", *args, "--t", "200", "--out", str(path)]) == 0
        payload = json.loads(path.read_bytes())
        cfg = config_from_mapping({"N": 4, "beta": 5, "deltaWidth": 4})
        params = NMParams(bath=cfg.bath(), t_final=200.0)
        assert payload["lnNmAnalytic"] == nm_log_analytic(params)
        assert payload["nmNumeric"] == nm_numeric(params)
        assert payload["nmEquilibrium"] == nm_equilibrium(params)


class TestNmSurface:
    def test_grid_round_trip(self, tmp_path):
        path = str(tmp_path / "surface.csv")
        rc = main([
            "nm-surface", "--beta", "0.5:2:4", "--modes", "2:4",
            "--t", "100", "--out", path,
        ])
        assert rc == 0
        columns, meta = read_table(path)
        assert list(columns) == ["N", "0.5", "1", "1.5", "2"]
        assert np.array_equal(columns["N"], [2.0, 3.0, 4.0])
        assert meta["scenario"] == "fig3"
        expected = nm_surface(np.linspace(0.5, 2.0, 4), [2, 3, 4], t=100.0)
        for j, name in enumerate(["0.5", "1", "1.5", "2"]):
            assert np.array_equal(columns[name], expected[:, j])

    def test_thread_cap_is_invisible_in_the_output(self, tmp_path, monkeypatch):
        out = []
        for threads in ("1", "2"):
            monkeypatch.setenv("TRIFLOW_THREADS", threads)
            path = tmp_path / f"s{threads}.csv"
            rc = main(["nm-surface", "--beta", "0.2:3:5", "--modes", "1:6", "--out", str(path)])
            assert rc == 0
            out.append(path.read_bytes())
        assert out[0] == out[1]


class TestAppendix:
    def test_closed_forms_track_the_numerics(self, tmp_path):
        path = str(tmp_path / "appendix.csv")
        assert main(["appendix", "--grid", "21", "--out", path]) == 0
        columns, meta = read_table(path)
        assert list(columns) == [
            "x", "I3_closed", "frakI_closed", "I3_numeric", "frakI_numeric",
            "bound_min_pairwise",
        ]
        assert meta["gridPoints"] == "21"
        assert np.max(np.abs(columns["I3_closed"] - columns["I3_numeric"])) < 1e-9
        assert np.max(np.abs(columns["frakI_closed"] - columns["frakI_numeric"])) < 1e-9
        decomposition = columns["I3_closed"] - columns["frakI_closed"]
        assert np.max(np.abs(decomposition - columns["bound_min_pairwise"])) < 1e-9


class TestReport:
    def test_tripartite_state(self, tmp_path, capsysbinary):
        state_path = str(tmp_path / "ghz.json")
        write_state_file(state_path, ghz_state())
        assert main(["report", state_path]) == 0
        payload = json.loads(capsysbinary.readouterr().out)
        assert list(payload) == list(CorrelationReport.__dataclass_fields__)
        assert abs(payload["interaction"]) < 1e-12
        assert payload["monogamous"] is True

    def test_pair_state_is_refused(self, tmp_path, capsys):
        state_path = str(tmp_path / "pair.json")
        write_state_file(state_path, DensityOperator(matrix=np.eye(4) / 4.0, dims=(2, 2)))
        assert main(["report", state_path]) == 2
        assert capsys.readouterr().err.startswith("triflow:")

    def test_missing_file_is_an_error(self, tmp_path, capsys):
        assert main(["report", str(tmp_path / "absent.json")]) == 2
        assert "triflow:" in capsys.readouterr().err


class TestScenario:
    def test_default_filename_and_markers(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        rc = main(["scenario", "fig2b", "--set", "pointsPerDecade=10", "--set", "tMax=10"])
        assert rc == 0
        columns, meta = read_table(str(tmp_path / "fig2b.csv"))
        assert meta["scenario"] == "fig2b"
        assert list(columns) == list(DEPHASE_COLUMNS) + ["tD", "tPB"]
        assert np.ptp(columns["tD"]) == 0.0
        assert float(meta["tPB"]) == columns["tPB"][0]

    def test_no_pointer_marker_when_undefined(self, tmp_path):
        # equal initial coefficients leave no pointer instant to mark
        path = str(tmp_path / "a.csv")
        rc = main(["scenario", "fig2a", "--set", "pointsPerDecade=10",
                   "--set", "tMax=10", "--out", path])
        assert rc == 0
        columns, meta = read_table(path)
        assert "tPB" not in columns
        assert "tPB" not in meta
        assert "tD" in columns

    def test_json_format(self, tmp_path):
        path = tmp_path / "fig1a.json"
        rc = main(["scenario", "fig1a", "--set", "pointsPerDecade=5",
                   "--set", "tMax=1", "--format", "json", "--out", str(path)])
        assert rc == 0
        payload = json.loads(path.read_bytes())
        assert payload["metadata"]["scenario"] == "fig1a"
        assert payload["metadata"]["beta"] == "1"
        assert set(payload["columns"]) >= set(DEPHASE_COLUMNS)
        assert isinstance(payload["columns"]["t"][0], float)

    def test_runs_are_byte_deterministic(self, tmp_path):
        paths = [str(tmp_path / name) for name in ("x.csv", "y.csv")]
        for path in paths:
            rc = main(["scenario", "fig1e", "--set", "pointsPerDecade=8",
                       "--set", "tMax=10", "--out", path])
            assert rc == 0
        with open(paths[0], "rb") as a, open(paths[1], "rb") as b:
            assert a.read() == b.read()

    def test_verify_scenario_gate(self, tmp_path):
        path = tmp_path / "verify.json"
        assert main(["scenario", "verify", "--out", str(path)]) == 0
        payload = json.loads(path.read_bytes())
        assert payload["passed"] is True
        assert payload["epsTrunc"] == 1e-12

    def test_config_objects_validate_names_and_formats(self):
        with pytest.raises(ValueError, match="unknown scenario"):
            ScenarioConfig(name="fig9")
        with pytest.raises(ValueError, match="format"):
            ScenarioConfig(name="fig1a", fmt="yaml")
        with pytest.raises(ValueError, match="unknown scenario"):
            scenario_bytes("fig9", {})


class TestErrors:
    def test_bad_override_key(self, tmp_path, capsys):
        rc = main(["dephase", "--set", "sigma=1", "--out", str(tmp_path / "x.csv")])
        assert rc == 2
        assert capsys.readouterr().err.startswith("triflow:")

    def test_malformed_override(self, capsys):
        assert main(["nm", "--set", "beta"]) == 2
        assert "key=value" in capsys.readouterr().err

    def test_unknown_scenario_name_is_a_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["scenario", "fig9"])
        assert exc.value.code == 2

    def test_stdout_default(self, capsysbinary):
        assert main(["appendix", "--grid", "5"]) == 0
        out = capsysbinary.readouterr().out
        assert out.startswith(b"# command=appendix")
        assert out.endswith(b"\n")


class TestInstalledEntryPoint:
    def test_console_script(self):
        binary = shutil.which("triflow")
        assert binary, "console script should be on PATH after installation"
        done = subprocess.run(
            [binary, "appendix", "--grid", "3", "--out", "-"],
            capture_output=True, timeout=120,
        )
        assert done.returncode == 0
        assert done.stdout.startswith(b"# command=appendix")
        bare = subprocess.run([binary], capture_output=True, timeout=60)
        assert bare.returncode == 2
