"""CLI commands, exit codes, and emitted files."""

import json

import pytest

from bayesdrive.cli import (EXIT_CONFIG, EXIT_OK, EXIT_VERIFY,
                            _parse_overrides, main)


FAST = ["--iters", "300", "--set", "steps=2"]


class TestExitCodes:
    def test_unknown_scenario_is_config_error(self, capsys):
        code = main(["run", "--case", "I", "--scenario", "Z"])
        assert code == EXIT_CONFIG
        assert "Z" in capsys.readouterr().err

    def test_unknown_case_is_config_error(self):
        assert main(["run", "--case", "/no/file.yaml"]) == EXIT_CONFIG

    def test_bad_flag_is_config_error(self):
        assert main(["run", "--nonsense"]) == EXIT_CONFIG

    def test_bad_override_is_config_error(self):
        assert main(["run", "--set", "bogus_key=3"]) == EXIT_CONFIG
        assert main(["run", "--set", "malformed"]) == EXIT_CONFIG


class TestRun:
    def test_writes_outputs(self, tmp_path):
        out = tmp_path / "o"
        code = main(["run", "--case", "I", "--scenario", "A",
                     "--out", str(out)] + FAST)
        assert code == EXIT_OK
        trace = json.loads((out / "trace.json").read_text())
        assert trace["schema_version"] == 1
        assert len(trace["steps"]) == 2
        metrics = json.loads((out / "metrics.json").read_text())
        assert metrics["runs"] == 1
        csv = (out / "trace.csv").read_text().splitlines()
        assert csv[0] == "# schema_version=1"
        assert csv[1].startswith("t,player,x,y")

    def test_repeat_run_byte_identical(self, tmp_path):
        args = ["run", "--case", "I", "--scenario", "B",
                "--seed", "5"] + FAST
        main(args + ["--out", str(tmp_path / "a")])
        main(args + ["--out", str(tmp_path / "b")])
        assert (tmp_path / "a/trace.json").read_bytes() == \
            (tmp_path / "b/trace.json").read_bytes()

    def test_replan_flag(self, tmp_path):
        out = tmp_path / "o"
        code = main(["run", "--case", "I", "--scenario", "A",
                     "--replan", "0.5", "--out", str(out)] + FAST)
        assert code == EXIT_OK
        trace = json.loads((out / "trace.json").read_text())
        assert trace["replan_interval"] == 0.5


class TestSweep:
    def test_case1_sweep_csv(self, tmp_path):
        out = tmp_path / "o"
        code = main(["sweep", "--case", "I", "--repeats", "1",
                     "--mode", "bayes", "--out", str(out)] + FAST)
        assert code == EXIT_OK
        lines = (out / "sweep.csv").read_text().splitlines()
        assert lines[0] == "# schema_version=1"
        assert lines[1].startswith("mode,scenario,runs,failures")
        assert len(lines) == 2 + 4  # four scenarios, one mode


class TestBench:
    def test_bench_rows(self, tmp_path, monkeypatch):
        import bayesdrive.cli as cli

        monkeypatch.setattr(cli, "BENCH_BUDGETS", (200,))
        out = tmp_path / "o"
        code = main(["bench", "--case", "I", "--scenario", "A",
                     "--out", str(out)])
        assert code == EXIT_OK
        lines = (out / "bench.csv").read_text().splitlines()
        methods = [ln.split(",")[1] for ln in lines[2:]]
        assert "proposed" in methods and "baseline" in methods
        assert "python" in methods and "compiled" in methods


class TestVerify:
    def test_smoke_scale_passes(self):
        assert main(["verify", "--scale", "0.05"]) == EXIT_OK

    def test_failure_exit_code(self, monkeypatch):
        from bayesdrive import verify as v

        def failing(scale=1.0):
            return [v.CheckResult(name="x", passed=False, detail="d")]

        monkeypatch.setattr(v, "run_all", failing)
        assert main(["verify"]) == EXIT_VERIFY


class TestOverrideParsing:
    def test_parses_values(self):
        got = _parse_overrides(["w_s=1000", "obs_v_std=null", "steps=3"])
        assert got == {"w_s": 1000, "obs_v_std": None, "steps": 3}
