import csv

import pytest

from popsize_lab import cli, experiments


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, dict(line.split("=", 1) for line in out.splitlines()
                      if "=" in line)


class TestTheory:
    def test_onemax_values(self, capsys):
        code, kv = run_cli(capsys, "theory", "--problem", "onemax",
                           "--size", "100")
        assert code == cli.EXIT_OK
        assert set(kv) == {"d", "sigma_bb", "p_decide", "n_static",
                           "gr_success"}
        assert float(kv["d"]) == 1.0
        assert float(kv["sigma_bb"]) == 0.5
        assert int(kv["n_static"]) == 28
        assert 0.5 < float(kv["p_decide"]) < 1.0
        assert float(kv["gr_success"]) >= 0.94

    def test_trap4_values(self, capsys):
        code, kv = run_cli(capsys, "theory", "--problem", "trap4",
                           "--size", "20")
        assert code == cli.EXIT_OK
        assert int(kv["n_static"]) == 206
        assert float(kv["sigma_bb"]) == pytest.approx(1.1022, abs=1e-4)

    def test_custom_problem_file(self, capsys, tmp_path):
        path = tmp_path / "prob.txt"
        path.write_text("10 2\n3\n0.0 1.0 1.0 3.0\n")
        code, kv = run_cli(capsys, "theory", "--problem", f"custom:{path}")
        assert code == cli.EXIT_OK
        assert float(kv["d"]) == 2.0


class TestRun:
    def test_writes_cells_csv(self, capsys, tmp_path):
        code, kv = run_cli(capsys, "run", "--problem", "onemax", "--size", "30",
                           "--strategy", "varfit-supply", "--runs", "4",
                           "--seed", "11", "--out", str(tmp_path))
        assert code == cli.EXIT_OK
        assert int(kv["runs"]) == 4
        with open(tmp_path / "cells.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 4
        assert rows[0]["strategy"] == "varfit-supply"
        assert rows[0]["problem"] == "onemax"


class TestBisect:
    def test_writes_bisection_csv(self, capsys, tmp_path):
        code, kv = run_cli(capsys, "bisect", "--problem", "onemax",
                           "--size", "20", "--target", "0.9",
                           "--probe-runs", "3", "--repeats", "2",
                           "--seed", "5", "--out", str(tmp_path))
        assert code == cli.EXIT_OK
        assert float(kv["mean_min_popsize"]) >= 4
        with open(tmp_path / "bisection.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 2
        assert float(rows[0]["target_quality"]) == 0.9

    def test_unattainable_target_exits_3(self, capsys, tmp_path, monkeypatch):
        def refuse(*a, **kw):
            raise experiments.UnattainableTargetError("no size suffices")

        monkeypatch.setattr(cli, "bisect_min_popsize", refuse)
        code = cli.main(["bisect", "--problem", "onemax", "--size", "20",
                         "--target", "1.0", "--seed", "5",
                         "--out", str(tmp_path)])
        assert code == cli.EXIT_UNATTAINABLE
        assert "error:" in capsys.readouterr().err


class TestUsageErrors:
    def test_missing_subcommand(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main([])
        assert exc.value.code == cli.EXIT_USAGE

    def test_unknown_strategy(self, capsys, tmp_path):
        with pytest.raises(SystemExit) as exc:
            cli.main(["run", "--problem", "onemax", "--size", "10",
                      "--strategy", "annealed", "--seed", "1",
                      "--out", str(tmp_path)])
        assert exc.value.code == cli.EXIT_USAGE

    def test_missing_required_seed(self, capsys, tmp_path):
        with pytest.raises(SystemExit) as exc:
            cli.main(["run", "--problem", "onemax", "--size", "10",
                      "--out", str(tmp_path)])
        assert exc.value.code == cli.EXIT_USAGE

    def test_builtin_without_size(self, capsys):
        with pytest.raises(SystemExit):
            cli.main(["theory", "--problem", "onemax"])


def test_console_script_installed():
    import shutil
    assert shutil.which("popsize-lab") is not None
