import json
import math

import pytest

from fwbesov import cli
from fwbesov.errors import ConfigError
from fwbesov.experiments import (
    ExperimentConfig,
    Report,
    fit_rate,
    run_appendix_bounds,
    run_error_decay,
    run_nonuniform,
    solve_family,
    write_report,
)

SMALL = dict(
    N=256, n_list=[4, 8, 16, 32], dt=1e-2, solver_n_max=32,
    fit_n_min=4, separation_n=32, separation_ref_n=8,
)


class TestConfig:
    def test_defaults(self):
        c = ExperimentConfig()
        assert c.theta == pytest.approx(2 / 7)
        assert c.solver_ns == (16, 32, 64, 128, 256)
        assert c.solver_config().n_steps == 1000

    @pytest.mark.parametrize(
        "bad",
        [
            dict(s=2.4),
            dict(gamma=2.0),
            dict(gamma=1.4),
            dict(delta=3.0),
            dict(delta=4.0),
            dict(p=0.5),
            dict(N=100, n_list=[4, 8, 16, 32], solver_n_max=32, separation_n=32, separation_ref_n=8),
            dict(times=[0.25, 0.5]),
            dict(decay_time=0.3),
            dict(n_list=[16, 32, 64]),
            dict(separation_n=512),
        ],
    )
    def test_window_rejected(self, bad):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict(bad)

    def test_unknown_field(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({"bogus": 1})

    def test_inf_round_trip(self, tmp_path):
        c = ExperimentConfig.from_dict({"p": "inf", "s": 3.0})
        assert c.p == math.inf
        path = tmp_path / "c.json"
        path.write_text(json.dumps(c.as_dict()))
        assert ExperimentConfig.from_json(path) == c

    def test_bad_json(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text("[1, 2]")
        with pytest.raises(ConfigError):
            ExperimentConfig.from_json(path)


class TestFitRate:
    def test_exact_power(self):
        ns = [16, 32, 64, 128]
        fit = fit_rate(ns, [3.0 * n**-1.5 for n in ns])
        assert fit.slope == pytest.approx(-1.5)
        assert fit.intercept == pytest.approx(math.log(3.0))
        assert fit.r_squared == 1.0

    def test_needs_four_points(self):
        with pytest.raises(ValueError):
            fit_rate([1, 2, 3], [1, 2, 3])

    def test_positive_values(self):
        with pytest.raises(ValueError):
            fit_rate([1, 2, 3, 4], [1, 0, 3, 4])


class TestReport:
    def test_exit_codes(self):
        r = Report("x", ExperimentConfig())
        r.check("a", True, 0.0, 1.0)
        assert r.exit_code == 0
        r.check("b", False, 2.0, 1.0)
        assert r.exit_code == 1
        r.blowups.append({"n": 1, "omega": 1, "time": 0.1})
        assert r.exit_code == 3

    def test_write_and_merge(self, tmp_path):
        cfg = ExperimentConfig()
        a = run_appendix_bounds(cfg)
        write_report(a, tmp_path)
        b = Report("other", cfg, ("k",), [{"k": 1.5}])
        write_report(b, tmp_path)
        data = json.loads((tmp_path / "report.json").read_text())
        assert set(data["experiments"]) == {"appendix_bounds", "other"}
        assert data["experiments"]["appendix_bounds"]["config"]["s"] == 3.0
        assert "version" in data
        assert (tmp_path / "other.csv").read_text() == "k\n1.5\n"

    def test_csv_deterministic(self, tmp_path):
        cfg = ExperimentConfig()
        write_report(run_appendix_bounds(cfg), tmp_path / "a")
        write_report(run_appendix_bounds(cfg), tmp_path / "b")
        assert (tmp_path / "a" / "appendix_bounds.csv").read_bytes() == (
            tmp_path / "b" / "appendix_bounds.csv"
        ).read_bytes()


@pytest.fixture(scope="module")
def small():
    cfg = ExperimentConfig.from_dict(SMALL)
    return cfg, solve_family(cfg)


class TestSmallRuns:
    def test_family_complete(self, small):
        cfg, trajs = small
        assert set(trajs) == {(n, w) for n in cfg.solver_ns for w in (1, -1)}
        assert all(t.completed for t in trajs.values())

    def test_nonuniform_rows(self, small):
        cfg, trajs = small
        rep = run_nonuniform(cfg, trajs)
        assert len(rep.rows) == len(cfg.solver_ns) * len(cfg.times)
        assert rep.checks["t0_matches_initial"]["passed"]
        assert rep.checks["initial_slope"]["passed"]

    def test_error_decay_rows(self, small):
        cfg, trajs = small
        rep = run_error_decay(cfg, trajs)
        assert rep.checks["zero_initial_error"]["passed"]
        assert "err_gamma" in rep.fits


class TestCli:
    def test_appendix_exit_zero(self, tmp_path, capsys):
        assert cli.main(["appendix-bounds", "--out", str(tmp_path)]) == 0
        assert "PASS appendix_bounds.bracket" in capsys.readouterr().out
        assert (tmp_path / "appendix_bounds.csv").exists()

    def test_bad_config_exit_two(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"s": 2.0}))
        assert cli.main(["nonuniform", "--config", str(path), "--out", str(tmp_path)]) == 2

    def test_failed_check_exit_one(self, tmp_path, monkeypatch):
        def failing(config):
            r = Report("fake", config, ("a",), [{"a": 1}])
            r.check("c", False, 1.0, 0.0)
            return r

        monkeypatch.setitem(cli.EXPERIMENTS, "nonuniform", failing)
        assert cli.main(["nonuniform", "--out", str(tmp_path)]) == 1

    def test_blowup_exit_three(self, tmp_path, monkeypatch):
        def blown(config):
            r = Report("fake", config, ("a",), [{"a": 1}])
            r.check("c", True, 0.0, 1.0)
            r.blowups.append({"n": 16, "omega": 1, "time": 0.3})
            return r

        monkeypatch.setitem(cli.EXPERIMENTS, "error-decay", blown)
        assert cli.main(["error-decay", "--out", str(tmp_path)]) == 3

    def test_seed_override(self, tmp_path):
        args = cli.build_parser().parse_args(["properties", "--seed", "5", "--out", str(tmp_path)])
        cfg = cli.resolve_config(args)
        assert cfg.seed == 5 and cfg.output == str(tmp_path)
