import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from captension.errors import (ConfigError, InsufficientPointsError,
                               NonpositiveValueError)
from captension.harness import (CSV_HEADER, ExperimentConfig, emit_csv,
                                emit_plot, fit_rate, main, measure_frequency,
                                oracle_compare, parse_csv, run_single)
from captension.harness.run import RunRecord


def make_record(k, val):
    times = (0.0, 0.5)
    return RunRecord(k=k, times=times, sup_nabla_f_L2=val,
                     sup_nabla_f_H1=2.0 * val, sup_eta_gap_H1=0.1 * val,
                     sup_etadot_gap_H1=0.2 * val, energy_drift=1e-9,
                     converged=True,
                     series={q: (val, val) for q in
                             ("nabla_f_L2", "nabla_f_H1", "eta_gap_H1",
                              "etadot_gap_H1", "energy_drift")})


class TestConfig:
    def test_defaults_are_reference_scale(self):
        cfg = ExperimentConfig()
        assert (cfg.n_theta, cfg.n_r, cfg.T) == (32, 16, 0.1)

    def test_file_parsing(self, tmp_path):
        p = tmp_path / "exp.cfg"
        p.write_text(
            "# capillary sweep\n"
            "n_theta = 16\n"
            "t_final = 0.05   # alias for T\n"
            "k_list = 50, 100\n"
            "amplitude = 0.01\n"
            "\n")
        cfg = ExperimentConfig.from_file(p)
        assert cfg.n_theta == 16
        assert cfg.T == 0.05
        assert cfg.k_list == (50.0, 100.0)
        assert cfg.amplitude == 0.01

    def test_unknown_key_rejected(self, tmp_path):
        p = tmp_path / "bad.cfg"
        p.write_text("n_thetas = 16\n")
        with pytest.raises(ConfigError):
            ExperimentConfig.from_file(p)

    def test_bad_value_rejected(self, tmp_path):
        p = tmp_path / "bad.cfg"
        p.write_text("n_theta = sixteen\n")
        with pytest.raises(ConfigError):
            ExperimentConfig.from_file(p)

    def test_missing_file_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_file(tmp_path / "absent.cfg")

    @pytest.mark.parametrize("kwargs", [
        dict(n_theta=7), dict(n_theta=10, n_r=4), dict(T=-1.0),
        dict(k_list=()), dict(k_list=(100.0, 100.0)), dict(k_list=(-5.0,)),
        dict(n_outputs=1), dict(dt_fixed=0.0),
    ])
    def test_validation(self, kwargs):
        with pytest.raises(ConfigError):
            ExperimentConfig(**kwargs)

    def test_overrides_skip_none(self):
        cfg = ExperimentConfig().with_overrides(n_theta=None, t_final=0.2)
        assert cfg.n_theta == 32
        assert cfg.T == 0.2


class TestRates:
    def test_cubic_decay(self):
        pts = [(k, 5.0 * k ** -3) for k in (100.0, 200.0, 400.0, 800.0)]
        slope, quality = fit_rate(pts)
        assert slope == pytest.approx(3.0, abs=1e-12)
        assert quality == pytest.approx(1.0, abs=1e-12)

    def test_constant_series(self):
        slope, quality = fit_rate([(k, 2.0) for k in (1.0, 2.0, 4.0)])
        assert slope == pytest.approx(0.0, abs=1e-12)
        assert quality == 1.0

    def test_too_few_points(self):
        with pytest.raises(InsufficientPointsError):
            fit_rate([(1.0, 1.0), (2.0, 0.5)])

    def test_nonpositive_values(self):
        with pytest.raises(NonpositiveValueError):
            fit_rate([(1.0, 1.0), (2.0, 0.0), (4.0, 0.25)])

    @given(st.floats(min_value=0.25, max_value=4.0),
           st.floats(min_value=0.1, max_value=10.0))
    @settings(max_examples=25, deadline=None)
    def test_exact_recovery(self, exponent, scale):
        pts = [(k, scale * k ** -exponent) for k in (10.0, 30.0, 90.0, 270.0)]
        slope, quality = fit_rate(pts)
        assert slope == pytest.approx(exponent, rel=1e-9)
        assert quality == pytest.approx(1.0, abs=1e-9)

    def test_frequency_of_pure_cosine(self):
        t = np.linspace(0.0, 1.0, 4001)
        omega = 48.9898
        assert measure_frequency(t, np.cos(omega * t)) == pytest.approx(
            omega, rel=1e-5)

    def test_frequency_needs_crossings(self):
        t = np.linspace(0.0, 1.0, 100)
        with pytest.raises(InsufficientPointsError):
            measure_frequency(t, np.ones_like(t))


class TestEmit:
    def test_csv_round_trip(self, tmp_path):
        rows = [make_record(100.0, 1.25e-7), make_record(200.0, 6.25e-8)]
        path = tmp_path / "sweep.csv"
        emit_csv(rows, path)
        text = path.read_text()
        assert text.splitlines()[0] == CSV_HEADER
        parsed = parse_csv(path)
        assert len(parsed) == 2
        assert parsed[0]["k"] == 100.0
        assert parsed[1]["sup_nabla_f_L2"] == 6.25e-8
        assert parsed[0]["converged"] is True

    def test_csv_keeps_full_precision(self, tmp_path):
        val = 1.0 / 3.0
        path = tmp_path / "one.csv"
        emit_csv([make_record(100.0, val)], path)
        assert parse_csv(path)[0]["sup_nabla_f_L2"] == val

    def test_empty_rows_give_header_only(self, tmp_path):
        path = tmp_path / "empty.csv"
        emit_csv([], path)
        assert path.read_text() == CSV_HEADER + "\n"

    def test_plot_shows_fitted_slope(self, tmp_path):
        pts = [(k, 5.0 * k ** -3) for k in (100.0, 200.0, 400.0, 800.0)]
        path = tmp_path / "decay.svg"
        emit_plot(pts, path, title="decay", slope=3.0, quality=0.999)
        svg = path.read_text()
        assert svg.startswith("<svg")
        assert "3.00" in svg
        assert "decay" in svg


def small_config(tmp_path, **kwargs):
    base = dict(n_theta=16, n_r=8, T=2e-3, n_outputs=3, dt_fixed=1e-3,
                k_list=(100.0,), amplitude=0.01, out_dir=str(tmp_path))
    base.update(kwargs)
    return ExperimentConfig(**base)


class TestRuns:
    def test_run_single_shapes(self, tmp_path):
        cfg = small_config(tmp_path)
        rec = run_single(cfg, 100.0)
        assert rec.converged
        assert len(rec.times) == cfg.n_outputs
        assert len(rec.series["nabla_f_L2"]) == cfg.n_outputs
        assert rec.sup_nabla_f_L2 == max(rec.series["nabla_f_L2"])
        assert rec.sup_nabla_f_H1 >= rec.sup_nabla_f_L2

    def test_oracle_compare_rows(self, tmp_path):
        cfg = small_config(tmp_path)
        rows = oracle_compare(cfg, k=100.0, t_final=1e-3, n_outputs=2)
        assert len(rows) == 2
        assert rows[0][0] == 0.0
        assert all(gap >= 0.0 for _, gap, _ in rows)


class TestCli:
    def test_unknown_flag_exits_3(self, capsys):
        assert main(["sweep", "--bogus"]) == 3
        assert "bogus" in capsys.readouterr().err

    def test_bad_config_exits_3(self, tmp_path, capsys):
        p = tmp_path / "bad.cfg"
        p.write_text("n_theta = 3\n")
        assert main(["run", "--config", str(p)]) == 3
        assert "n_theta" in capsys.readouterr().err

    def test_run_writes_series_csv(self, tmp_path, capsys):
        p = tmp_path / "tiny.cfg"
        p.write_text("n_theta = 16\nn_r = 8\nT = 2e-3\nn_outputs = 2\n"
                     "amplitude = 0.01\nk_list = 100\n"
                     f"out_dir = {tmp_path}\n")
        assert main(["run", "--config", str(p), "--k", "100"]) == 0
        out = tmp_path / "run_k100.csv"
        assert out.exists()
        header = out.read_text().splitlines()[0]
        assert header.startswith("time,")
        assert "drift" in capsys.readouterr().out

    def test_selftest_passes(self, capsys):
        assert main(["selftest"]) == 0
        out = capsys.readouterr().out
        assert "PASS" in out
        assert "FAIL" not in out
