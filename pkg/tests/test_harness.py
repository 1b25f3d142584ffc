import xml.etree.ElementTree as ET

import numpy as np
import pytest

from descentlab.gaussian import SplitNorms, noisy_risk, prescient_risk, random_selection_risk
from descentlab.harness import (
    CSV_HEADER,
    ExperimentConfig,
    ExperimentModel,
    RiskCurve,
    RiskPoint,
    _mc_summary,
    curve_to_csv,
    default_p_grid,
    load_config_file,
    render_svg,
    run_experiment,
    write_csv,
)
from descentlab.risk import DIVERGENT, finite_risk


def _cfg(**kw):
    base = dict(
        model=ExperimentModel.GAUSSIAN_RANDOM_T,
        n=8,
        D=20,
        p_grid=tuple(range(0, 21)),
        sigma=0.0,
        trials=0,
        master_seed=1729,
    )
    base.update(kw)
    return ExperimentConfig(**base)


class TestConfigValidation:
    def test_rejects_empty_grid(self):
        with pytest.raises(ValueError):
            _cfg(p_grid=())

    def test_rejects_unsorted_grid(self):
        with pytest.raises(ValueError):
            _cfg(p_grid=(3, 1, 2))

    def test_rejects_p_above_d(self):
        with pytest.raises(ValueError):
            _cfg(p_grid=(0, 25))

    def test_prescient_needs_no_d(self):
        cfg = _cfg(model=ExperimentModel.GAUSSIAN_PRESCIENT, D=None, p_grid=(0, 50, 3000))
        assert cfg.D is None

    def test_fourier_grid_below_n_rejected(self):
        with pytest.raises(ValueError):
            _cfg(model=ExperimentModel.FOURIER_FLAT, p_grid=(4, 10), trials=2)

    def test_fourier_needs_repeats(self):
        with pytest.raises(ValueError):
            _cfg(model=ExperimentModel.FOURIER_FLAT, p_grid=(8, 12), trials=0)

    def test_default_grids(self):
        assert default_p_grid(ExperimentModel.GAUSSIAN_RANDOM_T, 100, 40) == tuple(range(101))
        assert default_p_grid(ExperimentModel.GAUSSIAN_PRESCIENT, None, 40) == tuple(range(2001))
        assert default_p_grid(ExperimentModel.FOURIER_FLAT, 256, 64) == tuple(range(64, 257))
        assert default_p_grid(ExperimentModel.FOURIER_DECAY, 16, 4) == tuple(range(17))


class TestGaussianRandomTCurve:
    def test_theory_column_matches_formula(self):
        curve = run_experiment(_cfg(D=50, n=20, p_grid=tuple(range(51))))
        for pt in curve.points:
            expected = random_selection_risk(1.0, 50, 20, pt.p)
            assert (pt.theory.is_divergent and expected.is_divergent) or (
                pt.theory.value == pytest.approx(expected.value, rel=1e-9)
            )
            assert pt.mc_mean is None and pt.mc_stderr is None
            assert not pt.unstable

    def test_theory_only_uses_unit_beta_norm(self):
        curve = run_experiment(_cfg(p_grid=(0,)))
        assert curve.points[0].theory.value == pytest.approx(1.0, rel=1e-9)

    def test_mc_agrees_with_theory_on_stable_points(self):
        cfg = _cfg(D=30, n=10, p_grid=(0, 4, 6, 16, 24, 30), trials=400)
        curve = run_experiment(cfg)
        for pt in curve.points:
            assert pt.mc_mean is not None
            if pt.unstable or pt.theory.is_divergent:
                continue
            assert abs(pt.mc_mean - pt.theory.value) <= 4 * max(pt.mc_stderr, 1e-12)

    def test_noisy_theory_composition(self):
        cfg = _cfg(D=30, n=10, sigma=0.5, p_grid=(4, 20), trials=400)
        curve = run_experiment(cfg)
        for pt in curve.points:
            frac = pt.p / 30
            expected = noisy_risk(SplitNorms(frac, 1 - frac), 0.5, 10, pt.p)
            assert pt.theory.value == pytest.approx(expected.value, rel=1e-9)
            assert abs(pt.mc_mean - pt.theory.value) <= 4 * max(pt.mc_stderr, 1e-12)

    def test_unstable_band_flagged(self):
        cfg = _cfg(D=30, n=10, p_grid=tuple(range(31)), trials=5)
        curve = run_experiment(cfg)
        for pt in curve.points:
            assert pt.unstable == (abs(pt.p - 10) <= 2)

    def test_deterministic(self):
        cfg = _cfg(D=20, n=8, p_grid=(0, 5, 15, 20), trials=50)
        assert curve_to_csv(run_experiment(cfg)) == curve_to_csv(run_experiment(cfg))


class TestPrescientCurve:
    def test_matches_closed_form(self):
        cfg = _cfg(model=ExperimentModel.GAUSSIAN_PRESCIENT, D=None, n=40, p_grid=tuple(range(0, 200, 7)))
        curve = run_experiment(cfg)
        for pt in curve.points:
            expected = prescient_risk(pt.p, 40)
            assert (pt.theory.is_divergent and expected.is_divergent) or (
                pt.theory.value == pytest.approx(expected.value, rel=1e-12)
            )
            assert pt.mc_mean is None


class TestFourierCurves:
    def test_flat_has_theory_and_mc(self):
        cfg = _cfg(model=ExperimentModel.FOURIER_FLAT, D=32, n=8, p_grid=(8, 12, 16, 32), trials=4)
        curve = run_experiment(cfg)
        for pt in curve.points:
            assert pt.theory is not None
            assert pt.mc_mean is not None
        endpoint = curve.point(32)
        assert endpoint.theory.value == pytest.approx(1 - 8 / 32, rel=1e-9)

    def test_decay_has_no_theory(self):
        cfg = _cfg(model=ExperimentModel.FOURIER_DECAY, D=32, n=8, p_grid=(2, 8, 32), trials=4)
        curve = run_experiment(cfg)
        for pt in curve.points:
            assert pt.theory is None
            assert pt.mc_mean is not None

    def test_deterministic(self):
        cfg = _cfg(model=ExperimentModel.FOURIER_FLAT, D=32, n=8, p_grid=(8, 20, 32), trials=3)
        assert curve_to_csv(run_experiment(cfg)) == curve_to_csv(run_experiment(cfg))


class TestMcSummary:
    def test_plain_mean(self):
        mean, stderr = _mc_summary(np.array([1.0, 2.0, 3.0]), unstable=False)
        assert mean == pytest.approx(2.0)
        assert stderr == pytest.approx(np.std([1, 2, 3], ddof=1) / np.sqrt(3))

    def test_trimmed_mean_drops_tails(self):
        values = np.array([1.0] * 18 + [1e12, 1e13])
        trimmed, _ = _mc_summary(values, unstable=True)
        plain, _ = _mc_summary(values, unstable=False)
        assert trimmed == pytest.approx(1.0)
        assert plain > 1e10

    def test_single_value(self):
        mean, stderr = _mc_summary(np.array([4.0]), unstable=False)
        assert mean == 4.0
        assert stderr == 0.0


class TestCsv:
    def test_header_exact(self):
        assert curve_to_csv(RiskCurve(())) == CSV_HEADER + "\n"

    def test_single_point(self):
        curve = RiskCurve((RiskPoint(0, finite_risk(1.0), None, None, False),))
        assert curve_to_csv(curve) == CSV_HEADER + "\n0,1,,,0\n"

    def test_divergent_serializes_as_inf(self):
        curve = RiskCurve((RiskPoint(40, DIVERGENT, 123.4, 5.6, True),))
        assert curve_to_csv(curve) == CSV_HEADER + "\n40,inf,123.4,5.6,1\n"

    def test_twelve_significant_digits(self):
        curve = RiskCurve((RiskPoint(1, finite_risk(1 / 3), None, None, False),))
        assert "0.333333333333" in curve_to_csv(curve)

    def test_write_csv_roundtrip(self, tmp_path):
        curve = RiskCurve(
            (
                RiskPoint(0, finite_risk(1.0), 0.5, 0.01, False),
                RiskPoint(1, DIVERGENT, None, None, True),
            )
        )
        path = tmp_path / "curve.csv"
        write_csv(curve, path)
        text = path.read_text()
        assert text == curve_to_csv(curve)
        assert text.splitlines()[0] == CSV_HEADER

    def test_points_must_be_sorted(self):
        with pytest.raises(ValueError):
            RiskCurve(
                (
                    RiskPoint(2, finite_risk(1.0), None, None, False),
                    RiskPoint(1, finite_risk(1.0), None, None, False),
                )
            )


class TestConfigFile:
    def test_parse(self, tmp_path):
        path = tmp_path / "exp.cfg"
        path.write_text(
            "# comment\n"
            "model = GAUSSIAN_RANDOM_T\n"
            "D = 50\n"
            "n = 20   # inline comment\n"
            "p_min = 0\n"
            "p_max = 50\n"
            "trials = 7\n"
        )
        values = load_config_file(path)
        assert values["model"] == "GAUSSIAN_RANDOM_T"
        assert values["d"] == "50"
        assert values["n"] == "20"
        assert values["trials"] == "7"

    def test_rejects_garbage(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("this is not a key value pair\n")
        with pytest.raises(ValueError):
            load_config_file(path)


class TestSvg:
    def test_renders_wellformed_svg(self, tmp_path):
        cfg = _cfg(D=20, n=8, p_grid=tuple(range(21)), trials=5)
        curve = run_experiment(cfg)
        path = tmp_path / "curve.svg"
        render_svg(curve, path, title="test curve")
        text = path.read_text()
        root = ET.fromstring(text)
        assert root.tag.endswith("svg")
        assert "polyline" in text
        render_svg(curve, tmp_path / "again.svg", title="test curve")
        assert (tmp_path / "again.svg").read_text() == text

    def test_handles_theory_only_curve(self, tmp_path):
        curve = run_experiment(
            _cfg(model=ExperimentModel.GAUSSIAN_PRESCIENT, D=None, p_grid=tuple(range(0, 100)))
        )
        render_svg(curve, tmp_path / "prescient.svg")
        assert (tmp_path / "prescient.svg").exists()
