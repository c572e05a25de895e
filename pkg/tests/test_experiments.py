import math
import pathlib
import sys

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.cli.reports import write_experiment_outputs, write_report
from src.common.config import ComplexityDefaults
from src.common.errors import ArgumentError, ConfigurationError, ConsistencyError
from src.experiments import (
    ExperimentReport,
    StudySettings,
    fit_log_log_slope,
    load_experiment_config,
    run_coverage,
    run_decay,
    run_excess_risk_experiment,
    run_experiment,
    run_kernel_audit,
)
from src.experiments.records import DECAY_COLUMNS, TRIAL_COLUMNS

SMALL = ComplexityDefaults(outer_replicates=3, inner_replicates=20)
GAUSSIAN_DATA = {
    "x": {"kind": "gaussian", "mean": [0.0], "cov": 1.0},
    "y": {"kind": "gaussian", "mean": [0.25], "cov": 1.0},
}


def _settings(seed=3, threads=1):
    return StudySettings(seed=seed, threads=threads, complexity=SMALL)


def _coverage(grid, **overrides):
    payload = {
        "kind": "coverage",
        "name": "coverage_small",
        "trials": 12,
        "n": 30,
        "delta": 0.1,
        "kernel": {"kind": "gaussian", "sigma": 1.0},
        "classes": {"G": {"kind": "grid", "family": "shift", "grid": grid}},
        "data": GAUSSIAN_DATA,
    }
    payload.update(overrides)
    return load_experiment_config(payload, expected_kind="coverage")


def test_coverage_study_summary():
    report = run_coverage(_coverage([-0.5, 0.0, 0.5]), _settings())
    summary = report.summary
    assert len(report.trials) == 12
    assert [record.trial for record in report.trials] == list(range(12))
    assert summary["coverage"] == 1.0
    assert summary["oracle"] == "ClosedFormOracle"
    assert summary["oracle_max_std_error"] == 0.0
    assert summary["bound"] >= summary["max_deviation"] >= summary["mean_deviation"] > 0.0
    assert summary["expectation_bound"] > 0.0
    assert set(summary["bounds"]) == {"expectation", "highprob", "vstatistic"}
    assert summary["v_coverage"] == 1.0
    assert "gretton_coverage" not in summary
    assert summary["constants"]["min_term"] == 4.0


def test_singleton_coverage_adds_single_kernel_bounds():
    report = run_coverage(_coverage([0.5], trials=6), _settings())
    summary = report.summary
    assert {"gretton", "cstar"} <= set(summary["bounds"])
    assert 0.0 <= summary["gretton_coverage"] <= 1.0
    assert 0.0 <= summary["cstar_coverage"] <= 1.0
    assert all("cstar_deviation" in record.extra for record in report.trials)


def test_coverage_is_identical_across_thread_counts():
    config = _coverage([-0.5, 0.0, 0.5])
    single = run_coverage(config, _settings(threads=1))
    pooled = run_coverage(config, _settings(threads=4))
    assert single.trial_rows() == pooled.trial_rows()
    assert single.to_summary_dict() == pooled.to_summary_dict()
    assert run_coverage(config, _settings(seed=4)).trial_rows() != single.trial_rows()


def test_trial_rows_follow_the_report_columns():
    report = run_coverage(_coverage([0.0], trials=3), _settings())
    rows = report.trial_rows()
    assert list(rows[0]) == list(TRIAL_COLUMNS)
    assert rows[0]["excess_risk"] is None
    payload = report.to_summary_dict()
    assert payload["trial_count"] == 3
    assert "wall_clock_seconds" not in payload


def test_decay_study_builds_a_table_and_slope():
    config = load_experiment_config(
        {
            "kind": "decay",
            "trials": 5,
            "n_ladder": [10, 20, 40, 80],
            "delta": 0.1,
            "kernel": {"kind": "gaussian", "sigma": 1.0},
            "classes": {"G": {"kind": "grid", "family": "shift", "grid": [-0.5, 0.5]}},
            "data": GAUSSIAN_DATA,
        }
    )
    report = run_decay(config, _settings())
    assert report.name == "decay"
    assert [row["n"] for row in report.decay_table] == [10, 20, 40, 80]
    assert [record.trial for record in report.trials] == list(range(20))
    assert report.summary["slope_defined"] is True
    assert math.isfinite(report.summary["slope"])
    assert report.summary["slope_std_error"] > 0.0


def test_coverage_needs_at_least_one_trial():
    with pytest.raises(ConfigurationError, match="trials"):
        _coverage([0.0], trials=0)


def test_decay_on_identical_point_masses_has_no_slope():
    point_mass = {"kind": "point_mass", "location": [0.0]}
    config = load_experiment_config(
        {
            "kind": "decay",
            "trials": 3,
            "n_ladder": [10, 20, 40, 80],
            "delta": 0.1,
            "kernel": {"kind": "gaussian", "sigma": 1.0},
            "classes": {"G": {"kind": "grid", "family": "shift", "grid": [0.0]}},
            "data": {"x": point_mass, "y": point_mass},
        }
    )
    report = run_decay(config, _settings())
    assert len(report.trials) == 12
    assert all(record.deviation == 0.0 for record in report.trials)
    assert report.summary["slope_defined"] is False


def test_decay_ladder_validation_names_the_field():
    with pytest.raises(ConfigurationError, match="n_ladder"):
        load_experiment_config(
            {
                "kind": "decay",
                "trials": 5,
                "n_ladder": [10, 20, 40],
                "delta": 0.1,
                "kernel": {"kind": "gaussian", "sigma": 1.0},
                "classes": {"G": {"kind": "grid", "family": "shift", "grid": [0.0]}},
                "data": GAUSSIAN_DATA,
            }
        )


def test_log_log_slope_fit():
    ns = [50, 100, 200, 400, 800]
    means = [2.0 / math.sqrt(n) for n in ns]
    fit = fit_log_log_slope(ns, means, [0.05 * mean for mean in means])
    assert fit.defined and fit.method == "wls"
    assert fit.slope == pytest.approx(-0.5)
    assert fit.intercept == pytest.approx(math.log(2.0))

    exact = fit_log_log_slope(ns, means, [0.0] * len(ns))
    assert exact.method == "ols"
    assert exact.slope == pytest.approx(-0.5)
    assert exact.std_error == pytest.approx(0.0, abs=1e-9)

    undefined = fit_log_log_slope(ns, [0.1, 0.0, 0.05, 0.02, 0.01], [0.01] * 5)
    assert not undefined.defined
    assert undefined.to_dict()["slope"] is None


def _excess(which, F, G, **overrides):
    payload = {
        "kind": "excess_risk",
        "which": which,
        "trials": 8,
        "n": 40,
        "delta": 0.1,
        "kernel": {"kind": "gaussian", "sigma": 1.0},
        "classes": {"G": G} if F is None else {"F": F, "G": G},
        "data": GAUSSIAN_DATA,
    }
    payload.update(overrides)
    return load_experiment_config(payload, expected_kind="excess_risk")


LOCATION_SCALE = {"kind": "grid", "family": "location_scale", "grid": [[1.0, 0.0], [1.0, 0.5], [0.5, 0.0]]}
LINEAR_F = {"kind": "grid", "family": "linear", "grid": [0.5, 1.0, 2.0], "output_dim": 1}


def test_minimax_excess_risk_study():
    report = run_excess_risk_experiment(_excess("corollary2", LINEAR_F, LOCATION_SCALE), settings=_settings())
    summary = report.summary
    assert summary["which"] == "corollary2"
    assert summary["orientation"] == "min_f_max_g"
    assert summary["coverage"] == 1.0
    assert summary["decomposition_fraction"] == 1.0
    assert summary["max_excess_risk"] <= summary["bound"]
    assert all(record.f_index is not None for record in report.trials)
    assert set(summary["complexities"]) == {"gc_FG", "gc_F"}


def test_minimum_mmd_excess_risk_folds_the_feature_into_the_kernel():
    scale = {"kind": "grid", "family": "scale", "grid": [2.0]}
    report = run_experiment(_excess("corollary1", scale, LOCATION_SCALE), _settings())
    summary = report.summary
    assert summary["orientation"] == "min_g"
    assert summary["oracle"] == "ClosedFormOracle"
    assert set(summary["complexities"]) == {"gc_G"}
    assert summary["constants"]["l"] == pytest.approx(2.0 * 2.0 * math.sqrt(2.0) * math.exp(-0.5))
    assert all(record.f_index is None for record in report.trials)
    assert min(record.excess_risk for record in report.trials) >= 0.0


def test_realizable_generator_grid_has_no_median_excess_risk():
    shifts = {"kind": "grid", "family": "shift", "grid": [-1.0, 0.25, 1.5]}
    report = run_excess_risk_experiment(_excess("corollary1", None, shifts, trials=9, n=60), settings=_settings())
    summary = report.summary
    assert summary["oracle"] == "ClosedFormOracle"
    assert abs(summary["median_excess_risk"]) <= 3.0 * summary["oracle_max_std_error"] + 1e-12
    assert sum(record.g_index == 1 for record in report.trials) > len(report.trials) // 2


def test_excess_risk_configuration_errors():
    with pytest.raises(ConfigurationError):
        run_excess_risk_experiment(_excess("corollary1", LINEAR_F, LOCATION_SCALE), settings=_settings())
    with pytest.raises(ConfigurationError):
        run_excess_risk_experiment(
            _excess("corollary2", LINEAR_F, LOCATION_SCALE, orientation="min_g"), settings=_settings()
        )


def test_kernel_audit_passes_for_certified_kernels():
    config = load_experiment_config(
        {
            "kind": "kernel_audit",
            "trials": 3000,
            "kernel": {"kind": "gaussian", "sigma": 1.0},
            "domain": {"kind": "uniform_box", "low": -3.0, "high": 3.0, "dim": 1},
        },
        expected_kind="kernel_audit",
    )
    report = run_kernel_audit(config, _settings())
    summary = report.summary
    assert report.trials == []
    assert summary["probe_trials"] == 3000
    assert report.to_summary_dict()["trial_count"] == 0
    assert summary["all_passed"] is True
    profile = summary["profile_gradient"]
    assert profile["location"] == pytest.approx(profile["expected_location"], abs=1e-3)
    assert profile["value"] == pytest.approx(profile["expected_value"], rel=1e-6)

    laplacian = load_experiment_config(
        {
            "kind": "kernel_audit",
            "trials": 1000,
            "kernel": {"kind": "laplacian", "sigma": 2.0},
            "domain": {"kind": "uniform_box", "low": -1.0, "high": 1.0, "dim": 4},
        }
    )
    audit = run_kernel_audit(laplacian, _settings())
    assert audit.summary["all_passed"] is True
    assert "profile_gradient" not in audit.summary
    assert audit.summary["certified"]["lipschitz"] == pytest.approx(2.0)


def test_config_errors_name_the_failing_path():
    with pytest.raises(ConfigurationError, match="classes.G"):
        _coverage("not-a-grid")
    with pytest.raises(ConfigurationError, match="coverage"):
        load_experiment_config(
            {
                "kind": "kernel_audit",
                "kernel": {"kind": "gaussian", "sigma": 1.0},
                "domain": {"kind": "uniform_box", "low": 0.0, "high": 1.0, "dim": 1},
            },
            expected_kind="coverage",
        )
    with pytest.raises(ConfigurationError, match="colour"):
        _coverage([0.0], colour="blue")


def test_dimension_mismatch_between_data_and_classes():
    config = _coverage([0.0], data={"x": {"kind": "gaussian", "mean": [0.0, 0.0]}, "y": GAUSSIAN_DATA["y"]})
    with pytest.raises(ConfigurationError):
        run_coverage(config, _settings())


def test_reports_reject_impossible_fractions():
    with pytest.raises(ConsistencyError):
        ExperimentReport(kind="coverage", name="bad", seed=0, config={}, trials=[], summary={"coverage": 1.5})


@pytest.mark.parametrize(
    "name",
    [
        "coverage_gaussian",
        "gretton_singleton",
        "decay_gaussian",
        "corollary1_shift",
        "corollary2_minimax",
        "kernel_audit_gaussian",
        "kernel_audit_laplacian",
    ],
)
def test_shipped_experiment_configs_load(name):
    config = load_experiment_config(ROOT / "inputs" / "experiments" / f"{name}.json")
    assert config.stem == name


def test_report_writers(tmp_path):
    report = run_coverage(_coverage([0.0], trials=2), _settings())
    paths = write_experiment_outputs(report, tmp_path)
    assert [path.name for path in paths] == ["coverage_small_summary.json", "coverage_small_trials.csv"]
    assert len((tmp_path / "coverage_small_trials.csv").read_bytes().split(b"\r\n")) == 4

    rows = [{"n": 10, "mean_deviation": 0.2, "stderr": 0.01}]
    written = write_report(rows, "csv", tmp_path / "decay.csv", columns=DECAY_COLUMNS)
    assert written.read_bytes() == b"n,mean_deviation,stderr\r\n10,0.2,0.01\r\n"
    with pytest.raises(ArgumentError):
        write_report(rows, "csv", tmp_path / "rows.csv")
    with pytest.raises(ArgumentError):
        write_report(report, "parquet", tmp_path / "report.parquet")
