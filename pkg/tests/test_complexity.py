import math
import pathlib
import sys

import numpy as np
import pytest
from pydantic import ValidationError

ROOT = pathlib.Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.common.errors import ArgumentError, ConfigurationError
from src.complexity import (
    complexity_ratio,
    empirical_gaussian_complexity,
    empirical_rademacher_chaos,
    empirical_rademacher_complexity,
    expected_complexity,
    mmd_kernel_seminorm_bounds,
    seminorm_probe,
    u_statistic_seminorm_bounds,
)
from src.complexity.jobs import ComplexityJobConfig, run_complexity_job
from src.function_classes import AffineMap, identity_class
from src.kernels import GaussianKernel, certified_constants, compose
from src.kernels.constants import KernelConstants
from src.mmd import GaussianDistSpec, PointMassSpec, UniformBoxSpec

SINGLETON = [np.array([[3.0], [4.0]])]


def test_rademacher_exact_enumeration():
    estimate = empirical_rademacher_complexity(SINGLETON, replicates=10, seed=0)
    assert estimate.exact
    assert estimate.mean == pytest.approx(2.0)
    assert estimate.std_error == 0.0
    assert empirical_rademacher_complexity([np.zeros((2, 1))], replicates=10, seed=0).mean == 0.0


def test_rademacher_sampling_converges_to_exact_value():
    sampled = empirical_rademacher_complexity(SINGLETON, replicates=20_000, seed=3, exact=False)
    assert not sampled.exact
    assert abs(sampled.mean - 2.0) <= 4.0 * sampled.std_error


def test_gaussian_complexity_of_a_singleton():
    estimate = empirical_gaussian_complexity(SINGLETON, replicates=100_000, seed=1)
    expected = (5.0 / 2.0) * math.sqrt(2.0 / math.pi)
    assert expected == pytest.approx(1.9947114, abs=1e-7)
    assert abs(estimate.mean - expected) <= 4.0 * estimate.std_error


def test_gaussian_complexity_ignores_sign_flips_and_zero_classes():
    s = SINGLETON[0]
    single = empirical_gaussian_complexity([s], replicates=500, seed=2)
    mirrored = empirical_gaussian_complexity([s, -s], replicates=500, seed=2)
    assert single.mean == mirrored.mean
    assert empirical_gaussian_complexity([np.zeros((4, 2))], replicates=50, seed=2).mean == 0.0


def test_nested_classes_share_coefficients_under_one_seed():
    small = [np.array([[1.0], [-2.0], [0.5]])]
    large = small + [np.array([[0.3], [0.3], [2.0]])]
    for replicates in (1, 7, 1500):
        assert (
            empirical_gaussian_complexity(large, replicates, seed=9).mean
            >= empirical_gaussian_complexity(small, replicates, seed=9).mean
        )
        assert (
            empirical_rademacher_complexity(large, replicates, seed=9, exact=False).mean
            >= empirical_rademacher_complexity(small, replicates, seed=9, exact=False).mean
        )


def test_complexity_input_errors():
    with pytest.raises(ArgumentError):
        empirical_gaussian_complexity([], replicates=10, seed=0)
    with pytest.raises(ArgumentError):
        empirical_gaussian_complexity([np.zeros((2, 1)), np.zeros((3, 1))], replicates=10, seed=0)


def test_chaos_of_two_points_is_the_off_diagonal_kernel_value():
    kernel = GaussianKernel(1.0)
    X = np.array([[0.0], [1.0]])
    exact = empirical_rademacher_chaos(kernel, identity_class(1), X, replicates=10, seed=0)
    assert exact.exact
    assert exact.mean == pytest.approx(math.exp(-1.0))
    sampled = empirical_rademacher_chaos(kernel, identity_class(1), X, replicates=64, seed=0, exact=False)
    assert sampled.mean == pytest.approx(math.exp(-1.0))
    far = np.array([[0.0], [100.0]])
    assert empirical_rademacher_chaos(kernel, identity_class(1), far, replicates=10, seed=0).mean == 0.0
    with pytest.raises(ArgumentError):
        empirical_rademacher_chaos(kernel, identity_class(1), X[:1], replicates=10, seed=0)


def test_expected_complexity_of_the_identity():
    sampler = GaussianDistSpec(np.zeros(1), np.eye(1))
    estimate = expected_complexity(identity_class(1), sampler, n=1, outer_replicates=2000, inner_replicates=200, seed=4)
    assert estimate.outer_replicates == 2000
    assert abs(estimate.mean - 2.0 / math.pi) <= 3.0 * estimate.std_error
    assert 2.0 / math.pi == pytest.approx(0.6366198, abs=1e-7)


def test_point_mass_has_no_outer_variance():
    sampler = PointMassSpec(np.array([1.5]))
    estimate = expected_complexity(identity_class(1), sampler, n=3, outer_replicates=5, inner_replicates=50, seed=4)
    assert estimate.between_variance == 0.0
    with pytest.raises(ArgumentError):
        expected_complexity(identity_class(2), sampler, n=3, outer_replicates=5, inner_replicates=50, seed=4)


def test_u_statistic_seminorm_bounds():
    bounds = u_statistic_seminorm_bounds(math.sqrt(2.0), 8.0, 2, 100)
    assert bounds.m_lip == pytest.approx(0.0282843, abs=1e-7)
    assert bounds.j_lip == pytest.approx(0.0565685, abs=1e-7)
    assert bounds.m_bound == pytest.approx(0.16)

    boundary = u_statistic_seminorm_bounds(1.5, 2.0, 4, 4)
    assert (boundary.m_lip, boundary.j_lip, boundary.m_bound) == (1.5, 6.0, 2.0)
    flat = u_statistic_seminorm_bounds(0.0, 2.0, 2, 10)
    assert (flat.m_lip, flat.j_lip, flat.m_bound) == (0.0, 0.0, pytest.approx(0.4))
    with pytest.raises(ArgumentError):
        u_statistic_seminorm_bounds(1.0, 1.0, 5, 4)


def test_mmd_kernel_seminorm_bounds():
    plain = mmd_kernel_seminorm_bounds(KernelConstants(l=1.0, nu=1.0))
    assert plain.m_lip == pytest.approx(1.4142136, abs=1e-7)
    assert plain.m_bound == 8.0
    gaussian = mmd_kernel_seminorm_bounds(certified_constants(GaussianKernel(1.0), dim=1))
    assert gaussian.m_lip == pytest.approx(2.4261226, abs=1e-6)
    assert mmd_kernel_seminorm_bounds(KernelConstants(l=0.0, nu=1.0)).m_lip == 0.0
    with pytest.raises(ConfigurationError):
        mmd_kernel_seminorm_bounds(KernelConstants(l=1.0, b=math.inf))


def test_seminorm_probe_respects_the_certified_bound():
    kernel = GaussianKernel(1.0)
    observed = seminorm_probe(kernel, UniformBoxSpec(-2.0, 2.0, 1), trials=3000, seed=8)
    assert 0.0 < observed <= math.sqrt(2.0) * certified_constants(kernel, dim=1).l

    constant = compose(kernel, AffineMap(np.zeros((1, 1)), np.zeros(1)))
    assert seminorm_probe(constant, UniformBoxSpec(-2.0, 2.0, 1), trials=200, seed=8) == 0.0

    with pytest.raises(ArgumentError):
        seminorm_probe(kernel, PointMassSpec(np.array([0.0])), trials=10, seed=8)


def test_complexity_job_on_a_fixed_sample(tmp_path):
    (tmp_path / "x.csv").write_text("3\n4\n", encoding="utf-8")
    job = ComplexityJobConfig.model_validate(
        {"function_class": {"kind": "identity", "dim": 1}, "sample": "x.csv", "replicates": 2000, "compare": True}
    )
    result = run_complexity_job(job, "rademacher", seed=0, base_dir=tmp_path)
    assert result["kind"] == "rademacher"
    assert result["rademacher"]["mean"] == pytest.approx(2.0)
    assert result["rademacher"]["exact"] is True
    assert "gaussian" in result
    assert result["gaussian_to_rademacher"] == pytest.approx(result["gaussian"]["mean"] / 2.0)


def test_complexity_job_over_a_law_is_seeded():
    payload = {
        "function_class": {"kind": "grid", "family": "shift", "grid": [-1.0, 0.0, 1.0]},
        "data": {"kind": "gaussian", "mean": [0.0]},
        "n": 20,
        "outer_replicates": 5,
        "inner_replicates": 30,
    }
    job = ComplexityJobConfig.model_validate(payload)
    first = run_complexity_job(job, "gaussian", seed=12)
    assert first == run_complexity_job(job, "gaussian", seed=12)
    assert first["gaussian"]["outer_replicates"] == 5


def test_complexity_job_validation():
    with pytest.raises(ValidationError):
        ComplexityJobConfig.model_validate({"function_class": {"kind": "identity", "dim": 1}})
    with pytest.raises(ValidationError):
        ComplexityJobConfig.model_validate(
            {"function_class": {"kind": "identity", "dim": 1}, "data": {"kind": "gaussian", "mean": [0.0]}}
        )
    job = ComplexityJobConfig.model_validate(
        {"function_class": {"kind": "identity", "dim": 1}, "data": {"kind": "gaussian", "mean": [0.0]}, "n": 4}
    )
    with pytest.raises(ConfigurationError):
        run_complexity_job(job, "chaos", seed=0)
    with pytest.raises(ArgumentError):
        run_complexity_job(job, "vc", seed=0)


def test_gaussian_to_rademacher_ratio():
    gaussian = empirical_gaussian_complexity(SINGLETON, replicates=200, seed=0)
    rademacher = empirical_rademacher_complexity(SINGLETON, replicates=10, seed=0)
    assert complexity_ratio(gaussian, rademacher) == pytest.approx(gaussian.mean / 2.0)
    zero = empirical_rademacher_complexity([np.zeros((2, 1))], replicates=10, seed=0)
    with pytest.raises(ArgumentError):
        complexity_ratio(gaussian, zero)
