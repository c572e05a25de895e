import math
import pathlib
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

ROOT = pathlib.Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.common.errors import ArgumentError, ConfigurationError
from src.function_classes.maps import AffineMap, IdentityMap
from src.kernels import (
    GaussianKernel,
    LaplacianKernel,
    TranslationInvariantKernel,
    argument_lipschitz_probe,
    boundedness_probe,
    certified_constants,
    compose,
    eval_kernel,
    gram_matrix,
    kernel_from_config,
    lipschitz_probe,
    profile_gradient_probe,
)
from src.mmd.samples import UniformBoxSpec

coords = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False, allow_infinity=False)


def test_gaussian_and_laplacian_values():
    gaussian = GaussianKernel(1.0)
    assert eval_kernel(gaussian, np.zeros(2), np.zeros(2)) == 1.0
    assert eval_kernel(gaussian, np.array([0.0]), np.array([1.0])) == pytest.approx(0.3678794, abs=1e-7)
    laplacian = LaplacianKernel(2.0)
    assert laplacian(np.array([0.0, 0.0]), np.array([1.0, 1.0])) == pytest.approx(0.3678794, abs=1e-7)


def test_negative_gaussian_bandwidth_uses_its_magnitude():
    assert GaussianKernel(-2.0)(np.array([0.0]), np.array([2.0])) == pytest.approx(math.exp(-1.0))
    with pytest.raises(ConfigurationError):
        GaussianKernel(0.0)
    with pytest.raises(ConfigurationError):
        LaplacianKernel(-1.0)


def test_dimension_mismatch_is_an_argument_error():
    with pytest.raises(ArgumentError):
        GaussianKernel(1.0)(np.zeros(2), np.zeros(3))
    with pytest.raises(ArgumentError):
        GaussianKernel(1.0, dim=2).pairwise(np.zeros((1, 3)), np.zeros((1, 3)))


def test_certified_constants():
    gaussian = certified_constants(GaussianKernel(1.0), dim=3)
    assert gaussian.l == pytest.approx(1.715528, abs=1e-6)
    assert gaussian.nu == 1.0
    assert gaussian.b is None
    assert gaussian.min_term == 4.0

    laplacian = certified_constants(LaplacianKernel(2.0), dim=4)
    assert laplacian.l == pytest.approx(2.0)
    assert laplacian.nu == 1.0

    bounded = certified_constants(GaussianKernel(1.0), dim=1, support_diameter=1.0)
    assert bounded.min_term == pytest.approx(1.715528, abs=1e-6)


def test_translation_invariant_constants_need_certificates():
    profile = lambda diffs: np.exp(-np.sum(diffs**2, axis=-1))  # noqa: E731
    certified = TranslationInvariantKernel(profile, nu_t=1.0, l_t=0.9)
    constants = certified_constants(certified, dim=2)
    assert constants.l == pytest.approx(1.8)
    assert constants.nu == 1.0
    assert certified(np.zeros(2), np.ones(2)) == pytest.approx(math.exp(-2.0))

    with pytest.raises(ConfigurationError):
        certified_constants(TranslationInvariantKernel(profile, nu_t=1.0), dim=2)


def test_compose_with_feature_maps():
    base = GaussianKernel(1.0)
    identity = compose(base, IdentityMap(1))
    assert identity(np.array([0.0]), np.array([1.0])) == pytest.approx(0.3678794, abs=1e-7)
    doubled = compose(base, AffineMap(np.array([[2.0]]), np.zeros(1)))
    assert doubled(np.array([0.0]), np.array([1.0])) == pytest.approx(0.0183156, abs=1e-7)

    with pytest.raises(ArgumentError):
        compose(GaussianKernel(1.0, dim=2), AffineMap(np.ones((3, 2)), np.zeros(3)))


def test_composite_constants_scale_with_the_feature():
    doubled = compose(GaussianKernel(1.0), AffineMap(np.array([[2.0]]), np.zeros(1)))
    constants = certified_constants(doubled, dim=1, support_diameter=3.0)
    assert constants.l == pytest.approx(2.0 * 1.715528, abs=1e-6)
    assert constants.b == pytest.approx(6.0)
    assert constants.nu == 1.0


def test_gram_matrix_small_cases():
    assert gram_matrix(GaussianKernel(1.0), np.array([[0.0]])).tolist() == [[1.0]]
    gram = gram_matrix(GaussianKernel(1.0), np.array([[0.0], [1.0]]))
    assert np.allclose(gram, [[1.0, math.exp(-1.0)], [math.exp(-1.0), 1.0]])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(coords, coords), min_size=1, max_size=12))
def test_gram_matrices_are_symmetric_and_psd(points):
    rows = np.asarray(points, dtype=float)
    for kernel in (GaussianKernel(1.3), LaplacianKernel(0.7)):
        gram = gram_matrix(kernel, rows)
        assert np.array_equal(gram, gram.T)
        assert np.all(np.diag(gram) == 1.0)
        assert np.linalg.eigvalsh(gram).min() >= -1e-9


@settings(max_examples=50, deadline=None)
@given(coords, coords, coords, coords)
def test_gaussian_kernel_respects_its_lipschitz_constant(u1, u2, v1, v2):
    kernel = GaussianKernel(1.0)
    l = certified_constants(kernel, dim=1).l
    u, u_prime = np.array([u1]), np.array([u2])
    v, v_prime = np.array([v1]), np.array([v2])
    change = (kernel(u, v) - kernel(u_prime, v)) - (kernel(u, v_prime) - kernel(u_prime, v_prime))
    assert abs(change) <= l * abs(v1 - v2) + 1e-12


def test_kernel_config_builds_kernels():
    kernel = kernel_from_config({"kind": "gaussian", "sigma": -2.0})
    assert isinstance(kernel, GaussianKernel)
    assert kernel.bandwidth == 2.0
    composite = kernel_from_config(
        {"kind": "composite", "base": {"kind": "laplacian", "sigma": 1.0}, "feature": {"kind": "identity", "dim": 2}}
    )
    assert composite.input_dim == 2
    with pytest.raises(ValidationError):
        kernel_from_config({"kind": "laplacian", "sigma": 0.0})
    with pytest.raises(ValidationError):
        kernel_from_config({"kind": "polynomial", "degree": 2})


def test_audit_probes_stay_below_certified_constants():
    kernel = GaussianKernel(1.0)
    domain = UniformBoxSpec(-3.0, 3.0, 1)
    constants = certified_constants(kernel, dim=1)
    assert boundedness_probe(kernel, domain, 2000, seed=1) == pytest.approx(1.0)
    assert 0.0 < lipschitz_probe(kernel, domain, 2000, seed=2) <= constants.l
    assert 0.0 < argument_lipschitz_probe(kernel, domain, 2000, seed=3) <= constants.l / 2.0


def test_audit_probes_are_deterministic():
    kernel = LaplacianKernel(1.0)
    domain = UniformBoxSpec(-1.0, 1.0, 2)
    assert lipschitz_probe(kernel, domain, 500, seed=4) == lipschitz_probe(kernel, domain, 500, seed=4)


def test_gaussian_profile_gradient_peak():
    peak = profile_gradient_probe(GaussianKernel(1.0))
    assert peak.location == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-3)
    assert peak.value == pytest.approx(math.sqrt(2.0) * math.exp(-0.5), rel=1e-6)
