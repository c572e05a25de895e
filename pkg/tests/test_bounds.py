import math
import pathlib
import sys

import pytest
from pydantic import ValidationError

ROOT = pathlib.Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.bounds import (
    BoundInputs,
    FormulaId,
    bound_report,
    briol_excess_bound,
    corollary_bounds,
    empirical_measure_bound,
    fukumizu_cstar,
    fukumizu_two_sided,
    gretton_deviation_bound,
    infinite_class_bound,
    scalar_bound_report,
    theorem1_bounds,
    theorem1_vstatistic_bound,
)
from src.common.errors import ArgumentError, ConfigurationError

GAUSSIAN_L = 2.0 * math.sqrt(2.0) * math.exp(-0.5)
SQRT_PI = math.sqrt(math.pi)

# l = nu = 1, n = 100, delta = 0.1, gc_FG + gc_F = 0.1
THEOREM1_EXPECTATION = 32.0 * SQRT_PI * 0.1
THEOREM1_HIGHPROB = 16.0 * SQRT_PI * 0.1 + 16.0 * math.sqrt(math.log(20.0) / 100)
GRETTON_N100 = 2.0 * math.sqrt(2.0 * math.log(40.0) / 50)
CSTAR_N100 = 2.0 * math.sqrt(0.04) + 2.0 * math.sqrt(1.0 / 100) + math.sqrt(18.0 * math.log(20.0) / 100)


def _inputs(**overrides):
    fields = {"l": 1.0, "nu": 1.0, "n": 100, "delta": 0.1, "gc_FG": 0.06, "gc_F": 0.04}
    fields.update(overrides)
    return BoundInputs(**fields)


def test_theorem1_expectation_and_high_probability():
    expectation, highprob = theorem1_bounds(_inputs())
    assert highprob == pytest.approx(THEOREM1_HIGHPROB, rel=1e-12)
    assert expectation == pytest.approx(THEOREM1_EXPECTATION, rel=1e-12)


def test_theorem1_limit_as_delta_approaches_one():
    _, highprob = theorem1_bounds(_inputs(gc_FG=0.0, gc_F=0.0, delta=1.0 - 1e-12))
    # the tail keeps ln 2 as delta -> 1
    assert highprob == pytest.approx(4.0 * 4.0 * math.sqrt(math.log(2.0) / 100), rel=1e-9)


def test_bounds_decrease_with_n_and_increase_as_delta_shrinks():
    assert theorem1_bounds(_inputs(n=400))[1] < theorem1_bounds(_inputs(n=100))[1]
    assert theorem1_bounds(_inputs(delta=0.01))[1] > theorem1_bounds(_inputs(delta=0.1))[1]


def test_support_diameter_tightens_the_tail():
    loose = theorem1_bounds(_inputs())[1]
    tight = theorem1_bounds(_inputs(b=0.5))[1]
    assert tight < loose
    assert theorem1_bounds(_inputs(nu=None, b=0.5))[1] == pytest.approx(tight)


def test_missing_inputs_are_configuration_errors():
    with pytest.raises(ConfigurationError):
        theorem1_bounds(_inputs(nu=None))
    with pytest.raises(ConfigurationError):
        theorem1_bounds(_inputs(gc_F=None))
    with pytest.raises(ConfigurationError):
        theorem1_vstatistic_bound(_inputs(nu=None, b=2.0))
    with pytest.raises(ValidationError):
        _inputs(delta=1.0)
    with pytest.raises(ValidationError):
        _inputs(n=1)


def test_vstatistic_and_infinite_class_extensions():
    base = theorem1_bounds(_inputs())[1]
    assert theorem1_vstatistic_bound(_inputs()) == pytest.approx(base + 8.0 / 99.0)
    assert infinite_class_bound(_inputs(), feature_lipschitz=1.0, eps=0.1) == pytest.approx(base + 4.0 * 3.0 * 0.1)
    assert infinite_class_bound(_inputs(), feature_lipschitz=1.0, eps=0.0) == pytest.approx(base)
    with pytest.raises(ArgumentError):
        infinite_class_bound(_inputs(), feature_lipschitz=-1.0, eps=0.1)


def test_gretton_deviation_bound():
    assert gretton_deviation_bound(1.0, 100, 0.05) == pytest.approx(GRETTON_N100, rel=1e-12)
    ratio = gretton_deviation_bound(1.0, 200, 0.05) / gretton_deviation_bound(1.0, 100, 0.05)
    assert ratio == pytest.approx(1.0 / math.sqrt(2.0))
    with pytest.raises(ArgumentError):
        gretton_deviation_bound(1.0, 100, 2.0)
    with pytest.raises(ArgumentError):
        gretton_deviation_bound(1.0, 1, 0.5)


def test_fukumizu_constant():
    assert fukumizu_cstar(0.04, 1.0, 100, 0.1) == pytest.approx(CSTAR_N100, rel=1e-12)
    assert fukumizu_cstar(0.0, 0.0, 100, 0.1) == 0.0
    assert fukumizu_two_sided(0.04, 0.04, 1.0, 100, 0.1) == pytest.approx(2 * CSTAR_N100, rel=1e-12)
    with pytest.raises(ArgumentError):
        fukumizu_cstar(-0.1, 1.0, 100, 0.1)


def test_empirical_measure_bounds():
    assert empirical_measure_bound(1.0, 2, 1.0) == pytest.approx(1.0)
    assert empirical_measure_bound(1.0, 200, 0.05) == pytest.approx(0.1 * (1.0 + math.sqrt(math.log(20.0))), rel=1e-12)
    assert briol_excess_bound(1.0, 200, 0.05) == pytest.approx(0.2 * (1.0 + math.sqrt(math.log(20.0))), rel=1e-12)
    with pytest.raises(ArgumentError):
        empirical_measure_bound(1.0, 10, 0.0)


def test_corollary_bounds():
    inputs = BoundInputs(l=GAUSSIAN_L, nu=1.0, n=100, delta=0.1, gc_G=0.05)
    expected = 32.0 * SQRT_PI * GAUSSIAN_L * 0.05 + 8.0 * 4.0 * math.sqrt(math.log(20.0) / 100)
    assert corollary_bounds("corollary1", inputs) == pytest.approx(expected, rel=1e-12)
    assert expected == pytest.approx(10.40373, abs=1e-5)

    zero = BoundInputs(l=GAUSSIAN_L, nu=1.0, n=100, delta=0.1, gc_F=0.0, gc_FG=0.0)
    tail = 8.0 * 4.0 * math.sqrt(math.log(20.0) / 100)
    assert corollary_bounds(FormulaId.COROLLARY2, zero) == pytest.approx(tail)

    with pytest.raises(ConfigurationError):
        corollary_bounds("corollary1", zero)
    with pytest.raises(ArgumentError):
        corollary_bounds(FormulaId.GRETTON, inputs)


def test_bound_reports_echo_their_inputs():
    report = bound_report(FormulaId.THEOREM1_HIGHPROB, _inputs(), metadata={"gc_FG_std_error": 0.001})
    payload = report.to_dict()
    assert payload["formula_id"] == "theorem1_highprob"
    assert payload["inputs"] == {"l": 1.0, "nu": 1.0, "b": None, "n": 100, "delta": 0.1, "gc_FG": 0.06, "gc_F": 0.04}
    assert payload["metadata"] == {"gc_FG_std_error": 0.001}
    assert payload["value"] == pytest.approx(THEOREM1_HIGHPROB, rel=1e-12)

    infinite = bound_report(FormulaId.INFINITE_CLASS, _inputs(), feature_lipschitz=2.0, eps=0.05)
    assert infinite.inputs["eps"] == 0.05

    gretton = scalar_bound_report("gretton", nu=1.0, n=100, delta=0.05)
    assert gretton.inputs == {"nu": 1.0, "n": 100, "delta": 0.05}
    assert gretton.value == pytest.approx(GRETTON_N100, rel=1e-12)

    with pytest.raises(ArgumentError):
        bound_report(FormulaId.GRETTON, _inputs())
    with pytest.raises(ArgumentError):
        scalar_bound_report(FormulaId.THEOREM1_HIGHPROB, nu=1.0, n=100, delta=0.1)
