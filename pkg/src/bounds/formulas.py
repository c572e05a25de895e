"""Closed-form concentration and generalization bounds for squared-MMD estimates.

``ln`` is the natural logarithm throughout. Every function returns a
nonnegative float; ``BoundReport`` wraps one value with the inputs it consumed.
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Any, Dict, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from src.common.errors import ArgumentError, ConfigurationError, ConsistencyError
from src.kernels.constants import KernelConstants

SQRT_PI = math.sqrt(math.pi)


class FormulaId(str, Enum):
    THEOREM1_EXPECTATION = "theorem1_expectation"
    THEOREM1_HIGHPROB = "theorem1_highprob"
    THEOREM1_VSTATISTIC = "theorem1_vstatistic"
    INFINITE_CLASS = "infinite_class"
    GRETTON = "gretton"
    FUKUMIZU = "fukumizu"
    FUKUMIZU_TWO_SIDED = "fukumizu_two_sided"
    EMPIRICAL_MEASURE = "empirical_measure"
    BRIOL_EXCESS = "briol_excess"
    COROLLARY1 = "corollary1"
    COROLLARY2 = "corollary2"


class BoundInputs(BaseModel):
    """Constants, sample size, confidence and complexity terms shared by the class-uniform bounds."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    l: float = Field(..., ge=0, description="Lipschitz constant of k(u, .) - k(u', .)")
    nu: Optional[float] = Field(None, ge=0, description="Bound on sup k(u, u)")
    b: Optional[float] = Field(None, ge=0, description="Diameter of the kernel's domain")
    n: int = Field(..., ge=2)
    delta: float = Field(..., gt=0, lt=1)
    gc_FG: Optional[float] = Field(None, ge=0, description="E G_n(F o G (X))")
    gc_F: Optional[float] = Field(None, ge=0, description="E G_n(F (Y))")
    gc_G: Optional[float] = Field(None, ge=0, description="E G_n(G (X))")
    chaos: Optional[float] = Field(None, ge=0, description="Expected Rademacher chaos")

    @property
    def constants(self) -> KernelConstants:
        return KernelConstants(l=self.l, nu=self.nu, b=self.b)

    @property
    def min_term(self) -> float:
        value = self.constants.min_term
        if not math.isfinite(value):
            raise ConfigurationError("min{4 nu, l b} is infinite; the bound is vacuous")
        return value

    def require(self, *names: str) -> None:
        missing = [name for name in names if getattr(self, name) is None]
        if missing:
            raise ConfigurationError(f"bound needs {', '.join(missing)}")

    def tail(self, factor: float) -> float:
        """factor * min{4 nu, l b} * sqrt(ln(2/delta) / n)."""

        return factor * self.min_term * math.sqrt(math.log(2.0 / self.delta) / self.n)


class BoundReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    formula_id: FormulaId
    inputs: Dict[str, Any]
    value: float
    metadata: Dict[str, Any] = Field(default_factory=dict)

    def model_post_init(self, __context: Any) -> None:
        if not math.isfinite(self.value) or self.value < 0:
            raise ConsistencyError(f"{self.formula_id.value} produced an invalid bound {self.value}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "formula_id": self.formula_id.value,
            "inputs": dict(self.inputs),
            "value": self.value,
            "metadata": dict(self.metadata),
        }


def _check_delta(delta: float, *, allow_one: bool = False) -> None:
    upper_ok = delta <= 1 if allow_one else delta < 1
    if not (delta > 0 and upper_ok):
        interval = "(0, 1]" if allow_one else "(0, 1)"
        raise ArgumentError(f"delta must lie in {interval}, got {delta}")


def _check_n(n: int, minimum: int) -> None:
    if n < minimum:
        raise ArgumentError(f"n must be at least {minimum}, got {n}")


def _check_nonnegative(**values: float) -> None:
    for name, value in values.items():
        if math.isnan(value) or value < 0:
            raise ArgumentError(f"{name} must be nonnegative, got {value}")


def theorem1_bounds(inputs: BoundInputs) -> tuple[float, float]:
    """(expectation bound, high-probability bound) on sup_{f,g} |gamma_hat^2 - gamma^2|."""

    inputs.require("gc_FG", "gc_F")
    complexity = float(inputs.gc_FG) + float(inputs.gc_F)
    expectation = 32.0 * SQRT_PI * inputs.l * complexity
    highprob = 16.0 * SQRT_PI * inputs.l * complexity + inputs.tail(4.0)
    return expectation, highprob


def theorem1_vstatistic_bound(inputs: BoundInputs) -> float:
    """High-probability bound for the biased estimator: add the U-V gap 8 nu / (n - 1)."""

    if inputs.nu is None:
        raise ConfigurationError("the V-statistic extension needs nu")
    return theorem1_bounds(inputs)[1] + 8.0 * inputs.nu / (inputs.n - 1)


def infinite_class_bound(inputs: BoundInputs, feature_lipschitz: float, eps: float) -> float:
    """High-probability bound plus the net approximation term 4 l (l' + 2) eps."""

    _check_nonnegative(feature_lipschitz=feature_lipschitz, eps=eps)
    return theorem1_bounds(inputs)[1] + 4.0 * inputs.l * (feature_lipschitz + 2.0) * eps


def gretton_deviation_bound(nu_sup: float, n: int, delta: float) -> float:
    """2 nu sqrt(2 ln(2/delta) / floor(n/2)) for a single kernel and fixed samples."""

    _check_delta(delta)
    _check_n(n, 2)
    _check_nonnegative(nu_sup=nu_sup)
    return 2.0 * nu_sup * math.sqrt(2.0 * math.log(2.0 / delta) / (n // 2))


def fukumizu_cstar(chaos: float, nu: float, n: int, delta: float) -> float:
    """C*(X, delta) = 2 sqrt(chaos) + 2 sqrt(nu / n) + sqrt(18 nu ln(2/delta) / n)."""

    _check_delta(delta)
    _check_n(n, 1)
    _check_nonnegative(chaos=chaos, nu=nu)
    return 2.0 * math.sqrt(chaos) + 2.0 * math.sqrt(nu / n) + math.sqrt(18.0 * nu * math.log(2.0 / delta) / n)


def fukumizu_two_sided(chaos_x: float, chaos_y: float, nu: float, n: int, delta: float) -> float:
    """C*(X, delta) + C*(Y, delta), the bound on sup_k |gamma_hat^b - gamma|."""

    return fukumizu_cstar(chaos_x, nu, n, delta) + fukumizu_cstar(chaos_y, nu, n, delta)


def empirical_measure_bound(nu: float, n: int, delta: float) -> float:
    """sqrt(2 nu / n) (1 + sqrt(ln(1/delta))): distance of an empirical measure to its law."""

    _check_delta(delta, allow_one=True)
    _check_n(n, 1)
    _check_nonnegative(nu=nu)
    return math.sqrt(2.0 * nu / n) * (1.0 + math.sqrt(math.log(1.0 / delta)))


def briol_excess_bound(nu: float, n: int, delta: float) -> float:
    """Excess (unsquared) MMD of the minimum-distance estimator against an exact model law."""

    return 2.0 * empirical_measure_bound(nu, n, delta)


def corollary_bounds(which: Literal["corollary1", "corollary2"] | FormulaId, inputs: BoundInputs) -> float:
    """Excess-risk bounds of the minimum-MMD estimator (corollary1) and of the minimax estimator (corollary2)."""

    formula = FormulaId(which)
    if formula is FormulaId.COROLLARY1:
        inputs.require("gc_G")
        complexity = float(inputs.gc_G)
    elif formula is FormulaId.COROLLARY2:
        inputs.require("gc_F", "gc_FG")
        complexity = float(inputs.gc_F) + float(inputs.gc_FG)
    else:
        raise ArgumentError(f"corollary_bounds handles corollary1 or corollary2, got {formula.value}")
    return 32.0 * SQRT_PI * inputs.l * complexity + inputs.tail(8.0)


def _echo(inputs: BoundInputs, *names: str) -> Dict[str, Any]:
    return {name: getattr(inputs, name) for name in ("l", "nu", "b", "n", "delta", *names)}


def bound_report(
    formula_id: FormulaId | str,
    inputs: BoundInputs,
    metadata: Optional[Dict[str, Any]] = None,
    **extra: float,
) -> BoundReport:
    """Evaluate one class-uniform formula and wrap it with the inputs it consumed.

    ``extra`` carries formula-specific scalars (``feature_lipschitz`` and ``eps``
    for the infinite-class bound).
    """

    formula = FormulaId(formula_id)
    if formula is FormulaId.THEOREM1_EXPECTATION:
        value, echo = theorem1_bounds(inputs)[0], _echo(inputs, "gc_FG", "gc_F")
    elif formula is FormulaId.THEOREM1_HIGHPROB:
        value, echo = theorem1_bounds(inputs)[1], _echo(inputs, "gc_FG", "gc_F")
    elif formula is FormulaId.THEOREM1_VSTATISTIC:
        value, echo = theorem1_vstatistic_bound(inputs), _echo(inputs, "gc_FG", "gc_F")
    elif formula is FormulaId.INFINITE_CLASS:
        lipschitz = float(extra.get("feature_lipschitz", 0.0))
        eps = float(extra.get("eps", 0.0))
        value = infinite_class_bound(inputs, lipschitz, eps)
        echo = {**_echo(inputs, "gc_FG", "gc_F"), "feature_lipschitz": lipschitz, "eps": eps}
    elif formula is FormulaId.COROLLARY1:
        value, echo = corollary_bounds(formula, inputs), _echo(inputs, "gc_G")
    elif formula is FormulaId.COROLLARY2:
        value, echo = corollary_bounds(formula, inputs), _echo(inputs, "gc_F", "gc_FG")
    else:
        raise ArgumentError(f"{formula.value} is not a class-uniform formula; use scalar_bound_report")
    return BoundReport(formula_id=formula, inputs=echo, value=value, metadata=dict(metadata or {}))


def scalar_bound_report(formula_id: FormulaId | str, metadata: Optional[Dict[str, Any]] = None, **params: float) -> BoundReport:
    """Reports for the single-kernel formulas, echoing exactly their parameters."""

    formula = FormulaId(formula_id)
    if formula is FormulaId.GRETTON:
        value = gretton_deviation_bound(params["nu"], int(params["n"]), params["delta"])
    elif formula is FormulaId.FUKUMIZU:
        value = fukumizu_cstar(params["chaos"], params["nu"], int(params["n"]), params["delta"])
    elif formula is FormulaId.FUKUMIZU_TWO_SIDED:
        value = fukumizu_two_sided(
            params["chaos_x"], params["chaos_y"], params["nu"], int(params["n"]), params["delta"]
        )
    elif formula is FormulaId.EMPIRICAL_MEASURE:
        value = empirical_measure_bound(params["nu"], int(params["n"]), params["delta"])
    elif formula is FormulaId.BRIOL_EXCESS:
        value = briol_excess_bound(params["nu"], int(params["n"]), params["delta"])
    else:
        raise ArgumentError(f"{formula.value} needs BoundInputs; use bound_report")
    return BoundReport(formula_id=formula, inputs=dict(params), value=value, metadata=dict(metadata or {}))


__all__ = [
    "FormulaId",
    "BoundInputs",
    "BoundReport",
    "theorem1_bounds",
    "theorem1_vstatistic_bound",
    "infinite_class_bound",
    "gretton_deviation_bound",
    "fukumizu_cstar",
    "fukumizu_two_sided",
    "empirical_measure_bound",
    "briol_excess_bound",
    "corollary_bounds",
    "bound_report",
    "scalar_bound_report",
]
