"""Empirical complexities of finite classes and seminorm bounds."""

from .estimates import (
    ComplexityEstimate,
    complexity_ratio,
    empirical_gaussian_complexity,
    empirical_rademacher_chaos,
    empirical_rademacher_complexity,
    expected_chaos,
    expected_complexity,
)
from .seminorms import (
    SeminormBounds,
    mmd_kernel_seminorm_bounds,
    seminorm_probe,
    u_statistic_seminorm_bounds,
)

__all__ = [
    "ComplexityEstimate",
    "empirical_gaussian_complexity",
    "empirical_rademacher_complexity",
    "empirical_rademacher_chaos",
    "expected_complexity",
    "expected_chaos",
    "complexity_ratio",
    "SeminormBounds",
    "u_statistic_seminorm_bounds",
    "mmd_kernel_seminorm_bounds",
    "seminorm_probe",
]
