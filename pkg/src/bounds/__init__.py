"""Concentration and generalization bounds."""

from .formulas import (
    BoundInputs,
    BoundReport,
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
