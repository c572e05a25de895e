"""Estimators over finite classes and their population oracles."""

from .fits import (
    FitResult,
    Orientation,
    excess_risk,
    excess_risk_from_table,
    min_mmd_fit,
    minimax_mmd_fit,
    saddle_value,
    select_indices,
)
from .oracles import (
    ClosedFormOracle,
    MonteCarloOracle,
    OracleSettings,
    PopulationOracle,
    closed_form_available,
    population_table,
    select_oracle,
)

__all__ = [
    "FitResult",
    "Orientation",
    "min_mmd_fit",
    "minimax_mmd_fit",
    "excess_risk",
    "excess_risk_from_table",
    "saddle_value",
    "select_indices",
    "PopulationOracle",
    "OracleSettings",
    "ClosedFormOracle",
    "MonteCarloOracle",
    "closed_form_available",
    "select_oracle",
    "population_table",
]
