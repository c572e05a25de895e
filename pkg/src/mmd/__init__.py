"""Squared-MMD estimators, population oracles and samplers."""

from .estimators import (
    EstimatorKind,
    MmdEstimate,
    generalized_mmd_v,
    h_term,
    mmd_pair_table,
    mmd_u_squared,
    mmd_v_squared,
)
from .oracles import population_mmd_squared_gaussian_closed_form, population_mmd_squared_monte_carlo
from .samples import (
    GaussianDistSpec,
    MappedSampler,
    PointMassSpec,
    SampleMatrix,
    Sampler,
    UniformBoxSpec,
    gaussian_law,
)

__all__ = [
    "EstimatorKind",
    "MmdEstimate",
    "h_term",
    "mmd_u_squared",
    "mmd_v_squared",
    "generalized_mmd_v",
    "mmd_pair_table",
    "population_mmd_squared_gaussian_closed_form",
    "population_mmd_squared_monte_carlo",
    "SampleMatrix",
    "Sampler",
    "GaussianDistSpec",
    "PointMassSpec",
    "UniformBoxSpec",
    "MappedSampler",
    "gaussian_law",
]
