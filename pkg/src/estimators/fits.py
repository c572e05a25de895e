"""Minimum-MMD and minimax MMD-GAN estimators over finite classes, and their excess risk."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np

from src.common.errors import ArgumentError
from src.function_classes.classes import FiniteFunctionClass, identity_class
from src.kernels.base import KernelSpec
from src.mmd.estimators import EstimatorKind, mmd_pair_table

from .oracles import PopulationOracle

logger = logging.getLogger(__name__)


class Orientation(str, Enum):
    MIN_G = "min_g"
    MIN_F_MAX_G = "min_f_max_g"
    MIN_G_MAX_F = "min_g_max_f"


@dataclass(frozen=True, eq=False)
class FitResult:
    """Chosen member indices and the full |F| x |G| matrix of empirical squared MMDs."""

    g_index: int
    f_index: Optional[int]
    objective: float
    per_member_values: np.ndarray
    orientation: Orientation

    def __post_init__(self) -> None:
        values = np.array(self.per_member_values, dtype=float, copy=True)
        if values.ndim != 2:
            raise ArgumentError(f"per_member_values must be a matrix, got shape {values.shape}")
        row = 0 if self.f_index is None else self.f_index
        if not (0 <= row < values.shape[0] and 0 <= self.g_index < values.shape[1]):
            raise ArgumentError("fit indices out of range")
        if values[row, self.g_index] != self.objective:
            raise ArgumentError("objective must equal the value at the chosen indices")
        values.setflags(write=False)
        object.__setattr__(self, "per_member_values", values)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "g_index": self.g_index,
            "f_index": self.f_index,
            "objective": self.objective,
            "orientation": self.orientation.value,
            "per_member_values": self.per_member_values.tolist(),
        }


def select_indices(values: np.ndarray, orientation: Orientation | str) -> tuple[int, int]:
    """(f, g) chosen from a value matrix; ties go to the lowest index."""

    table = np.asarray(values, dtype=float)
    mode = Orientation(orientation)
    if mode is Orientation.MIN_G:
        if table.shape[0] != 1:
            raise ArgumentError("min_g selection needs a single feature row")
        return 0, int(np.argmin(table[0]))
    if mode is Orientation.MIN_F_MAX_G:
        f_index = int(np.argmin(table.max(axis=1)))
        return f_index, int(np.argmax(table[f_index]))
    g_index = int(np.argmin(table.max(axis=0)))
    return int(np.argmax(table[:, g_index])), g_index


def saddle_value(values: np.ndarray, orientation: Orientation | str) -> float:
    """min-max (or plain min) of a value matrix under ``orientation``."""

    table = np.asarray(values, dtype=float)
    mode = Orientation(orientation)
    if mode is Orientation.MIN_G:
        return float(table[0].min())
    if mode is Orientation.MIN_F_MAX_G:
        return float(table.max(axis=1).min())
    return float(table.max(axis=0).min())


def min_mmd_fit(kernel: KernelSpec, G: FiniteFunctionClass, X: object, Y: object) -> FitResult:
    """argmin over g of gamma_hat_u^2(g(X), Y)."""

    values = mmd_pair_table(kernel, identity_class(G.output_dim), G, X, Y, EstimatorKind.U_STATISTIC)
    _, g_index = select_indices(values, Orientation.MIN_G)
    return FitResult(
        g_index=g_index,
        f_index=None,
        objective=float(values[0, g_index]),
        per_member_values=values,
        orientation=Orientation.MIN_G,
    )


def minimax_mmd_fit(
    kernel: KernelSpec,
    F: FiniteFunctionClass,
    G: FiniteFunctionClass,
    X: object,
    Y: object,
    orientation: Orientation | str = Orientation.MIN_F_MAX_G,
    threads: int = 1,
) -> FitResult:
    """Exhaustive saddle point of gamma_hat^2_{k o f}(g(X), Y) over F x G."""

    mode = Orientation(orientation)
    if mode is Orientation.MIN_G:
        raise ArgumentError("minimax fits use min_f_max_g or min_g_max_f")
    values = mmd_pair_table(kernel, F, G, X, Y, EstimatorKind.U_STATISTIC, threads=threads)
    f_index, g_index = select_indices(values, mode)
    logger.debug("Minimax fit", extra={"f_index": f_index, "g_index": g_index, "orientation": mode.value})
    return FitResult(
        g_index=g_index,
        f_index=f_index,
        objective=float(values[f_index, g_index]),
        per_member_values=values,
        orientation=mode,
    )


def excess_risk_from_table(population: np.ndarray, fit: FitResult) -> float:
    """Population value at the fitted pair minus the population saddle value."""

    table = np.asarray(population, dtype=float)
    if table.shape != fit.per_member_values.shape:
        raise ArgumentError(f"population table shape {table.shape} does not match fit {fit.per_member_values.shape}")
    row = 0 if fit.f_index is None else fit.f_index
    return float(table[row, fit.g_index]) - saddle_value(table, fit.orientation)


def excess_risk(
    kernel: KernelSpec,
    F: FiniteFunctionClass,
    G: FiniteFunctionClass,
    fit: FitResult,
    oracle: PopulationOracle,
    orientation: Optional[Orientation | str] = None,
) -> float:
    """gamma^2 at the fitted pair minus inf/sup of the population values.

    ``oracle`` must have been built for ``kernel``. A singleton F with the
    min_g orientation gives the minimum-MMD excess risk.
    """

    if orientation is not None and Orientation(orientation) is not fit.orientation:
        raise ArgumentError(f"fit was made with {fit.orientation.value}, not {Orientation(orientation).value}")
    if oracle.kernel is not kernel:
        raise ArgumentError("oracle was built for a different kernel")
    population, _ = oracle.population_table(F, G)
    return excess_risk_from_table(population, fit)


__all__ = [
    "Orientation",
    "FitResult",
    "select_indices",
    "saddle_value",
    "min_mmd_fit",
    "minimax_mmd_fit",
    "excess_risk",
    "excess_risk_from_table",
]
