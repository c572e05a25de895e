"""Population squared-MMD tables over F x G: closed form when possible, Monte Carlo otherwise."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Protocol, Tuple

import numpy as np

from src.common.errors import ArgumentError, ConfigurationError
from src.common.seeding import derive_seed
from src.function_classes.classes import FiniteFunctionClass
from src.function_classes.maps import ComposedMap, FunctionMap
from src.kernels.base import CompositeKernel, GaussianKernel, KernelSpec
from src.mmd.oracles import (
    CLOSED_FORM_TOLERANCE,
    DEFAULT_BLOCK_SIZE,
    population_mmd_squared_gaussian_closed_form,
    population_mmd_squared_monte_carlo,
)
from src.mmd.samples import GaussianDistSpec, MappedSampler, Sampler, gaussian_law

logger = logging.getLogger(__name__)

DEFAULT_MONTE_CARLO_DRAWS = 1_000_000


class PopulationOracle(Protocol):
    kernel: KernelSpec

    def population_table(
        self, F: FiniteFunctionClass, G: FiniteFunctionClass
    ) -> Tuple[np.ndarray, np.ndarray]: ...


@dataclass(frozen=True)
class OracleSettings:
    monte_carlo_draws: int = DEFAULT_MONTE_CARLO_DRAWS
    block_size: int = DEFAULT_BLOCK_SIZE
    closed_form_tolerance: float = CLOSED_FORM_TOLERANCE


def _gaussian_chain(kernel: KernelSpec) -> Optional[Tuple[float, Optional[FunctionMap]]]:
    """(sigma, affine feature or None) when ``kernel`` is Gaussian after an affine map."""

    if isinstance(kernel, GaussianKernel):
        return kernel.bandwidth, None
    if isinstance(kernel, CompositeKernel) and kernel.feature.affine_form() is not None:
        inner = _gaussian_chain(kernel.base)
        if inner is None:
            return None
        sigma, outer = inner
        feature = kernel.feature if outer is None else ComposedMap(outer=outer, inner=kernel.feature)
        return sigma, feature
    return None


def _push(law: GaussianDistSpec, feature: Optional[FunctionMap]) -> GaussianDistSpec:
    if feature is None:
        return law
    return law.push_forward(*feature.affine_form())


@dataclass(frozen=True)
class ClosedFormOracle:
    """Gaussian kernel (possibly after affine features), Gaussian data, affine F o G chain."""

    kernel: KernelSpec
    x_law: GaussianDistSpec
    y_law: GaussianDistSpec
    tolerance: float = CLOSED_FORM_TOLERANCE

    def __post_init__(self) -> None:
        if _gaussian_chain(self.kernel) is None:
            raise ConfigurationError("closed-form oracle needs a Gaussian kernel behind affine features")

    def population_table(self, F: FiniteFunctionClass, G: FiniteFunctionClass) -> Tuple[np.ndarray, np.ndarray]:
        if not (F.is_affine() and G.is_affine()):
            raise ConfigurationError("closed-form oracle needs affine classes F and G")
        sigma, kernel_feature = _gaussian_chain(self.kernel)  # type: ignore[misc]
        values = np.empty((len(F), len(G)))
        for f_index, f in enumerate(F):
            q = _push(_push(self.y_law, f), kernel_feature)
            for g_index, g in enumerate(G):
                p = _push(_push(self.x_law, ComposedMap(outer=f, inner=g)), kernel_feature)
                values[f_index, g_index] = population_mmd_squared_gaussian_closed_form(
                    sigma, p, q, tolerance=self.tolerance
                ).value
        return values, np.zeros_like(values)


@dataclass(frozen=True)
class MonteCarloOracle:
    """Blocked U-statistic per (f, g) cell; cell (i, j) uses sub-stream (seed, i, j)."""

    kernel: KernelSpec
    x_sampler: Sampler
    y_sampler: Sampler
    seed: int
    draws: int = DEFAULT_MONTE_CARLO_DRAWS
    block_size: int = DEFAULT_BLOCK_SIZE
    threads: int = 1

    def population_table(self, F: FiniteFunctionClass, G: FiniteFunctionClass) -> Tuple[np.ndarray, np.ndarray]:
        values = np.empty((len(F), len(G)))
        errors = np.empty_like(values)
        for f_index, f in enumerate(F):
            q = MappedSampler(self.y_sampler, f)
            for g_index, g in enumerate(G):
                p = MappedSampler(self.x_sampler, ComposedMap(outer=f, inner=g))
                estimate = population_mmd_squared_monte_carlo(
                    self.kernel,
                    p,
                    q,
                    m=self.draws,
                    seed=derive_seed(self.seed, f_index, g_index),
                    block_size=self.block_size,
                    threads=self.threads,
                )
                values[f_index, g_index] = estimate.value
                errors[f_index, g_index] = estimate.std_error or 0.0
        return values, errors


def closed_form_available(
    kernel: KernelSpec,
    F: FiniteFunctionClass,
    G: FiniteFunctionClass,
    x_sampler: Sampler,
    y_sampler: Sampler,
) -> bool:
    return (
        _gaussian_chain(kernel) is not None
        and F.is_affine()
        and G.is_affine()
        and gaussian_law(x_sampler) is not None
        and gaussian_law(y_sampler) is not None
    )


def select_oracle(
    kernel: KernelSpec,
    F: FiniteFunctionClass,
    G: FiniteFunctionClass,
    x_sampler: Sampler,
    y_sampler: Sampler,
    settings: Optional[OracleSettings] = None,
    seed: int = 0,
    threads: int = 1,
    mode: str = "auto",
) -> PopulationOracle:
    """Closed form for Gaussian kernel, Gaussian data and affine chains; Monte Carlo otherwise."""

    settings = settings or OracleSettings()
    if mode not in {"auto", "closed_form", "monte_carlo"}:
        raise ArgumentError(f"unknown oracle mode {mode!r}")
    if G.input_dim != x_sampler.dim or F.input_dim != y_sampler.dim:
        raise ArgumentError("sampler dimensions do not match the class chain")
    available = closed_form_available(kernel, F, G, x_sampler, y_sampler)
    if mode == "closed_form" and not available:
        raise ConfigurationError("closed-form oracle requested for a configuration without a closed form")
    if mode != "monte_carlo" and available:
        logger.info("Using closed-form population oracle")
        return ClosedFormOracle(
            kernel=kernel,
            x_law=gaussian_law(x_sampler),  # type: ignore[arg-type]
            y_law=gaussian_law(y_sampler),  # type: ignore[arg-type]
            tolerance=settings.closed_form_tolerance,
        )
    logger.info(
        "Using Monte-Carlo population oracle",
        extra={"draws": settings.monte_carlo_draws, "block_size": settings.block_size},
    )
    return MonteCarloOracle(
        kernel=kernel,
        x_sampler=x_sampler,
        y_sampler=y_sampler,
        seed=seed,
        draws=settings.monte_carlo_draws,
        block_size=settings.block_size,
        threads=threads,
    )


def population_table(
    oracle: PopulationOracle, F: FiniteFunctionClass, G: FiniteFunctionClass
) -> Tuple[np.ndarray, np.ndarray]:
    """(values, std_errors), each |F| x |G|."""

    return oracle.population_table(F, G)


__all__ = [
    "PopulationOracle",
    "OracleSettings",
    "ClosedFormOracle",
    "MonteCarloOracle",
    "closed_form_available",
    "select_oracle",
    "population_table",
]
