"""JSON jobs for the ``fit`` command."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.common.errors import ArgumentError, ConfigurationError
from src.common.seeding import derive_seed, make_rng
from src.function_classes.classes import identity_class
from src.function_classes.config import ClassPairConfig
from src.kernels.base import compose
from src.kernels.config import KernelConfig
from src.mmd.config import SamplerConfig
from src.mmd.samples import SampleMatrix

from .fits import FitResult, Orientation, excess_risk_from_table, min_mmd_fit, minimax_mmd_fit
from .oracles import OracleSettings, select_oracle

logger = logging.getLogger(__name__)


class FitDataConfig(BaseModel):
    """Either two sample files or two laws plus a sample size."""

    model_config = ConfigDict(extra="forbid")

    x_path: Optional[str] = None
    y_path: Optional[str] = None
    x: Optional[SamplerConfig] = None
    y: Optional[SamplerConfig] = None
    n: Optional[int] = Field(None, ge=2)

    @model_validator(mode="after")
    def _one_source(self) -> "FitDataConfig":
        files = self.x_path is not None and self.y_path is not None
        laws = self.x is not None and self.y is not None and self.n is not None
        if files == laws:
            raise ValueError("give x_path and y_path, or x, y and n")
        return self


class FitJobConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kernel: KernelConfig
    classes: ClassPairConfig
    data: FitDataConfig
    orientation: Orientation = Orientation.MIN_F_MAX_G
    excess_risk: bool = Field(False, description="Needs data laws; scores the fit with a population oracle")


def _resolve(path: str, base_dir: Path) -> Path:
    candidate = Path(path)
    return candidate if candidate.is_absolute() else base_dir / candidate


def _load_samples(data: FitDataConfig, seed: int, base_dir: Path) -> tuple[np.ndarray, np.ndarray]:
    if data.x_path is not None:
        return (
            SampleMatrix.from_csv(_resolve(data.x_path, base_dir)).data,
            SampleMatrix.from_csv(_resolve(str(data.y_path), base_dir)).data,
        )
    rng = make_rng(derive_seed(seed, 0))
    return data.x.build().sample(data.n, rng), data.y.build().sample(data.n, rng)  # type: ignore[union-attr]


def run_fit_job(
    job: FitJobConfig,
    method: str,
    seed: int,
    threads: int = 1,
    oracle_settings: Optional[OracleSettings] = None,
    base_dir: Path = Path("."),
) -> Dict[str, Any]:
    """``minmmd`` or ``minimax`` fit; minmmd with a single non-identity feature f uses the kernel k o f."""

    if method not in ("minmmd", "minimax"):
        raise ArgumentError(f"unknown fit method {method!r}")
    kernel = job.kernel.build()
    F, G = job.classes.build()
    x, y = _load_samples(job.data, seed, base_dir)
    if method == "minmmd":
        if len(F) != 1:
            raise ConfigurationError(f"minmmd uses a single feature map; F has {len(F)} members")
        if job.classes.F is not None:
            kernel = compose(kernel, F[0])
        fit: FitResult = min_mmd_fit(kernel, G, x, y)
    else:
        fit = minimax_mmd_fit(kernel, F, G, x, y, job.orientation, threads=threads)
    result: Dict[str, Any] = {"method": method, "fit": fit.to_dict()}
    if job.excess_risk:
        if job.data.x is None or job.data.y is None:
            raise ConfigurationError("excess_risk needs data laws x and y")
        if method == "minmmd":
            F = identity_class(G.output_dim)
        oracle = select_oracle(
            kernel,
            F,
            G,
            job.data.x.build(),
            job.data.y.build(),
            settings=oracle_settings,
            seed=derive_seed(seed, 1),
            threads=threads,
        )
        population, errors = oracle.population_table(F, G)
        result["excess_risk"] = excess_risk_from_table(population, fit)
        result["oracle_max_std_error"] = float(np.max(errors))
    logger.info("Fit finished", extra={"method": method, "g_index": fit.g_index, "f_index": fit.f_index})
    return result


__all__ = ["FitDataConfig", "FitJobConfig", "run_fit_job"]
