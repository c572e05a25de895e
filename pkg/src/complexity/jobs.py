"""JSON jobs for the ``complexity`` command.

A job either names a fixed sample (``sample``: headerless CSV) and gets the
empirical complexity of the class on it, or names a law (``data`` plus ``n``)
and gets the expectation over samples of that size.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.common.config import ComplexityDefaults
from src.common.errors import ArgumentError, ConfigurationError
from src.common.seeding import derive_seed
from src.function_classes.config import ClassConfig
from src.kernels.config import KernelConfig
from src.mmd.config import SamplerConfig
from src.mmd.samples import SampleMatrix

from .estimates import (
    ComplexityEstimate,
    complexity_ratio,
    empirical_gaussian_complexity,
    empirical_rademacher_chaos,
    empirical_rademacher_complexity,
    expected_chaos,
    expected_complexity,
)

logger = logging.getLogger(__name__)


class ComplexityJobConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    function_class: ClassConfig = Field(..., description="Class whose complexity is estimated; kernel features for chaos")
    kernel: Optional[KernelConfig] = Field(None, description="Required for chaos")
    sample: Optional[str] = Field(None, description="Headerless CSV, one observation per row")
    data: Optional[SamplerConfig] = None
    n: Optional[int] = Field(None, ge=1)
    replicates: Optional[int] = Field(None, ge=1, description="Coefficient draws on a fixed sample")
    outer_replicates: Optional[int] = Field(None, ge=1)
    inner_replicates: Optional[int] = Field(None, ge=1)
    exact: Optional[bool] = Field(None, description="Force or forbid exact sign enumeration")
    compare: bool = Field(False, description="Also report the Rademacher counterpart and the Gaussian/Rademacher ratio")

    @model_validator(mode="after")
    def _one_source(self) -> "ComplexityJobConfig":
        if (self.sample is None) == (self.data is None):
            raise ValueError("give exactly one of sample or data")
        if self.data is not None and self.n is None:
            raise ValueError("data needs n")
        return self


def _fixed_sample(
    job: ComplexityJobConfig, kind: str, seed: int, replicates: int, cutoff: int, base_dir: Path
) -> ComplexityEstimate:
    path = Path(job.sample)  # type: ignore[arg-type]
    x = SampleMatrix.from_csv(path if path.is_absolute() else base_dir / path).data
    function_class = job.function_class.build()
    if kind == "chaos":
        return empirical_rademacher_chaos(
            job.kernel.build(), function_class, x, replicates, seed, exact=job.exact, exact_cutoff=cutoff  # type: ignore[union-attr]
        )
    values = function_class.apply(x)
    if kind == "gaussian":
        return empirical_gaussian_complexity(values, replicates, seed)
    return empirical_rademacher_complexity(values, replicates, seed, exact=job.exact, exact_cutoff=cutoff)


def _over_law(job: ComplexityJobConfig, kind: str, seed: int, outer: int, inner: int) -> ComplexityEstimate:
    sampler = job.data.build()  # type: ignore[union-attr]
    function_class = job.function_class.build()
    n = int(job.n)  # type: ignore[arg-type]
    if kind == "chaos":
        return expected_chaos(job.kernel.build(), function_class, sampler, n, outer, inner, seed)  # type: ignore[union-attr]
    return expected_complexity(function_class, sampler, n, outer, inner, seed, kind=kind)


def run_complexity_job(
    job: ComplexityJobConfig,
    kind: str,
    seed: int,
    defaults: Optional[ComplexityDefaults] = None,
    base_dir: Path = Path("."),
) -> Dict[str, Any]:
    """Estimate one complexity; with ``compare`` the Gaussian and Rademacher values share ``seed``."""

    if kind not in ("gaussian", "rademacher", "chaos"):
        raise ArgumentError(f"unknown complexity kind {kind!r}")
    if kind == "chaos" and job.kernel is None:
        raise ConfigurationError("chaos needs a kernel")
    defaults = defaults or ComplexityDefaults()
    outer = job.outer_replicates or defaults.outer_replicates
    inner = job.inner_replicates or defaults.inner_replicates
    replicates = job.replicates or inner
    cutoff = defaults.exact_enumeration_cutoff
    job_seed = derive_seed(seed, 0)

    def estimate(which: str) -> ComplexityEstimate:
        if job.sample is not None:
            return _fixed_sample(job, which, job_seed, replicates, cutoff, base_dir)
        return _over_law(job, which, job_seed, outer, inner)

    estimates = {kind: estimate(kind)}
    if job.compare and kind != "chaos":
        other = "rademacher" if kind == "gaussian" else "gaussian"
        estimates[other] = estimate(other)
    result: Dict[str, Any] = {"kind": kind, **{name: value.to_dict() for name, value in estimates.items()}}
    if len(estimates) == 2:
        result["gaussian_to_rademacher"] = complexity_ratio(estimates["gaussian"], estimates["rademacher"])
    logger.info("Complexity estimated", extra={"kind": kind, "mean": result[kind]["mean"]})
    return result


__all__ = ["ComplexityJobConfig", "run_complexity_job"]
