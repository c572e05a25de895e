"""JSON schema for the data-generating distributions."""

from __future__ import annotations

from typing import Annotated, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.function_classes.config import MapConfig

from .samples import GaussianDistSpec, MappedSampler, PointMassSpec, Sampler, UniformBoxSpec


class GaussianSamplerConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["gaussian"]
    mean: List[float]
    cov: Optional[Union[float, List[float], List[List[float]]]] = Field(
        None,
        description="Full matrix, diagonal vector or scalar variance; identity when omitted",
    )

    def build(self) -> Sampler:
        mean = np.asarray(self.mean, dtype=float)
        d = mean.shape[0]
        if self.cov is None:
            cov = np.eye(d)
        else:
            raw = np.asarray(self.cov, dtype=float)
            if raw.ndim == 0:
                cov = float(raw) * np.eye(d)
            elif raw.ndim == 1:
                cov = np.diag(raw)
            else:
                cov = raw
        return GaussianDistSpec(mean, cov)


class PointMassSamplerConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["point_mass"]
    location: List[float]

    def build(self) -> Sampler:
        return PointMassSpec(np.asarray(self.location, dtype=float))


class UniformBoxSamplerConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["uniform_box"]
    low: float
    high: float
    dim: int = Field(..., ge=1)

    def build(self) -> Sampler:
        return UniformBoxSpec(self.low, self.high, self.dim)


class MappedSamplerConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["mapped"]
    base: "SamplerConfig"
    map: MapConfig

    def build(self) -> Sampler:
        return MappedSampler(self.base.build(), self.map.build())


SamplerConfig = Annotated[
    Union[GaussianSamplerConfig, PointMassSamplerConfig, UniformBoxSamplerConfig, MappedSamplerConfig],
    Field(discriminator="kind"),
]

MappedSamplerConfig.model_rebuild()


__all__ = [
    "GaussianSamplerConfig",
    "PointMassSamplerConfig",
    "UniformBoxSamplerConfig",
    "MappedSamplerConfig",
    "SamplerConfig",
]
