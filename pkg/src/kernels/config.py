"""JSON schema for kernels: {"kind": "gaussian", "sigma": 1.0} and friends.

Translation-invariant kernels need a profile function and are built in code only.
"""

from __future__ import annotations

from typing import Annotated, Any, Literal, Mapping, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter

from src.function_classes.config import MapConfig

from .base import GaussianKernel, KernelSpec, LaplacianKernel, compose


class GaussianKernelConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["gaussian"]
    sigma: float = Field(..., description="Bandwidth; any nonzero value, |sigma| is used")
    dim: Optional[int] = Field(None, ge=1)

    def build(self) -> KernelSpec:
        return GaussianKernel(self.sigma, dim=self.dim)


class LaplacianKernelConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["laplacian"]
    sigma: float = Field(..., gt=0)
    dim: Optional[int] = Field(None, ge=1)

    def build(self) -> KernelSpec:
        return LaplacianKernel(self.sigma, dim=self.dim)


class CompositeKernelConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["composite"]
    base: "KernelConfig"
    feature: MapConfig

    def build(self) -> KernelSpec:
        return compose(self.base.build(), self.feature.build())


KernelConfig = Annotated[
    Union[GaussianKernelConfig, LaplacianKernelConfig, CompositeKernelConfig],
    Field(discriminator="kind"),
]

CompositeKernelConfig.model_rebuild()

_KERNEL_ADAPTER: TypeAdapter[Any] = TypeAdapter(KernelConfig)


def kernel_from_config(payload: Mapping[str, Any]) -> KernelSpec:
    """Validate a kernel JSON object and build the kernel."""

    return _KERNEL_ADAPTER.validate_python(dict(payload)).build()


__all__ = [
    "GaussianKernelConfig",
    "LaplacianKernelConfig",
    "CompositeKernelConfig",
    "KernelConfig",
    "kernel_from_config",
]
