"""Certified boundedness/Lipschitz constants (l, nu, b) for supported kernels."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from src.common.errors import ArgumentError, ConfigurationError

from .base import (
    CompositeKernel,
    GaussianKernel,
    KernelSpec,
    LaplacianKernel,
    TranslationInvariantKernel,
)

# sup_t 2 t exp(-t^2) is attained at t = 1/sqrt(2).
GAUSSIAN_LIPSCHITZ_FACTOR = 2.0 * math.sqrt(2.0) * math.exp(-0.5)


@dataclass(frozen=True)
class KernelConstants:
    """l: Lipschitz constant of k(u, .) - k(u', .); nu: bound on k(u, u); b: support diameter.

    Absent nu or b count as +inf inside min{4 nu, l b}; at least one must be present.
    """

    l: float
    nu: Optional[float] = None
    b: Optional[float] = None

    def __post_init__(self) -> None:
        if self.nu is None and self.b is None:
            raise ConfigurationError("kernel constants need nu or b; with both absent the bound is vacuous")
        for name, value in (("l", self.l), ("nu", self.nu), ("b", self.b)):
            if value is not None and (math.isnan(value) or value < 0):
                raise ConfigurationError(f"constant {name} must be nonnegative, got {value}")

    @property
    def min_term(self) -> float:
        four_nu = 4.0 * self.nu if self.nu is not None else math.inf
        lb = self.l * self.b if self.b is not None else math.inf
        return min(four_nu, lb)

    def to_dict(self) -> dict[str, Optional[float]]:
        return {"l": self.l, "nu": self.nu, "b": self.b, "min_term": self.min_term}


def _min_optional(*values: Optional[float]) -> Optional[float]:
    present = [value for value in values if value is not None]
    return min(present) if present else None


def certified_constants(
    kernel: KernelSpec,
    dim: int,
    support_diameter: Optional[float] = None,
) -> KernelConstants:
    """Constants of the boundedness and Lipschitz assumptions for ``kernel`` on R^dim.

    For a composite kernel ``dim`` and ``support_diameter`` describe the domain
    of the feature map; the base kernel is certified on the feature's range.
    """

    if dim < 1:
        raise ArgumentError(f"dim must be at least 1, got {dim}")
    if support_diameter is not None and support_diameter < 0:
        raise ArgumentError(f"support_diameter must be nonnegative, got {support_diameter}")

    if isinstance(kernel, GaussianKernel):
        return KernelConstants(l=GAUSSIAN_LIPSCHITZ_FACTOR / kernel.bandwidth, nu=1.0, b=support_diameter)
    if isinstance(kernel, LaplacianKernel):
        return KernelConstants(l=2.0 * math.sqrt(dim) / float(kernel.sigma), nu=1.0, b=support_diameter)
    if isinstance(kernel, TranslationInvariantKernel):
        if kernel.l_t is None or kernel.nu_t is None:
            raise ConfigurationError("translation-invariant kernels need certified l_t and nu_t")
        return KernelConstants(l=2.0 * float(kernel.l_t), nu=float(kernel.nu_t), b=support_diameter)
    if isinstance(kernel, CompositeKernel):
        feature = kernel.feature
        if feature.input_dim != dim:
            raise ArgumentError(f"composite kernel expects inputs of dimension {feature.input_dim}, got {dim}")
        base = certified_constants(kernel.base, feature.output_dim)
        lipschitz = feature.lipschitz_bound()
        mapped = lipschitz * support_diameter if support_diameter is not None else None
        return KernelConstants(l=base.l * lipschitz, nu=base.nu, b=_min_optional(base.b, mapped))
    raise ConfigurationError(f"no certified constants for kernel type {type(kernel).__name__}")


__all__ = ["KernelConstants", "certified_constants", "GAUSSIAN_LIPSCHITZ_FACTOR"]
