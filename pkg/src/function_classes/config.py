"""JSON schema for maps and function classes."""

from __future__ import annotations

from typing import Annotated, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .classes import FiniteFunctionClass, GridClassSpec, compose_classes, identity_class, materialize_grid
from .maps import AffineMap, FunctionMap, IdentityMap, ShallowNet


class _StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class IdentityMapConfig(_StrictModel):
    kind: Literal["identity"]
    dim: int = Field(..., ge=1, description="Input and output dimension")

    def build(self) -> FunctionMap:
        return IdentityMap(self.dim)


class AffineMapConfig(_StrictModel):
    kind: Literal["affine"]
    A: List[List[float]] = Field(..., description="d_out x d_in matrix, row-major")
    c: Optional[List[float]] = Field(None, description="Offset of length d_out; zeros when omitted")

    def build(self) -> FunctionMap:
        matrix = np.asarray(self.A, dtype=float)
        offset = np.zeros(matrix.shape[0]) if self.c is None else np.asarray(self.c, dtype=float)
        return AffineMap(matrix, offset)


class ShallowNetConfig(_StrictModel):
    kind: Literal["shallow_net"]
    W1: List[List[float]]
    b1: List[float]
    W2: List[List[float]]
    b2: List[float]
    activation: Literal["relu", "tanh"] = "relu"
    l_sigma: Optional[float] = Field(None, gt=0, description="Overrides the activation's Lipschitz constant")

    def build(self) -> FunctionMap:
        return ShallowNet(self.W1, self.b1, self.W2, self.b2, activation=self.activation, l_sigma=self.l_sigma)


MapConfig = Annotated[
    Union[IdentityMapConfig, AffineMapConfig, ShallowNetConfig],
    Field(discriminator="kind"),
]


class ExplicitClassConfig(_StrictModel):
    kind: Literal["explicit"]
    members: List[MapConfig]
    label: str = ""

    def build(self) -> FiniteFunctionClass:
        return FiniteFunctionClass(members=tuple(member.build() for member in self.members), label=self.label)


class IdentityClassConfig(_StrictModel):
    kind: Literal["identity"]
    dim: int = Field(..., ge=1)
    label: str = "identity"

    def build(self) -> FiniteFunctionClass:
        return identity_class(self.dim, label=self.label)


class GridClassConfig(_StrictModel):
    kind: Literal["grid"]
    family: Literal["shift", "scale", "location_scale", "linear"]
    grid: List[Union[float, List[float]]] = Field(..., description="Parameter vectors, one per member")
    box: Optional[Tuple[float, float]] = None
    output_dim: Optional[int] = Field(None, ge=1, description="Row count for the linear family")
    epsilon: Optional[float] = Field(None, ge=0, description="Declared net radius, kept as metadata")
    label: str = ""

    def spec(self) -> GridClassSpec:
        return GridClassSpec(
            family=self.family,
            grid=tuple(tuple(np.atleast_1d(np.asarray(point, dtype=float)).tolist()) for point in self.grid),
            box=self.box,
            output_dim=self.output_dim,
            epsilon=self.epsilon,
            label=self.label,
        )

    def build(self) -> FiniteFunctionClass:
        return materialize_grid(self.spec())


ClassConfig = Annotated[
    Union[ExplicitClassConfig, IdentityClassConfig, GridClassConfig],
    Field(discriminator="kind"),
]


class ClassPairConfig(_StrictModel):
    """Generator class G and feature class F; F defaults to the identity on G's range."""

    G: ClassConfig
    F: Optional[ClassConfig] = None

    def build(self) -> Tuple[FiniteFunctionClass, FiniteFunctionClass]:
        generators = self.G.build()
        features = self.F.build() if self.F is not None else identity_class(generators.output_dim)
        # Surfaces a dimension mismatch at load time.
        compose_classes(features, generators)
        return features, generators


__all__ = [
    "IdentityMapConfig",
    "AffineMapConfig",
    "ShallowNetConfig",
    "MapConfig",
    "ExplicitClassConfig",
    "IdentityClassConfig",
    "GridClassConfig",
    "ClassConfig",
    "ClassPairConfig",
]
