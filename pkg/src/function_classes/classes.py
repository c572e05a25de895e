"""Finite function classes and explicit parameter grids."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.common.errors import ArgumentError, ConfigurationError

from .maps import AffineMap, ComposedMap, FunctionMap, IdentityMap


@dataclass(frozen=True)
class FiniteFunctionClass:
    """Ordered, nonempty list of maps sharing input and output dimension."""

    members: Tuple[FunctionMap, ...]
    label: str = ""
    parameters: Optional[Tuple[Tuple[float, ...], ...]] = None
    epsilon: Optional[float] = None

    def __post_init__(self) -> None:
        members = tuple(self.members)
        if not members:
            raise ConfigurationError(f"function class {self.label!r} is empty")
        in_dims = {member.input_dim for member in members}
        out_dims = {member.output_dim for member in members}
        if len(in_dims) != 1 or len(out_dims) != 1:
            raise ArgumentError(
                f"members of {self.label!r} disagree on dimensions: inputs {sorted(in_dims)}, outputs {sorted(out_dims)}"
            )
        if self.parameters is not None and len(self.parameters) != len(members):
            raise ArgumentError("parameter list must align with members")
        object.__setattr__(self, "members", members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, index: int) -> FunctionMap:
        return self.members[index]

    @property
    def input_dim(self) -> int:
        return self.members[0].input_dim

    @property
    def output_dim(self) -> int:
        return self.members[0].output_dim

    def apply(self, X: np.ndarray) -> List[np.ndarray]:
        """Class values: member g contributes g(X)."""

        return [member(X) for member in self.members]

    def lipschitz_bound(self) -> float:
        """Largest member Lipschitz bound."""

        return max(member.lipschitz_bound() for member in self.members)

    def is_affine(self) -> bool:
        return all(member.affine_form() is not None for member in self.members)


def identity_class(dim: int, label: str = "identity") -> FiniteFunctionClass:
    return FiniteFunctionClass(members=(IdentityMap(dim),), label=label)


def _shift(theta: np.ndarray, output_dim: Optional[int]) -> FunctionMap:
    return AffineMap(np.eye(theta.size), theta)


def _scale(theta: np.ndarray, output_dim: Optional[int]) -> FunctionMap:
    return AffineMap(np.diag(theta), np.zeros(theta.size))


def _location_scale(theta: np.ndarray, output_dim: Optional[int]) -> FunctionMap:
    if theta.size != 2:
        raise ConfigurationError(f"location_scale parameters are (a, b), got {theta.size} values")
    return AffineMap(np.array([[theta[0]]]), np.array([theta[1]]))


def _linear(theta: np.ndarray, output_dim: Optional[int]) -> FunctionMap:
    rows = output_dim or 1
    if theta.size % rows:
        raise ConfigurationError(f"linear parameters of length {theta.size} cannot fill {rows} rows")
    return AffineMap(theta.reshape(rows, theta.size // rows), np.zeros(rows))


GRID_FAMILIES: Dict[str, Callable[[np.ndarray, Optional[int]], FunctionMap]] = {
    "shift": _shift,
    "scale": _scale,
    "location_scale": _location_scale,
    "linear": _linear,
}


@dataclass(frozen=True)
class GridClassSpec:
    """A parametric family evaluated on an explicit parameter grid (an epsilon-net)."""

    family: str
    grid: Tuple[Tuple[float, ...], ...]
    box: Optional[Tuple[float, float]] = None
    output_dim: Optional[int] = None
    epsilon: Optional[float] = None
    label: str = ""

    def __post_init__(self) -> None:
        if self.family not in GRID_FAMILIES:
            raise ConfigurationError(f"Unknown grid family {self.family!r}; expected one of {sorted(GRID_FAMILIES)}")
        grid = tuple(tuple(float(v) for v in np.atleast_1d(point)) for point in self.grid)
        object.__setattr__(self, "grid", grid)
        if self.box is not None:
            low, high = self.box
            if low > high:
                raise ConfigurationError(f"grid box has low {low} > high {high}")
            for point in grid:
                if any(value < low or value > high for value in point):
                    raise ConfigurationError(f"grid point {point} lies outside the box [{low}, {high}]")
        if self.epsilon is not None and self.epsilon < 0:
            raise ConfigurationError(f"grid epsilon must be nonnegative, got {self.epsilon}")


def materialize_grid(spec: GridClassSpec) -> FiniteFunctionClass:
    """One member per grid point, in grid order."""

    if not spec.grid:
        raise ConfigurationError(f"grid for family {spec.family!r} is empty")
    builder = GRID_FAMILIES[spec.family]
    members = tuple(builder(np.asarray(point, dtype=float), spec.output_dim) for point in spec.grid)
    return FiniteFunctionClass(
        members=members,
        label=spec.label or spec.family,
        parameters=spec.grid,
        epsilon=spec.epsilon,
    )


def compose_classes(F: FiniteFunctionClass, G: FiniteFunctionClass) -> FiniteFunctionClass:
    """F o G in row-major order: index = f_index * |G| + g_index."""

    if G.output_dim != F.input_dim:
        raise ArgumentError(f"G output dim {G.output_dim} does not match F input dim {F.input_dim}")
    members = tuple(ComposedMap(outer=f, inner=g) for f in F.members for g in G.members)
    epsilons = [eps for eps in (F.epsilon, G.epsilon) if eps is not None]
    return FiniteFunctionClass(
        members=members,
        label=f"{F.label or 'F'}o{G.label or 'G'}",
        epsilon=max(epsilons) if epsilons else None,
    )


__all__ = [
    "FiniteFunctionClass",
    "GridClassSpec",
    "GRID_FAMILIES",
    "identity_class",
    "materialize_grid",
    "compose_classes",
]
