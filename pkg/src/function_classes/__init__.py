"""Generator and feature classes: maps, finite classes, grids, covering bounds."""

from .classes import (
    GRID_FAMILIES,
    FiniteFunctionClass,
    GridClassSpec,
    compose_classes,
    identity_class,
    materialize_grid,
)
from .covering import shallow_net_log_covering_bound
from .maps import (
    AffineMap,
    ComposedMap,
    FunctionMap,
    IdentityMap,
    ShallowNet,
    apply_map,
    map_lipschitz_bound,
    spectral_norm,
)

__all__ = [
    "FunctionMap",
    "IdentityMap",
    "AffineMap",
    "ShallowNet",
    "ComposedMap",
    "apply_map",
    "map_lipschitz_bound",
    "spectral_norm",
    "FiniteFunctionClass",
    "GridClassSpec",
    "GRID_FAMILIES",
    "identity_class",
    "materialize_grid",
    "compose_classes",
    "shallow_net_log_covering_bound",
]
