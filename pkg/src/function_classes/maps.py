"""Parametric maps used as generators (g) and adversarial features (f)."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from src.common.errors import ArgumentError, ConfigurationError

POWER_ITERATION_MAX_ITER = 1000
POWER_ITERATION_RTOL = 1e-10
POWER_ITERATION_SEED = 20240601

ACTIVATIONS: Dict[str, Tuple[Callable[[np.ndarray], np.ndarray], float]] = {
    "relu": (lambda z: np.maximum(z, 0.0), 1.0),
    "tanh": (np.tanh, 1.0),
}


def _as_matrix(value: object, name: str) -> np.ndarray:
    array = np.array(value, dtype=float, copy=True)
    if array.ndim != 2:
        raise ArgumentError(f"{name} must be a 2-D matrix, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise ArgumentError(f"{name} contains non-finite entries")
    array.setflags(write=False)
    return array


def _as_vector(value: object, name: str) -> np.ndarray:
    array = np.array(value, dtype=float, copy=True).reshape(-1)
    if not np.all(np.isfinite(array)):
        raise ArgumentError(f"{name} contains non-finite entries")
    array.setflags(write=False)
    return array


def spectral_norm(matrix: np.ndarray) -> float:
    """Largest singular value by power iteration on A^T A (deterministic start)."""

    a = np.asarray(matrix, dtype=float)
    if a.size == 0:
        return 0.0
    gram = a.T @ a
    vector = np.random.default_rng(POWER_ITERATION_SEED).standard_normal(gram.shape[0])
    vector /= np.linalg.norm(vector)
    estimate = 0.0
    for _ in range(POWER_ITERATION_MAX_ITER):
        image = gram @ vector
        norm = float(np.linalg.norm(image))
        if norm == 0.0:
            return 0.0
        vector = image / norm
        if abs(norm - estimate) <= POWER_ITERATION_RTOL * norm:
            estimate = norm
            break
        estimate = norm
    # Rayleigh quotient of the final iterate.
    return float(np.sqrt(max(float(vector @ gram @ vector), 0.0)))


class FunctionMap(ABC):
    """A map R^{d_in} -> R^{d_out} applied row-wise to sample matrices."""

    @property
    @abstractmethod
    def input_dim(self) -> int:
        """Dimension of the rows this map accepts."""

    @property
    @abstractmethod
    def output_dim(self) -> int:
        """Dimension of the rows this map returns."""

    @abstractmethod
    def _forward(self, rows: np.ndarray) -> np.ndarray:
        """Map an (n, input_dim) array to an (n, output_dim) array."""

    @abstractmethod
    def lipschitz_bound(self) -> float:
        """Certified Euclidean Lipschitz constant."""

    def affine_form(self) -> Optional[Tuple[np.ndarray, np.ndarray]]:
        """(A, c) with f(x) = A x + c when the map is affine, else None."""

        return None

    def __call__(self, rows: np.ndarray) -> np.ndarray:
        data = np.asarray(rows, dtype=float)
        if data.ndim == 1:
            data = data.reshape(1, -1)
        if data.ndim != 2 or data.shape[1] != self.input_dim:
            raise ArgumentError(
                f"{type(self).__name__} expects rows of dimension {self.input_dim}, got shape {data.shape}"
            )
        return self._forward(data)


@dataclass(frozen=True)
class IdentityMap(FunctionMap):
    dim: int

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ArgumentError(f"identity dimension must be positive, got {self.dim}")

    @property
    def input_dim(self) -> int:
        return self.dim

    @property
    def output_dim(self) -> int:
        return self.dim

    def _forward(self, rows: np.ndarray) -> np.ndarray:
        return rows.copy()

    def lipschitz_bound(self) -> float:
        return 1.0

    def affine_form(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.eye(self.dim), np.zeros(self.dim)


@dataclass(frozen=True, eq=False)
class AffineMap(FunctionMap):
    """x -> A x + c."""

    A: np.ndarray
    c: np.ndarray

    def __post_init__(self) -> None:
        matrix = _as_matrix(self.A, "A")
        offset = _as_vector(self.c, "c")
        if offset.shape[0] != matrix.shape[0]:
            raise ArgumentError(f"offset length {offset.shape[0]} does not match A rows {matrix.shape[0]}")
        object.__setattr__(self, "A", matrix)
        object.__setattr__(self, "c", offset)

    @property
    def input_dim(self) -> int:
        return int(self.A.shape[1])

    @property
    def output_dim(self) -> int:
        return int(self.A.shape[0])

    def _forward(self, rows: np.ndarray) -> np.ndarray:
        return rows @ self.A.T + self.c

    def lipschitz_bound(self) -> float:
        return spectral_norm(self.A)

    def affine_form(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.array(self.A), np.array(self.c)


@dataclass(frozen=True, eq=False)
class ShallowNet(FunctionMap):
    """Two-layer network x -> W2 act(W1 x + b1) + b2."""

    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: np.ndarray
    activation: str = "relu"
    l_sigma: Optional[float] = None

    def __post_init__(self) -> None:
        if self.activation not in ACTIVATIONS:
            raise ConfigurationError(
                f"Unknown activation {self.activation!r}; expected one of {sorted(ACTIVATIONS)}"
            )
        w1 = _as_matrix(self.W1, "W1")
        w2 = _as_matrix(self.W2, "W2")
        b1 = _as_vector(self.b1, "b1")
        b2 = _as_vector(self.b2, "b2")
        if b1.shape[0] != w1.shape[0]:
            raise ArgumentError(f"b1 length {b1.shape[0]} does not match W1 rows {w1.shape[0]}")
        if w2.shape[1] != w1.shape[0]:
            raise ArgumentError(f"W2 columns {w2.shape[1]} do not match hidden width {w1.shape[0]}")
        if b2.shape[0] != w2.shape[0]:
            raise ArgumentError(f"b2 length {b2.shape[0]} does not match W2 rows {w2.shape[0]}")
        l_sigma = ACTIVATIONS[self.activation][1] if self.l_sigma is None else float(self.l_sigma)
        if not l_sigma > 0:
            raise ConfigurationError(f"activation Lipschitz constant must be positive, got {l_sigma}")
        object.__setattr__(self, "W1", w1)
        object.__setattr__(self, "W2", w2)
        object.__setattr__(self, "b1", b1)
        object.__setattr__(self, "b2", b2)
        object.__setattr__(self, "l_sigma", l_sigma)

    @property
    def input_dim(self) -> int:
        return int(self.W1.shape[1])

    @property
    def output_dim(self) -> int:
        return int(self.W2.shape[0])

    @property
    def hidden_width(self) -> int:
        return int(self.W1.shape[0])

    def _forward(self, rows: np.ndarray) -> np.ndarray:
        act = ACTIVATIONS[self.activation][0]
        hidden = act(rows @ self.W1.T + self.b1)
        return hidden @ self.W2.T + self.b2

    def lipschitz_bound(self) -> float:
        return spectral_norm(self.W2) * float(self.l_sigma) * spectral_norm(self.W1)


@dataclass(frozen=True, eq=False)
class ComposedMap(FunctionMap):
    """outer o inner."""

    outer: FunctionMap
    inner: FunctionMap
    _cache: Dict[str, object] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.inner.output_dim != self.outer.input_dim:
            raise ArgumentError(
                f"cannot compose: inner output dim {self.inner.output_dim} "
                f"!= outer input dim {self.outer.input_dim}"
            )

    @property
    def input_dim(self) -> int:
        return self.inner.input_dim

    @property
    def output_dim(self) -> int:
        return self.outer.output_dim

    def _forward(self, rows: np.ndarray) -> np.ndarray:
        return self.outer(self.inner(rows))

    def lipschitz_bound(self) -> float:
        if "lipschitz" not in self._cache:
            self._cache["lipschitz"] = self.outer.lipschitz_bound() * self.inner.lipschitz_bound()
        return float(self._cache["lipschitz"])  # type: ignore[arg-type]

    def affine_form(self) -> Optional[Tuple[np.ndarray, np.ndarray]]:
        outer = self.outer.affine_form()
        inner = self.inner.affine_form()
        if outer is None or inner is None:
            return None
        a_out, c_out = outer
        a_in, c_in = inner
        return a_out @ a_in, a_out @ c_in + c_out


def apply_map(f: FunctionMap, X):
    """Row i of the result is f(X_i); a SampleMatrix in gives a SampleMatrix out."""

    from src.mmd.samples import SampleMatrix

    if isinstance(X, SampleMatrix):
        return SampleMatrix(f(X.data))
    return f(X)


def map_lipschitz_bound(f: FunctionMap) -> float:
    return f.lipschitz_bound()


__all__ = [
    "FunctionMap",
    "IdentityMap",
    "AffineMap",
    "ShallowNet",
    "ComposedMap",
    "ACTIVATIONS",
    "spectral_norm",
    "apply_map",
    "map_lipschitz_bound",
]
