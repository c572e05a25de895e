"""Reproducing kernels: evaluation, composition with feature maps, Gram matrices."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.spatial.distance import cdist

from src.common.errors import ArgumentError, ConfigurationError
from src.function_classes.maps import FunctionMap


def _as_rows(points: np.ndarray, name: str) -> np.ndarray:
    array = np.asarray(points, dtype=float)
    if array.ndim == 1:
        array = array.reshape(1, -1)
    if array.ndim != 2:
        raise ArgumentError(f"{name} must be a vector or a 2-D matrix, got shape {array.shape}")
    return array


class KernelSpec(ABC):
    """A symmetric positive-definite kernel k: U x U -> R.

    Instances are immutable; every method is a pure function of its inputs.
    """

    dim: Optional[int] = None

    @abstractmethod
    def _pairwise(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Matrix of k(A_i, B_j) for validated row matrices."""

    @property
    def input_dim(self) -> Optional[int]:
        """Declared input dimension, or None when any dimension is accepted."""

        return self.dim

    def pairwise(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        left = _as_rows(A, "A")
        right = _as_rows(B, "B")
        if left.shape[1] != right.shape[1]:
            raise ArgumentError(f"dimension mismatch: {left.shape[1]} vs {right.shape[1]}")
        expected = self.input_dim
        if expected is not None and left.shape[1] != expected:
            raise ArgumentError(f"kernel expects dimension {expected}, got {left.shape[1]}")
        return self._pairwise(left, right)

    def _paired(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        return np.array([self._pairwise(a[None, :], b[None, :])[0, 0] for a, b in zip(A, B)])

    def paired(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Vector of k(A_i, B_i) for row-aligned matrices."""

        left = _as_rows(A, "A")
        right = _as_rows(B, "B")
        if left.shape != right.shape:
            raise ArgumentError(f"paired evaluation needs equal shapes, got {left.shape} and {right.shape}")
        expected = self.input_dim
        if expected is not None and left.shape[1] != expected:
            raise ArgumentError(f"kernel expects dimension {expected}, got {left.shape[1]}")
        return self._paired(left, right)

    def __call__(self, u: np.ndarray, u2: np.ndarray) -> float:
        left = np.asarray(u, dtype=float).reshape(-1)
        right = np.asarray(u2, dtype=float).reshape(-1)
        if left.shape != right.shape:
            raise ArgumentError(f"dimension mismatch: {left.shape[0]} vs {right.shape[0]}")
        return float(self.pairwise(left, right)[0, 0])


@dataclass(frozen=True)
class GaussianKernel(KernelSpec):
    """k(u, u') = exp(-||u - u'||^2 / sigma^2); sigma may be negative (|sigma| is used)."""

    sigma: float
    dim: Optional[int] = None

    def __post_init__(self) -> None:
        if not np.isfinite(self.sigma) or self.sigma == 0:
            raise ConfigurationError(f"Gaussian bandwidth must be finite and nonzero, got {self.sigma}")

    @property
    def bandwidth(self) -> float:
        return abs(float(self.sigma))

    def _pairwise(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        return np.exp(-cdist(A, B, "sqeuclidean") / self.bandwidth**2)

    def _paired(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        return np.exp(-np.sum((A - B) ** 2, axis=1) / self.bandwidth**2)


@dataclass(frozen=True)
class LaplacianKernel(KernelSpec):
    """k(u, u') = exp(-||u - u'||_1 / sigma), sigma > 0."""

    sigma: float
    dim: Optional[int] = None

    def __post_init__(self) -> None:
        if not np.isfinite(self.sigma) or self.sigma <= 0:
            raise ConfigurationError(f"Laplacian bandwidth must be positive, got {self.sigma}")

    def _pairwise(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        return np.exp(-cdist(A, B, "cityblock") / float(self.sigma))

    def _paired(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        return np.exp(-np.sum(np.abs(A - B), axis=1) / float(self.sigma))


@dataclass(frozen=True)
class TranslationInvariantKernel(KernelSpec):
    """k(u, u') = profile(u - u') for a user-supplied even profile.

    ``profile`` maps an (..., d) array of differences to an (...) array. The
    constants ``nu_t`` (bound on profile(0)) and ``l_t`` (Lipschitz constant of
    the profile) are certified by the caller.
    """

    profile: Callable[[np.ndarray], np.ndarray]
    nu_t: Optional[float] = None
    l_t: Optional[float] = None
    dim: Optional[int] = None

    def _pairwise(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        diffs = A[:, None, :] - B[None, :, :]
        values = np.asarray(self.profile(diffs), dtype=float)
        if values.shape != diffs.shape[:2]:
            raise ArgumentError(f"profile returned shape {values.shape}, expected {diffs.shape[:2]}")
        return values

    def _paired(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        return np.asarray(self.profile(A - B), dtype=float).reshape(A.shape[0])


@dataclass(frozen=True)
class CompositeKernel(KernelSpec):
    """(k o f)(u, u') = k(f(u), f(u'))."""

    base: KernelSpec
    feature: FunctionMap

    @property
    def input_dim(self) -> Optional[int]:
        return self.feature.input_dim

    def _pairwise(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        return self.base.pairwise(self.feature(A), self.feature(B))

    def _paired(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        return self.base.paired(self.feature(A), self.feature(B))


def eval_kernel(kernel: KernelSpec, u: np.ndarray, u2: np.ndarray) -> float:
    return kernel(u, u2)


def compose(kernel: KernelSpec, feature: FunctionMap) -> CompositeKernel:
    expected = kernel.input_dim
    if expected is not None and feature.output_dim != expected:
        raise ArgumentError(f"feature output dim {feature.output_dim} does not match kernel input dim {expected}")
    return CompositeKernel(base=kernel, feature=feature)


def gram_matrix(kernel: KernelSpec, points: np.ndarray) -> np.ndarray:
    """Symmetric n x n matrix of k(x_i, x_j)."""

    rows = _as_rows(getattr(points, "data", points), "points")
    if rows.shape[0] < 1:
        raise ArgumentError("gram_matrix needs at least one point")
    gram = kernel.pairwise(rows, rows)
    return np.triu(gram) + np.triu(gram, 1).T


__all__ = [
    "KernelSpec",
    "GaussianKernel",
    "LaplacianKernel",
    "TranslationInvariantKernel",
    "CompositeKernel",
    "eval_kernel",
    "compose",
    "gram_matrix",
]
