"""Sample matrices and the distributions that generate them."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Protocol, Sequence, runtime_checkable

import numpy as np

from src.common.errors import ArgumentError
from src.common.storage import read_sample_csv
from src.function_classes.maps import FunctionMap

SYMMETRY_TOLERANCE = 1e-12
PSD_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class SampleMatrix:
    """n x d matrix of i.i.d. observations, one per row."""

    data: np.ndarray

    def __post_init__(self) -> None:
        array = np.array(self.data, dtype=float, copy=True)
        if array.ndim == 1:
            array = array.reshape(-1, 1)
        if array.ndim != 2:
            raise ArgumentError(f"sample matrix must be 2-D, got shape {array.shape}")
        if array.shape[0] < 1:
            raise ArgumentError("sample matrix needs at least one row")
        if not np.all(np.isfinite(array)):
            raise ArgumentError("sample matrix contains non-finite entries")
        array.setflags(write=False)
        object.__setattr__(self, "data", array)

    @property
    def n(self) -> int:
        return int(self.data.shape[0])

    @property
    def d(self) -> int:
        return int(self.data.shape[1])

    @classmethod
    def from_csv(cls, path: Path) -> "SampleMatrix":
        return cls(read_sample_csv(Path(path)))

    @classmethod
    def concatenate(cls, parts: Sequence["SampleMatrix"]) -> "SampleMatrix":
        return cls(np.vstack([part.data for part in parts]))


def as_array(X: object) -> np.ndarray:
    """Row matrix view of a SampleMatrix or array-like."""

    if isinstance(X, SampleMatrix):
        return X.data
    return SampleMatrix(np.asarray(X, dtype=float)).data


@runtime_checkable
class Sampler(Protocol):
    """Anything that draws an (n, dim) sample from a seeded generator."""

    dim: int

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray: ...


@dataclass(frozen=True, eq=False)
class GaussianDistSpec:
    """N(mean, cov) with cov symmetric positive semidefinite."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self) -> None:
        mean = np.array(self.mean, dtype=float, copy=True).reshape(-1)
        cov = np.array(self.cov, dtype=float, copy=True)
        if cov.ndim == 0:
            cov = cov.reshape(1, 1)
        if cov.shape != (mean.size, mean.size):
            raise ArgumentError(f"covariance shape {cov.shape} does not match mean length {mean.size}")
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise ArgumentError("Gaussian parameters must be finite")
        if np.max(np.abs(cov - cov.T), initial=0.0) > SYMMETRY_TOLERANCE:
            raise ArgumentError("covariance matrix is not symmetric")
        min_eig = float(np.linalg.eigvalsh(cov).min())
        if min_eig < -PSD_TOLERANCE * max(1.0, float(np.trace(np.abs(cov)))):
            raise ArgumentError(f"covariance matrix is not positive semidefinite (min eigenvalue {min_eig:.3g})")
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def dim(self) -> int:
        return int(self.mean.size)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return rng.multivariate_normal(self.mean, self.cov, size=n, method="eigh")

    def push_forward(self, A: np.ndarray, c: np.ndarray) -> "GaussianDistSpec":
        """Law of A X + c for X ~ self."""

        matrix = np.asarray(A, dtype=float)
        cov = matrix @ self.cov @ matrix.T
        return GaussianDistSpec(matrix @ self.mean + np.asarray(c, dtype=float), (cov + cov.T) / 2.0)


@dataclass(frozen=True, eq=False)
class PointMassSpec:
    """Degenerate distribution at ``location``."""

    location: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "location", np.array(self.location, dtype=float).reshape(-1))

    @property
    def dim(self) -> int:
        return int(self.location.size)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return np.tile(self.location, (n, 1))

    def as_gaussian(self) -> GaussianDistSpec:
        return GaussianDistSpec(self.location, np.zeros((self.dim, self.dim)))


@dataclass(frozen=True)
class UniformBoxSpec:
    """Uniform distribution on [low, high]^dim."""

    low: float
    high: float
    dim: int

    def __post_init__(self) -> None:
        if not self.low < self.high:
            raise ArgumentError(f"uniform box needs low < high, got [{self.low}, {self.high}]")
        if self.dim < 1:
            raise ArgumentError(f"uniform box dimension must be positive, got {self.dim}")

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(self.low, self.high, size=(n, self.dim))

    @property
    def diameter(self) -> float:
        return float((self.high - self.low) * np.sqrt(self.dim))


@dataclass(frozen=True)
class MappedSampler:
    """Law of f(X) for X drawn from ``base``."""

    base: Sampler
    feature: FunctionMap

    def __post_init__(self) -> None:
        if self.feature.input_dim != self.base.dim:
            raise ArgumentError(f"map input dim {self.feature.input_dim} does not match sampler dim {self.base.dim}")

    @property
    def dim(self) -> int:
        return self.feature.output_dim

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return self.feature(self.base.sample(n, rng))


def gaussian_law(sampler: Sampler) -> Optional[GaussianDistSpec]:
    """Closed-form Gaussian law of a sampler, when it has one."""

    if isinstance(sampler, GaussianDistSpec):
        return sampler
    if isinstance(sampler, PointMassSpec):
        return sampler.as_gaussian()
    if isinstance(sampler, MappedSampler):
        inner = gaussian_law(sampler.base)
        affine = sampler.feature.affine_form()
        if inner is None or affine is None:
            return None
        return inner.push_forward(*affine)
    return None


__all__ = [
    "SampleMatrix",
    "Sampler",
    "GaussianDistSpec",
    "PointMassSpec",
    "UniformBoxSpec",
    "MappedSampler",
    "as_array",
    "gaussian_law",
]
