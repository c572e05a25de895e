"""Empirical Gaussian/Rademacher complexity and Rademacher chaos of finite classes.

A class evaluated on a sample is a set S of vectors in R^{nd}: member g
contributes vec(g(X)), the rows of g(X) concatenated. The empirical
complexity is E sup_{s in S} |<Z, s>| / n with Z standard normal (Gaussian)
or uniform +-1 (Rademacher).

Coefficient vectors are drawn in fixed-size chunks from one generator, so
the first r replicates are the same for every replicate count and for every
class evaluated under the same seed.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterator, Optional, Sequence

import numpy as np

from src.common.errors import ArgumentError
from src.common.seeding import derive_seed, make_rng
from src.function_classes.classes import FiniteFunctionClass
from src.kernels.base import KernelSpec
from src.mmd.samples import Sampler, as_array

logger = logging.getLogger(__name__)

DRAW_CHUNK = 1024
EXACT_ENUMERATION_CUTOFF = 20

_OUTER_STREAM = 0
_INNER_STREAM = 1


@dataclass(frozen=True)
class ComplexityEstimate:
    mean: float
    std_error: float
    inner_replicates: int
    outer_replicates: int = 1
    between_variance: float = 0.0
    within_variance: float = 0.0
    seed: Optional[int] = None
    exact: bool = False

    def __post_init__(self) -> None:
        if self.inner_replicates < 1 or self.outer_replicates < 1:
            raise ArgumentError("replicate counts must be at least 1")

    def upper(self, k: float = 3.0) -> float:
        """mean + k std_error, the conservative value fed to bounds."""

        return self.mean + k * self.std_error

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mean": self.mean,
            "std_error": self.std_error,
            "inner_replicates": self.inner_replicates,
            "outer_replicates": self.outer_replicates,
            "between_variance": self.between_variance,
            "within_variance": self.within_variance,
            "seed": self.seed,
            "exact": self.exact,
        }


def _stack_values(class_values: Sequence[np.ndarray]) -> tuple[np.ndarray, int]:
    if len(class_values) == 0:
        raise ArgumentError("complexity of an empty class is undefined")
    arrays = [np.asarray(values, dtype=float) for values in class_values]
    arrays = [array.reshape(-1, 1) if array.ndim == 1 else array for array in arrays]
    shapes = {array.shape for array in arrays}
    if len(shapes) != 1:
        raise ArgumentError(f"class values must share one shape, got {sorted(shapes)}")
    n = arrays[0].shape[0]
    if n < 1:
        raise ArgumentError("class values need at least one row")
    return np.stack([array.reshape(-1) for array in arrays]), n


def _chunks(
    draw: Callable[[np.random.Generator, int], np.ndarray],
    replicates: int,
    seed: int,
) -> Iterator[np.ndarray]:
    rng = make_rng(seed)
    remaining = replicates
    while remaining > 0:
        block = draw(rng, DRAW_CHUNK)
        yield block[: min(remaining, DRAW_CHUNK)]
        remaining -= DRAW_CHUNK


def _sampled(
    vectors: np.ndarray,
    n: int,
    replicates: int,
    seed: int,
    draw: Callable[[np.random.Generator, int], np.ndarray],
) -> ComplexityEstimate:
    if replicates < 1:
        raise ArgumentError(f"replicates must be at least 1, got {replicates}")
    sups = np.concatenate(
        [np.max(np.abs(block @ vectors.T), axis=1) / n for block in _chunks(draw, replicates, seed)]
    )
    std_error = float(np.std(sups, ddof=1) / math.sqrt(replicates)) if replicates > 1 else 0.0
    return ComplexityEstimate(
        mean=float(sups.mean()),
        std_error=std_error,
        inner_replicates=replicates,
        seed=seed,
    )


def _rademacher_draw(rng: np.random.Generator, size: int, width: int) -> np.ndarray:
    return 2.0 * rng.integers(0, 2, size=(size, width)).astype(float) - 1.0


def _sign_patterns(width: int) -> Iterator[np.ndarray]:
    """All 2^width vectors in {-1, +1}^width, in chunks."""

    total = 1 << width
    bits = np.arange(width, dtype=np.int64)
    for start in range(0, total, DRAW_CHUNK * 64):
        index = np.arange(start, min(total, start + DRAW_CHUNK * 64), dtype=np.int64)
        yield 1.0 - 2.0 * ((index[:, None] >> bits) & 1).astype(float)


def empirical_gaussian_complexity(
    class_values: Sequence[np.ndarray],
    replicates: int,
    seed: int,
) -> ComplexityEstimate:
    vectors, n = _stack_values(class_values)
    width = vectors.shape[1]
    return _sampled(vectors, n, replicates, seed, lambda rng, size: rng.standard_normal((size, width)))


def empirical_rademacher_complexity(
    class_values: Sequence[np.ndarray],
    replicates: int,
    seed: int,
    exact: Optional[bool] = None,
    exact_cutoff: int = EXACT_ENUMERATION_CUTOFF,
) -> ComplexityEstimate:
    """Rademacher complexity; exact enumeration when nd <= exact_cutoff unless ``exact`` says otherwise."""

    vectors, n = _stack_values(class_values)
    width = vectors.shape[1]
    use_exact = width <= exact_cutoff if exact is None else exact
    if use_exact:
        if width > max(exact_cutoff, EXACT_ENUMERATION_CUTOFF):
            raise ArgumentError(f"exact enumeration over 2^{width} sign patterns is not supported")
        total = sum(float(np.max(np.abs(signs @ vectors.T), axis=1).sum()) for signs in _sign_patterns(width))
        return ComplexityEstimate(
            mean=total / (1 << width) / n,
            std_error=0.0,
            inner_replicates=1 << width,
            seed=seed,
            exact=True,
        )
    return _sampled(vectors, n, replicates, seed, lambda rng, size: _rademacher_draw(rng, size, width))


def _chaos_statistic(grams: np.ndarray, traces: np.ndarray, signs: np.ndarray, n: int) -> np.ndarray:
    # grams: (members, n, n); signs: (replicates, n)
    projected = np.tensordot(signs, grams, axes=([1], [1]))
    quad = np.einsum("rmj,rj->rm", projected, signs)
    return np.max(np.abs(quad - traces[None, :]), axis=1) / (n * (n - 1))


def empirical_rademacher_chaos(
    kernel: KernelSpec,
    kernel_class: FiniteFunctionClass,
    X: object,
    replicates: int,
    seed: int,
    exact: Optional[bool] = None,
    exact_cutoff: int = EXACT_ENUMERATION_CUTOFF,
) -> ComplexityEstimate:
    """sup_f |(2 / (n(n-1))) sum_{i<j} rho_i rho_j k(f(X_i), f(X_j))| averaged over rho."""

    x = as_array(X)
    n = x.shape[0]
    if n < 2:
        raise ArgumentError(f"Rademacher chaos needs n >= 2, got {n}")
    features = [feature(x) for feature in kernel_class]
    grams = np.stack([kernel.pairwise(fx, fx) for fx in features])
    traces = np.trace(grams, axis1=1, axis2=2)
    use_exact = n <= exact_cutoff if exact is None else exact
    if use_exact:
        if n > max(exact_cutoff, EXACT_ENUMERATION_CUTOFF):
            raise ArgumentError(f"exact enumeration over 2^{n} sign patterns is not supported")
        total = sum(float(_chaos_statistic(grams, traces, signs, n).sum()) for signs in _sign_patterns(n))
        return ComplexityEstimate(
            mean=total / (1 << n), std_error=0.0, inner_replicates=1 << n, seed=seed, exact=True
        )
    if replicates < 1:
        raise ArgumentError(f"replicates must be at least 1, got {replicates}")
    stats = np.concatenate(
        [
            _chaos_statistic(grams, traces, signs, n)
            for signs in _chunks(lambda rng, size: _rademacher_draw(rng, size, n), replicates, seed)
        ]
    )
    std_error = float(np.std(stats, ddof=1) / math.sqrt(replicates)) if replicates > 1 else 0.0
    return ComplexityEstimate(mean=float(stats.mean()), std_error=std_error, inner_replicates=replicates, seed=seed)


_KINDS = {
    "gaussian": empirical_gaussian_complexity,
    "rademacher": lambda values, replicates, seed: empirical_rademacher_complexity(
        values, replicates, seed, exact=False
    ),
}


def expected_complexity(
    function_class: FiniteFunctionClass,
    sampler: Sampler,
    n: int,
    outer_replicates: int,
    inner_replicates: int,
    seed: int,
    kind: str = "gaussian",
) -> ComplexityEstimate:
    """E over X ~ sampler of the empirical complexity of ``function_class(X)``.

    Outer draws of X use independent sub-streams; every outer replicate reuses
    one inner coefficient stream. ``between_variance`` is the variance of the
    outer means and ``within_variance`` the mean squared inner std_error.
    """

    if kind not in _KINDS:
        raise ArgumentError(f"unknown complexity kind {kind!r}; expected one of {sorted(_KINDS)}")
    if sampler.dim != function_class.input_dim:
        raise ArgumentError(f"sampler dimension {sampler.dim} does not match class input {function_class.input_dim}")
    estimator = _KINDS[kind]
    estimate = _outer_average(
        lambda x, inner_seed: estimator(function_class.apply(x), inner_replicates, inner_seed),
        sampler,
        n,
        outer_replicates,
        inner_replicates,
        seed,
    )
    logger.debug(
        "Expected complexity estimated",
        extra={"function_class": function_class.label, "kind": kind, "n": n, "mean": estimate.mean},
    )
    return estimate


def expected_chaos(
    kernel: KernelSpec,
    kernel_class: FiniteFunctionClass,
    sampler: Sampler,
    n: int,
    outer_replicates: int,
    inner_replicates: int,
    seed: int,
) -> ComplexityEstimate:
    """E over X ~ sampler of the sampled Rademacher chaos of {k o f : f in kernel_class}."""

    if n < 2:
        raise ArgumentError(f"Rademacher chaos needs n >= 2, got {n}")
    return _outer_average(
        lambda x, inner_seed: empirical_rademacher_chaos(
            kernel, kernel_class, x, inner_replicates, inner_seed, exact=False
        ),
        sampler,
        n,
        outer_replicates,
        inner_replicates,
        seed,
    )


def _outer_average(
    evaluate: Callable[[np.ndarray, int], ComplexityEstimate],
    sampler: Sampler,
    n: int,
    outer_replicates: int,
    inner_replicates: int,
    seed: int,
) -> ComplexityEstimate:
    if n < 1:
        raise ArgumentError(f"n must be at least 1, got {n}")
    if outer_replicates < 1:
        raise ArgumentError(f"outer_replicates must be at least 1, got {outer_replicates}")
    inner_seed = derive_seed(seed, _INNER_STREAM)
    means = np.empty(outer_replicates)
    squared_errors = np.empty(outer_replicates)
    for index in range(outer_replicates):
        x = sampler.sample(n, make_rng(derive_seed(seed, _OUTER_STREAM, index)))
        inner = evaluate(x, inner_seed)
        means[index] = inner.mean
        squared_errors[index] = inner.std_error**2
    between = float(np.var(means, ddof=1)) if outer_replicates > 1 else 0.0
    within = float(squared_errors.mean())
    return ComplexityEstimate(
        mean=float(means.mean()),
        std_error=math.sqrt(between / outer_replicates + within),
        inner_replicates=inner_replicates,
        outer_replicates=outer_replicates,
        between_variance=between,
        within_variance=within,
        seed=seed,
    )


def complexity_ratio(gaussian: ComplexityEstimate, rademacher: ComplexityEstimate) -> float:
    """E G_n / E R_n."""

    if rademacher.mean <= 0:
        raise ArgumentError("Rademacher complexity is zero; the ratio is undefined")
    return gaussian.mean / rademacher.mean


__all__ = [
    "ComplexityEstimate",
    "DRAW_CHUNK",
    "EXACT_ENUMERATION_CUTOFF",
    "empirical_gaussian_complexity",
    "empirical_rademacher_complexity",
    "empirical_rademacher_chaos",
    "expected_complexity",
    "expected_chaos",
    "complexity_ratio",
]
