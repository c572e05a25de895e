"""Population squared-MMD oracles: Gaussian closed form and blocked Monte Carlo."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List

import numpy as np

from src.common.errors import ArgumentError, ConsistencyError
from src.common.seeding import derive_seed, make_rng
from src.kernels.base import KernelSpec

from .estimators import EstimatorKind, MmdEstimate, gram_blocks, u_statistic_from_blocks
from .samples import GaussianDistSpec, Sampler

logger = logging.getLogger(__name__)

CLOSED_FORM_TOLERANCE = 1e-12
DEFAULT_BLOCK_SIZE = 256

_P_STREAM = 0
_Q_STREAM = 1


def _gaussian_expectation(s: float, a: GaussianDistSpec, b: GaussianDistSpec) -> float:
    """E exp(-||W||^2 / s) for W = A - B, A ~ a and B ~ b independent."""

    m = a.mean - b.mean
    S = a.cov + b.cov
    d = m.shape[0]
    sign, logdet = np.linalg.slogdet(np.eye(d) + 2.0 * S / s)
    if sign <= 0:
        raise ConsistencyError("I + 2S/s must be positive definite")
    quad = float(m @ np.linalg.solve(s * np.eye(d) + 2.0 * S, m))
    return float(np.exp(-0.5 * logdet - quad))


def population_mmd_squared_gaussian_closed_form(
    sigma: float,
    P: GaussianDistSpec,
    Q: GaussianDistSpec,
    tolerance: float = CLOSED_FORM_TOLERANCE,
) -> MmdEstimate:
    """gamma_k^2(P, Q) for the Gaussian kernel with bandwidth sigma."""

    if not np.isfinite(sigma) or sigma == 0:
        raise ArgumentError(f"sigma must be finite and nonzero, got {sigma}")
    if P.dim != Q.dim:
        raise ArgumentError(f"P and Q live in different dimensions: {P.dim} vs {Q.dim}")
    s = float(sigma) ** 2
    value = (
        _gaussian_expectation(s, P, P)
        + _gaussian_expectation(s, Q, Q)
        - 2.0 * _gaussian_expectation(s, P, Q)
    )
    if value < 0:
        if value < -tolerance:
            raise ConsistencyError(f"closed-form squared MMD is negative beyond tolerance: {value:.3e}")
        value = 0.0
    return MmdEstimate(value=value, estimator=EstimatorKind.CLOSED_FORM, std_error=0.0)


def _block_sizes(m: int, block_size: int) -> List[int]:
    count = max(1, m // block_size)
    base, extra = divmod(m, count)
    return [base + 1 if index < extra else base for index in range(count)]


def _projection_std_error(kernel: KernelSpec, x: np.ndarray, y: np.ndarray) -> float:
    """Standard error of one U-statistic from the variance of its h-term row means."""

    kxx, kyy, kxy = gram_blocks(kernel, x, y)
    h = kxx + kyy - kxy - kxy.T
    np.fill_diagonal(h, 0.0)
    n = h.shape[0]
    row_means = h.sum(axis=1) / (n - 1)
    return float(2.0 * np.std(row_means, ddof=1) / np.sqrt(n)) if n > 2 else 0.0


def population_mmd_squared_monte_carlo(
    kernel: KernelSpec,
    sampler_p: Sampler,
    sampler_q: Sampler,
    m: int,
    seed: int,
    block_size: int = DEFAULT_BLOCK_SIZE,
    threads: int = 1,
) -> MmdEstimate:
    """Average of independent U-statistics over blocks of fresh draws.

    Block ``b`` draws from its own sub-streams of ``seed``, so the value is
    bit-identical for any thread count.
    """

    if m < 2:
        raise ArgumentError(f"Monte-Carlo oracle needs m >= 2, got {m}")
    if block_size < 2:
        raise ArgumentError(f"block_size must be at least 2, got {block_size}")
    if sampler_p.dim != sampler_q.dim:
        raise ArgumentError(f"samplers disagree on dimension: {sampler_p.dim} vs {sampler_q.dim}")
    sizes = _block_sizes(int(m), int(block_size))

    def draw(index: int) -> tuple[np.ndarray, np.ndarray]:
        size = sizes[index]
        x = sampler_p.sample(size, make_rng(derive_seed(seed, index, _P_STREAM)))
        y = sampler_q.sample(size, make_rng(derive_seed(seed, index, _Q_STREAM)))
        return x, y

    def block_value(index: int) -> float:
        x, y = draw(index)
        return u_statistic_from_blocks(*gram_blocks(kernel, x, y))

    if threads > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = np.fromiter(pool.map(block_value, range(len(sizes))), dtype=float, count=len(sizes))
    else:
        values = np.array([block_value(index) for index in range(len(sizes))], dtype=float)

    if len(sizes) > 1:
        std_error = float(np.std(values, ddof=1) / np.sqrt(len(sizes)))
    else:
        std_error = _projection_std_error(kernel, *draw(0))
    logger.debug(
        "Monte-Carlo oracle",
        extra={"m": int(m), "blocks": len(sizes), "value": float(values.mean()), "std_error": std_error},
    )
    return MmdEstimate(
        value=float(values.mean()),
        estimator=EstimatorKind.MONTE_CARLO,
        std_error=std_error,
        n=int(m),
    )


__all__ = [
    "CLOSED_FORM_TOLERANCE",
    "DEFAULT_BLOCK_SIZE",
    "population_mmd_squared_gaussian_closed_form",
    "population_mmd_squared_monte_carlo",
]
