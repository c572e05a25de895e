"""U- and V-statistic estimates of the squared MMD."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from src.common.errors import ArgumentError
from src.function_classes.classes import FiniteFunctionClass
from src.kernels.base import KernelSpec

from .samples import as_array

logger = logging.getLogger(__name__)


class EstimatorKind(str, Enum):
    U_STATISTIC = "u_statistic"
    V_STATISTIC = "v_statistic"
    CLOSED_FORM = "closed_form"
    MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class MmdEstimate:
    value: float
    estimator: EstimatorKind
    std_error: Optional[float] = None
    n: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "estimator": self.estimator.value,
            "std_error": self.std_error,
            "n": self.n,
        }


def _paired(X: object, Y: object, min_n: int) -> tuple[np.ndarray, np.ndarray]:
    x = as_array(X)
    y = as_array(Y)
    if x.shape[0] != y.shape[0]:
        raise ArgumentError(f"X and Y must have the same number of rows, got {x.shape[0]} and {y.shape[0]}")
    if x.shape[1] != y.shape[1]:
        raise ArgumentError(f"X and Y must have the same dimension, got {x.shape[1]} and {y.shape[1]}")
    if x.shape[0] < min_n:
        raise ArgumentError(f"need at least {min_n} rows per sample, got {x.shape[0]}")
    return x, y


def _offdiag_sum(block: np.ndarray) -> float:
    return float(block.sum() - np.trace(block))


def u_statistic_from_blocks(kxx: np.ndarray, kyy: np.ndarray, kxy: np.ndarray) -> float:
    """(1/(n(n-1))) sum_{i != j} h(z_i, z_j) from the three Gram blocks.

    k(Y_i, X_j) is the transpose of K_XY, so both cross terms share one
    off-diagonal sum. Identical samples give exactly zero.
    """

    n = kxx.shape[0]
    total = _offdiag_sum(kxx) + _offdiag_sum(kyy) - 2.0 * _offdiag_sum(kxy)
    return total / (n * (n - 1))


def v_statistic_from_blocks(kxx: np.ndarray, kyy: np.ndarray, kxy: np.ndarray) -> float:
    n = kxx.shape[0]
    total = float(kxx.sum()) + float(kyy.sum()) - 2.0 * float(kxy.sum())
    return max(total / (n * n), 0.0)


def gram_blocks(kernel: KernelSpec, x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return kernel.pairwise(x, x), kernel.pairwise(y, y), kernel.pairwise(x, y)


def h_term(kernel: KernelSpec, xi: np.ndarray, yi: np.ndarray, xj: np.ndarray, yj: np.ndarray) -> float:
    """h(z_i, z_j) = k(x_i, x_j) + k(y_i, y_j) - k(x_i, y_j) - k(y_i, x_j)."""

    dims = {np.asarray(v, dtype=float).reshape(-1).shape[0] for v in (xi, yi, xj, yj)}
    if len(dims) != 1:
        raise ArgumentError(f"h_term arguments disagree on dimension: {sorted(dims)}")
    return kernel(xi, xj) + kernel(yi, yj) - kernel(xi, yj) - kernel(yi, xj)


def mmd_u_squared(kernel: KernelSpec, X: object, Y: object) -> MmdEstimate:
    x, y = _paired(X, Y, min_n=2)
    value = u_statistic_from_blocks(*gram_blocks(kernel, x, y))
    return MmdEstimate(value=value, estimator=EstimatorKind.U_STATISTIC, n=x.shape[0])


def mmd_v_squared(kernel: KernelSpec, X: object, Y: object) -> MmdEstimate:
    x, y = _paired(X, Y, min_n=1)
    value = v_statistic_from_blocks(*gram_blocks(kernel, x, y))
    return MmdEstimate(value=value, estimator=EstimatorKind.V_STATISTIC, n=x.shape[0])


def generalized_mmd_v(kernels: Sequence[KernelSpec], X: object, Y: object) -> MmdEstimate:
    """sup over a finite kernel class of the biased (unsquared) MMD."""

    if not kernels:
        raise ArgumentError("generalized MMD needs at least one kernel")
    x, y = _paired(X, Y, min_n=1)
    value = max(np.sqrt(v_statistic_from_blocks(*gram_blocks(kernel, x, y))) for kernel in kernels)
    return MmdEstimate(value=float(value), estimator=EstimatorKind.V_STATISTIC, n=x.shape[0])


_BLOCK_STATISTICS = {
    EstimatorKind.U_STATISTIC: u_statistic_from_blocks,
    EstimatorKind.V_STATISTIC: v_statistic_from_blocks,
}


def mmd_pair_table(
    kernel: KernelSpec,
    F: FiniteFunctionClass,
    G: FiniteFunctionClass,
    X: object,
    Y: object,
    estimator: EstimatorKind | str = EstimatorKind.U_STATISTIC,
    threads: int = 1,
) -> np.ndarray:
    """|F| x |G| matrix whose (f, g) entry estimates gamma^2_{k o f}(g(X), Y).

    g(X) is computed once per generator and f(Y) with its Gram block once per
    feature. Rows are evaluated in parallel when ``threads`` > 1; the result
    does not depend on the thread count.
    """

    kind = EstimatorKind(estimator)
    if kind not in _BLOCK_STATISTICS:
        raise ArgumentError(f"pair tables support u_statistic or v_statistic, got {kind.value}")
    statistic = _BLOCK_STATISTICS[kind]
    x, y = _paired(X, Y, min_n=2 if kind is EstimatorKind.U_STATISTIC else 1)
    if G.input_dim != x.shape[1]:
        raise ArgumentError(f"generator class expects dimension {G.input_dim}, got {x.shape[1]}")
    if F.input_dim != G.output_dim or F.input_dim != y.shape[1]:
        raise ArgumentError(
            f"dimension chain broken: G outputs {G.output_dim}, F accepts {F.input_dim}, Y has {y.shape[1]}"
        )
    generated = G.apply(x)

    def row(f_index: int) -> List[float]:
        feature = F[f_index]
        fy = feature(y)
        kyy = kernel.pairwise(fy, fy)
        values = []
        for gx in generated:
            fgx = feature(gx)
            values.append(statistic(kernel.pairwise(fgx, fgx), kyy, kernel.pairwise(fgx, fy)))
        return values

    if threads > 1 and len(F) > 1:
        with ThreadPoolExecutor(max_workers=min(threads, len(F))) as pool:
            rows = list(pool.map(row, range(len(F))))
    else:
        rows = [row(index) for index in range(len(F))]
    table = np.asarray(rows, dtype=float)
    logger.debug("mmd pair table", extra={"shape": list(table.shape), "estimator": kind.value})
    return table


__all__ = [
    "EstimatorKind",
    "MmdEstimate",
    "h_term",
    "mmd_u_squared",
    "mmd_v_squared",
    "generalized_mmd_v",
    "mmd_pair_table",
    "gram_blocks",
    "u_statistic_from_blocks",
    "v_statistic_from_blocks",
]
