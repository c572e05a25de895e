"""Seminorm bounds for the order-2 MMD kernel h and an empirical probe of them."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict

import numpy as np

from src.common.errors import ArgumentError, ConfigurationError
from src.common.seeding import make_rng
from src.kernels.base import KernelSpec
from src.kernels.constants import KernelConstants
from src.mmd.samples import Sampler

logger = logging.getLogger(__name__)

PROBE_CHUNK = 1024
MAX_CONSECUTIVE_REJECTIONS = 100


@dataclass(frozen=True)
class SeminormBounds:
    m_lip: float
    j_lip: float
    m_bound: float

    def __post_init__(self) -> None:
        for name in ("m_lip", "j_lip", "m_bound"):
            value = getattr(self, name)
            if math.isnan(value) or value < 0:
                raise ArgumentError(f"{name} must be nonnegative, got {value}")

    def to_dict(self) -> Dict[str, float]:
        return {"m_lip": self.m_lip, "j_lip": self.j_lip, "m_bound": self.m_bound}


def u_statistic_seminorm_bounds(L: float, B: float, m: int, n: int) -> SeminormBounds:
    """Seminorms of an order-m U-statistic on n points whose kernel has M_Lip <= L and M <= B."""

    if m < 1 or m > n:
        raise ArgumentError(f"need 1 <= m <= n, got m={m}, n={n}")
    if L < 0 or B < 0:
        raise ArgumentError(f"L and B must be nonnegative, got L={L}, B={B}")
    return SeminormBounds(m_lip=L * m / n, j_lip=L * m * m / n, m_bound=B * m / n)


def mmd_kernel_seminorm_bounds(constants: KernelConstants) -> SeminormBounds:
    """M_Lip(h) <= sqrt(2) l and M(h) <= 2 min{4 nu, l b}."""

    if not math.isfinite(constants.min_term):
        raise ConfigurationError("min{4 nu, l b} is infinite; h has no finite sup bound")
    m_lip = math.sqrt(2.0) * constants.l
    return SeminormBounds(m_lip=m_lip, j_lip=m_lip, m_bound=2.0 * constants.min_term)


def _h_paired(kernel: KernelSpec, xa: np.ndarray, ya: np.ndarray, xb: np.ndarray, yb: np.ndarray) -> np.ndarray:
    return kernel.paired(xa, xb) + kernel.paired(ya, yb) - kernel.paired(xa, yb) - kernel.paired(ya, xb)


def seminorm_probe(kernel: KernelSpec, domain_sampler: Sampler, trials: int, seed: int) -> float:
    """max over trials of |h(z1, z2) - h(z1', z2)| / ||z1 - z1'|| with z = (x, y) in R^{2d}.

    Draws come in fixed-size chunks from one generator, so the running max over
    the first t accepted trials does not depend on the requested trial count.
    Pairs with z1 == z1' are skipped.
    """

    if trials < 1:
        raise ArgumentError(f"trials must be at least 1, got {trials}")
    rng = make_rng(seed)
    d = domain_sampler.dim
    best = 0.0
    accepted = 0
    streak = 0
    while accepted < trials:
        draws = domain_sampler.sample(6 * PROBE_CHUNK, rng).reshape(PROBE_CHUNK, 6, d)
        x1, y1, x1b, y1b, x2, y2 = (draws[:, slot, :] for slot in range(6))
        gaps = np.sqrt(np.sum((x1 - x1b) ** 2, axis=1) + np.sum((y1 - y1b) ** 2, axis=1))
        valid = gaps > 0
        diffs = np.abs(_h_paired(kernel, x1, y1, x2, y2) - _h_paired(kernel, x1b, y1b, x2, y2))
        ratios = np.divide(diffs, gaps, out=np.zeros_like(diffs), where=valid)
        for ok, ratio in zip(valid, ratios):
            if not ok:
                streak += 1
                if streak >= MAX_CONSECUTIVE_REJECTIONS:
                    raise ArgumentError(
                        f"domain sampler produced {MAX_CONSECUTIVE_REJECTIONS} consecutive identical pairs"
                    )
                continue
            streak = 0
            best = max(best, float(ratio))
            accepted += 1
            if accepted == trials:
                break
    logger.debug("Seminorm probe finished", extra={"trials": trials, "max_ratio": best})
    return best


__all__ = [
    "SeminormBounds",
    "u_statistic_seminorm_bounds",
    "mmd_kernel_seminorm_bounds",
    "seminorm_probe",
]
