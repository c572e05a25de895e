"""Monte-Carlo probes of the boundedness and Lipschitz constants of a kernel."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Tuple

import numpy as np

from src.common.errors import ArgumentError
from src.common.seeding import make_rng

from .base import KernelSpec

PROBE_CHUNK = 1024


def _draw_rows(sampler: Any, count: int, rng: np.random.Generator, slots: int) -> Tuple[np.ndarray, ...]:
    draws = np.asarray(sampler.sample(slots * count, rng), dtype=float).reshape(count, slots, -1)
    return tuple(draws[:, slot, :] for slot in range(slots))


def _running_max(
    statistic: Callable[[Tuple[np.ndarray, ...]], np.ndarray],
    sampler: Any,
    slots: int,
    trials: int,
    seed: int,
) -> float:
    if trials < 1:
        raise ArgumentError(f"trials must be at least 1, got {trials}")
    rng = make_rng(seed)
    best = -math.inf
    remaining = trials
    while remaining > 0:
        values = statistic(_draw_rows(sampler, PROBE_CHUNK, rng, slots))[: min(remaining, PROBE_CHUNK)]
        best = max(best, float(np.max(values)))
        remaining -= PROBE_CHUNK
    return best


def _ratio(numerator: np.ndarray, gaps: np.ndarray) -> np.ndarray:
    return np.divide(numerator, gaps, out=np.zeros_like(numerator), where=gaps > 0)


def boundedness_probe(kernel: KernelSpec, sampler: Any, trials: int, seed: int) -> float:
    """max k(u, u) over sampled u."""

    return _running_max(lambda rows: kernel.paired(rows[0], rows[0]), sampler, 1, trials, seed)


def lipschitz_probe(kernel: KernelSpec, sampler: Any, trials: int, seed: int) -> float:
    """max |[k(u1, v) - k(u2, v)] - [k(u1, v') - k(u2, v')]| / ||v - v'||."""

    def statistic(rows: Tuple[np.ndarray, ...]) -> np.ndarray:
        u1, u2, v, v2 = rows
        diff = (kernel.paired(u1, v) - kernel.paired(u2, v)) - (kernel.paired(u1, v2) - kernel.paired(u2, v2))
        return _ratio(np.abs(diff), np.linalg.norm(v - v2, axis=1))

    return _running_max(statistic, sampler, 4, trials, seed)


def argument_lipschitz_probe(kernel: KernelSpec, sampler: Any, trials: int, seed: int) -> float:
    """max |k(u, v) - k(u', v)| / ||u - u'||."""

    def statistic(rows: Tuple[np.ndarray, ...]) -> np.ndarray:
        u, u2, v = rows
        return _ratio(np.abs(kernel.paired(u, v) - kernel.paired(u2, v)), np.linalg.norm(u - u2, axis=1))

    return _running_max(statistic, sampler, 3, trials, seed)


@dataclass(frozen=True)
class ProfileGradientPeak:
    location: float
    value: float


def profile_gradient_probe(kernel: KernelSpec, t_max: float = 5.0, points: int = 100_001) -> ProfileGradientPeak:
    """Peak of |d/dt k(0, t)| on [0, t_max] for a 1-D kernel, by central differences."""

    if t_max <= 0 or points < 3:
        raise ArgumentError("profile probe needs t_max > 0 and at least 3 grid points")
    t = np.linspace(0.0, t_max, points).reshape(-1, 1)
    values = kernel.paired(np.zeros_like(t), t)
    slope = np.abs(np.gradient(values, t[:, 0]))
    peak = int(np.argmax(slope))
    return ProfileGradientPeak(location=float(t[peak, 0]), value=float(slope[peak]))


__all__ = [
    "boundedness_probe",
    "lipschitz_probe",
    "argument_lipschitz_probe",
    "profile_gradient_probe",
    "ProfileGradientPeak",
]
