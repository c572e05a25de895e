"""Per-trial records and experiment reports."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from src.common.errors import ConsistencyError

TRIAL_COLUMNS = ("trial", "sub_seed", "deviation", "bound", "covered", "excess_risk", "g_index", "f_index")
DECAY_COLUMNS = ("n", "mean_deviation", "stderr")


@dataclass(frozen=True)
class TrialRecord:
    """One Monte-Carlo trial, re-runnable from ``sub_seed`` alone."""

    trial: int
    sub_seed: int
    deviation: float
    bound: float
    covered: bool
    excess_risk: Optional[float] = None
    g_index: Optional[int] = None
    f_index: Optional[int] = None
    extra: Dict[str, Any] = field(default_factory=dict, compare=False)

    def row(self) -> Dict[str, Any]:
        return {column: getattr(self, column) for column in TRIAL_COLUMNS}


@dataclass
class ExperimentReport:
    kind: str
    name: str
    seed: int
    config: Dict[str, Any]
    trials: List[TrialRecord]
    summary: Dict[str, Any]
    decay_table: Optional[List[Dict[str, Any]]] = None
    # Logged and tracked only; never written to report files.
    wall_clock_seconds: Optional[float] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        for key in ("coverage", "v_coverage", "gretton_coverage", "cstar_coverage", "decomposition_fraction"):
            value = self.summary.get(key)
            if value is not None and not (0.0 <= value <= 1.0):
                raise ConsistencyError(f"{key} must lie in [0, 1], got {value}")

    def to_summary_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "kind": self.kind,
            "name": self.name,
            "seed": self.seed,
            "trial_count": len(self.trials),
            "summary": self.summary,
            "config": self.config,
        }
        if self.decay_table is not None:
            payload["decay"] = self.decay_table
        return payload

    def trial_rows(self) -> List[Dict[str, Any]]:
        return [record.row() for record in self.trials]


def binomial_std_error(fraction: float, count: int) -> float:
    if count <= 0:
        return math.nan
    return math.sqrt(fraction * (1.0 - fraction) / count)


__all__ = [
    "TRIAL_COLUMNS",
    "DECAY_COLUMNS",
    "TrialRecord",
    "ExperimentReport",
    "binomial_std_error",
]
