"""Report writers shared by every subcommand."""

from __future__ import annotations

from pathlib import Path
from typing import Any, List, Mapping, Optional, Sequence

from src.common.errors import ArgumentError
from src.common.storage import write_csv, write_json
from src.experiments.records import DECAY_COLUMNS, TRIAL_COLUMNS, ExperimentReport


def _payload(report: Any) -> Any:
    if isinstance(report, ExperimentReport):
        return report.to_summary_dict()
    if hasattr(report, "to_dict"):
        return report.to_dict()
    return report


def write_report(report: Any, format: str, path: Path, *, columns: Optional[Sequence[str]] = None) -> Path:
    """Atomically write ``report`` as JSON or CSV.

    An ``ExperimentReport`` writes its summary as JSON and its per-trial
    table as CSV. Other reports go through ``to_dict`` when they have one;
    CSV output of plain rows needs ``columns``.
    """

    target = Path(path)
    if format == "json":
        return write_json(_payload(report), target)
    if format != "csv":
        raise ArgumentError(f"unknown report format {format!r}; expected json or csv")
    if isinstance(report, ExperimentReport):
        return write_csv(report.trial_rows(), target, columns=columns or TRIAL_COLUMNS)
    if columns is None:
        raise ArgumentError("CSV reports of plain rows need explicit columns")
    rows: List[Mapping[str, Any]] = list(report)
    return write_csv([dict(row) for row in rows], target, columns=columns)


def write_experiment_outputs(report: ExperimentReport, out_dir: Path) -> List[Path]:
    """``<stem>_summary.json``, ``<stem>_trials.csv`` and, for decay runs, ``<stem>_decay.csv``."""

    stem = report.name or report.kind
    paths = [
        write_report(report, "json", out_dir / f"{stem}_summary.json"),
        write_report(report, "csv", out_dir / f"{stem}_trials.csv"),
    ]
    if report.decay_table is not None:
        paths.append(write_report(report.decay_table, "csv", out_dir / f"{stem}_decay.csv", columns=DECAY_COLUMNS))
    return paths


__all__ = ["write_report", "write_experiment_outputs"]
