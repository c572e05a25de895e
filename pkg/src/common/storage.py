"""Storage helpers for JSON reports, CSV tables and sample matrices.

All writers are atomic: content goes to a temporary file in the target
directory and is moved into place with ``os.replace``, so a reader never sees
a partially written report.
"""

from __future__ import annotations

import csv
import json
import math
import os
import tempfile
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Iterator, Sequence

import numpy as np
import pandas as pd

SIGNIFICANT_DIGITS = 7


class StorageError(RuntimeError):
    """Raised when reading or writing a storage artifact fails."""


def ensure_parent_dir(path: Path) -> None:
    """Fail early when the parent directory of ``path`` is missing."""

    if not path.parent.exists():
        raise StorageError(f"Parent directory does not exist: {path.parent}")


def round_significant(payload: Any, digits: int = SIGNIFICANT_DIGITS) -> Any:
    """Recursively round reals to ``digits`` significant digits; non-finite -> None."""

    if isinstance(payload, (bool, np.bool_)):
        return bool(payload)
    if isinstance(payload, (int, np.integer)):
        return int(payload)
    if isinstance(payload, (float, np.floating)):
        value = float(payload)
        if not math.isfinite(value):
            return None
        return float(f"{value:.{digits}g}")
    if isinstance(payload, np.ndarray):
        return round_significant(payload.tolist(), digits)
    if isinstance(payload, dict):
        return {str(key): round_significant(value, digits) for key, value in payload.items()}
    if isinstance(payload, (list, tuple)):
        return [round_significant(value, digits) for value in payload]
    return payload


@contextmanager
def _atomic_target(path: Path, *, newline: str | None = None) -> Iterator[Any]:
    ensure_parent_dir(path)
    handle = tempfile.NamedTemporaryFile(
        "w",
        encoding="utf-8",
        newline=newline,
        dir=path.parent,
        prefix=f".{path.name}.",
        suffix=".tmp",
        delete=False,
    )
    try:
        with handle:
            yield handle
        os.replace(handle.name, path)
    except BaseException:
        Path(handle.name).unlink(missing_ok=True)
        raise


def dumps_json(payload: Any, *, indent: int = 2) -> str:
    """Serialize with 7 significant digits and stable key order."""

    return json.dumps(round_significant(payload), indent=indent, ensure_ascii=False, allow_nan=False)


def read_json(path: Path) -> Any:
    """Read JSON payload from disk."""

    if not path.exists():
        raise StorageError(f"JSON file not found: {path}")
    with path.open("r", encoding="utf-8") as handle:
        return json.load(handle)


def write_json(payload: Any, path: Path, *, indent: int = 2) -> Path:
    """Atomically write a JSON payload to disk."""

    with _atomic_target(path) as handle:
        handle.write(dumps_json(payload, indent=indent))
        handle.write("\n")
    return path


def write_csv(rows: Sequence[dict[str, Any]], path: Path, *, columns: Sequence[str]) -> Path:
    """Atomically write rows as CSV; the header row is always present."""

    frame = pd.DataFrame(list(rows), columns=list(columns))
    with _atomic_target(path, newline="") as handle:
        frame.to_csv(
            handle,
            index=False,
            quoting=csv.QUOTE_MINIMAL,
            float_format=f"%.{SIGNIFICANT_DIGITS}g",
            lineterminator="\r\n",
        )
    return path


def read_sample_csv(path: Path) -> np.ndarray:
    """Read a headerless numeric CSV (one observation per row) as an n x d array."""

    if not path.exists():
        raise StorageError(f"Sample file not found: {path}")
    try:
        frame = pd.read_csv(path, header=None, dtype=float)
    except (ValueError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise StorageError(f"Sample file {path} is not a numeric CSV: {exc}") from exc
    return frame.to_numpy(dtype=float)


__all__ = [
    "SIGNIFICANT_DIGITS",
    "StorageError",
    "ensure_parent_dir",
    "round_significant",
    "dumps_json",
    "read_json",
    "write_json",
    "write_csv",
    "read_sample_csv",
]
