"""Logging to standard error plus optional MLflow tracking of study runs."""

from __future__ import annotations

import json
import logging
import logging.config
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Sequence

import numpy as np

from .config import AppConfig

_RECORD_ATTRS = frozenset(vars(logging.LogRecord("", 0, "", 0, "", (), None))) | {"message", "asctime"}

# Chatty under MLflow file stores.
_QUIET_LOGGERS = ("mlflow", "urllib3", "git")


def _jsonable(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    return str(value)


class JsonFormatter(logging.Formatter):
    """One JSON object per record; ``extra={...}`` fields land under ``context``."""

    def format(self, record: logging.LogRecord) -> str:
        entry: Dict[str, Any] = {
            "ts": datetime.fromtimestamp(record.created, tz=timezone.utc).isoformat(timespec="milliseconds"),
            "level": record.levelname,
            "logger": record.name,
            "msg": record.getMessage(),
        }
        context = {key: value for key, value in vars(record).items() if key not in _RECORD_ATTRS}
        if context:
            entry["context"] = context
        if record.exc_info:
            entry["exc"] = self.formatException(record.exc_info)
        return json.dumps(entry, default=_jsonable)


@dataclass
class LoggingSetupResult:
    logger: logging.Logger
    mlflow_run_id: Optional[str] = None


def _dict_config(cfg: AppConfig) -> Dict[str, Any]:
    formatter = "json" if cfg.logging.json_format else "plain"
    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "plain": {"format": cfg.logging.format, "datefmt": cfg.logging.datefmt},
            "json": {"()": JsonFormatter},
        },
        "handlers": {
            # stdout is reserved for JSON results
            "stderr": {"class": "logging.StreamHandler", "formatter": formatter, "stream": "ext://sys.stderr"},
        },
        "loggers": {name: {"level": "WARNING"} for name in _QUIET_LOGGERS},
        "root": {"handlers": ["stderr"], "level": cfg.logging.level},
    }


def _mlflow() -> Any:
    try:
        import mlflow
    except ImportError:  # pragma: no cover - optional dependency
        return None
    return mlflow


def _start_tracking(cfg: AppConfig, run_name: Optional[str], tags: Optional[Mapping[str, str]]) -> Optional[str]:
    if not cfg.tracking.tracking_uri:
        return None
    mlflow = _mlflow()
    if mlflow is None:
        logging.getLogger(cfg.logging.name).warning(
            "tracking_uri is set but MLflow is not installed; runs will not be tracked",
            extra={"tracking_uri": cfg.tracking.tracking_uri},
        )
        return None

    mlflow.set_tracking_uri(cfg.tracking.tracking_uri)
    run = mlflow.active_run()
    if run is None:
        kwargs: Dict[str, str] = {}
        if cfg.tracking.run_id:
            kwargs["run_id"] = cfg.tracking.run_id
        elif run_name:
            kwargs["run_name"] = run_name
        run = mlflow.start_run(**kwargs)
    if tags:
        mlflow.set_tags(dict(tags))
    cfg.tracking.run_id = cfg.tracking.run_id or run.info.run_id
    return run.info.run_id


def log_run_metrics(
    metrics: Mapping[str, float],
    *,
    params: Optional[Mapping[str, object]] = None,
    artifacts: Sequence[Path] = (),
) -> None:
    """Send study metrics, params and report files to the active MLflow run; a no-op without one."""

    mlflow = _mlflow()
    if mlflow is None or mlflow.active_run() is None:
        return
    mlflow.log_metrics({key: float(value) for key, value in metrics.items() if value is not None})
    if params:
        mlflow.log_params({key: str(value) for key, value in params.items()})
    for path in artifacts:
        mlflow.log_artifact(str(path))


def setup_logging(
    cfg: AppConfig,
    *,
    run_name: Optional[str] = None,
    mlflow_tags: Optional[Mapping[str, str]] = None,
) -> LoggingSetupResult:
    """Configure the root handler from ``cfg.logging`` and start tracking when a URI is set.

    Example:
        cfg = load_config(config_name=["pipelines/experiments"])
        logger = setup_logging(cfg, run_name="coverage").logger
    """

    logging.config.dictConfig(_dict_config(cfg))
    logger = logging.getLogger(cfg.logging.name)
    run_id = _start_tracking(cfg, run_name, mlflow_tags)
    if run_id:
        logger.info("Tracking run active", extra={"mlflow_run_id": run_id})
    return LoggingSetupResult(logger=logger, mlflow_run_id=run_id)


__all__ = ["JsonFormatter", "LoggingSetupResult", "setup_logging", "log_run_metrics"]
