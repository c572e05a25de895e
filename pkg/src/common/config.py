"""Centralized config loading with Hydra-style overrides + Pydantic validation."""

from __future__ import annotations

import os
from functools import lru_cache
from pathlib import Path
from typing import Any, List, Optional, Sequence, Union

from omegaconf import OmegaConf
from omegaconf.errors import OmegaConfBaseException
from pydantic import BaseModel, ConfigDict, Field, ValidationError
from yaml import YAMLError

from .errors import ConfigurationError

PROJECT_ROOT = Path(__file__).resolve().parents[2]
CONFIG_ROOT = PROJECT_ROOT / "config"
BASE_CONFIG_PATH = CONFIG_ROOT / "base.yaml"
ENV_VAR_CONFIG_NAME = "MMDLAB_CONFIG_NAME"
ENV_VAR_THREADS = "MMDLAB_THREADS"


class PathsConfig(BaseModel):
    """Filesystem layout for inputs + reports."""

    model_config = ConfigDict(extra="allow")

    inputs_experiments: Path
    outputs_reports: Path

    def resolved(self, base_dir: Path) -> "PathsConfig":
        def _resolve(value: Path) -> Path:
            return value if value.is_absolute() else (base_dir / value).resolve()

        resolved_fields = {f: _resolve(getattr(self, f)) for f in type(self).model_fields}
        return type(self)(**resolved_fields)


class LoggingConfig(BaseModel):
    """Runtime logging preferences."""

    model_config = ConfigDict(extra="allow", populate_by_name=True)

    level: str = "INFO"
    format: str = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"
    datefmt: Optional[str] = None
    json_format: bool = Field(False, alias="json")
    name: str = "mmdlab"


class TrackingConfig(BaseModel):
    """MLflow tracking target; tracking is off when ``tracking_uri`` is null."""

    model_config = ConfigDict(extra="allow")

    tracking_uri: Optional[str] = None
    run_id: Optional[str] = None


class ComputeConfig(BaseModel):
    model_config = ConfigDict(extra="allow")

    seed: int = 0
    threads: Optional[int] = Field(None, ge=1)


class ComplexityDefaults(BaseModel):
    model_config = ConfigDict(extra="allow")

    outer_replicates: int = Field(50, ge=1)
    inner_replicates: int = Field(200, ge=1)
    exact_enumeration_cutoff: int = Field(20, ge=0, le=24)


class OracleDefaults(BaseModel):
    model_config = ConfigDict(extra="allow")

    monte_carlo_draws: int = Field(1_000_000, ge=2)
    block_size: int = Field(256, ge=2)
    closed_form_tolerance: float = Field(1e-12, ge=0.0)


class AppConfig(BaseModel):
    """Top-level validated configuration object."""

    model_config = ConfigDict(extra="allow")

    paths: PathsConfig
    logging: LoggingConfig
    tracking: TrackingConfig
    compute: ComputeConfig = Field(default_factory=ComputeConfig)
    complexity: ComplexityDefaults = Field(default_factory=ComplexityDefaults)
    oracle: OracleDefaults = Field(default_factory=OracleDefaults)


class ConfigLoaderError(ConfigurationError):
    """Raised when config files are missing or malformed."""


def _ensure_exists(path: Path) -> None:
    if not path.exists():
        raise ConfigLoaderError(f"Config file not found: {path}")


def _as_tuple(overrides: Optional[Sequence[str]]) -> tuple[str, ...]:
    if not overrides:
        return tuple()
    return tuple(overrides)


def _load_omegaconf(path: Path) -> Any:
    _ensure_exists(path)
    try:
        return OmegaConf.load(path)
    except (OmegaConfBaseException, YAMLError) as exc:
        raise ConfigLoaderError(f"Malformed config file {path}: {exc}") from exc


def _resolve_config_paths(names: Sequence[str]) -> List[Path]:
    resolved: List[Path] = []
    for name in names:
        rel = Path(name)
        rel = rel.with_suffix(".yaml") if rel.suffix == "" else rel
        candidate = CONFIG_ROOT / rel
        _ensure_exists(candidate)
        resolved.append(candidate)
    return resolved


def _merge_confs(base_conf: Any, overlays: Sequence[Any]) -> Any:
    cfg = base_conf
    for overlay in overlays:
        cfg = OmegaConf.merge(cfg, overlay)
    return cfg


def _apply_overrides(cfg: Any, overrides: Sequence[str]) -> Any:
    if not overrides:
        return cfg
    try:
        override_conf = OmegaConf.from_dotlist(list(overrides))
    except OmegaConfBaseException as exc:
        raise ConfigLoaderError(f"Malformed override {list(overrides)}: {exc}") from exc
    return OmegaConf.merge(cfg, override_conf)


def _default_config_names(config_name: Optional[Union[str, Sequence[str]]]) -> List[str]:
    env_value = os.getenv(ENV_VAR_CONFIG_NAME)
    target = config_name or env_value
    if target is None:
        return []
    if isinstance(target, str):
        return [name for name in target.split(",") if name]
    return list(target)


@lru_cache(maxsize=16)
def _load_config_internal(config_name_key: str, overrides_key: tuple[str, ...]) -> AppConfig:
    """Internal cached loader keyed by config target + overrides tuple."""

    base = _load_omegaconf(BASE_CONFIG_PATH)
    overlay_names = [name for name in config_name_key.split(",") if name]
    overlays = [_load_omegaconf(path) for path in _resolve_config_paths(overlay_names)]
    merged = _apply_overrides(_merge_confs(base, overlays), list(overrides_key))

    cfg_dict = OmegaConf.to_container(merged, resolve=True)  # type: ignore[arg-type]
    try:
        app_cfg = AppConfig(**cfg_dict)
    except ValidationError as exc:
        raise ConfigLoaderError(f"Invalid application config: {exc}") from exc
    app_cfg.paths = app_cfg.paths.resolved(PROJECT_ROOT)
    return app_cfg


def load_config(
    config_name: Optional[Union[str, Sequence[str]]] = None,
    overrides: Optional[Sequence[str]] = None,
    *,
    reload: bool = False,
) -> AppConfig:
    """Public helper resembling Hydra compose() but script-friendly."""

    names = _default_config_names(config_name)
    if reload:
        _load_config_internal.cache_clear()
    return _load_config_internal(",".join(names), _as_tuple(overrides))


def resolve_threads(requested: Optional[int], cfg: Optional[AppConfig] = None) -> int:
    """Worker count: explicit flag, then ``MMDLAB_THREADS``, then config, then cores."""

    if requested is not None:
        return max(1, int(requested))
    env_value = os.getenv(ENV_VAR_THREADS)
    if env_value:
        try:
            return max(1, int(env_value))
        except ValueError as exc:
            raise ConfigurationError(f"{ENV_VAR_THREADS} must be an integer, got {env_value!r}") from exc
    if cfg is not None and cfg.compute.threads is not None:
        return cfg.compute.threads
    return os.cpu_count() or 1


__all__ = [
    "AppConfig",
    "PathsConfig",
    "LoggingConfig",
    "TrackingConfig",
    "ComputeConfig",
    "ComplexityDefaults",
    "OracleDefaults",
    "ConfigLoaderError",
    "load_config",
    "resolve_threads",
    "PROJECT_ROOT",
    "CONFIG_ROOT",
]
