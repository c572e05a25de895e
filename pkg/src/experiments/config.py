"""JSON experiment configs validated with pydantic.

Validation failures are re-raised as ``ConfigurationError`` naming the
failing JSON path, e.g. ``classes.G.grid: Input should be a valid list``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Annotated, Any, List, Literal, Mapping, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError, field_validator

from src.common.errors import ConfigurationError
from src.common.storage import read_json
from src.estimators.fits import Orientation
from src.function_classes.config import ClassPairConfig
from src.kernels.config import KernelConfig
from src.mmd.config import SamplerConfig

MIN_LADDER_LENGTH = 4
MIN_LADDER_SPAN = 8.0


class _StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class DataConfig(_StrictModel):
    x: SamplerConfig = Field(..., description="Latent input law of the generators")
    y: SamplerConfig = Field(..., description="Law of the observed sample")


class ComplexityOverrides(_StrictModel):
    outer_replicates: Optional[int] = Field(None, ge=1)
    inner_replicates: Optional[int] = Field(None, ge=1)


class OracleOverrides(_StrictModel):
    mode: Literal["auto", "closed_form", "monte_carlo"] = "auto"
    monte_carlo_draws: Optional[int] = Field(None, ge=2)
    block_size: Optional[int] = Field(None, ge=2)


class _ExperimentBase(_StrictModel):
    name: str = Field("", description="Report file stem; defaults to the experiment kind")
    seed: Optional[int] = Field(None, ge=0, description="Master seed; the CLI --seed wins when given")
    trials: int = Field(..., ge=1)
    output_dir: Optional[str] = None

    @property
    def stem(self) -> str:
        return self.name or self.kind  # type: ignore[attr-defined]


class _StudyBase(_ExperimentBase):
    kernel: KernelConfig
    classes: ClassPairConfig
    data: DataConfig
    delta: float = Field(..., gt=0, lt=1)
    support_diameter: Optional[float] = Field(None, ge=0, description="Diameter of the kernel's domain, if bounded")
    complexity: ComplexityOverrides = Field(default_factory=ComplexityOverrides)
    oracle: OracleOverrides = Field(default_factory=OracleOverrides)


class CoverageConfig(_StudyBase):
    kind: Literal["coverage"]
    n: int = Field(..., ge=2)


class DecayConfig(_StudyBase):
    kind: Literal["decay"]
    n_ladder: List[int]

    @field_validator("n_ladder")
    @classmethod
    def _check_ladder(cls, ladder: List[int]) -> List[int]:
        if len(ladder) < MIN_LADDER_LENGTH:
            raise ValueError(f"needs at least {MIN_LADDER_LENGTH} sample sizes, got {len(ladder)}")
        if ladder[0] < 2:
            raise ValueError("sample sizes must be at least 2")
        if any(b <= a for a, b in zip(ladder, ladder[1:])):
            raise ValueError("sample sizes must be strictly increasing")
        if ladder[-1] < MIN_LADDER_SPAN * ladder[0]:
            raise ValueError(f"ladder must span at least a factor {MIN_LADDER_SPAN:g}")
        return ladder


class ExcessRiskConfig(_StudyBase):
    kind: Literal["excess_risk"]
    n: int = Field(..., ge=2)
    which: Literal["corollary1", "corollary2"]
    orientation: Orientation = Orientation.MIN_F_MAX_G


class KernelAuditConfig(_ExperimentBase):
    kind: Literal["kernel_audit"]
    kernel: KernelConfig
    domain: SamplerConfig = Field(..., description="Law of the probe points u, v")
    support_diameter: Optional[float] = Field(None, ge=0)
    trials: int = Field(100_000, ge=1)


ExperimentConfig = Annotated[
    Union[CoverageConfig, DecayConfig, ExcessRiskConfig, KernelAuditConfig],
    Field(discriminator="kind"),
]

_EXPERIMENT_ADAPTER: TypeAdapter[Any] = TypeAdapter(ExperimentConfig)


def describe_validation_error(exc: ValidationError) -> str:
    first = exc.errors()[0]
    location = ".".join(str(part) for part in first.get("loc", ())) or "<root>"
    return f"{location}: {first.get('msg', 'invalid value')}"


def parse_model(adapter_or_model: Any, payload: Any) -> Any:
    """Validate ``payload``; failures become ConfigurationError naming the JSON path."""

    try:
        if isinstance(adapter_or_model, TypeAdapter):
            return adapter_or_model.validate_python(payload)
        return adapter_or_model.model_validate(payload)
    except ValidationError as exc:
        raise ConfigurationError(f"invalid config at {describe_validation_error(exc)}") from exc


def load_experiment_config(source: Union[str, Path, Mapping[str, Any]], expected_kind: Optional[str] = None) -> Any:
    """Parse an experiment config from a JSON file or an already-decoded mapping."""

    if isinstance(source, Mapping):
        payload: Any = dict(source)
    else:
        try:
            payload = read_json(Path(source))
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"{source} is not valid JSON: {exc}") from exc
    config = parse_model(_EXPERIMENT_ADAPTER, payload)
    if expected_kind is not None and config.kind != expected_kind:
        raise ConfigurationError(f"config describes a {config.kind!r} experiment, expected {expected_kind!r}")
    return config


__all__ = [
    "DataConfig",
    "ComplexityOverrides",
    "OracleOverrides",
    "CoverageConfig",
    "DecayConfig",
    "ExcessRiskConfig",
    "KernelAuditConfig",
    "ExperimentConfig",
    "describe_validation_error",
    "parse_model",
    "load_experiment_config",
]
