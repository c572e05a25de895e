"""Seeded Monte-Carlo studies driven by JSON experiment configs."""

from .config import (
    CoverageConfig,
    DecayConfig,
    ExcessRiskConfig,
    KernelAuditConfig,
    load_experiment_config,
    parse_model,
)
from .records import DECAY_COLUMNS, TRIAL_COLUMNS, ExperimentReport, TrialRecord
from .studies import (
    SlopeFit,
    StudySettings,
    fit_log_log_slope,
    run_coverage,
    run_decay,
    run_excess_risk_experiment,
    run_experiment,
    run_kernel_audit,
)

__all__ = [
    "CoverageConfig",
    "DecayConfig",
    "ExcessRiskConfig",
    "KernelAuditConfig",
    "load_experiment_config",
    "parse_model",
    "TRIAL_COLUMNS",
    "DECAY_COLUMNS",
    "TrialRecord",
    "ExperimentReport",
    "StudySettings",
    "SlopeFit",
    "fit_log_log_slope",
    "run_coverage",
    "run_decay",
    "run_excess_risk_experiment",
    "run_kernel_audit",
    "run_experiment",
]
