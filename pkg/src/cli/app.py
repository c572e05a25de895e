"""Argument parsing and dispatch for the ``mmdlab`` command.

Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.
JSON results go to standard output (or ``--out``); logs go to standard error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence

from pydantic import TypeAdapter, ValidationError

from src.bounds.formulas import BoundInputs, FormulaId, bound_report, scalar_bound_report
from src.common.config import AppConfig, load_config, resolve_threads
from src.common.errors import ArgumentError, ConfigurationError, MmdLabError
from src.common.logging import log_run_metrics, setup_logging
from src.common.storage import StorageError, dumps_json, read_json, write_json
from src.complexity.jobs import ComplexityJobConfig, run_complexity_job
from src.estimators.jobs import FitJobConfig, run_fit_job
from src.estimators.oracles import OracleSettings
from src.experiments.config import describe_validation_error, load_experiment_config, parse_model
from src.experiments.records import ExperimentReport
from src.experiments.studies import StudySettings, run_experiment
from src.kernels.config import KernelConfig
from src.mmd.estimators import mmd_u_squared, mmd_v_squared
from src.mmd.samples import SampleMatrix

from .reports import write_experiment_outputs

USAGE_ERROR = 2
RUNTIME_ERROR = 1

EXPERIMENT_KINDS = {
    "coverage": "coverage",
    "decay": "decay",
    "excess-risk": "excess_risk",
    "kernel-audit": "kernel_audit",
}

_KERNEL_ADAPTER: TypeAdapter[Any] = TypeAdapter(KernelConfig)

Handler = Callable[[argparse.Namespace, "RunContext"], int]


class RunContext:
    """Resolved application config, seed, threads and logger for one invocation."""

    def __init__(self, cfg: AppConfig, seed: Optional[int], threads: int, logger: logging.Logger) -> None:
        self.cfg = cfg
        self.explicit_seed = seed
        self.seed = cfg.compute.seed if seed is None else seed
        self.threads = threads
        self.logger = logger

    @property
    def oracle_settings(self) -> OracleSettings:
        return OracleSettings(
            monte_carlo_draws=self.cfg.oracle.monte_carlo_draws,
            block_size=self.cfg.oracle.block_size,
            closed_form_tolerance=self.cfg.oracle.closed_form_tolerance,
        )


def _emit(payload: Any, args: argparse.Namespace) -> None:
    out = getattr(args, "out", None)
    if out:
        write_json(payload, Path(out))
        return
    sys.stdout.write(dumps_json(payload) + "\n")
    sys.stdout.flush()


def _read_config(path: str) -> Any:
    target = Path(path)
    if not target.exists():
        raise ConfigurationError(f"config file not found: {target}")
    try:
        return read_json(target)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{target} is not valid JSON: {exc}") from exc


def _kernel_payload(raw: str) -> Mapping[str, Any]:
    text = raw.strip()
    if text.startswith("{"):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"--kernel is not valid JSON: {exc}") from exc
    return _read_config(text)


# -- handlers -----------------------------------------------------------------


def _handle_mmd(args: argparse.Namespace, context: RunContext) -> int:
    kernel = parse_model(_KERNEL_ADAPTER, dict(_kernel_payload(args.kernel))).build()
    x = SampleMatrix.from_csv(Path(args.x))
    y = SampleMatrix.from_csv(Path(args.y))
    estimate = mmd_u_squared(kernel, x, y) if args.estimator == "u" else mmd_v_squared(kernel, x, y)
    context.logger.info("MMD estimated", extra={"estimator": estimate.estimator.value, "n": estimate.n})
    _emit(estimate.to_dict(), args)
    return 0


def _bound_inputs(args: argparse.Namespace) -> BoundInputs:
    fields = {
        "l": args.l,
        "nu": args.nu,
        "b": args.b,
        "n": args.n,
        "delta": args.delta,
        "gc_FG": getattr(args, "gc_fg", None),
        "gc_F": getattr(args, "gc_f", None),
        "gc_G": getattr(args, "gc_g", None),
    }
    return parse_model(BoundInputs, {key: value for key, value in fields.items() if value is not None})


_THEOREM1_FORMS = {
    "expectation": FormulaId.THEOREM1_EXPECTATION,
    "highprob": FormulaId.THEOREM1_HIGHPROB,
    "vstatistic": FormulaId.THEOREM1_VSTATISTIC,
    "infinite": FormulaId.INFINITE_CLASS,
}


def _handle_bound(args: argparse.Namespace, context: RunContext) -> int:
    form = args.form
    if form == "theorem1":
        extra: Dict[str, float] = {}
        if args.theorem1_form == "infinite":
            if args.feature_lipschitz is None or args.eps is None:
                raise ArgumentError("--form infinite needs --feature-lipschitz and --eps")
            extra = {"feature_lipschitz": args.feature_lipschitz, "eps": args.eps}
        report = bound_report(_THEOREM1_FORMS[args.theorem1_form], _bound_inputs(args), **extra)
    elif form in ("corollary1", "corollary2"):
        report = bound_report(FormulaId(form), _bound_inputs(args))
    elif form == "gretton":
        report = scalar_bound_report(FormulaId.GRETTON, nu=args.nu, n=args.n, delta=args.delta)
    elif form == "fukumizu":
        if args.chaos is not None:
            report = scalar_bound_report(FormulaId.FUKUMIZU, chaos=args.chaos, nu=args.nu, n=args.n, delta=args.delta)
        else:
            if args.chaos_y is None:
                raise ArgumentError("--chaos-x needs --chaos-y")
            report = scalar_bound_report(
                FormulaId.FUKUMIZU_TWO_SIDED,
                chaos_x=args.chaos_x,
                chaos_y=args.chaos_y,
                nu=args.nu,
                n=args.n,
                delta=args.delta,
            )
    else:
        formula = FormulaId.BRIOL_EXCESS if args.excess else FormulaId.EMPIRICAL_MEASURE
        report = scalar_bound_report(formula, nu=args.nu, n=args.n, delta=args.delta)
    context.logger.info("Bound evaluated", extra={"formula_id": report.formula_id.value, "value": report.value})
    _emit(report.to_dict(), args)
    return 0


def _handle_complexity(args: argparse.Namespace, context: RunContext) -> int:
    job = parse_model(ComplexityJobConfig, _read_config(args.config))
    result = run_complexity_job(
        job,
        args.kind,
        context.seed,
        defaults=context.cfg.complexity,
        base_dir=Path(args.config).resolve().parent,
    )
    _emit(result, args)
    return 0


def _handle_fit(args: argparse.Namespace, context: RunContext) -> int:
    job = parse_model(FitJobConfig, _read_config(args.config))
    result = run_fit_job(
        job,
        args.method,
        context.seed,
        threads=context.threads,
        oracle_settings=context.oracle_settings,
        base_dir=Path(args.config).resolve().parent,
    )
    _emit(result, args)
    return 0


def _tracked_metrics(report: ExperimentReport) -> Dict[str, float]:
    metrics = {
        key: float(value)
        for key, value in report.summary.items()
        if isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)
    }
    if report.wall_clock_seconds is not None:
        metrics["wall_clock_seconds"] = report.wall_clock_seconds
    return metrics


def _run_experiment_file(args: argparse.Namespace, context: RunContext, kind: str) -> int:
    config_path = Path(args.config)
    if not config_path.exists():
        raise ConfigurationError(f"config file not found: {config_path}")
    config = load_experiment_config(config_path, expected_kind=kind)
    settings = StudySettings.from_app_config(
        context.cfg, seed=context.explicit_seed, threads=context.threads, experiment=config
    )
    context.logger.info(
        "Experiment starting",
        extra={"kind": kind, "seed": settings.seed, "threads": settings.threads, "trials": config.trials},
    )
    report = run_experiment(config, settings)
    context.logger.info(
        "Experiment finished",
        extra={"kind": kind, "wall_clock_seconds": round(report.wall_clock_seconds or 0.0, 3)},
    )
    if getattr(args, "dry_run", False):
        context.logger.info("Dry-run mode; skipping writes.")
        sys.stdout.write(dumps_json(report.to_summary_dict()) + "\n")
        return 0

    out_dir = Path(getattr(args, "out", None) or config.output_dir or context.cfg.paths.outputs_reports)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = write_experiment_outputs(report, out_dir)
    context.logger.info("Reports written", extra={"paths": [str(path) for path in paths]})
    log_run_metrics(
        _tracked_metrics(report),
        params={"kind": kind, "seed": settings.seed, "threads": settings.threads, "name": report.name},
        artifacts=paths,
    )
    sys.stdout.write(dumps_json(report.to_summary_dict()) + "\n")
    return 0


def _handle_experiment(args: argparse.Namespace, context: RunContext) -> int:
    return _run_experiment_file(args, context, EXPERIMENT_KINDS[args.kind])


def _handle_kernel_audit(args: argparse.Namespace, context: RunContext) -> int:
    return _run_experiment_file(args, context, "kernel_audit")


# -- parser -------------------------------------------------------------------


def _global_options() -> argparse.ArgumentParser:
    # SUPPRESS lets the flags appear before or after the subcommand without clobbering each other.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="Master seed (default: compute.seed)")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="Worker threads (default: cores)")
    common.add_argument("--out", default=argparse.SUPPRESS, help="Output file, or directory for experiments")
    common.add_argument("--config-name", action="append", default=argparse.SUPPRESS)
    common.add_argument("--override", action="append", default=argparse.SUPPRESS)
    common.add_argument("--reload-config", action="store_true", default=argparse.SUPPRESS)
    return common


def _add_constant_flags(parser: argparse.ArgumentParser, *, lipschitz: bool) -> None:
    if lipschitz:
        parser.add_argument("--l", type=float, required=True, help="Lipschitz constant of k(u, .) - k(u', .)")
        parser.add_argument("--b", type=float, default=None, help="Diameter of the kernel's domain")
    parser.add_argument("--nu", type=float, required=not lipschitz, default=None, help="Bound on sup k(u, u)")
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument("--delta", type=float, required=True)


def build_parser() -> argparse.ArgumentParser:
    common = _global_options()
    parser = argparse.ArgumentParser(
        prog="mmdlab",
        description="MMD estimates, concentration bounds and Monte-Carlo studies",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p_mmd = sub.add_parser("mmd", parents=[common], help="Squared-MMD estimate from two sample files")
    p_mmd.add_argument("estimator", choices=["u", "v"])
    p_mmd.add_argument("--x", required=True, help="Headerless CSV, one observation per row")
    p_mmd.add_argument("--y", required=True)
    p_mmd.add_argument("--kernel", required=True, help='Inline JSON such as {"kind": "gaussian", "sigma": 1} or a file')
    p_mmd.set_defaults(handler=_handle_mmd)

    p_bound = sub.add_parser("bound", help="Evaluate a closed-form bound")
    forms = p_bound.add_subparsers(dest="form", required=True, metavar="FORM")
    p_t1 = forms.add_parser("theorem1", parents=[common], help="Uniform deviation bound over F x G")
    _add_constant_flags(p_t1, lipschitz=True)
    p_t1.add_argument("--gc-fg", type=float, required=True, help="E G_n(F o G (X))")
    p_t1.add_argument("--gc-f", type=float, required=True, help="E G_n(F (Y))")
    p_t1.add_argument("--form", dest="theorem1_form", choices=sorted(_THEOREM1_FORMS), default="highprob")
    p_t1.add_argument("--feature-lipschitz", type=float, default=None)
    p_t1.add_argument("--eps", type=float, default=None, help="Net radius for --form infinite")
    p_gretton = forms.add_parser("gretton", parents=[common], help="Single-kernel deviation bound")
    _add_constant_flags(p_gretton, lipschitz=False)
    p_fuku = forms.add_parser("fukumizu", parents=[common], help="Rademacher-chaos bound C*")
    _add_constant_flags(p_fuku, lipschitz=False)
    chaos = p_fuku.add_mutually_exclusive_group(required=True)
    chaos.add_argument("--chaos", type=float, help="One-sample C*(X, delta)")
    chaos.add_argument("--chaos-x", type=float, help="Two-sided C*(X) + C*(Y); needs --chaos-y")
    p_fuku.add_argument("--chaos-y", type=float, default=None)
    p_emp = forms.add_parser("empirical-measure", parents=[common], help="Empirical-measure concentration")
    _add_constant_flags(p_emp, lipschitz=False)
    p_emp.add_argument("--excess", action="store_true", help="Report the minimum-distance excess bound instead")
    p_c1 = forms.add_parser("corollary1", parents=[common], help="Excess risk of the minimum-MMD estimator")
    _add_constant_flags(p_c1, lipschitz=True)
    p_c1.add_argument("--gc-g", type=float, required=True, help="E G_n(G (X))")
    p_c2 = forms.add_parser("corollary2", parents=[common], help="Excess risk of the minimax estimator")
    _add_constant_flags(p_c2, lipschitz=True)
    p_c2.add_argument("--gc-fg", type=float, required=True)
    p_c2.add_argument("--gc-f", type=float, required=True)
    for leaf in (p_t1, p_gretton, p_fuku, p_emp, p_c1, p_c2):
        leaf.set_defaults(handler=_handle_bound)

    p_cx = sub.add_parser("complexity", parents=[common], help="Gaussian/Rademacher complexity or Rademacher chaos")
    p_cx.add_argument("kind", choices=["gaussian", "rademacher", "chaos"])
    p_cx.add_argument("--config", required=True)
    p_cx.set_defaults(handler=_handle_complexity)

    p_fit = sub.add_parser("fit", parents=[common], help="Minimum-MMD or minimax MMD fit over finite classes")
    p_fit.add_argument("method", choices=["minmmd", "minimax"])
    p_fit.add_argument("--config", required=True)
    p_fit.set_defaults(handler=_handle_fit)

    p_exp = sub.add_parser("experiment", help="Run a Monte-Carlo study from a JSON config")
    actions = p_exp.add_subparsers(dest="action", required=True, metavar="ACTION")
    p_run = actions.add_parser("run", parents=[common])
    p_run.add_argument("kind", choices=sorted(EXPERIMENT_KINDS))
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--dry-run", action="store_true", help="Run but write no files")
    p_run.set_defaults(handler=_handle_experiment)

    p_audit = sub.add_parser("kernel-audit", parents=[common], help="Probe a kernel's certified constants")
    p_audit.add_argument("--config", required=True)
    p_audit.add_argument("--dry-run", action="store_true")
    p_audit.set_defaults(handler=_handle_kernel_audit)
    return parser


def _ensure_config(args: argparse.Namespace) -> List[str]:
    merged = [name for name in getattr(args, "config_name", None) or [] if name]
    if args.command in ("experiment", "kernel-audit") and "pipelines/experiments" not in merged:
        merged.append("pipelines/experiments")
    return merged


def _exit_code(exc: SystemExit) -> int:
    if exc.code is None:
        return 0
    if isinstance(exc.code, int):
        return exc.code
    return USAGE_ERROR


def parse_and_dispatch(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv`` and run the selected command; returns the process exit code."""

    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as exc:
        return _exit_code(exc)

    logger = logging.getLogger("mmdlab")
    try:
        cfg = load_config(
            config_name=_ensure_config(args) or None,
            overrides=getattr(args, "override", None),
            reload=getattr(args, "reload_config", False),
        )
        logger = setup_logging(cfg, run_name=f"mmdlab-{args.command}").logger
        context = RunContext(
            cfg,
            seed=getattr(args, "seed", None),
            threads=resolve_threads(getattr(args, "threads", None), cfg),
            logger=logger,
        )
        handler: Handler = args.handler
        return handler(args, context)
    except ValidationError as exc:
        message = f"invalid input at {describe_validation_error(exc)}"
        code = USAGE_ERROR
    except (ArgumentError, ConfigurationError) as exc:
        message, code = str(exc), USAGE_ERROR
    except (StorageError, OSError) as exc:
        message, code = str(exc), RUNTIME_ERROR
    except MmdLabError as exc:
        message, code = str(exc), RUNTIME_ERROR
    except Exception as exc:  # pragma: no cover - last-resort guard
        logger.exception("Unexpected failure")
        message, code = f"{type(exc).__name__}: {exc}", RUNTIME_ERROR
    sys.stderr.write(f"mmdlab: error: {message}\n")
    return code


def main(argv: Optional[List[str]] = None) -> int:
    return parse_and_dispatch(argv)


__all__ = ["build_parser", "parse_and_dispatch", "main", "EXPERIMENT_KINDS"]
