"""Seeded Monte-Carlo studies: bound coverage, deviation decay, excess risk, kernel audits.

Sub-stream layout under the master seed:
    (master, 1, t)          trial t (decay: t is the global trial index)
    (master, 2, ...)        complexity expectations
    (master, 3)             Monte-Carlo population oracle
    (master, 4, i)          kernel audit probe i
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, TypeVar

import numpy as np

from src.bounds.formulas import (
    BoundInputs,
    FormulaId,
    bound_report,
    scalar_bound_report,
)
from src.common.config import AppConfig, ComplexityDefaults
from src.common.errors import ArgumentError, ConfigurationError
from src.common.seeding import derive_seed, make_rng
from src.complexity.estimates import ComplexityEstimate, expected_chaos, expected_complexity
from src.complexity.seminorms import seminorm_probe
from src.estimators.fits import (
    FitResult,
    Orientation,
    excess_risk_from_table,
    min_mmd_fit,
    minimax_mmd_fit,
)
from src.estimators.oracles import OracleSettings, select_oracle
from src.function_classes.classes import FiniteFunctionClass, compose_classes, identity_class
from src.function_classes.maps import IdentityMap
from src.kernels.audit import (
    argument_lipschitz_probe,
    boundedness_probe,
    lipschitz_probe,
    profile_gradient_probe,
)
from src.kernels.base import GaussianKernel, KernelSpec, compose
from src.kernels.constants import KernelConstants, certified_constants
from src.mmd.estimators import EstimatorKind, mmd_pair_table
from src.mmd.samples import MappedSampler, Sampler

from .config import CoverageConfig, DecayConfig, ExcessRiskConfig, KernelAuditConfig
from .records import ExperimentReport, TrialRecord, binomial_std_error

logger = logging.getLogger(__name__)

T = TypeVar("T")

_TRIAL_STREAM = 1
_COMPLEXITY_STREAM = 2
_ORACLE_STREAM = 3
_AUDIT_STREAM = 4

# Oracle std-errors widen every comparison by this many standard errors.
ORACLE_SLACK_SIGMAS = 3.0
AUDIT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class StudySettings:
    """Run-level knobs that do not belong to the experiment JSON."""

    seed: int = 0
    threads: int = 1
    complexity: ComplexityDefaults = field(default_factory=ComplexityDefaults)
    oracle: OracleSettings = field(default_factory=OracleSettings)

    @classmethod
    def from_app_config(
        cls,
        cfg: AppConfig,
        *,
        seed: Optional[int] = None,
        threads: int = 1,
        experiment: Any = None,
    ) -> "StudySettings":
        """Master seed: explicit ``seed``, then the experiment's own seed, then ``compute.seed``."""

        if seed is None:
            seed = getattr(experiment, "seed", None)
        if seed is None:
            seed = cfg.compute.seed
        return cls(
            seed=int(seed),
            threads=max(1, int(threads)),
            complexity=cfg.complexity,
            oracle=OracleSettings(
                monte_carlo_draws=cfg.oracle.monte_carlo_draws,
                block_size=cfg.oracle.block_size,
                closed_form_tolerance=cfg.oracle.closed_form_tolerance,
            ),
        )


@dataclass
class _StudyContext:
    kernel: KernelSpec
    F: FiniteFunctionClass
    G: FiniteFunctionClass
    x_sampler: Sampler
    y_sampler: Sampler
    constants: KernelConstants
    population: np.ndarray
    population_std_errors: np.ndarray
    oracle_kind: str

    @property
    def oracle_max_std_error(self) -> float:
        return float(self.population_std_errors.max()) if self.population_std_errors.size else 0.0

    @property
    def slack(self) -> float:
        return ORACLE_SLACK_SIGMAS * self.oracle_max_std_error


def _map_trials(task: Callable[[int], T], indices: Sequence[int], threads: int) -> List[T]:
    """Results in index order whatever the worker count."""

    if threads > 1 and len(indices) > 1:
        with ThreadPoolExecutor(max_workers=min(threads, len(indices))) as pool:
            return list(pool.map(task, indices))
    return [task(index) for index in indices]


def _is_identity(function_class: FiniteFunctionClass) -> bool:
    return len(function_class) == 1 and isinstance(function_class[0], IdentityMap)


def _oracle_settings(config: Any, settings: StudySettings) -> OracleSettings:
    return OracleSettings(
        monte_carlo_draws=config.oracle.monte_carlo_draws or settings.oracle.monte_carlo_draws,
        block_size=config.oracle.block_size or settings.oracle.block_size,
        closed_form_tolerance=settings.oracle.closed_form_tolerance,
    )


def _replicates(config: Any, settings: StudySettings) -> tuple[int, int]:
    outer = config.complexity.outer_replicates or settings.complexity.outer_replicates
    inner = config.complexity.inner_replicates or settings.complexity.inner_replicates
    return outer, inner


def _build_context(
    config: Any,
    settings: StudySettings,
    kernel: Optional[KernelSpec] = None,
    F: Optional[FiniteFunctionClass] = None,
    G: Optional[FiniteFunctionClass] = None,
) -> _StudyContext:
    kernel = kernel if kernel is not None else config.kernel.build()
    if F is None or G is None:
        F, G = config.classes.build()
    x_sampler = config.data.x.build()
    y_sampler = config.data.y.build()
    if x_sampler.dim != G.input_dim:
        raise ConfigurationError(f"data.x has dimension {x_sampler.dim}, G expects {G.input_dim}")
    if y_sampler.dim != F.input_dim:
        raise ConfigurationError(f"data.y has dimension {y_sampler.dim}, F expects {F.input_dim}")
    constants = certified_constants(kernel, dim=F.output_dim, support_diameter=config.support_diameter)
    if not math.isfinite(constants.min_term):
        raise ConfigurationError("min{4 nu, l b} is infinite; the bound is vacuous")
    oracle = select_oracle(
        kernel,
        F,
        G,
        x_sampler,
        y_sampler,
        settings=_oracle_settings(config, settings),
        seed=derive_seed(settings.seed, _ORACLE_STREAM),
        threads=settings.threads,
        mode=config.oracle.mode,
    )
    values, errors = oracle.population_table(F, G)
    return _StudyContext(
        kernel=kernel,
        F=F,
        G=G,
        x_sampler=x_sampler,
        y_sampler=y_sampler,
        constants=constants,
        population=values,
        population_std_errors=errors,
        oracle_kind=type(oracle).__name__,
    )


def _draw_trial(context: _StudyContext, n: int, sub_seed: int) -> tuple[np.ndarray, np.ndarray]:
    rng = make_rng(sub_seed)
    return context.x_sampler.sample(n, rng), context.y_sampler.sample(n, rng)


def _class_complexities(
    context: _StudyContext, n: int, config: Any, settings: StudySettings, *keys: int
) -> Dict[str, ComplexityEstimate]:
    outer, inner = _replicates(config, settings)
    base = derive_seed(settings.seed, _COMPLEXITY_STREAM, *keys)
    return {
        "gc_FG": expected_complexity(
            compose_classes(context.F, context.G), context.x_sampler, n, outer, inner, derive_seed(base, 0)
        ),
        "gc_F": expected_complexity(context.F, context.y_sampler, n, outer, inner, derive_seed(base, 1)),
    }


def _bound_inputs(
    context: _StudyContext, n: int, delta: float, complexities: Dict[str, ComplexityEstimate]
) -> BoundInputs:
    return BoundInputs(
        l=context.constants.l,
        nu=context.constants.nu,
        b=context.constants.b,
        n=n,
        delta=delta,
        **{name: estimate.mean for name, estimate in complexities.items()},
    )


def _std_error_metadata(complexities: Dict[str, ComplexityEstimate]) -> Dict[str, Any]:
    return {f"{name}_std_error": estimate.std_error for name, estimate in complexities.items()}


def _coverage_fraction(flags: Sequence[bool]) -> tuple[float, float]:
    fraction = float(np.mean(flags)) if len(flags) else math.nan
    return fraction, binomial_std_error(fraction, len(flags))


def _sup_deviation(table: np.ndarray, population: np.ndarray) -> tuple[float, int, int]:
    gaps = np.abs(table - population)
    f_index, g_index = np.unravel_index(int(np.argmax(gaps)), gaps.shape)
    return float(gaps[f_index, g_index]), int(g_index), int(f_index)


def run_coverage(config: CoverageConfig, settings: Optional[StudySettings] = None) -> ExperimentReport:
    """Coverage of the uniform high-probability bound by sup_{f,g} |U - gamma^2| over fresh samples.

    Also tracks the biased-estimator extension, and for singleton classes the
    single-kernel and two-sided biased bounds.
    """

    settings = settings or StudySettings()
    started = time.perf_counter()
    context = _build_context(config, settings)
    n, delta = config.n, config.delta
    complexities = _class_complexities(context, n, config, settings, 0)
    inputs = _bound_inputs(context, n, delta, complexities)
    metadata = _std_error_metadata(complexities)
    reports = {
        "expectation": bound_report(FormulaId.THEOREM1_EXPECTATION, inputs, metadata),
        "highprob": bound_report(FormulaId.THEOREM1_HIGHPROB, inputs, metadata),
    }
    if inputs.nu is not None:
        reports["vstatistic"] = bound_report(FormulaId.THEOREM1_VSTATISTIC, inputs, metadata)
    singleton_G = len(context.G) == 1
    if singleton_G and len(context.F) == 1 and inputs.nu is not None:
        reports["gretton"] = scalar_bound_report(FormulaId.GRETTON, nu=inputs.nu, n=n, delta=delta)
    if singleton_G and inputs.nu is not None:
        outer, inner = _replicates(config, settings)
        chaos_base = derive_seed(settings.seed, _COMPLEXITY_STREAM, 0, 2)
        chaos_x = expected_chaos(
            context.kernel,
            context.F,
            MappedSampler(context.x_sampler, context.G[0]),
            n,
            outer,
            inner,
            derive_seed(chaos_base, 0),
        )
        chaos_y = expected_chaos(context.kernel, context.F, context.y_sampler, n, outer, inner, derive_seed(chaos_base, 1))
        reports["cstar"] = scalar_bound_report(
            FormulaId.FUKUMIZU_TWO_SIDED,
            metadata={"chaos_x_std_error": chaos_x.std_error, "chaos_y_std_error": chaos_y.std_error},
            chaos_x=chaos_x.mean,
            chaos_y=chaos_y.mean,
            nu=inputs.nu,
            n=n,
            delta=delta,
        )
    slack = context.slack
    root_slack = math.sqrt(slack)
    population_root = np.sqrt(np.clip(context.population, 0.0, None))

    def trial(index: int) -> TrialRecord:
        sub_seed = derive_seed(settings.seed, _TRIAL_STREAM, index)
        x, y = _draw_trial(context, n, sub_seed)
        u_table = mmd_pair_table(context.kernel, context.F, context.G, x, y, EstimatorKind.U_STATISTIC)
        deviation, g_index, f_index = _sup_deviation(u_table, context.population)
        bound = reports["highprob"].value
        extra: Dict[str, Any] = {}
        if "vstatistic" in reports or "cstar" in reports:
            v_table = mmd_pair_table(context.kernel, context.F, context.G, x, y, EstimatorKind.V_STATISTIC)
            if "vstatistic" in reports:
                v_deviation = float(np.abs(v_table - context.population).max())
                extra["v_covered"] = v_deviation <= reports["vstatistic"].value + slack
            if "cstar" in reports:
                root_deviation = float(np.abs(np.sqrt(v_table) - population_root).max())
                extra["cstar_deviation"] = root_deviation
                extra["cstar_covered"] = root_deviation <= reports["cstar"].value + root_slack
        if "gretton" in reports:
            extra["gretton_covered"] = deviation <= reports["gretton"].value + slack
        return TrialRecord(
            trial=index,
            sub_seed=sub_seed,
            deviation=deviation,
            bound=bound,
            covered=deviation <= bound + slack,
            g_index=g_index,
            f_index=f_index,
            extra=extra,
        )

    trials = _map_trials(trial, range(config.trials), settings.threads)
    deviations = np.array([record.deviation for record in trials])
    coverage, coverage_se = _coverage_fraction([record.covered for record in trials])
    summary: Dict[str, Any] = {
        "n": n,
        "delta": delta,
        "coverage": coverage,
        "coverage_std_error": coverage_se,
        "mean_deviation": float(deviations.mean()),
        "max_deviation": float(deviations.max()),
        "bound": reports["highprob"].value,
        "expectation_bound": reports["expectation"].value,
        "oracle": context.oracle_kind,
        "oracle_max_std_error": context.oracle_max_std_error,
        "constants": context.constants.to_dict(),
        "complexities": {name: estimate.to_dict() for name, estimate in complexities.items()},
        "bounds": {name: report.to_dict() for name, report in reports.items()},
    }
    for key, flag in (("v_coverage", "v_covered"), ("gretton_coverage", "gretton_covered"), ("cstar_coverage", "cstar_covered")):
        flags = [record.extra[flag] for record in trials if flag in record.extra]
        if flags:
            summary[key], summary[f"{key}_std_error"] = _coverage_fraction(flags)
    report = ExperimentReport(
        kind=config.kind,
        name=config.stem,
        seed=settings.seed,
        config=config.model_dump(mode="json"),
        trials=trials,
        summary=summary,
        wall_clock_seconds=time.perf_counter() - started,
    )
    logger.info(
        "Coverage study finished",
        extra={"trials": config.trials, "coverage": coverage, "bound": summary["bound"], "oracle": context.oracle_kind},
    )
    return report


@dataclass(frozen=True)
class SlopeFit:
    slope: Optional[float]
    std_error: Optional[float]
    intercept: Optional[float]
    defined: bool
    method: str = "wls"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "slope": self.slope,
            "slope_std_error": self.std_error,
            "intercept": self.intercept,
            "slope_defined": self.defined,
            "slope_method": self.method,
        }


def fit_log_log_slope(ns: Sequence[float], means: Sequence[float], std_errors: Sequence[float]) -> SlopeFit:
    """Least-squares slope of ln(mean) on ln(n), weighted by the delta-method variance of ln(mean).

    Undefined when any mean is zero. Falls back to ordinary least squares with
    residual-based std-error when some mean has a zero std-error.
    """

    x = np.log(np.asarray(ns, dtype=float))
    mean = np.asarray(means, dtype=float)
    se = np.asarray(std_errors, dtype=float)
    if x.size < 2 or np.any(~np.isfinite(mean)) or np.any(mean <= 0):
        return SlopeFit(slope=None, std_error=None, intercept=None, defined=False)
    y = np.log(mean)
    relative = se / mean
    if np.all(relative > 0):
        weights = 1.0 / relative**2
        method = "wls"
    else:
        weights = np.ones_like(x)
        method = "ols"
    x_bar = float(np.average(x, weights=weights))
    y_bar = float(np.average(y, weights=weights))
    sxx = float(np.sum(weights * (x - x_bar) ** 2))
    slope = float(np.sum(weights * (x - x_bar) * (y - y_bar)) / sxx)
    intercept = y_bar - slope * x_bar
    if method == "wls":
        slope_se = math.sqrt(1.0 / sxx)
    else:
        residuals = y - (intercept + slope * x)
        dof = max(x.size - 2, 1)
        slope_se = math.sqrt(float(np.sum(residuals**2)) / dof / sxx)
    return SlopeFit(slope=slope, std_error=slope_se, intercept=intercept, defined=True, method=method)


def run_decay(config: DecayConfig, settings: Optional[StudySettings] = None) -> ExperimentReport:
    """Mean sup-deviation per sample size and its log-log slope (about -1/2 when the rate holds)."""

    settings = settings or StudySettings()
    started = time.perf_counter()
    context = _build_context(config, settings)
    records: List[TrialRecord] = []
    table: List[Dict[str, Any]] = []
    for position, n in enumerate(config.n_ladder):
        complexities = _class_complexities(context, n, config, settings, 1, position)
        bound = bound_report(FormulaId.THEOREM1_HIGHPROB, _bound_inputs(context, n, config.delta, complexities)).value

        def trial(t: int, n: int = n, bound: float = bound, position: int = position) -> TrialRecord:
            index = position * config.trials + t
            sub_seed = derive_seed(settings.seed, _TRIAL_STREAM, index)
            x, y = _draw_trial(context, n, sub_seed)
            u_table = mmd_pair_table(context.kernel, context.F, context.G, x, y, EstimatorKind.U_STATISTIC)
            deviation, g_index, f_index = _sup_deviation(u_table, context.population)
            return TrialRecord(
                trial=index,
                sub_seed=sub_seed,
                deviation=deviation,
                bound=bound,
                covered=deviation <= bound + context.slack,
                g_index=g_index,
                f_index=f_index,
                extra={"n": n},
            )

        rung = _map_trials(trial, range(config.trials), settings.threads)
        deviations = np.array([record.deviation for record in rung])
        stderr = float(deviations.std(ddof=1) / math.sqrt(deviations.size)) if deviations.size > 1 else 0.0
        table.append({"n": n, "mean_deviation": float(deviations.mean()), "stderr": stderr})
        records.extend(rung)
        logger.debug("Decay rung finished", extra={"n": n, "mean_deviation": table[-1]["mean_deviation"]})

    fit = fit_log_log_slope(
        [row["n"] for row in table], [row["mean_deviation"] for row in table], [row["stderr"] for row in table]
    )
    coverage, coverage_se = _coverage_fraction([record.covered for record in records])
    summary = {
        "delta": config.delta,
        "n_ladder": list(config.n_ladder),
        "coverage": coverage,
        "coverage_std_error": coverage_se,
        "oracle": context.oracle_kind,
        "oracle_max_std_error": context.oracle_max_std_error,
        **fit.to_dict(),
    }
    if not fit.defined:
        logger.warning("Decay slope undefined: a mean deviation is zero", extra={"ladder": list(config.n_ladder)})
    report = ExperimentReport(
        kind=config.kind,
        name=config.stem,
        seed=settings.seed,
        config=config.model_dump(mode="json"),
        trials=records,
        summary=summary,
        decay_table=table,
        wall_clock_seconds=time.perf_counter() - started,
    )
    logger.info("Decay study finished", extra={"slope": fit.slope, "slope_std_error": fit.std_error})
    return report


def _fit(
    which: str,
    kernel: KernelSpec,
    F: FiniteFunctionClass,
    G: FiniteFunctionClass,
    x: np.ndarray,
    y: np.ndarray,
    orientation: Orientation,
) -> FitResult:
    if which == "corollary1":
        return min_mmd_fit(kernel, G, x, y)
    return minimax_mmd_fit(kernel, F, G, x, y, orientation)


def run_excess_risk_experiment(
    config: ExcessRiskConfig,
    which: Optional[str] = None,
    settings: Optional[StudySettings] = None,
) -> ExperimentReport:
    """Excess population risk of the fitted estimator against its corollary bound.

    corollary1 fits the minimum-MMD estimator with kernel k o f for the single
    feature f; corollary2 fits the minimax estimator over F x G.
    """

    settings = settings or StudySettings()
    which = which or config.which
    if which not in {"corollary1", "corollary2"}:
        raise ArgumentError(f"which must be corollary1 or corollary2, got {which!r}")
    started = time.perf_counter()
    kernel = config.kernel.build()
    F, G = config.classes.build()
    orientation = Orientation(config.orientation)
    if which == "corollary1":
        if len(F) != 1:
            raise ConfigurationError(f"corollary1 fits a single kernel; F has {len(F)} members")
        if not _is_identity(F):
            kernel = compose(kernel, F[0])
        F = identity_class(G.output_dim)
        orientation = Orientation.MIN_G
    elif orientation is Orientation.MIN_G:
        raise ConfigurationError("corollary2 uses min_f_max_g or min_g_max_f")
    context = _build_context(config, settings, kernel=kernel, F=F, G=G)
    n, delta = config.n, config.delta
    outer, inner = _replicates(config, settings)
    base = derive_seed(settings.seed, _COMPLEXITY_STREAM, 2)
    if which == "corollary1":
        complexities = {
            "gc_G": expected_complexity(G, context.x_sampler, n, outer, inner, derive_seed(base, 0)),
        }
    else:
        complexities = _class_complexities(context, n, config, settings, 2)
    formula = FormulaId.COROLLARY1 if which == "corollary1" else FormulaId.COROLLARY2
    bound = bound_report(
        formula, _bound_inputs(context, n, delta, complexities), _std_error_metadata(complexities)
    )
    slack = context.slack

    def trial(index: int) -> TrialRecord:
        sub_seed = derive_seed(settings.seed, _TRIAL_STREAM, index)
        x, y = _draw_trial(context, n, sub_seed)
        fit = _fit(which, context.kernel, context.F, context.G, x, y, orientation)
        excess = excess_risk_from_table(context.population, fit)
        deviation = float(np.abs(fit.per_member_values - context.population).max())
        return TrialRecord(
            trial=index,
            sub_seed=sub_seed,
            deviation=deviation,
            bound=bound.value,
            covered=excess <= bound.value + slack,
            excess_risk=excess,
            g_index=fit.g_index,
            f_index=fit.f_index,
            extra={"decomposition_holds": excess <= 2.0 * deviation + slack},
        )

    trials = _map_trials(trial, range(config.trials), settings.threads)
    excess = np.array([record.excess_risk for record in trials], dtype=float)
    coverage, coverage_se = _coverage_fraction([record.covered for record in trials])
    decomposition, _ = _coverage_fraction([record.extra["decomposition_holds"] for record in trials])
    summary = {
        "which": which,
        "n": n,
        "delta": delta,
        "orientation": orientation.value,
        "coverage": coverage,
        "coverage_std_error": coverage_se,
        "mean_excess_risk": float(excess.mean()),
        "median_excess_risk": float(np.median(excess)),
        "max_excess_risk": float(excess.max()),
        "mean_deviation": float(np.mean([record.deviation for record in trials])),
        "decomposition_fraction": decomposition,
        "bound": bound.value,
        "oracle": context.oracle_kind,
        "oracle_max_std_error": context.oracle_max_std_error,
        "constants": context.constants.to_dict(),
        "complexities": {name: estimate.to_dict() for name, estimate in complexities.items()},
        "bounds": {which: bound.to_dict()},
    }
    report = ExperimentReport(
        kind=config.kind,
        name=config.stem,
        seed=settings.seed,
        config=config.model_dump(mode="json"),
        trials=trials,
        summary=summary,
        wall_clock_seconds=time.perf_counter() - started,
    )
    logger.info(
        "Excess-risk study finished",
        extra={"which": which, "coverage": coverage, "median_excess_risk": summary["median_excess_risk"]},
    )
    return report


def run_kernel_audit(config: KernelAuditConfig, settings: Optional[StudySettings] = None) -> ExperimentReport:
    """Observed maxima of the kernel's boundedness and Lipschitz ratios against its certified constants.

    The per-trial table is empty, so ``trial_count`` is 0; every probe result lives in
    the summary, and ``probe_trials`` records the draws each probe made.
    """

    settings = settings or StudySettings()
    started = time.perf_counter()
    kernel = config.kernel.build()
    domain = config.domain.build()
    constants = certified_constants(kernel, dim=domain.dim, support_diameter=config.support_diameter)
    trials = config.trials

    def seed(probe: int) -> int:
        return derive_seed(settings.seed, _AUDIT_STREAM, probe)

    observed = {
        "boundedness": boundedness_probe(kernel, domain, trials, seed(0)),
        "lipschitz": lipschitz_probe(kernel, domain, trials, seed(1)),
        "argument_lipschitz": argument_lipschitz_probe(kernel, domain, trials, seed(2)),
        "seminorm": seminorm_probe(kernel, domain, trials, seed(3)),
    }
    certified = {
        "boundedness": constants.nu,
        "lipschitz": constants.l,
        "argument_lipschitz": constants.l / 2.0,
        "seminorm": math.sqrt(2.0) * constants.l,
    }
    passed = {
        "boundedness": constants.nu is None or observed["boundedness"] <= constants.nu + 1e-12,
        "lipschitz": observed["lipschitz"] <= certified["lipschitz"] * (1.0 + AUDIT_TOLERANCE),
        "argument_lipschitz": observed["argument_lipschitz"] <= certified["argument_lipschitz"] * (1.0 + AUDIT_TOLERANCE),
        "seminorm": observed["seminorm"] <= certified["seminorm"] * (1.0 + AUDIT_TOLERANCE),
    }
    summary: Dict[str, Any] = {
        "probe_trials": trials,
        "dim": domain.dim,
        "constants": constants.to_dict(),
        "observed": observed,
        "certified": certified,
        "passed": passed,
    }
    if domain.dim == 1 and kernel.input_dim in (None, 1):
        peak = profile_gradient_probe(kernel)
        profile: Dict[str, Any] = {"location": peak.location, "value": peak.value, "certified": certified["argument_lipschitz"]}
        passed["profile_gradient"] = peak.value <= certified["argument_lipschitz"] * (1.0 + 1e-6)
        if isinstance(kernel, GaussianKernel):
            profile["expected_location"] = kernel.bandwidth / math.sqrt(2.0)
            profile["expected_value"] = math.sqrt(2.0) * math.exp(-0.5) / kernel.bandwidth
        summary["profile_gradient"] = profile
    summary["all_passed"] = all(passed.values())
    report = ExperimentReport(
        kind=config.kind,
        name=config.stem,
        seed=settings.seed,
        config=config.model_dump(mode="json"),
        trials=[],
        summary=summary,
        wall_clock_seconds=time.perf_counter() - started,
    )
    log = logger.info if summary["all_passed"] else logger.warning
    log("Kernel audit finished", extra={"passed": passed, "observed": observed})
    return report


_RUNNERS: Dict[str, Callable[..., ExperimentReport]] = {
    "coverage": run_coverage,
    "decay": run_decay,
    "kernel_audit": run_kernel_audit,
}


def run_experiment(config: Any, settings: Optional[StudySettings] = None) -> ExperimentReport:
    """Dispatch on ``config.kind``."""

    if config.kind == "excess_risk":
        return run_excess_risk_experiment(config, settings=settings)
    try:
        runner = _RUNNERS[config.kind]
    except KeyError as exc:
        raise ConfigurationError(f"unknown experiment kind {config.kind!r}") from exc
    return runner(config, settings)


__all__ = [
    "StudySettings",
    "SlopeFit",
    "fit_log_log_slope",
    "run_coverage",
    "run_decay",
    "run_excess_risk_experiment",
    "run_kernel_audit",
    "run_experiment",
]
