"""End-to-end FTFP pipeline, property suite and benchmark rows.

solve -> complete -> reduce -> partition -> round -> recombine -> validate

Rounders run on the residual instance; the integral part of the demand
reduction is added back by recombine, so reported costs refer to the
original instance.

Classes
-------
RunConfig
PipelineResult
SolvedStages

Functions
---------
run_pipeline(instance, cfg)
    run every stage once and estimate the rounder
property_report(instance, gamma)
    run every property suite on an instance
cmd_pipeline(cfg)
    load, run, validate and write artifacts; return an exit code
bench_rows(instances, algos, cfg)
    one summary row per (instance, algo)
write_csv(table, path, digits)
write_table(table, out_dir, stem, fmt, digits)
"""

# Standard imports
from dataclasses import dataclass, replace
from fractions import Fraction
import json
from pathlib import Path
from typing import Annotated, Literal, Optional

# Local imports
from ftfp.errors import FeasibilityError, InputError, Violation
from ftfp.instance.Instance import validate
from ftfp.instance.InstanceFile import instance_to_dict, load
from ftfp.lp.Complete import extend_dual, make_complete
from ftfp.lp.LPSolve import DualSolution, check_complementary_slackness, solution_to_dict, solve_lp
from ftfp.partition.AdaptivePartition import partition
from ftfp.partition.CloseFarPartition import partition_close_far
from ftfp.partition.CloseFarVerify import verify_properties_cf
from ftfp.partition.PartitionVerify import verify_properties
from ftfp.rational import format_rational, parse_rational
from ftfp.reduction.DemandReduction import recombine, reduce, verify_reduction
from ftfp.rounding.Estimate import best_of, estimate
from ftfp.rounding.IntegralSolution import validate_integral
from ftfp.rounding.Rounding import ROUNDERS

# Third-party imports
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, PlainValidator, PositiveInt, model_validator

DEFAULT_GAMMA = Fraction(63, 40)
CSV_DIGITS = 15
SUMMARY_COLUMNS = ["instance", "algo", "gamma", "trials", "LP*", "mean_cost", "se", "empirical_ratio",
                   "fraction_indirect"]
ESTIMATE_COLUMNS = ["algo", "seed", "trials", "mean_cost", "se", "ratio_vs_LP*"]

Rational = Annotated[Fraction, PlainValidator(parse_rational)]


class RunConfig(BaseModel):
    """Settings of one pipeline run."""

    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True)

    algo: Literal["egup", "echs", "ebgs"] = "ebgs"
    gamma: Rational = DEFAULT_GAMMA
    trials: PositiveInt = 1000
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    best_of: PositiveInt = 1
    instance: Optional[Path] = None
    out: Optional[Path] = None
    format: Literal["json", "csv"] = "csv"
    strict: bool = False

    @model_validator(mode="after")
    def check_gamma(self):
        if self.algo == "ebgs" and not 1 < self.gamma < 2:
            raise ValueError(f"gamma must lie strictly between 1 and 2 for ebgs, got {self.gamma}")
        return self


@dataclass
class PipelineResult:
    """Every intermediate artifact of a pipeline run.

    Attributes
    ----------
    instance: FtfpInstance
        input instance
    primal, dual, breakdown:
        LP solution pair and its cost decomposition
    completed: FtfpInstance
        instance after site splitting
    complete_primal: FractionalSolution
        complete optimal solution of `completed`
    complete_dual: DualSolution
        dual extended to the split sites
    reduction: ReductionResult
        integral part and residual
    residual_dual: DualSolution
        dual restricted to the residual clients
    partition: PartitionedSolution or CloseFarPartition
        partition of the residual
    rounder: Rounder
        rounder over `partition`
    residual_solution: IntegralSolution
        best of the seeded residual runs
    best_trial: int
        trial index of `residual_solution`
    solution: IntegralSolution
        recombined solution of `instance`
    estimate: EstimateResult
        Monte-Carlo statistics of the full cost
    """

    instance: object
    primal: object
    dual: object
    breakdown: object
    completed: object
    complete_primal: object
    complete_dual: object
    reduction: object
    residual_dual: object
    partition: object
    rounder: object
    residual_solution: object
    best_trial: int
    solution: object
    estimate: object

    @property
    def lp_value(self):
        return self.breakdown.lp_value

    @property
    def empirical_ratio(self):
        if self.lp_value == 0:
            return 1.0
        return self.estimate.mean_cost / float(self.lp_value)


@dataclass
class SolvedStages:
    """Stages up to demand reduction, shared by partitioning and rounding.

    Attributes
    ----------
    primal, dual, breakdown:
        LP solution pair and its cost decomposition
    completed: FtfpInstance
        instance after site splitting
    complete_primal: FractionalSolution
        complete optimal solution of `completed`
    complete_dual: DualSolution
        dual extended to the split sites
    reduction: ReductionResult
        integral part and residual
    residual_dual: DualSolution
        dual restricted to the residual clients
    """

    primal: object
    dual: object
    breakdown: object
    completed: object
    complete_primal: object
    complete_dual: object
    reduction: object
    residual_dual: object


def restrict_dual(dual, clients):
    """Return the dual columns of the given clients."""

    return DualSolution([dual.alpha[j] for j in clients], [[row[j] for j in clients] for row in dual.beta])


def solve_stages(instance):
    """Solve, complete and reduce; return the SolvedStages the partitioners need."""

    primal, dual, breakdown = solve_lp(instance)
    completed, complete_primal = make_complete(instance, primal)
    complete_dual = extend_dual(dual, completed)
    reduction = reduce(completed, complete_primal)
    residual_dual = restrict_dual(complete_dual, reduction.residual_clients)
    return SolvedStages(primal, dual, breakdown, completed, complete_primal, complete_dual, reduction, residual_dual)


def build_partition(reduction, residual_dual, algo, gamma=DEFAULT_GAMMA):
    residual, fractional = reduction.residual_instance, reduction.residual_fractional
    if algo == "ebgs":
        return partition_close_far(residual, fractional, gamma, residual_dual)
    return partition(residual, fractional, residual_dual)


def build_rounder(algo, ps):
    if algo not in ROUNDERS:
        raise InputError(f"unknown algorithm {algo!r}")
    return ROUNDERS[algo](ps)


def run_pipeline(instance, cfg):
    """Run every stage on an instance.

    Parameters
    ----------
    instance: FtfpInstance
        valid instance
    cfg: RunConfig
        algorithm, gamma, trials, seed and best-of count

    Returns
    -------
    PipelineResult
    """

    report = validate(instance)
    if report:
        raise InputError(f"invalid instance: {report[0]}")
    stages = solve_stages(instance)
    ps = build_partition(stages.reduction, stages.residual_dual, cfg.algo, cfg.gamma)
    rounder = build_rounder(cfg.algo, ps)

    residual_solution, trial = best_of(rounder, cfg.best_of, cfg.seed)
    solution = recombine(stages.reduction, residual_solution)
    integral = stages.reduction.integral_part
    stats = estimate(rounder, cfg.trials, cfg.seed)
    stats = replace(stats, mean_cost=stats.mean_cost + float(integral.total_cost),
                    mean_F=stats.mean_F + float(integral.facility_cost),
                    mean_C=stats.mean_C + float(integral.connection_cost))
    return PipelineResult(instance, stages.primal, stages.dual, stages.breakdown, stages.completed,
                          stages.complete_primal, stages.complete_dual, stages.reduction, stages.residual_dual,
                          ps, rounder, residual_solution, trial, solution, stats)


def pipeline_report(result):
    """Property report of a finished run, including the cost identity."""

    report = check_complementary_slackness(result.completed, result.complete_primal, result.complete_dual)
    report.extend(verify_reduction(result.reduction, result.complete_primal))
    residual = result.reduction.residual_fractional
    if result.rounder.name == "ebgs":
        report.extend(verify_properties_cf(result.partition, residual))
    else:
        report.extend(verify_properties(result.partition, residual, result.residual_dual))
    report.extend(validate_integral(result.instance, result.solution))
    expected = result.reduction.integral_part.total_cost + result.residual_solution.total_cost
    if result.solution.total_cost != expected:
        report.append(Violation("cost_identity", f"total {result.solution.total_cost} != integral part plus "
                                                 f"residual {expected}"))
    return report


def property_report(instance, gamma=DEFAULT_GAMMA):
    """Run every property suite on an instance without rounding.

    Covers the metric, complementary slackness, the reduction identities
    and both partitions of the residual solution.
    """

    report = validate(instance)
    if report:
        return report
    stages = solve_stages(instance)
    report = check_complementary_slackness(stages.completed, stages.complete_primal, stages.complete_dual)
    report.extend(verify_reduction(stages.reduction, stages.complete_primal))
    residual = stages.reduction.residual_fractional
    ps = build_partition(stages.reduction, stages.residual_dual, "echs")
    report.extend(verify_properties(ps, residual, stages.residual_dual))
    cfp = build_partition(stages.reduction, stages.residual_dual, "ebgs", gamma)
    report.extend(verify_properties_cf(cfp, residual))
    return report


def summary_row(name, result, cfg):
    return {
        "instance": name,
        "algo": cfg.algo,
        "gamma": float(cfg.gamma) if cfg.algo == "ebgs" else None,
        "trials": cfg.trials,
        "LP*": float(result.lp_value),
        "mean_cost": result.estimate.mean_cost,
        "se": result.estimate.se,
        "empirical_ratio": result.empirical_ratio,
        "fraction_indirect": result.estimate.fraction_indirect
    }


def estimate_row(result):
    return {
        "algo": result.estimate.algo,
        "seed": result.estimate.seed,
        "trials": result.estimate.trials,
        "mean_cost": result.estimate.mean_cost,
        "se": result.estimate.se,
        "ratio_vs_LP*": result.empirical_ratio
    }


def write_csv(table, path, digits=CSV_DIGITS):
    table.to_csv(path, index=False, float_format=f"%.{digits}g")


def write_json(data, path):
    Path(path).write_text(json.dumps(data, indent=2) + "\n")


def write_table(table, out_dir, stem, fmt="csv", digits=CSV_DIGITS):
    """Write a table as <stem>.csv or <stem>.json records; return the path."""

    path = Path(out_dir) / f"{stem}.{fmt}"
    if fmt == "json":
        table.to_json(path, orient="records", indent=2, double_precision=min(digits, 15))
    else:
        write_csv(table, path, digits)
    return path


def write_artifacts(result, cfg, out_dir, name="instance"):
    """Write one JSON file per stage, the estimator row and the summary row."""

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_json(solution_to_dict(result.primal, result.dual, result.breakdown), out_dir / "lp.json")
    completed = instance_to_dict(result.completed)
    completed["x"] = [[format_rational(v) for v in row] for row in result.complete_primal.x]
    completed["y"] = [format_rational(v) for v in result.complete_primal.y]
    write_json(completed, out_dir / "complete.json")
    write_json(result.reduction.to_dict(), out_dir / "reduction.json")
    write_json(result.partition.to_dict(), out_dir / "partition.json")
    solution = result.solution.to_dict()
    solution["best_trial"] = result.best_trial
    write_json(solution, out_dir / "solution.json")
    write_json(result.estimate.to_dict(), out_dir / "estimate.json")
    write_table(pd.DataFrame([estimate_row(result)], columns=ESTIMATE_COLUMNS), out_dir, "estimator", cfg.format)
    write_table(pd.DataFrame([summary_row(name, result, cfg)], columns=SUMMARY_COLUMNS), out_dir, "summary",
                cfg.format)


def cmd_pipeline(cfg):
    """Run the pipeline on cfg.instance and write artifacts to cfg.out.

    Returns
    -------
    tuple
        (exit code, PipelineResult or None, report): 0 on success, 1 on
        a validation failure, 2 on an input error
    """

    if cfg.instance is None:
        raise InputError("no instance given")
    instance = load(cfg.instance, check_metric=False)
    report = validate(instance)
    if report:
        return 1, None, report
    try:
        result = run_pipeline(instance, cfg)
    except FeasibilityError as error:
        return 1, None, [Violation("feasibility", str(error))]
    report = pipeline_report(result)
    if cfg.out is not None:
        write_artifacts(result, cfg, cfg.out, Path(cfg.instance).stem)
    if report and cfg.strict:
        return 1, result, report
    return 0, result, report


def bench_rows(instances, algos, cfg):
    """Run the pipeline for every (instance, algo) pair.

    Parameters
    ----------
    instances: list
        (name, FtfpInstance) pairs
    algos: list
        algorithm names
    cfg: RunConfig
        shared settings; algo is replaced per row

    Returns
    -------
    tuple
        (pandas.DataFrame of summary rows, report of every failed check)
    """

    rows, report = [], []
    for name, instance in instances:
        for algo in algos:
            run_cfg = cfg.model_copy(update={"algo": algo})
            result = run_pipeline(instance, run_cfg)
            report.extend(pipeline_report(result))
            rows.append(summary_row(name, result, run_cfg))
    return pd.DataFrame(rows, columns=SUMMARY_COLUMNS), report
