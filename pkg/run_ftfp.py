"""Command-line driver for the fault-tolerant facility placement pipeline.

Every pipeline stage has its own subcommand so each intermediate artifact
can be produced and inspected on its own: gen, validate, solve, complete,
reduce, partition, round, oracle, bench, gamma-scan and verify.

Classes
-------
Ftfp

Functions
---------
main()
    parse arguments, run one subcommand and return its exit code
"""

# Standard imports
import argparse
import datetime
import json
from pathlib import Path
import sys
import traceback

# Local imports
from ftfp.bench.GammaScan import cmd_gamma_scan
from ftfp.bench.Pipeline import (RunConfig, bench_rows, build_partition, cmd_pipeline, property_report,
                                 run_pipeline, solve_stages, write_json, write_table)
from ftfp.errors import InputError
from ftfp.instance.Instance import validate
from ftfp.instance.InstanceFile import instance_to_dict, load, save
from ftfp.instance.InstanceGenerate import generate_euclidean
from ftfp.lp.Complete import make_complete
from ftfp.lp.LPSolve import check_complementary_slackness, solution_to_dict, solve_lp
from ftfp.oracle.BruteForce import OracleConfig, brute_force_opt
from ftfp.oracle.Expectation import enumerate_rounding_expectation
from ftfp.partition.CloseFarVerify import verify_properties_cf
from ftfp.partition.PartitionVerify import verify_properties
from ftfp.rational import format_rational, parse_rational
from ftfp.rounding.Rounding import ROUNDERS

# Third-party imports
from pydantic import ValidationError

# Constants
EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INPUT = 2


class Ftfp:
    """Coordinates the pipeline stages requested on the command line.

    Attributes
    ----------
    args: argparse.Namespace
        parsed command line arguments
    metadata: dict
        defaults loaded from the metadata JSON file
    oracle_cfg: OracleConfig
        enumeration bounds of the exact oracles

    Methods
    -------
    run()
        dispatch to the execute method of the chosen subcommand
    """

    def __init__(self, args, metadata):
        """
        Parameters
        ----------
        args: argparse.Namespace
            parsed command line arguments
        metadata: dict
            defaults loaded from the metadata JSON file
        """

        self.args = args
        self.metadata = metadata
        self.oracle_cfg = OracleConfig(**metadata.get("oracle", {}))

    def run_config(self, algo=None):
        """Merge command line values over metadata defaults into a RunConfig."""

        args, defaults = self.args, self.metadata
        algo = algo or args.algo or defaults.get("algo", "ebgs")
        if algo == "all":
            algo = defaults.get("algo", "ebgs")
        return RunConfig(
            algo=algo,
            gamma=args.gamma if args.gamma is not None else defaults.get("gamma", "63/40"),
            trials=args.trials if args.trials is not None else defaults.get("trials", 1000),
            seed=args.seed if args.seed is not None else defaults.get("seed", 0),
            best_of=args.bestof if args.bestof is not None else defaults.get("best_of", 1),
            instance=args.instance,
            out=args.out,
            format=args.format,
            strict=args.strict
        )

    def algos(self):
        if self.args.algo == "all":
            return list(ROUNDERS)
        return [self.run_config().algo]

    def load_instance(self, check_metric=True):
        if self.args.instance is None:
            raise InputError("--instance is required for this subcommand")
        print(f"Loading instance: {self.args.instance}.")
        return load(self.args.instance, check_metric)

    def suite(self):
        """Return (name, instance) pairs from --instance or a generated --suite."""

        if self.args.instance is not None:
            return [(Path(self.args.instance).stem, self.load_instance())]
        generator = self.metadata.get("generator", {})
        count = self.args.suite or 1
        seed = self.args.seed if self.args.seed is not None else self.metadata.get("seed", 0)
        print(f"Generating {count} instances.")
        return [(f"generated_{k:04d}", self.generate(seed + k, generator)) for k in range(count)]

    def generate(self, seed, generator):
        args = self.args
        return generate_euclidean(args.sites or generator.get("sites", 6),
                                  args.clients or generator.get("clients", 5),
                                  args.rmax or generator.get("rmax", 4),
                                  seed,
                                  grid=generator.get("grid", 100),
                                  cost_range=(generator.get("cost_low", 1), generator.get("cost_high", 100)))

    def emit(self, data, name):
        """Write a JSON artifact under --out or print it."""

        if self.args.out is None:
            print(json.dumps(data, indent=2))
            return
        self.args.out.mkdir(parents=True, exist_ok=True)
        path = self.args.out / f"{name}.json"
        write_json(data, path)
        print(f"Wrote {path}.")

    def finish(self, report):
        """Print a report; return the exit code it implies."""

        for violation in report:
            print(violation)
        if report and self.args.strict:
            return EXIT_INVALID
        return EXIT_OK

    def execute_gen(self):
        generator = self.metadata.get("generator", {})
        seed = self.args.seed if self.args.seed is not None else self.metadata.get("seed", 0)
        count = self.args.suite or 1
        for k in range(count):
            instance = self.generate(seed + k, generator)
            if self.args.out is None:
                print(json.dumps(instance_to_dict(instance), indent=2))
                continue
            self.args.out.mkdir(parents=True, exist_ok=True)
            path = self.args.out / (f"instance_{k:04d}.json" if count > 1 else "instance.json")
            save(instance, path)
            print(f"Wrote {path}.")
        return EXIT_OK

    def execute_validate(self):
        report = validate(self.load_instance(check_metric=False))
        for violation in report:
            print(violation)
        print("Instance is valid." if not report else f"Instance has {len(report)} violations.")
        return EXIT_INVALID if report else EXIT_OK

    def execute_solve(self):
        instance = self.load_instance()
        print("Solving LP relaxation.")
        primal, dual, breakdown = solve_lp(instance)
        print(f"LP* = {format_rational(breakdown.lp_value)}")
        self.emit(solution_to_dict(primal, dual, breakdown), "lp")
        return self.finish(check_complementary_slackness(instance, primal, dual))

    def execute_complete(self):
        instance = self.load_instance()
        print("Solving LP relaxation.")
        primal, _, _ = solve_lp(instance)
        print("Splitting sites to complete the solution.")
        completed, solution = make_complete(instance, primal)
        print(f"Completed instance has {completed.num_sites} sites.")
        data = instance_to_dict(completed)
        data["x"] = [[format_rational(v) for v in row] for row in solution.x]
        data["y"] = [format_rational(v) for v in solution.y]
        self.emit(data, "complete")
        return EXIT_OK

    def execute_reduce(self):
        instance = self.load_instance()
        print("Solving, completing and reducing demands.")
        reduction = solve_stages(instance).reduction
        print(f"Residual demands: {reduction.residual_demands}")
        self.emit(reduction.to_dict(), "reduction")
        return EXIT_OK

    def execute_partition(self):
        instance = self.load_instance()
        cfg = self.run_config()
        print("Solving, completing and reducing demands.")
        stages = solve_stages(instance)
        reduction, residual_dual = stages.reduction, stages.residual_dual
        print(f"Partitioning residual solution for {cfg.algo}.")
        ps = build_partition(reduction, residual_dual, cfg.algo, cfg.gamma)
        self.emit(ps.to_dict(), "partition")
        residual = reduction.residual_fractional
        if cfg.algo == "ebgs":
            return self.finish(verify_properties_cf(ps, residual))
        return self.finish(verify_properties(ps, residual, residual_dual))

    def execute_round(self):
        instance = self.load_instance()
        cfg = self.run_config()
        print(f"Rounding with {cfg.algo}, best of {cfg.best_of} from seed {cfg.seed}.")
        result = run_pipeline(instance, cfg)
        print(f"Cost = {format_rational(result.solution.total_cost)}, LP* = {format_rational(result.lp_value)}")
        self.emit(result.solution.to_dict(), "solution")
        return EXIT_OK

    def execute_oracle(self):
        instance = self.load_instance()
        print("Enumerating integral solutions.")
        opt = brute_force_opt(instance, self.oracle_cfg)
        stages = solve_stages(instance)
        breakdown, reduction, residual_dual = stages.breakdown, stages.reduction, stages.residual_dual
        data = {"OPT": format_rational(opt.total_cost), "LP_star": format_rational(breakdown.lp_value),
                "solution": opt.to_dict()}
        print(f"OPT = {data['OPT']}, LP* = {data['LP_star']}")
        if self.args.algo is not None:
            integral = reduction.integral_part.total_cost
            for algo in self.algos():
                cfg = self.run_config(algo)
                rounder = ROUNDERS[algo](build_partition(reduction, residual_dual, algo, cfg.gamma))
                expectation = enumerate_rounding_expectation(rounder, self.oracle_cfg)
                expected = format_rational(integral + expectation.expected_cost)
                print(f"E[{algo}] = {expected} over {expectation.outcomes} outcomes")
                data[f"expected_{algo}"] = expected
        self.emit(data, "oracle")
        return EXIT_OK

    def execute_bench(self):
        if self.args.instance is not None and self.args.algo != "all":
            print("Running pipeline.")
            code, result, report = cmd_pipeline(self.run_config())
            if result is not None:
                print(f"mean cost = {result.estimate.mean_cost:.6f} (se {result.estimate.se:.6f}), "
                      f"ratio = {result.empirical_ratio:.6f}")
            for violation in report:
                print(violation)
            return code

        cfg = self.run_config()
        table, report = bench_rows(self.suite(), self.algos(), cfg)
        if self.args.out is None:
            print(table.to_string(index=False))
        else:
            self.args.out.mkdir(parents=True, exist_ok=True)
            path = write_table(table, self.args.out, "bench", cfg.format, self.metadata.get("csv_digits", 15))
            print(f"Wrote {path}.")
        return self.finish(report)

    def execute_gamma_scan(self):
        scan = self.metadata.get("scan", {})
        lo = self.args.lo if self.args.lo is not None else float(scan.get("lo", 1.4))
        hi = self.args.hi if self.args.hi is not None else float(scan.get("hi", 1.7))
        step = self.args.step if self.args.step is not None else float(scan.get("step", 0.001))
        out = None
        if self.args.out is not None:
            self.args.out.mkdir(parents=True, exist_ok=True)
            out = self.args.out / "gamma_scan.csv"
        table, gamma, bound = cmd_gamma_scan(lo, hi, step, out, self.metadata.get("csv_digits", 15))
        if out is None:
            print(table.to_string(index=False))
        print(f"argmin gamma = {gamma:.3f}, bound = {bound:.6f}")
        return EXIT_OK

    def execute_verify(self):
        gamma = self.run_config("ebgs").gamma
        count = 0
        for name, instance in self.suite():
            report = property_report(instance, gamma)
            count += len(report)
            for violation in report:
                print(f"{name}: {violation}")
        print(f"{count} violations found.")
        return EXIT_INVALID if count else EXIT_OK

    def run(self):
        return getattr(self, f"execute_{self.args.command.replace('-', '_')}")()


def create_args():
    """Create and return argparser with arguments."""

    arg_parser = argparse.ArgumentParser(description="Fault-tolerant facility placement by LP rounding.")
    arg_parser.add_argument("command",
                            type=str,
                            choices=["gen", "validate", "solve", "complete", "reduce", "partition", "round",
                                     "oracle", "bench", "gamma-scan", "verify"],
                            help="Pipeline stage to run")
    arg_parser.add_argument("--instance",
                            type=Path,
                            help="Path to instance JSON file")
    arg_parser.add_argument("--algo",
                            type=str,
                            choices=["egup", "echs", "ebgs", "all"],
                            help="Rounding algorithm")
    arg_parser.add_argument("--gamma",
                            type=parse_rational,
                            help="EBGS scaling parameter as 'p/q', strictly between 1 and 2")
    arg_parser.add_argument("--trials",
                            type=int,
                            help="Number of Monte-Carlo trials")
    arg_parser.add_argument("--seed",
                            type=int,
                            help="Base seed in [0, 2^64)")
    arg_parser.add_argument("--bestof",
                            type=int,
                            help="Number of seeded runs the reported solution is the cheapest of")
    arg_parser.add_argument("--out",
                            type=Path,
                            help="Directory for output artifacts")
    arg_parser.add_argument("--format",
                            type=str,
                            choices=["json", "csv"],
                            default="csv",
                            help="Format of bench tables")
    arg_parser.add_argument("--strict",
                            action="store_true",
                            help="Exit with 1 when any property check fails")
    arg_parser.add_argument("--suite",
                            type=int,
                            help="Number of generated instances for gen, bench and verify")
    arg_parser.add_argument("--sites",
                            type=int,
                            help="Number of sites of generated instances")
    arg_parser.add_argument("--clients",
                            type=int,
                            help="Number of clients of generated instances")
    arg_parser.add_argument("--rmax",
                            type=int,
                            help="Largest demand of generated instances")
    arg_parser.add_argument("--lo",
                            type=float,
                            help="Lower end of the gamma scan")
    arg_parser.add_argument("--hi",
                            type=float,
                            help="Upper end of the gamma scan")
    arg_parser.add_argument("--step",
                            type=float,
                            help="Step of the gamma scan")
    arg_parser.add_argument("-m",
                            "--metadatajson",
                            type=Path,
                            default=Path(__file__).parent / "metadata" / "ftfp.json",
                            help="Path to JSON file that contains default settings")
    return arg_parser


def main(argv=None):
    """Main method to run one pipeline stage; returns the exit code."""

    # Store command line arguments
    arg_parser = create_args()
    args = arg_parser.parse_args(argv)
    for arg in vars(args):
        print(f"{arg}: {getattr(args, arg)}")

    try:
        with open(args.metadatajson) as jf:
            metadata = json.load(jf)
        return Ftfp(args, metadata).run()
    except (InputError, ValidationError, OSError, json.JSONDecodeError) as error:
        print(f"Input error: {error}")
        return EXIT_INPUT
    except Exception:
        traceback.print_exception(*sys.exc_info())
        return EXIT_INVALID


if __name__ == "__main__":
    start = datetime.datetime.now()
    code = main()
    end = datetime.datetime.now()
    print(f"Execution time: {end - start}")
    sys.exit(code)
