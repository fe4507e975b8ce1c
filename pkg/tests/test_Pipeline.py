# Standard imports
import contextlib
from fractions import Fraction
import io
import json
from pathlib import Path
import tempfile
import unittest

# Local imports
from ftfp.bench.Pipeline import (ESTIMATE_COLUMNS, SUMMARY_COLUMNS, RunConfig, bench_rows, cmd_pipeline,
                                 pipeline_report, property_report, run_pipeline, solve_stages)
from ftfp.instance.Instance import FtfpInstance
from ftfp.instance.InstanceFile import load, save
from ftfp.instance.InstanceGenerate import generate_euclidean
from ftfp.oracle.Expectation import enumerate_rounding_expectation
from ftfp.rounding.IntegralSolution import validate_integral
from run_ftfp import main

# Third-party imports
import pandas as pd
from pydantic import ValidationError

ARTIFACTS = ["lp.json", "complete.json", "reduction.json", "partition.json", "solution.json", "estimate.json",
             "estimator.csv", "summary.csv"]


def quiet_main(argv):
    """Run the command line quietly and return (exit code, output)."""

    out = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(io.StringIO()):
        code = main(argv)
    return code, out.getvalue()


class test_Pipeline(unittest.TestCase):
    """Test the end-to-end pipeline, benchmark rows and command line."""

    EX1_FILE = Path(__file__).parent / "instances" / "ex1.json"
    EX4_FILE = Path(__file__).parent / "instances" / "ex4.json"

    def test_run_pipeline_ex1(self):
        """Test EX1 costs 7 for every algorithm with an empty residual."""

        instance = load(self.EX1_FILE)
        for algo in ("egup", "echs", "ebgs"):
            result = run_pipeline(instance, RunConfig(algo=algo, trials=20))
            self.assertEqual(Fraction(7), result.solution.total_cost)
            self.assertEqual(7.0, result.estimate.mean_cost)
            self.assertEqual(1.0, result.empirical_ratio)
            self.assertEqual([], pipeline_report(result))

    def test_run_pipeline_ex4(self):
        """Test EX4 runs are feasible, no better than OPT and seed deterministic."""

        instance = load(self.EX4_FILE)
        for algo in ("egup", "echs", "ebgs"):
            cfg = RunConfig(algo=algo, trials=200, seed=11, best_of=4)
            result = run_pipeline(instance, cfg)
            self.assertEqual([], validate_integral(instance, result.solution))
            self.assertGreaterEqual(result.solution.total_cost, Fraction(10))
            self.assertEqual([], pipeline_report(result))
            again = run_pipeline(instance, cfg)
            self.assertEqual(result.solution, again.solution)
            self.assertEqual(result.estimate, again.estimate)

    def test_estimate_matches_oracle(self):
        """Test the EGUP mean of EX4 agrees with the exact expectation."""

        result = run_pipeline(load(self.EX4_FILE), RunConfig(algo="egup", trials=4000))
        exact = enumerate_rounding_expectation(result.rounder).expected_cost
        exact += result.reduction.integral_part.total_cost
        self.assertLessEqual(abs(result.estimate.mean_cost - float(exact)), 4 * result.estimate.se + 1e-9)

    def test_ebgs_facility_mean(self):
        """Test EBGS scales only the residual opening cost of EX4."""

        result = run_pipeline(load(self.EX4_FILE), RunConfig(algo="ebgs", trials=2000, seed=5))
        reduction = result.reduction
        residual_F = reduction.residual_fractional.facility_cost(reduction.residual_instance)
        expected = reduction.integral_part.facility_cost + result.partition.gamma * residual_F
        self.assertEqual(Fraction(1), reduction.integral_part.facility_cost)
        self.assertEqual(Fraction(4, 3), residual_F)
        self.assertLessEqual(abs(result.estimate.mean_F - float(expected)), 4 * result.estimate.se_F + 1e-9)

    def test_run_config(self):
        """Test run settings are validated."""

        self.assertEqual(Fraction(63, 40), RunConfig().gamma)
        self.assertEqual(Fraction(3, 2), RunConfig(gamma="3/2").gamma)
        self.assertEqual(Fraction(5, 2), RunConfig(algo="echs", gamma="5/2").gamma)
        for bad in ({"gamma": "2"}, {"gamma": 1.5}, {"seed": -1}, {"seed": 2 ** 64}, {"trials": 0},
                    {"algo": "greedy"}, {"threads": 2}):
            with self.assertRaises(ValidationError):
                RunConfig(**bad)

    def test_cmd_pipeline(self):
        """Test artifacts are written and the summary row is readable."""

        with tempfile.TemporaryDirectory() as tmp:
            out = Path(tmp) / "run"
            cfg = RunConfig(algo="ebgs", trials=50, instance=self.EX4_FILE, out=out, strict=True)
            code, result, report = cmd_pipeline(cfg)
            self.assertEqual(0, code)
            self.assertEqual([], report)
            for name in ARTIFACTS:
                self.assertTrue((out / name).exists(), name)
            summary = pd.read_csv(out / "summary.csv")
            self.assertEqual(SUMMARY_COLUMNS, list(summary.columns))
            self.assertEqual("ex4", summary.loc[0, "instance"])
            self.assertAlmostEqual(28 / 3, summary.loc[0, "LP*"])
            solution = json.loads((out / "solution.json").read_text())
            self.assertEqual(str(result.solution.total_cost), solution["total_cost"])
            self.assertEqual("63/40", json.loads((out / "partition.json").read_text())["gamma"])
            row = pd.read_csv(out / "estimator.csv")
            self.assertEqual(ESTIMATE_COLUMNS, list(row.columns))
            self.assertEqual("ebgs", row.loc[0, "algo"])
            self.assertEqual(0, row.loc[0, "seed"])
            self.assertEqual(50, row.loc[0, "trials"])
            self.assertAlmostEqual(result.empirical_ratio, row.loc[0, "ratio_vs_LP*"])

    def test_cmd_pipeline_json(self):
        """Test the json format replaces the CSV tables."""

        with tempfile.TemporaryDirectory() as tmp:
            out = Path(tmp) / "run"
            cfg = RunConfig(algo="echs", trials=20, seed=7, instance=self.EX1_FILE, out=out, format="json")
            code, _, _ = cmd_pipeline(cfg)
            self.assertEqual(0, code)
            self.assertFalse((out / "summary.csv").exists())
            self.assertFalse((out / "estimator.csv").exists())
            summary = json.loads((out / "summary.json").read_text())
            self.assertEqual(SUMMARY_COLUMNS, list(summary[0]))
            self.assertEqual("ex1", summary[0]["instance"])
            row = json.loads((out / "estimator.json").read_text())
            self.assertEqual(ESTIMATE_COLUMNS, list(row[0]))
            self.assertEqual(7, row[0]["seed"])
            self.assertEqual(1.0, row[0]["ratio_vs_LP*"])

    def test_cmd_pipeline_nonmetric(self):
        """Test a file breaking the metric is a validation failure, not an input error."""

        dist = [[3, 1, 1, 1], [1, 3, 1, 1], [1, 1, 3, 1], [1, 1, 1, 3]]
        dist[0][0] = 10
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "nonmetric.json"
            save(FtfpInstance.build([1] * 4, [1, 2, 2, 2], dist), path)
            code, result, report = cmd_pipeline(RunConfig(algo="egup", trials=5, instance=path))
            self.assertEqual(1, code)
            self.assertIsNone(result)
            self.assertEqual("metric", report[0].clause)
            self.assertEqual(1, quiet_main(["validate", "--instance", str(path)])[0])
            self.assertEqual(2, quiet_main(["solve", "--instance", str(path)])[0])

    def test_solve_stages(self):
        """Test the named stages of EX4 up to demand reduction."""

        stages = solve_stages(load(self.EX4_FILE))
        self.assertEqual(Fraction(28, 3), stages.breakdown.lp_value)
        self.assertEqual(len(stages.reduction.residual_clients), len(stages.residual_dual.alpha))
        self.assertEqual(stages.completed.num_sites, len(stages.complete_dual.beta))
        self.assertEqual(stages.completed.num_sites, len(stages.complete_primal.y))

    def test_bench_rows(self):
        """Test one summary row per instance and algorithm."""

        instances = [("ex1", load(self.EX1_FILE)), ("ex4", load(self.EX4_FILE))]
        table, report = bench_rows(instances, ["egup", "echs", "ebgs"], RunConfig(trials=30))
        self.assertEqual([], report)
        self.assertEqual(6, len(table))
        self.assertEqual(SUMMARY_COLUMNS, list(table.columns))
        self.assertTrue(table["gamma"].isna().sum() == 4)
        self.assertTrue((table["empirical_ratio"] >= 1.0 - 1e-12).all())

    def test_property_report(self):
        """Test every property suite passes on random instances."""

        for seed in range(6):
            self.assertEqual([], property_report(generate_euclidean(5, 4, 3, seed)))

    def test_main(self):
        """Test exit codes of the command line."""

        self.assertEqual(0, quiet_main(["validate", "--instance", str(self.EX4_FILE)])[0])
        self.assertEqual(2, quiet_main(["solve", "--instance", str(self.EX4_FILE.with_name("missing.json"))])[0])
        self.assertEqual(2, quiet_main(["round", "--instance", str(self.EX4_FILE), "--algo", "ebgs",
                                        "--gamma", "2"])[0])
        code, output = quiet_main(["solve", "--instance", str(self.EX4_FILE)])
        self.assertEqual(0, code)
        self.assertIn("LP* = 28/3", output)

        with tempfile.TemporaryDirectory() as tmp:
            code, _ = quiet_main(["bench", "--instance", str(self.EX1_FILE), "--algo", "echs", "--trials", "10",
                                  "--out", tmp])
            self.assertEqual(0, code)
            self.assertTrue((Path(tmp) / "summary.csv").exists())

            code, _ = quiet_main(["oracle", "--instance", str(self.EX4_FILE), "--algo", "echs", "--out", tmp])
            self.assertEqual(0, code)
            self.assertEqual("10", json.loads((Path(tmp) / "oracle.json").read_text())["OPT"])

            code, output = quiet_main(["gamma-scan", "--lo", "1.5", "--hi", "1.65", "--step", "0.005",
                                       "--out", tmp])
            self.assertEqual(0, code)
            self.assertIn("argmin gamma = 1.575", output)

        code, _ = quiet_main(["verify", "--suite", "2", "--sites", "4", "--clients", "3", "--rmax", "2"])
        self.assertEqual(0, code)


if __name__ == "__main__":
    unittest.main()
