# Standard imports
from fractions import Fraction
from pathlib import Path
import unittest

# Local imports
from ftfp.errors import FeasibilityError, InputError, clauses
from ftfp.instance.Instance import FtfpInstance
from ftfp.instance.InstanceFile import load
from ftfp.instance.InstanceGenerate import generate_euclidean
from ftfp.lp.Complete import make_complete
from ftfp.lp.LPSolve import FractionalSolution, solve_lp
from ftfp.reduction.DemandReduction import recombine, reduce, verify_reduction
from ftfp.rounding.IntegralSolution import IntegralSolution, validate_integral

F = Fraction


def reduced(instance):
    primal, _, _ = solve_lp(instance)
    completed, solution = make_complete(instance, primal)
    return completed, solution, reduce(completed, solution)


class test_DemandReduction(unittest.TestCase):
    """Test reduce, recombine and the decomposition identities."""

    EX1_FILE = Path(__file__).parent / "instances" / "ex1.json"
    EX4_FILE = Path(__file__).parent / "instances" / "ex4.json"

    def test_reduce_ex4(self):
        """Test the floors and residual of EX4."""

        _, solution, reduction = reduced(load(self.EX4_FILE))
        self.assertEqual([1, 0, 0, 0], reduction.open_floor)
        self.assertEqual([0, 1, 1, 1], reduction.connect_floor[0])
        self.assertEqual([0, 1, 1, 1], reduction.integral_demands)
        self.assertEqual([1, 1, 1, 1], reduction.residual_demands)
        self.assertEqual([F(1, 3)] * 4, reduction.residual_fractional.y)
        self.assertEqual(F(4), reduction.integral_part.total_cost)
        self.assertEqual([], verify_reduction(reduction, solution))

    def test_reduce_ex1(self):
        """Test an integral optimum leaves an empty residual."""

        _, _, reduction = reduced(load(self.EX1_FILE))
        self.assertEqual([], reduction.residual_clients)
        self.assertEqual(0, reduction.residual_instance.num_clients)
        solution = recombine(reduction, IntegralSolution.empty(reduction.residual_instance))
        self.assertEqual(F(7), solution.total_cost)

    def test_reduce_rejects_partial(self):
        """Test a solution that is not complete is refused with the pair."""

        instance = FtfpInstance.build([1, 1], [1, 1], [[1, 1], [1, 1]])
        primal = FractionalSolution([[F(2, 5), F(1)], [F(3, 5), F(0)]], [F(1), F(3, 5)])
        with self.assertRaisesRegex(InputError, "site 0, client 0"):
            reduce(instance, primal)

    def test_recombine_ex4(self):
        """Test a residual solution plus the integral part reaches OPT on EX4."""

        instance = load(self.EX4_FILE)
        _, _, reduction = reduced(instance)
        residual = IntegralSolution.build(reduction.residual_instance, [0, 1, 1, 0],
                                          [[(1, 0)], [(2, 0)], [(1, 0)], [(1, 0)]])
        solution = recombine(reduction, residual)
        self.assertEqual((1, 1, 1, 0), solution.open_counts)
        self.assertEqual(((1, 0),), solution.connections[0])
        self.assertEqual(((0, 0), (2, 0)), solution.connections[1])
        self.assertEqual(F(10), solution.total_cost)
        self.assertEqual(reduction.integral_part.total_cost + residual.total_cost, solution.total_cost)
        self.assertEqual([], validate_integral(instance, solution))

    def test_recombine_split_sites(self):
        """Test copies of split sites collapse onto their origin in order."""

        instance = FtfpInstance.build([1, 1], [1, 1], [[1, 1], [1, 1]])
        primal = FractionalSolution([[F(2, 5), F(1)], [F(3, 5), F(0)]], [F(1), F(3, 5)])
        completed, solution = make_complete(instance, primal)
        reduction = reduce(completed, solution)
        residual = IntegralSolution.build(reduction.residual_instance, [1, 0, 1], [[(0, 0)], [(2, 0)]])
        combined = recombine(reduction, residual)
        self.assertEqual((2, 0), combined.open_counts)
        self.assertEqual((((0, 0),), ((0, 1),)), combined.connections)
        self.assertEqual([], validate_integral(instance, combined))

    def test_recombine_infeasible(self):
        """Test an infeasible residual solution is refused."""

        _, _, reduction = reduced(load(self.EX4_FILE))
        with self.assertRaises(FeasibilityError):
            recombine(reduction, IntegralSolution.empty(reduction.residual_instance))

    def test_verify_reduction_tampered(self):
        """Test a changed floor breaks the identity."""

        _, solution, reduction = reduced(load(self.EX4_FILE))
        reduction.open_floor[0] = 2
        self.assertEqual({"reduction_identity"}, clauses(verify_reduction(reduction, solution)))

    def test_random_reduction(self):
        """Test identities and residual demand bound on random instances."""

        for seed in range(15):
            instance = generate_euclidean(5, 4, 4, seed)
            completed, solution, reduction = reduced(instance)
            self.assertEqual([], verify_reduction(reduction, solution))
            self.assertTrue(all(r <= completed.num_sites for r in reduction.residual_demands))
            self.assertTrue(all(0 <= y < 1 for y in reduction.residual_fractional.y))


if __name__ == "__main__":
    unittest.main()
