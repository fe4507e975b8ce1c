# Standard imports
from dataclasses import replace
from fractions import Fraction
from pathlib import Path
import unittest

# Local imports
from ftfp.errors import InputError, clauses
from ftfp.instance.Instance import FtfpInstance
from ftfp.instance.InstanceFile import load
from ftfp.instance.InstanceGenerate import generate_euclidean
from ftfp.lp.Complete import make_complete
from ftfp.lp.LPSolve import FractionalSolution, solve_lp
from ftfp.partition.CloseFarPartition import avg_distance, partition_close_far
from ftfp.partition.CloseFarVerify import verify_properties_cf

F = Fraction
GAMMA = F(63, 40)


class test_CloseFarPartition(unittest.TestCase):
    """Test the close/far partition and its property checks."""

    EX1_FILE = Path(__file__).parent / "instances" / "ex1.json"
    EX4_FILE = Path(__file__).parent / "instances" / "ex4.json"

    def solved(self, path):
        instance = load(path)
        primal, _, _ = solve_lp(instance)
        return instance, primal

    def test_partition_ex1(self):
        """Test the single facility of EX1 splits into close 1/gamma and far rest."""

        instance, primal = self.solved(self.EX1_FILE)
        cfp = partition_close_far(instance, primal, GAMMA)
        self.assertEqual([F(40, 63), F(23, 63)], [f.ybar for f in cfp.base.facilities])
        self.assertEqual({0: [0]}, cfp.close)
        self.assertEqual({0: [1]}, cfp.far)
        self.assertEqual(F(2), cfp.avg_close(0))
        self.assertEqual(F(2), cfp.max_close(0))
        self.assertEqual(F(2), cfp.avg_far(0))
        self.assertEqual([], verify_properties_cf(cfp, primal))

        dump = cfp.to_dict()
        self.assertEqual("63/40", dump["gamma"])
        self.assertEqual([0], dump["demands"][0]["close"])
        self.assertEqual("2", dump["demands"][0]["avg_far"])

    def test_partition_ex4(self):
        """Test EX4 primaries take disjoint close sets of mass 1/gamma."""

        instance, primal = self.solved(self.EX4_FILE)
        cfp = partition_close_far(instance, primal, GAMMA)
        self.assertEqual(7, len(cfp.base.demands))
        primaries = cfp.base.primaries
        self.assertTrue(1 <= len(primaries) <= 3)
        for kappa in primaries:
            self.assertEqual(F(40, 63), sum(cfp.base.xbar[kappa][fid] for fid in cfp.close[kappa]))
        self.assertTrue(all(GAMMA * f.ybar <= 1 for f in cfp.base.facilities))
        self.assertEqual([], verify_properties_cf(cfp, primal))

    def test_tampered_close_mass(self):
        """Test moving every facility into the close set is reported."""

        instance, primal = self.solved(self.EX1_FILE)
        cfp = partition_close_far(instance, primal, GAMMA)
        cfp.close[0], cfp.far[0] = [0, 1], []
        self.assertEqual({"close_mass"}, clauses(verify_properties_cf(cfp, primal)))

    def test_tampered_assigned_cost(self):
        """Test a primary made expensive is reported by its assigned demands."""

        instance, primal = self.solved(self.EX4_FILE)
        cfp = partition_close_far(instance, primal, GAMMA)
        nu = next(d for d in cfp.base.demands if not d.primary)
        client = cfp.base.demands[nu.assigned].client
        dist = tuple(tuple(d + 1000 if j == client else d for j, d in enumerate(row)) for row in instance.dist)
        cfp.base.instance = replace(instance, dist=dist)
        self.assertIn("assigned_close_cost", clauses(verify_properties_cf(cfp)))

    def test_avg_distance(self):
        """Test the weighted average and the empty set error."""

        instance, primal = self.solved(self.EX1_FILE)
        cfp = partition_close_far(instance, primal, GAMMA)
        self.assertEqual(F(2), avg_distance(cfp.base, [0, 1], 0))
        with self.assertRaises(InputError):
            avg_distance(cfp.base, [], 0)

    def test_gamma_range(self):
        """Test gamma outside (1, 2) is refused."""

        instance, primal = self.solved(self.EX1_FILE)
        for gamma in (F(1), F(2), F(5, 2)):
            with self.assertRaises(InputError):
                partition_close_far(instance, primal, gamma)

    def test_tie_prefers_primary_close_set(self):
        """Test an equal-distance tie puts the primary's close facilities first."""

        # client 1 sees sites 0 and 1 at distance 2; site 0 has the lower facility id
        instance = FtfpInstance.build([1, 1, 1], [1, 1], [[3, 2], [1, 2], [2, 4]])
        primal = FractionalSolution([[F(0), F(1, 3)], [F(2, 3), F(2, 3)], [F(1, 3), F(0)]],
                                    [F(1, 3), F(2, 3), F(1, 3)])
        cfp = partition_close_far(instance, primal, F(3, 2))
        self.assertEqual([0, 1, 2, 1], [f.site for f in cfp.base.facilities])
        self.assertEqual([0], cfp.base.primaries)
        self.assertEqual(0, cfp.base.assign(1))
        self.assertEqual({0: [1, 3], 1: [1, 3]}, cfp.close)
        self.assertEqual({0: [2], 1: [0]}, cfp.far)
        self.assertEqual([], verify_properties_cf(cfp, primal))

    def test_random_partitions(self):
        """Test every close/far property on random completed solutions."""

        for seed in range(10):
            instance = generate_euclidean(5, 4, 3, seed)
            primal, _, _ = solve_lp(instance)
            completed, solution = make_complete(instance, primal)
            for gamma in (F(11, 10), GAMMA, F(19, 10)):
                cfp = partition_close_far(completed, solution, gamma)
                self.assertEqual([], verify_properties_cf(cfp, solution))


if __name__ == "__main__":
    unittest.main()
