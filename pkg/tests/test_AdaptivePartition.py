# Standard imports
from fractions import Fraction
from pathlib import Path
import unittest

# Local imports
from ftfp.errors import InputError, clauses
from ftfp.instance.Instance import FtfpInstance
from ftfp.instance.InstanceFile import load
from ftfp.instance.InstanceGenerate import generate_euclidean
from ftfp.lp.Complete import extend_dual, make_complete
from ftfp.lp.LPSolve import FractionalSolution, solve_lp
from ftfp.partition.AdaptivePartition import AdaptivePartition, partition
from ftfp.partition.PartitionVerify import verify_iteration, verify_properties

F = Fraction
THIRD = F(1, 3)


class test_AdaptivePartition(unittest.TestCase):
    """Test the adaptive partitioning phases and their properties."""

    EX1_FILE = Path(__file__).parent / "instances" / "ex1.json"
    EX4_FILE = Path(__file__).parent / "instances" / "ex4.json"

    def ex4(self):
        instance = load(self.EX4_FILE)
        primal, dual, _ = solve_lp(instance)
        return instance, primal, dual

    def test_partition_ex4(self):
        """Test EX4 reproduces the worked partition exactly."""

        instance, primal, dual = self.ex4()
        ps = partition(instance, primal, dual)

        self.assertEqual([(0, 1), (1, THIRD), (2, THIRD), (3, THIRD), (0, THIRD)],
                         [(f.site, f.ybar) for f in ps.facilities])
        self.assertEqual([(0, True, 0), (1, True, 1), (1, False, 0), (2, False, 1),
                          (2, False, 0), (3, False, 1), (3, False, 0)],
                         [(d.client, d.primary, d.assigned) for d in ps.demands])
        self.assertEqual([0, 1], ps.primaries)
        expected = {0: [1, 2, 3], 1: [0], 2: [2, 3, 4], 3: [0], 4: [1, 3, 4], 5: [0], 6: [1, 2, 4]}
        self.assertEqual(expected, {did: ps.neighborhood(did) for did in ps.xbar})
        self.assertEqual({0: 1}, ps.xbar[1])
        self.assertEqual({2: THIRD, 3: THIRD, 4: THIRD}, ps.xbar[2])
        self.assertEqual(F(1), ps.avg_conn_cost(6))
        self.assertEqual([2], ps.siblings(1))
        self.assertEqual([], verify_properties(ps, primal, dual))

    def test_partition_ex1(self):
        """Test the single demand of EX1 becomes primary."""

        instance = load(self.EX1_FILE)
        primal, dual, _ = solve_lp(instance)
        ps = partition(instance, primal, dual)
        self.assertEqual(1, len(ps.facilities))
        self.assertEqual([0], ps.primaries)
        self.assertEqual({0: 1}, ps.xbar[0])
        self.assertEqual(F(7), ps.alpha_of_demand(0))
        self.assertEqual([], verify_properties(ps, primal, dual))

    def test_nearest_unit_chunk(self):
        """Test an overshooting prefix splits its last facility."""

        instance = FtfpInstance.build([1] * 5, [2], [[1], [2], [3], [4], [5]])
        primal = FractionalSolution([[F(2, 5)]] * 5, [F(2, 5)] * 5)
        builder = AdaptivePartition(instance, primal)
        chunk = builder.nearest_unit_chunk(0)
        self.assertEqual([0, 1, 2], chunk)
        self.assertEqual(6, len(builder.facilities))
        self.assertEqual((2, F(1, 5)), (builder.facilities[5].site, builder.facilities[5].ybar))
        self.assertEqual(F(1, 5), builder.xtilde[0][2])
        self.assertEqual(F(9, 5), builder.tcc(0))

    def test_augment_to_unit(self):
        """Test Phase 2 splits the nearest leftover to fill the missing mass."""

        instance = FtfpInstance.build([1] * 3, [2], [[1], [2], [3]])
        primal = FractionalSolution([[F(2, 3)], [F(1, 2)], [F(5, 6)]], [F(2, 3), F(1, 2), F(5, 6)])
        builder = AdaptivePartition(instance, primal)
        did = builder._new_demand(0)
        builder._move(0, did, [0])
        builder.augment_to_unit(did)
        self.assertEqual({0: F(2, 3), 3: THIRD}, builder.xbar[did])
        self.assertEqual(F(1, 6), builder.facilities[1].ybar)
        self.assertEqual({1: F(1, 6), 2: F(5, 6)}, builder.xtilde[0])

    def test_iterate(self):
        """Test every Phase-1 snapshot of EX4 conserves mass and completeness."""

        instance, primal, dual = self.ex4()
        builder = AdaptivePartition(instance, primal, dual)
        states = list(builder.iterate())
        self.assertEqual(7, len(states))
        self.assertEqual(list(range(1, 8)), [state.iteration for state in states])
        for state in states:
            self.assertEqual([], verify_iteration(state, instance, primal))
        self.assertEqual({4: THIRD}, states[-1].xtilde[3])

    def test_tampered_partition(self):
        """Test changed masses and assignments are reported."""

        instance, primal, dual = self.ex4()
        ps = partition(instance, primal, dual)
        ps.xbar[0][1] = F(2, 3)
        self.assertLessEqual({"demand_mass", "completeness"}, clauses(verify_properties(ps, primal, dual)))

        ps = partition(instance, primal, dual)
        ps.demands[3].assigned = 0
        self.assertIn("assigned_overlap", clauses(verify_properties(ps, primal, dual)))

    def test_partition_errors(self):
        """Test missing duals and incomplete solutions are refused."""

        instance, primal, _ = self.ex4()
        with self.assertRaises(InputError):
            partition(instance, primal, None)

        instance = FtfpInstance.build([1, 1], [1, 1], [[1, 1], [1, 1]])
        primal = FractionalSolution([[F(2, 5), F(1)], [F(3, 5), F(0)]], [F(1), F(3, 5)])
        with self.assertRaisesRegex(InputError, "not complete"):
            AdaptivePartition(instance, primal)

    def test_random_partitions(self):
        """Test every property on random completed solutions."""

        for seed in range(12):
            instance = generate_euclidean(5, 4, 3, seed)
            primal, dual, _ = solve_lp(instance)
            completed, solution = make_complete(instance, primal)
            extended = extend_dual(dual, completed)
            ps = partition(completed, solution, extended)
            self.assertEqual([], verify_properties(ps, solution, extended))


if __name__ == "__main__":
    unittest.main()
