# Standard imports
from fractions import Fraction
from pathlib import Path
import unittest

# Local imports
from ftfp.errors import InputError
from ftfp.instance.InstanceFile import load
from ftfp.instance.InstanceGenerate import generate_euclidean
from ftfp.lp.Complete import extend_dual, make_complete
from ftfp.lp.LPSolve import solve_lp
from ftfp.partition.AdaptivePartition import partition
from ftfp.partition.CloseFarPartition import partition_close_far
from ftfp.rounding.IntegralSolution import IntegralSolution, validate_integral
from ftfp.rounding.Rounding import (EBGS, ECHS, EGUP, WORD, Draw, round_ebgs, round_echs, round_egup)

F = Fraction
GAMMA = F(63, 40)
THIRD = F(1, 3)


def rounders(instance, gamma=GAMMA):
    """EGUP, ECHS and EBGS over the completed optimum of an instance."""

    primal, dual, _ = solve_lp(instance)
    completed, solution = make_complete(instance, primal)
    extended = extend_dual(dual, completed)
    ps = partition(completed, solution, extended)
    cfp = partition_close_far(completed, solution, gamma, extended)
    return completed, [EGUP(ps), ECHS(ps), EBGS(cfp)]


class test_Rounding(unittest.TestCase):
    """Test the draw plans, realization and seeded rounding."""

    EX1_FILE = Path(__file__).parent / "instances" / "ex1.json"
    EX4_FILE = Path(__file__).parent / "instances" / "ex4.json"

    def test_draw_pick(self):
        """Test raw words map onto cumulative weights."""

        draw = Draw((1, 2, 3), (THIRD, THIRD, THIRD), 0)
        self.assertEqual(1, draw.pick(0))
        self.assertEqual(1, draw.pick(WORD // 3))
        self.assertEqual(2, draw.pick(WORD // 3 + 1))
        self.assertEqual(3, draw.pick(WORD - 1))

        coin = Draw((4, None), (F(0), F(1)))
        self.assertIsNone(coin.pick(0))
        self.assertEqual([(None, F(1))], coin.support())

    def test_round_ex1(self):
        """Test EX1 always costs 7 with EGUP and ECHS and 7 or 12 with EBGS."""

        instance = load(self.EX1_FILE)
        _, (egup, echs, ebgs) = rounders(instance)
        costs = set()
        for seed in range(20):
            self.assertEqual(F(7), round_egup(egup.partition, seed).total_cost)
            self.assertEqual(F(7), round_echs(echs.partition, seed).total_cost)
            costs.add(round_ebgs(ebgs.close_far, seed).total_cost)
        self.assertLessEqual(costs, {F(7), F(12)})
        self.assertEqual([Draw((0,), (F(1),), 0), Draw((1, None), (F(23, 40), F(17, 40)))], ebgs.plan())

    def test_plan_ex4(self):
        """Test EX4 plans: two clusters, plus a coin on the split facility for ECHS."""

        _, (egup, echs, _) = rounders(load(self.EX4_FILE))
        self.assertEqual([Draw((1, 2, 3), (THIRD, THIRD, THIRD), 0), Draw((0,), (F(1),), 1)], egup.plan())
        self.assertEqual(egup.plan() + [Draw((4, None), (THIRD, F(2, 3)))], echs.plan())
        self.assertEqual([2, 3, 4, 5, 6], echs.non_primary)

    def test_realize_ex4(self):
        """Test ECHS connections for a fixed pick of every draw."""

        instance = load(self.EX4_FILE)
        _, (egup, echs, _) = rounders(instance)
        outcome = echs.realize([1, 0, None])
        self.assertEqual((0, 1), outcome.opened)
        self.assertEqual({0: 1, 1: 0}, outcome.targets)
        self.assertEqual({0: 1, 1: 0, 2: 1, 3: 0, 4: 1, 5: 0, 6: 1}, outcome.connected)
        self.assertEqual(frozenset({2}), outcome.fallback)
        self.assertEqual(frozenset({2}), outcome.no_close)
        self.assertEqual((1, 1, 0, 0), outcome.solution.open_counts)
        self.assertEqual(F(11), outcome.solution.total_cost)

        outcome = echs.realize([1, 0, 4])
        self.assertEqual(4, outcome.connected[2])
        self.assertEqual(((0, 0), (0, 1)), outcome.solution.connections[1])
        self.assertEqual(frozenset(), outcome.fallback)

        outcome = egup.realize([2, 0])
        self.assertEqual(frozenset({2, 3, 4, 5, 6}), outcome.fallback)
        self.assertEqual(2, sum(outcome.solution.open_counts))
        with self.assertRaises(InputError):
            egup.realize([2])

    def test_feasible_ex4(self):
        """Test every rounder yields a feasible EX4 solution on seeds 0..99."""

        instance = load(self.EX4_FILE)
        completed, algos = rounders(instance)
        for rounder in algos:
            for seed in range(100):
                outcome = rounder.sample(seed)
                self.assertEqual([], validate_integral(completed, outcome.solution))
                if rounder.name == "egup":
                    self.assertEqual(2, sum(outcome.solution.open_counts))

    def test_deterministic(self):
        """Test equal seeds give equal solutions."""

        _, algos = rounders(load(self.EX4_FILE))
        for rounder in algos:
            for seed in (0, 7, 2 ** 64 - 1):
                self.assertEqual(rounder.round(seed), rounder.round(seed))
            self.assertIsInstance(rounder.round(3), IntegralSolution)

    def test_ebgs_scaled_opening(self):
        """Test EBGS refuses facilities with gamma * ybar above 1."""

        _, (_, _, ebgs) = rounders(load(self.EX1_FILE))
        cfp = ebgs.close_far
        cfp.base.facilities[0].ybar = F(1)
        with self.assertRaises(InputError):
            EBGS(cfp)

    def test_random_feasible(self):
        """Test feasibility of every rounder on random instances."""

        for instance_seed in range(8):
            completed, algos = rounders(generate_euclidean(5, 4, 3, instance_seed))
            for rounder in algos:
                for seed in range(15):
                    outcome = rounder.sample(seed)
                    self.assertEqual([], validate_integral(completed, outcome.solution))
                    primaries = len(rounder.base.primaries)
                    clustered = {fid for kappa in rounder.base.primaries for fid in rounder.cluster(kappa)}
                    self.assertEqual(primaries, len(clustered & set(outcome.opened)))


if __name__ == "__main__":
    unittest.main()
