"""Exact expected cost of a rounder by enumerating its draw plan.

Classes
-------
ExpectationResult

Functions
---------
outcome_count(rounder)
enumerate_rounding_expectation(rounder, cfg)
"""

# Standard imports
from dataclasses import dataclass
import itertools
import math

# Local imports
from ftfp.errors import FeasibilityError, InputError
from ftfp.oracle.BruteForce import OracleConfig
from ftfp.rational import ONE, ZERO, format_rational


@dataclass
class ExpectationResult:
    """Exact expectations over every outcome of a rounder.

    Attributes
    ----------
    outcomes: int
        number of enumerated outcomes
    expected_cost, expected_F, expected_C: Fraction
        expected total, facility and connection cost
    site_F: list
        expected facility cost per site
    demand_cost: dict
        demand id -> expected connection distance
    fallback: dict
        non-primary demand id -> probability of connecting to its target
        for lack of a preferred open facility
    no_close: dict
        non-primary demand id -> probability that its first preferred
        group has nothing open
    fraction_indirect: Fraction
        expected share of non-primary demands that fall back
    """

    outcomes: int
    expected_cost: object
    expected_F: object
    expected_C: object
    site_F: list
    demand_cost: dict
    fallback: dict
    no_close: dict
    fraction_indirect: object

    def to_dict(self):
        return {
            "outcomes": self.outcomes,
            "expected_cost": format_rational(self.expected_cost),
            "expected_F": format_rational(self.expected_F),
            "expected_C": format_rational(self.expected_C),
            "site_F": [format_rational(value) for value in self.site_F],
            "fraction_indirect": format_rational(self.fraction_indirect)
        }


def outcome_count(rounder):
    return math.prod(len(draw.support()) for draw in rounder.plan())


def enumerate_rounding_expectation(rounder, cfg=None):
    """Return the exact expectations of a rounder's outcome distribution.

    Every combination of positive-probability picks is realized with the
    rounder's own `realize`, weighted by the product of its probabilities.

    Parameters
    ----------
    rounder: Rounder
        EGUP, ECHS or EBGS instance
    cfg: OracleConfig, optional
        max_total_enumeration bounds the number of outcomes

    Raises
    ------
    InputError
        the outcome count exceeds the bound
    """

    cfg = cfg or OracleConfig()
    count = outcome_count(rounder)
    if count > cfg.max_total_enumeration:
        raise InputError(f"expectation oracle refuses {count} outcomes (bound {cfg.max_total_enumeration})")

    base = rounder.base
    non_primary = rounder.non_primary
    site_F = [ZERO] * base.instance.num_sites
    demand_cost = {demand.demand_id: ZERO for demand in base.demands}
    fallback = {did: ZERO for did in non_primary}
    no_close = {did: ZERO for did in non_primary}
    expected_C = indirect = total = ZERO
    for combination in itertools.product(*(draw.support() for draw in rounder.plan())):
        probability = math.prod((weight for _, weight in combination), start=ONE)
        outcome = rounder.realize([option for option, _ in combination])
        total += probability
        for site, copies in enumerate(outcome.solution.open_counts):
            site_F[site] += probability * base.instance.open_cost(site) * copies
        expected_C += probability * outcome.solution.connection_cost
        for did, fid in outcome.connected.items():
            demand_cost[did] += probability * base.distance(fid, did)
        for did in outcome.fallback:
            fallback[did] += probability
        for did in outcome.no_close:
            no_close[did] += probability
        if non_primary:
            indirect += probability * len(outcome.fallback) / len(non_primary)

    if total != 1:
        raise FeasibilityError(f"draw probabilities sum to {total}")
    expected_F = sum(site_F, ZERO)
    return ExpectationResult(count, expected_F + expected_C, expected_F, expected_C, site_F, demand_cost,
                             fallback, no_close, indirect)
