"""Randomized rounding of partitioned fractional solutions.

Every rounder turns its partition into a draw plan and a pure map from
picks to an integral solution. The plan lists one categorical draw per
primary demand (creation order), choosing the facility that opens in
its cluster, then one coin per facility outside every cluster (creation
order; EGUP has none). A coin is a categorical draw between opening the
facility and nothing.

Sampling with seed s takes the PCG64 stream of SeedSequence(s), one raw
64-bit word w per draw, sets u = w / 2**64 and picks the first option
whose cumulative weight exceeds u. The exact-expectation oracle walks
the same plan.

Open facilities become copies of their sites; copy numbers at a site
follow facility creation order.

Classes
-------
Draw
RoundingOutcome
Rounder
EGUP
ECHS
EBGS

Functions
---------
round_egup(ps, seed)
round_echs(ps, seed)
round_ebgs(cfp, seed)
"""

# Standard imports
from dataclasses import dataclass
from fractions import Fraction

# Local imports
from ftfp.errors import InputError
from ftfp.rational import ONE, ZERO
from ftfp.rounding.IntegralSolution import IntegralSolution

# Third-party imports
import numpy as np

WORD = 2 ** 64


@dataclass(frozen=True)
class Draw:
    """One categorical draw of a plan.

    Attributes
    ----------
    options: tuple
        facility ids, or (facility id, None) for a coin
    weights: tuple
        exact probabilities of the options, summing to 1
    primary: int
        primary demand whose target this draw picks, None for coins
    """

    options: tuple
    weights: tuple
    primary: int = None

    def pick(self, word):
        """Return the option selected by a raw 64-bit word."""

        u = Fraction(int(word), WORD)
        cumulative = ZERO
        for option, weight in zip(self.options, self.weights):
            cumulative += weight
            if u < cumulative:
                return option
        return [option for option, weight in zip(self.options, self.weights) if weight > 0][-1]

    def support(self):
        """(option, probability) pairs with positive probability."""

        return [(option, weight) for option, weight in zip(self.options, self.weights) if weight > 0]


@dataclass(frozen=True)
class RoundingOutcome:
    """Result of one realization of a rounder.

    Attributes
    ----------
    solution: IntegralSolution
        integral solution on the partitioned instance
    opened: tuple
        open facility ids, creation order
    targets: dict
        primary demand id -> its target facility
    connected: dict
        demand id -> facility it connects to
    fallback: frozenset
        non-primary demands connected to their target because no
        preferred facility opened
    no_close: frozenset
        non-primary demands with nothing open in their first preferred
        group (the close set for EBGS, the neighborhood for ECHS)
    """

    solution: IntegralSolution
    opened: tuple
    targets: dict
    connected: dict
    fallback: frozenset
    no_close: frozenset


class Rounder:
    """Shared draw plan, sampling and realization of the rounders.

    Attributes
    ----------
    name: str
        algorithm name
    partition: PartitionedSolution
        partition being rounded

    Methods
    -------
    plan()
        ordered list of Draw
    realize(picks)
        RoundingOutcome for one pick per draw
    sample(seed)
        RoundingOutcome for a seed
    round(seed)
        IntegralSolution for a seed
    """

    name = None

    def __init__(self, partition):
        self.partition = partition
        self.__plan = None

    @property
    def base(self):
        return self.partition

    @property
    def instance(self):
        return self.base.instance

    @property
    def non_primary(self):
        return [demand.demand_id for demand in self.base.demands if not demand.primary]

    def cluster(self, primary):
        """Facilities among which exactly one opens for a primary."""

        return self.base.neighborhood(primary)

    def probability(self, facility):
        return self.base.facilities[facility].ybar

    def coins(self):
        """Facilities opened independently: those outside every cluster."""

        clustered = {fid for kappa in self.base.primaries for fid in self.cluster(kappa)}
        return [facility.facility_id for facility in self.base.facilities if facility.facility_id not in clustered]

    def plan(self):
        if self.__plan is None:
            plan = []
            for kappa in self.base.primaries:
                options = tuple(self.cluster(kappa))
                plan.append(Draw(options, tuple(self.probability(fid) for fid in options), kappa))
            for fid in self.coins():
                p = self.probability(fid)
                plan.append(Draw((fid, None), (p, ONE - p)))
            self.__plan = plan
        return self.__plan

    def preferences(self, demand):
        """Facility groups a demand tries in order before its target."""

        return []

    def __nearest_open(self, group, demand, opened):
        candidates = [fid for fid in group if fid in opened]
        if not candidates:
            return None
        return min(candidates, key=lambda fid: (self.base.distance(fid, demand), fid))

    def realize(self, picks):
        """Build the outcome of one pick per draw of the plan.

        Parameters
        ----------
        picks: sequence
            chosen option per draw, in plan order
        """

        plan = self.plan()
        if len(picks) != len(plan):
            raise InputError(f"{len(picks)} picks for a plan of {len(plan)} draws")
        targets, opened = {}, set()
        for draw, pick in zip(plan, picks):
            if draw.primary is not None:
                targets[draw.primary] = pick
            if pick is not None:
                opened.add(pick)

        connected, fallback, no_close = {}, set(), set()
        for demand in self.base.demands:
            did = demand.demand_id
            choice = None
            for rank, group in enumerate(self.preferences(did)):
                choice = self.__nearest_open(group, did, opened)
                if choice is not None:
                    break
                if rank == 0 and not demand.primary:
                    no_close.add(did)
            if choice is None:
                choice = targets[demand.assigned]
                if not demand.primary:
                    fallback.add(did)
            connected[did] = choice

        order = sorted(opened)
        copy_of, open_counts = {}, [0] * self.instance.num_sites
        for fid in order:
            site = self.base.facilities[fid].site
            copy_of[fid] = open_counts[site]
            open_counts[site] += 1
        connections = [[] for _ in range(self.instance.num_clients)]
        for demand in self.base.demands:
            fid = connected[demand.demand_id]
            connections[demand.client].append((self.base.facilities[fid].site, copy_of[fid]))
        solution = IntegralSolution.build(self.instance, open_counts, connections)
        return RoundingOutcome(solution, tuple(order), targets, connected, frozenset(fallback), frozenset(no_close))

    def sample(self, seed):
        words = np.random.PCG64(np.random.SeedSequence(int(seed))).random_raw(len(self.plan()))
        return self.realize([draw.pick(word) for draw, word in zip(self.plan(), words)])

    def round(self, seed):
        return self.sample(seed).solution


class EGUP(Rounder):
    """One facility per primary; every demand connects to its target."""

    name = "egup"

    def coins(self):
        return []


class ECHS(Rounder):
    """Clustered opening plus independent coins; nearest open neighbor first."""

    name = "echs"

    def preferences(self, demand):
        return [self.base.neighborhood(demand)]


class EBGS(Rounder):
    """Opening scaled by gamma over close sets; close, then far, then target.

    Attributes
    ----------
    close_far: CloseFarPartition
        partition with close and far neighborhoods
    """

    name = "ebgs"

    def __init__(self, close_far):
        """
        Parameters
        ----------
        close_far: CloseFarPartition
            partition to round

        Raises
        ------
        InputError
            some gamma * ybar exceeds 1
        """

        for facility in close_far.base.facilities:
            if close_far.gamma * facility.ybar > 1:
                raise InputError(f"gamma * ybar of facility {facility.facility_id} exceeds 1")
        super().__init__(close_far.base)
        self.close_far = close_far

    def cluster(self, primary):
        return self.close_far.close[primary]

    def probability(self, facility):
        return self.close_far.gamma * self.base.facilities[facility].ybar

    def preferences(self, demand):
        return [self.close_far.close[demand], self.close_far.far[demand]]


ROUNDERS = {"egup": EGUP, "echs": ECHS, "ebgs": EBGS}


def round_egup(ps, seed):
    return EGUP(ps).round(seed)


def round_echs(ps, seed):
    return ECHS(ps).round(seed)


def round_ebgs(cfp, seed):
    return EBGS(cfp).round(seed)
