"""Adaptive partitioning of a complete fractional solution.

Clients are split into unit demands and sites into facilities. Phase 1
repeatedly picks the unfinished client p minimizing tcc(p) + alpha*_p
(lowest client on ties), creates one demand for it and either makes it
primary (taking p's nearest unit chunk) or assigns it to the first
primary whose neighborhood meets that chunk (taking every leftover
facility of p inside the primary's neighborhood). Phase 2 tops every
demand up to total connection 1.

Facility ids are creation order. A split keeps the id of the original
facility for one part and appends the other part as a new facility at
the same site; every demand and client connected to the original is
connected to both parts afterwards.

Classes
-------
PartitionState
AdaptivePartition

Functions
---------
partition(instance, complete_primal, dual)
    run both phases and return the PartitionedSolution
"""

# Standard imports
import copy
from dataclasses import dataclass

# Local imports
from ftfp.errors import FeasibilityError, InputError
from ftfp.lp.LPSolve import primal_violations
from ftfp.partition.Partition import Demand, Facility, PartitionedSolution
from ftfp.rational import ONE, ZERO


@dataclass
class PartitionState:
    """Copy of the builder state after one Phase-1 iteration.

    Attributes
    ----------
    iteration: int
        number of completed Phase-1 iterations
    facilities: list
        Facility records
    demands: list
        Demand records
    xbar: dict
        demand id -> {facility id: value}
    xtilde: list
        per client, {facility id: leftover value}
    """

    iteration: int
    facilities: list
    demands: list
    xbar: dict
    xtilde: list


class AdaptivePartition:
    """Stateful builder of a PartitionedSolution.

    Attributes
    ----------
    instance: FtfpInstance
        instance being partitioned
    primal: FractionalSolution
        complete optimal solution being partitioned
    alpha: list
        optimal dual alpha per client
    facilities: list
        Facility records created so far
    demands: list
        Demand records created so far
    xbar: dict
        demand id -> {facility id: value}
    xtilde: list
        per client, leftover {facility id: value}
    unfinished: list
        clients that still need demands, ascending

    Methods
    -------
    nearest_unit_chunk(client, mass)
        nearest prefix of the client's leftover with exactly `mass`
    tcc(client)
        tentative connection cost over the nearest unit chunk
    step()
        run one Phase-1 iteration
    iterate()
        generator of PartitionState after every Phase-1 iteration
    augment_to_unit(demand)
        Phase-2 top-up of one demand
    run()
        both phases, returning the PartitionedSolution
    """

    def __init__(self, instance, primal, dual=None):
        """
        Parameters
        ----------
        instance: FtfpInstance
            instance of the solution
        primal: FractionalSolution
            complete optimal fractional solution
        dual: DualSolution
            optimal dual solution (alpha drives client selection)
        """

        report = primal_violations(instance, primal)
        if report:
            raise InputError(f"cannot partition an infeasible solution: {report[0]}")
        for i, row in enumerate(primal.x):
            for j, value in enumerate(row):
                if 0 < value != primal.y[i]:
                    raise InputError(f"solution is not complete at site {i}, client {j}")
        if dual is not None and len(dual.alpha) != instance.num_clients:
            raise InputError(f"dual has {len(dual.alpha)} alpha values for {instance.num_clients} clients")

        self.instance = instance
        self.primal = primal
        self.alpha = None if dual is None else list(dual.alpha)
        self.facilities = []
        self.demands = []
        self.xbar = {}
        self.xtilde = [{} for _ in range(instance.num_clients)]
        self.iteration = 0
        self.by_client = [[] for _ in range(instance.num_clients)]
        for i, y in enumerate(primal.y):
            if y > 0:
                fid = self._new_facility(i, y)
                for j, value in enumerate(primal.x[i]):
                    if value > 0:
                        self.xtilde[j][fid] = value
        self.unfinished = [j for j in range(instance.num_clients) if instance.demand(j) > 0]

    @property
    def threshold(self):
        """Mass of the chunk a new primary takes."""

        return ONE

    def distance(self, facility, client):
        return self.instance.dist[self.facilities[facility].site][client]

    def _new_facility(self, site, ybar):
        fid = len(self.facilities)
        self.facilities.append(Facility(fid, site, ybar))
        return fid

    def _new_demand(self, client):
        did = len(self.demands)
        self.demands.append(Demand(did, client))
        self.xbar[did] = {}
        self.by_client[client].append(did)
        return did

    def _split(self, facility, amount):
        """Split `amount` off a facility into a new one; return the new id."""

        original = self.facilities[facility]
        if not 0 < amount < original.ybar:
            raise FeasibilityError(f"cannot split {amount} off facility {facility} with ybar {original.ybar}")
        sigma = self._new_facility(original.site, amount)
        original.ybar -= amount
        for values in list(self.xbar.values()) + self.xtilde:
            if facility in values:
                values[facility] = original.ybar
                values[sigma] = amount
        self._on_split(facility, sigma)
        return sigma

    def _on_split(self, facility, sigma):
        """Hook for subclasses tracking extra facility sets."""

    def _on_primary(self, demand, chunk):
        """Hook for subclasses recording a new primary's chunk."""

    def nearest_unit_chunk(self, client, mass=ONE):
        """Return the nearest leftover facilities of a client with total `mass`.

        Facilities are ordered by (distance, creation order); the last one
        is split when the prefix overshoots, the excess becoming a new
        facility outside the chunk.
        """

        chunk, total = [], ZERO
        leftover = self.xtilde[client]
        for fid in sorted(leftover, key=lambda f: (self.distance(f, client), f)):
            chunk.append(fid)
            total += leftover[fid]
            if total >= mass:
                break
        if total < mass:
            raise FeasibilityError(f"client {client} has leftover {total} < {mass}")
        if total > mass:
            self._split(chunk[-1], total - mass)
        return chunk

    def tcc(self, client, chunk=None):
        """Tentative connection cost of a client over its nearest unit chunk."""

        if chunk is None:
            chunk = self.nearest_unit_chunk(client)
        return sum((self.distance(fid, client) * self.xtilde[client][fid] for fid in chunk), ZERO)

    def _score(self, client):
        if self.alpha is None:
            raise InputError("adaptive partitioning needs the dual solution")
        return self.tcc(client) + self.alpha[client]

    def _overlapping_primary(self, chunk):
        for demand in self.demands:
            if demand.primary and any(fid in self.xbar[demand.demand_id] for fid in chunk):
                return demand.demand_id
        return None

    def _move(self, client, demand, facilities):
        for fid in facilities:
            self.xbar[demand][fid] = self.xtilde[client].pop(fid)

    def step(self):
        """Run one Phase-1 iteration and return the id of the new demand."""

        if not self.unfinished:
            raise FeasibilityError("every client already has all its demands")
        scores = {client: self._score(client) for client in self.unfinished}
        p = min(self.unfinished, key=lambda client: (scores[client], client))

        # scores of later clients may have split p's chunk; the mass profile is unchanged
        chunk = self.nearest_unit_chunk(p, self.threshold)
        did = self._new_demand(p)
        kappa = self._overlapping_primary(chunk)
        demand = self.demands[did]
        if kappa is None:
            demand.primary = True
            demand.assigned = did
            self._move(p, did, chunk)
            self._on_primary(did, chunk)
        else:
            demand.assigned = kappa
            self._move(p, did, [fid for fid in sorted(self.xtilde[p]) if fid in self.xbar[kappa]])

        if len(self.by_client[p]) == self.instance.demand(p):
            self.unfinished.remove(p)
        self.iteration += 1
        return did

    def snapshot(self):
        return PartitionState(self.iteration, copy.deepcopy(self.facilities), copy.deepcopy(self.demands),
                              copy.deepcopy(self.xbar), copy.deepcopy(self.xtilde))

    def iterate(self):
        """Yield a PartitionState after each Phase-1 iteration."""

        while self.unfinished:
            self.step()
            yield self.snapshot()

    def augment_to_unit(self, demand):
        """Top a demand up to total connection 1 from its client's leftover.

        The nearest leftover facility is moved whole when it fits;
        otherwise the missing amount is split off it and moved.
        """

        client = self.demands[demand].client
        total = sum(self.xbar[demand].values(), ZERO)
        while total < 1:
            leftover = self.xtilde[client]
            if not leftover:
                raise FeasibilityError(f"client {client} ran out of leftover for demand {demand} at {total}")
            fid = min(leftover, key=lambda f: (self.distance(f, client), f))
            missing = ONE - total
            if leftover[fid] > missing:
                fid = self._split(fid, missing)
            total += leftover[fid]
            self._move(client, demand, [fid])

    def augment_all(self):
        """Phase 2 over clients, then demands, in creation order."""

        for client in range(self.instance.num_clients):
            for did in self.by_client[client]:
                self.augment_to_unit(did)
        leftovers = [client for client, leftover in enumerate(self.xtilde) if leftover]
        if leftovers:
            raise FeasibilityError(f"clients {leftovers} keep unassigned connection mass")

    def result(self):
        return PartitionedSolution(self.instance, self.facilities, self.demands, self.xbar, self.alpha)

    def run(self):
        """Run Phase 1 and Phase 2 and return the PartitionedSolution."""

        while self.unfinished:
            self.step()
        self.augment_all()
        return self.result()


def partition(instance, complete_primal, dual):
    """Partition a complete optimal solution into unit demands.

    Parameters
    ----------
    instance: FtfpInstance
        instance of the solution (usually the residual instance)
    complete_primal: FractionalSolution
        complete optimal fractional solution
    dual: DualSolution
        optimal dual solution

    Returns
    -------
    PartitionedSolution
    """

    return AdaptivePartition(instance, complete_primal, dual).run()
