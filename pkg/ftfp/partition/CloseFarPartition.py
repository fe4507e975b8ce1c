"""Adaptive partitioning with close and far neighborhoods.

Same two phases as the plain partition, with three changes: a client's
chunk has mass 1/gamma, clients are selected by the minimum of
gamma * sum(d * x) + max d over that chunk, and a new primary takes only
its chunk. Once every neighborhood is fixed, each demand's neighborhood
is divided into the nearest 1/gamma of mass (close) and the rest (far).
Ties at equal distance go to facilities of the assigned primary's close
set, then to lower creation order; the boundary facility is split so the
close mass is exactly 1/gamma.

Classes
-------
CloseFarBuilder
CloseFarPartition

Functions
---------
partition_close_far(instance, complete_primal, gamma, dual=None)
    run the modified partitioning and classify every neighborhood
avg_distance(ps, facilities, demand)
    ybar-weighted average distance of a facility set to a demand
"""

# Standard imports
from dataclasses import dataclass
from fractions import Fraction

# Local imports
from ftfp.errors import InputError
from ftfp.partition.AdaptivePartition import AdaptivePartition
from ftfp.partition.Partition import PartitionedSolution
from ftfp.rational import ONE, ZERO, format_rational


def avg_distance(ps, facilities, demand):
    """Return sum(d * ybar) / sum(ybar) over `facilities` for `demand`.

    Raises
    ------
    InputError
        the set is empty or has no mass
    """

    facilities = list(facilities)
    mass = sum((ps.facilities[fid].ybar for fid in facilities), ZERO)
    if not facilities or mass <= 0:
        raise InputError(f"average distance of demand {demand} over an empty facility set")
    weighted = sum((ps.distance(fid, demand) * ps.facilities[fid].ybar for fid in facilities), ZERO)
    return weighted / mass


@dataclass
class CloseFarPartition:
    """Partition whose neighborhoods are divided into close and far parts.

    Attributes
    ----------
    base: PartitionedSolution
        underlying partition
    gamma: Fraction
        scaling parameter in (1, 2)
    close: dict
        demand id -> close facility ids, creation order
    far: dict
        demand id -> far facility ids, creation order
    """

    base: PartitionedSolution
    gamma: Fraction
    close: dict
    far: dict

    def avg_close(self, demand):
        return avg_distance(self.base, self.close[demand], demand)

    def max_close(self, demand):
        return max(self.base.distance(fid, demand) for fid in self.close[demand])

    def avg_far(self, demand):
        return avg_distance(self.base, self.far[demand], demand)

    def avg(self, demand):
        return self.base.avg_conn_cost(demand)

    def to_dict(self):
        dump = self.base.to_dict()
        dump["gamma"] = format_rational(self.gamma)
        for entry in dump["demands"]:
            did = entry["id"]
            entry["close"] = list(self.close[did])
            entry["far"] = list(self.far[did])
            entry["avg_close"] = format_rational(self.avg_close(did))
            entry["max_close"] = format_rational(self.max_close(did))
            entry["avg_far"] = format_rational(self.avg_far(did))
            entry["avg"] = format_rational(self.avg(did))
        return dump


class CloseFarBuilder(AdaptivePartition):
    """AdaptivePartition selecting and clustering on 1/gamma chunks.

    Attributes
    ----------
    gamma: Fraction
        scaling parameter in (1, 2)
    core: dict
        primary id -> its Phase-1 chunk (its final close set)
    close: dict
        demand id -> set of close facility ids
    far: dict
        demand id -> set of far facility ids

    Methods
    -------
    classify()
        divide every fixed neighborhood into close and far
    """

    def __init__(self, instance, primal, gamma, dual=None):
        """
        Parameters
        ----------
        instance: FtfpInstance
            instance of the solution
        primal: FractionalSolution
            complete optimal fractional solution
        gamma: Fraction
            scaling parameter, strictly between 1 and 2
        dual: DualSolution, optional
            kept on the result for reporting only
        """

        gamma = Fraction(gamma)
        if not 1 < gamma < 2:
            raise InputError(f"gamma must lie strictly between 1 and 2, got {gamma}")
        self.gamma = gamma
        self.core = {}
        self.close = {}
        self.far = {}
        super().__init__(instance, primal, dual)

    @property
    def threshold(self):
        return ONE / self.gamma

    def _score(self, client):
        chunk = self.nearest_unit_chunk(client, self.threshold)
        leftover = self.xtilde[client]
        tcc_close = self.gamma * sum((self.distance(fid, client) * leftover[fid] for fid in chunk), ZERO)
        return tcc_close + max(self.distance(fid, client) for fid in chunk)

    def _on_primary(self, demand, chunk):
        self.core[demand] = set(chunk)

    def _on_split(self, facility, sigma):
        for group in (self.core, self.close, self.far):
            for members in group.values():
                if facility in members:
                    members.add(sigma)

    def classify(self):
        """Divide every demand's neighborhood at connection mass 1/gamma."""

        for demand in self.demands:
            did = demand.demand_id
            core = self.core[demand.assigned]
            order = sorted(self.xbar[did],
                           key=lambda fid: (self.distance(fid, demand.client), fid not in core, fid))
            chosen, total = [], ZERO
            for fid in order:
                chosen.append(fid)
                total += self.xbar[did][fid]
                if total >= self.threshold:
                    break
            if total > self.threshold:
                self._split(chosen[-1], total - self.threshold)
            self.close[did] = set(chosen)
            self.far[did] = set(self.xbar[did]) - self.close[did]

    def run(self):
        """Run both phases, classify, and return the CloseFarPartition."""

        base = super().run()
        self.classify()
        return CloseFarPartition(base, self.gamma,
                                 {did: sorted(members) for did, members in self.close.items()},
                                 {did: sorted(members) for did, members in self.far.items()})


def partition_close_far(instance, complete_primal, gamma, dual=None):
    """Partition a complete optimal solution into close/far unit demands.

    Parameters
    ----------
    instance: FtfpInstance
        instance of the solution (usually the residual instance)
    complete_primal: FractionalSolution
        complete optimal fractional solution
    gamma: Fraction
        scaling parameter in (1, 2)
    dual: DualSolution, optional
        optimal dual, stored on the base partition when given

    Returns
    -------
    CloseFarPartition

    Raises
    ------
    InputError
        gamma outside (1, 2) or the solution is not complete
    """

    return CloseFarBuilder(instance, complete_primal, gamma, dual).run()
