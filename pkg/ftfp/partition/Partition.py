"""Partitioned fractional solutions: unit demands and split facilities.

Classes
-------
Facility
Demand
PartitionedSolution
"""

# Standard imports
from dataclasses import dataclass

# Local imports
from ftfp.rational import ZERO, format_rational


@dataclass
class Facility:
    """One openable copy created at a site; facility_id is its creation order."""

    facility_id: int
    site: int
    ybar: object


@dataclass
class Demand:
    """One unit of a client's demand; demand_id is its creation order.

    A primary demand is assigned to itself.
    """

    demand_id: int
    client: int
    primary: bool = False
    assigned: int = None


@dataclass
class PartitionedSolution:
    """Partition (xbar, ybar) of a fractional solution.

    Attributes
    ----------
    instance: FtfpInstance
        instance the partition refers to
    facilities: list
        Facility records in creation order
    demands: list
        Demand records in creation order
    xbar: dict
        demand id -> {facility id: connection value}, positive entries only
    alpha: list
        optimal dual alpha per client, or None when not used

    Methods
    -------
    neighborhood(demand)
        facility ids with positive xbar, in creation order
    avg_conn_cost(demand)
        C^avg of a demand
    """

    instance: object
    facilities: list
    demands: list
    xbar: dict
    alpha: list = None

    @property
    def primaries(self):
        return [demand.demand_id for demand in self.demands if demand.primary]

    def assign(self, demand):
        return self.demands[demand].assigned

    def neighborhood(self, demand):
        return sorted(self.xbar[demand])

    def distance(self, facility, demand):
        return self.instance.dist[self.facilities[facility].site][self.demands[demand].client]

    def avg_conn_cost(self, demand):
        """C^avg = sum over the neighborhood of d * xbar."""

        return sum((self.distance(fid, demand) * value for fid, value in self.xbar[demand].items()), ZERO)

    def alpha_of_demand(self, demand):
        return self.alpha[self.demands[demand].client]

    def demands_of(self, client):
        return [demand.demand_id for demand in self.demands if demand.client == client]

    def siblings(self, demand):
        client = self.demands[demand].client
        return [other for other in self.demands_of(client) if other != demand]

    def to_dict(self):
        return {
            "facilities": [{"id": f.facility_id, "site": f.site, "origin": self.instance.sites[f.site].origin,
                            "ybar": format_rational(f.ybar)} for f in self.facilities],
            "demands": [{"id": d.demand_id, "client": d.client, "primary": d.primary, "assigned": d.assigned}
                        for d in self.demands],
            "xbar": [[fid, did, format_rational(value)]
                     for did in sorted(self.xbar) for fid, value in sorted(self.xbar[did].items())]
        }
