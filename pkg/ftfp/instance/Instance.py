"""FTFP problem instances and their metric validation.

Classes
-------
Site
Client
FtfpInstance

Functions
---------
validate(instance)
    report every violated instance invariant
"""

# Standard imports
from dataclasses import dataclass, replace
from fractions import Fraction
import itertools

# Local imports
from ftfp.errors import Violation


@dataclass(frozen=True)
class Site:
    """A location where any number of facilities may be opened.

    Attributes
    ----------
    site_id: int
        index of the site (row of the distance matrix)
    open_cost: Fraction
        cost f_i of opening one facility at the site
    origin: int
        index of the site in the instance the site was split from; equal
        to site_id for sites that were never split
    """

    site_id: int
    open_cost: Fraction
    origin: int


@dataclass(frozen=True)
class Client:
    """A client that needs `demand` connections to distinct facilities."""

    client_id: int
    demand: int


@dataclass(frozen=True)
class FtfpInstance:
    """Fault-tolerant facility placement instance.

    Immutable, so it can be shared between threads and used as a dict key.

    Attributes
    ----------
    sites: tuple
        Site records in row order
    clients: tuple
        Client records in column order
    dist: tuple
        |F| x |C| nested tuple of Fraction distances d_ij

    Methods
    -------
    build(open_costs, demands, dist)
        create an instance from plain lists
    split_site(site)
        append a copy of a site (same cost and distances)
    with_clients(columns, demands)
        restrict to a subset of clients with new demands
    root_instance()
        drop split sites, keeping the sites the instance started with
    """

    sites: tuple
    clients: tuple
    dist: tuple

    @classmethod
    def build(cls, open_costs, demands, dist):
        """Create an instance from plain lists.

        Parameters
        ----------
        open_costs: list
            opening cost per site (anything Fraction accepts)
        demands: list
            integer demand per client
        dist: list
            |F| x |C| nested list of distances
        """

        sites = tuple(Site(i, Fraction(cost), i) for i, cost in enumerate(open_costs))
        clients = tuple(Client(j, int(demand)) for j, demand in enumerate(demands))
        matrix = tuple(tuple(Fraction(value) for value in row) for row in dist)
        return cls(sites, clients, matrix)

    @property
    def num_sites(self):
        return len(self.sites)

    @property
    def num_clients(self):
        return len(self.clients)

    @property
    def max_demand(self):
        """R = max_j r_j (0 for an instance without clients)."""

        return max((client.demand for client in self.clients), default=0)

    def open_cost(self, site):
        return self.sites[site].open_cost

    def demand(self, client):
        return self.clients[client].demand

    def split_site(self, site):
        """Return (instance, new_site) with a copy of `site` appended."""

        parent = self.sites[site]
        new_id = self.num_sites
        sites = self.sites + (Site(new_id, parent.open_cost, parent.origin),)
        return replace(self, sites=sites, dist=self.dist + (self.dist[site],)), new_id

    def with_clients(self, columns, demands):
        """Return an instance keeping only the given client columns.

        Parameters
        ----------
        columns: list
            indices of the clients to keep, in their new order
        demands: list
            new demand for each kept client
        """

        clients = tuple(Client(k, int(demand)) for k, demand in enumerate(demands))
        dist = tuple(tuple(row[j] for j in columns) for row in self.dist)
        return replace(self, clients=clients, dist=dist)

    def root_instance(self):
        """Return the instance made of the sites that were never split."""

        roots = [site for site in self.sites if site.origin == site.site_id]
        return replace(self, sites=tuple(roots), dist=tuple(self.dist[site.site_id] for site in roots))


def validate(instance):
    """Return the list of violated instance invariants (empty when valid).

    The metric check is the exhaustive bipartite 4-point inequality
    d_ij <= d_ij' + d_i'j' + d_i'j, with witnesses (i, i', j, j').

    Parameters
    ----------
    instance: FtfpInstance
        instance to check
    """

    report = []
    n, m = instance.num_sites, instance.num_clients
    for site in instance.sites:
        if site.open_cost < 0:
            report.append(Violation("open_cost", f"open cost {site.open_cost} is negative", (site.site_id,)))
    for client in instance.clients:
        if client.demand < 1:
            report.append(Violation("demand", f"demand {client.demand} must be positive", (client.client_id,)))
    if len(instance.dist) != n or any(len(row) != m for row in instance.dist):
        report.append(Violation("shape", f"distance matrix is not {n}x{m}"))
        return report

    d = instance.dist
    for i, j in itertools.product(range(n), range(m)):
        if d[i][j] < 0:
            report.append(Violation("distance", f"distance {d[i][j]} is negative", (i, j)))
    for i, j in itertools.product(range(n), range(m)):
        for i2, j2 in itertools.product(range(n), range(m)):
            path = d[i][j2] + d[i2][j2] + d[i2][j]
            if d[i][j] > path:
                report.append(Violation("metric", f"d[{i}][{j}] = {d[i][j]} > {path}", (i, i2, j, j2)))
    return report
