"""Integral FTFP solutions and their feasibility check.

Facilities opened at a site are numbered 0..open_counts[site]-1 and a
connection is a (site, copy) pair.

Classes
-------
IntegralSolution

Functions
---------
validate_integral(instance, sol, demands=None)
    report every violated feasibility or cost condition
"""

# Standard imports
from dataclasses import dataclass

# Local imports
from ftfp.errors import Violation
from ftfp.rational import ZERO, format_rational


@dataclass(frozen=True)
class IntegralSolution:
    """Open facility counts per site and connection lists per client.

    Attributes
    ----------
    open_counts: tuple
        number of open facilities per site
    connections: tuple
        per client, a tuple of (site, copy) pairs
    facility_cost: Fraction
        sum of f_i * open_counts[i]
    connection_cost: Fraction
        sum of distances over all connections
    """

    open_counts: tuple
    connections: tuple
    facility_cost: object
    connection_cost: object

    @property
    def total_cost(self):
        return self.facility_cost + self.connection_cost

    @classmethod
    def build(cls, instance, open_counts, connections):
        """Create a solution, computing both costs from the instance."""

        open_counts = tuple(int(count) for count in open_counts)
        connections = tuple(tuple((int(site), int(copy)) for site, copy in row) for row in connections)
        facility = sum((instance.open_cost(i) * count for i, count in enumerate(open_counts)), ZERO)
        connection = sum((instance.dist[site][j] for j, row in enumerate(connections) for site, _ in row), ZERO)
        return cls(open_counts, connections, facility, connection)

    @classmethod
    def empty(cls, instance):
        return cls.build(instance, [0] * instance.num_sites, [[] for _ in range(instance.num_clients)])

    def to_dict(self):
        return {
            "open_counts": list(self.open_counts),
            "connections": [[list(pair) for pair in row] for row in self.connections],
            "facility_cost": format_rational(self.facility_cost),
            "connection_cost": format_rational(self.connection_cost),
            "total_cost": format_rational(self.total_cost)
        }


def validate_integral(instance, sol, demands=None):
    """Return the feasibility report of an integral solution.

    Parameters
    ----------
    instance: FtfpInstance
        instance the solution is meant for
    sol: IntegralSolution
        solution to check
    demands: list, optional
        required connections per client; defaults to the instance demands
    """

    report = []
    if demands is None:
        demands = [client.demand for client in instance.clients]
    if len(sol.open_counts) != instance.num_sites:
        return [Violation("shape", f"{len(sol.open_counts)} open counts for {instance.num_sites} sites")]
    if len(sol.connections) != instance.num_clients:
        return [Violation("shape", f"{len(sol.connections)} connection lists for {instance.num_clients} clients")]

    for i, count in enumerate(sol.open_counts):
        if count < 0:
            report.append(Violation("open_count", f"site {i} opens {count} facilities", (i,)))
    for j, row in enumerate(sol.connections):
        if len(row) != demands[j]:
            report.append(Violation("connection_count", f"client {j} has {len(row)} of {demands[j]} connections", (j,)))
        if len(set(row)) != len(row):
            report.append(Violation("duplicate_connection", f"client {j} uses a facility twice", (j,)))
        for site, copy in row:
            if not 0 <= site < instance.num_sites:
                report.append(Violation("unknown_site", f"client {j} connects to site {site}", (j, site)))
            elif not 0 <= copy < sol.open_counts[site]:
                report.append(Violation("closed_copy",
                                        f"client {j} uses copy {copy} of site {site} with {sol.open_counts[site]} open",
                                        (j, site, copy)))
    if report:
        return report

    expected = IntegralSolution.build(instance, sol.open_counts, sol.connections)
    if expected.facility_cost != sol.facility_cost:
        report.append(Violation("facility_cost", f"stored {sol.facility_cost} != recomputed {expected.facility_cost}"))
    if expected.connection_cost != sol.connection_cost:
        report.append(Violation("connection_cost",
                                f"stored {sol.connection_cost} != recomputed {expected.connection_cost}"))
    return report
