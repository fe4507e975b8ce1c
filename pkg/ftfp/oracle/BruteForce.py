"""Exact integral optimum of tiny FTFP instances by enumeration.

For a fixed opening vector y every client independently takes its r_j
cheapest distinct open copies, since copies have no capacity and the
distinct-facility constraint only binds within one client. No client
uses more than R = max_j r_j copies of a site, so y ranges over
{0..R}^|F|.

Classes
-------
OracleConfig

Functions
---------
brute_force_opt(instance, cfg)
    optimal IntegralSolution, lexicographically first y on ties
"""

# Standard imports
import itertools

# Local imports
from ftfp.errors import InputError
from ftfp.rational import ZERO
from ftfp.rounding.IntegralSolution import IntegralSolution

# Third-party imports
from pydantic import BaseModel, ConfigDict, PositiveInt


class OracleConfig(BaseModel):
    """Bounds the exact oracles refuse to exceed."""

    model_config = ConfigDict(extra="forbid")

    max_sites: PositiveInt = 6
    max_clients: PositiveInt = 5
    max_total_enumeration: PositiveInt = 100000


def enumeration_size(instance):
    return (instance.max_demand + 1) ** instance.num_sites


def _connect(instance, open_counts):
    """Cheapest r_j distinct open copies per client, or None if too few."""

    connections, cost = [], ZERO
    order = [sorted(range(instance.num_sites), key=lambda i: (instance.dist[i][j], i))
             for j in range(instance.num_clients)]
    for j, sites in enumerate(order):
        need, row = instance.demand(j), []
        for i in sites:
            take = min(open_counts[i], need - len(row))
            row.extend((i, copy) for copy in range(take))
            cost += instance.dist[i][j] * take
        if len(row) < need:
            return None, None
        connections.append(row)
    return connections, cost


def brute_force_opt(instance, cfg=None):
    """Return an optimal integral solution by enumerating y.

    Parameters
    ----------
    instance: FtfpInstance
        tiny valid instance
    cfg: OracleConfig, optional
        enumeration bounds, defaults to OracleConfig()

    Raises
    ------
    InputError
        the instance exceeds a bound of `cfg`
    """

    cfg = cfg or OracleConfig()
    if instance.num_sites > cfg.max_sites or instance.num_clients > cfg.max_clients:
        raise InputError(f"oracle refuses {instance.num_sites} sites x {instance.num_clients} clients "
                         f"(bounds {cfg.max_sites} x {cfg.max_clients})")
    size = enumeration_size(instance)
    if size > cfg.max_total_enumeration:
        raise InputError(f"oracle refuses {size} opening vectors (bound {cfg.max_total_enumeration})")

    best, best_cost = None, None
    for open_counts in itertools.product(range(instance.max_demand + 1), repeat=instance.num_sites):
        facility = sum((instance.open_cost(i) * count for i, count in enumerate(open_counts)), ZERO)
        if best_cost is not None and facility >= best_cost:
            continue
        connections, connection = _connect(instance, open_counts)
        if connections is None:
            continue
        if best_cost is None or facility + connection < best_cost:
            best, best_cost = (open_counts, connections), facility + connection
    if best is None:
        raise InputError("instance has no feasible integral solution")
    return IntegralSolution.build(instance, *best)
