"""Exact property checks of a partitioned fractional solution.

Every check returns a list of Violation; an empty list means the
partition is valid.

Functions
---------
verify_properties(ps, primal, dual=None)
    check partition, completeness, primary and sibling properties
verify_iteration(state, instance, primal)
    check completeness and mass conservation after a Phase-1 iteration
"""

# Local imports
from ftfp.errors import Violation
from ftfp.rational import ZERO


def _site_sums(instance, facilities, xbar, demands):
    """Sum xbar per (site, client) and ybar per site."""

    connection = [[ZERO] * instance.num_clients for _ in range(instance.num_sites)]
    opening = [ZERO] * instance.num_sites
    for facility in facilities:
        opening[facility.site] += facility.ybar
    for did, values in xbar.items():
        client = demands[did].client
        for fid, value in values.items():
            connection[facilities[fid].site][client] += value
    return connection, opening


def _check_mass(instance, primal, facilities, xbar, demands):
    report = []
    for did, values in sorted(xbar.items()):
        total = sum(values.values(), ZERO)
        if total != 1:
            report.append(Violation("demand_mass", f"demand {did} has total connection {total}", (did,)))
        for fid, value in sorted(values.items()):
            if value != facilities[fid].ybar:
                report.append(Violation("completeness", f"xbar[{fid}][{did}] = {value} != ybar {facilities[fid].ybar}",
                                        (fid, did)))
    if primal is None:
        return report
    connection, opening = _site_sums(instance, facilities, xbar, demands)
    for i in range(instance.num_sites):
        if opening[i] != primal.y[i]:
            report.append(Violation("site_opening_mass", f"site {i} facilities sum to {opening[i]} != {primal.y[i]}",
                                    (i,)))
        for j in range(instance.num_clients):
            if connection[i][j] != primal.x[i][j]:
                report.append(Violation("site_connection_mass",
                                        f"site {i}, client {j} sums to {connection[i][j]} != {primal.x[i][j]}",
                                        (i, j)))
    return report


def _check_counts(ps):
    report = []
    instance = ps.instance
    for j in range(instance.num_clients):
        count = len(ps.demands_of(j))
        if count != instance.demand(j):
            report.append(Violation("demand_count", f"client {j} has {count} of {instance.demand(j)} demands", (j,)))
    bound = instance.num_sites + 2 * instance.max_demand * instance.num_clients ** 2
    if len(ps.facilities) > bound:
        report.append(Violation("facility_count", f"{len(ps.facilities)} facilities exceed {bound}"))
    return report


def _check_primaries(ps, primal, alpha):
    report = []
    primaries = ps.primaries
    for position, kappa in enumerate(primaries):
        for other in primaries[position + 1:]:
            shared = sorted(set(ps.xbar[kappa]) & set(ps.xbar[other]))
            if shared:
                report.append(Violation("primary_disjoint", f"primaries {kappa} and {other} share {shared}",
                                        (kappa, other)))

    opened = [ZERO] * ps.instance.num_sites
    for kappa in primaries:
        for fid, value in ps.xbar[kappa].items():
            opened[ps.facilities[fid].site] += value
    for i, total in enumerate(opened):
        if total > primal.y[i]:
            report.append(Violation("primary_opening", f"primaries use {total} > y {primal.y[i]} at site {i}", (i,)))

    for demand in ps.demands:
        nu, kappa = demand.demand_id, demand.assigned
        if kappa is None or not ps.demands[kappa].primary or (demand.primary and kappa != nu):
            report.append(Violation("assigned_overlap", f"demand {nu} is assigned to non-primary {kappa}", (nu,)))
            continue
        if not set(ps.xbar[nu]) & set(ps.xbar[kappa]):
            report.append(Violation("assigned_overlap", f"demand {nu} shares no facility with primary {kappa}",
                                    (nu, kappa)))
        if alpha is not None:
            own = ps.avg_conn_cost(nu) + alpha[demand.client]
            anchor = ps.avg_conn_cost(kappa) + alpha[ps.demands[kappa].client]
            if own < anchor:
                report.append(Violation("assigned_cost", f"demand {nu} scores {own} < primary {kappa} {anchor}",
                                        (nu, kappa)))
    return report


def _check_siblings(ps):
    report = []
    for demand in ps.demands:
        nu = demand.demand_id
        for sibling in ps.siblings(nu):
            if sibling > nu and set(ps.xbar[nu]) & set(ps.xbar[sibling]):
                report.append(Violation("sibling_disjoint", f"siblings {nu} and {sibling} share a facility",
                                        (nu, sibling)))
            kappa = demand.assigned
            if kappa is not None and set(ps.xbar[sibling]) & set(ps.xbar[kappa]):
                report.append(Violation("sibling_primary_disjoint",
                                        f"sibling {sibling} of {nu} meets primary {kappa}", (sibling, nu, kappa)))
    return report


def _check_alpha(ps, alpha):
    report = []
    for demand in ps.demands:
        bound = alpha[demand.client]
        for fid in ps.neighborhood(demand.demand_id):
            distance = ps.distance(fid, demand.demand_id)
            if distance > bound:
                report.append(Violation("alpha_bound", f"d[{fid}][{demand.demand_id}] = {distance} > alpha {bound}",
                                        (fid, demand.demand_id)))
    return report


def verify_properties(ps, primal, dual=None):
    """Return every violated partition property of `ps`.

    Parameters
    ----------
    ps: PartitionedSolution
        partition to check
    primal: FractionalSolution
        complete solution that was partitioned
    dual: DualSolution, optional
        optimal dual; defaults to the alpha stored on `ps`. Without either,
        the clauses that need alpha are skipped.
    """

    alpha = list(dual.alpha) if dual is not None else ps.alpha
    report = _check_mass(ps.instance, primal, ps.facilities, ps.xbar, ps.demands)
    report.extend(_check_counts(ps))
    report.extend(_check_primaries(ps, primal, alpha))
    report.extend(_check_siblings(ps))
    if alpha is not None:
        report.extend(_check_alpha(ps, alpha))
    return report


def verify_iteration(state, instance, primal):
    """Check completeness of xbar and leftover and mass conservation.

    Parameters
    ----------
    state: PartitionState
        snapshot taken after a Phase-1 iteration
    instance: FtfpInstance
        instance being partitioned
    primal: FractionalSolution
        complete solution being partitioned
    """

    report = []
    for did, values in sorted(state.xbar.items()):
        for fid, value in sorted(values.items()):
            if value != state.facilities[fid].ybar:
                report.append(Violation("completeness", f"xbar[{fid}][{did}] = {value} after {state.iteration}",
                                        (fid, did)))
    for j, values in enumerate(state.xtilde):
        for fid, value in sorted(values.items()):
            if value != state.facilities[fid].ybar:
                report.append(Violation("leftover_completeness", f"xtilde[{fid}][{j}] = {value}", (fid, j)))

    connection, _ = _site_sums(instance, state.facilities, state.xbar, state.demands)
    for j, values in enumerate(state.xtilde):
        for fid, value in values.items():
            connection[state.facilities[fid].site][j] += value
    for i in range(instance.num_sites):
        for j in range(instance.num_clients):
            if connection[i][j] != primal.x[i][j]:
                report.append(Violation("conservation", f"site {i}, client {j} holds {connection[i][j]} "
                                        f"!= {primal.x[i][j]} after {state.iteration}", (i, j)))
    return report
