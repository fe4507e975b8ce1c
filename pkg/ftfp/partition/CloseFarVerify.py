"""Exact property checks of a close/far partition.

Functions
---------
verify_properties_cf(cfp, primal=None)
    check the base partition and every close/far property
"""

# Local imports
from ftfp.errors import Violation
from ftfp.partition.PartitionVerify import _check_mass
from ftfp.rational import ONE, ZERO


def _check_split(cfp):
    report = []
    ps, gamma = cfp.base, cfp.gamma
    for demand in ps.demands:
        did = demand.demand_id
        close, far = set(cfp.close[did]), set(cfp.far[did])
        if close & far or close | far != set(ps.xbar[did]):
            report.append(Violation("close_far_split", f"close and far of demand {did} do not split its neighborhood",
                                    (did,)))
            continue
        mass = sum((ps.xbar[did][fid] for fid in close), ZERO)
        if mass != ONE / gamma:
            report.append(Violation("close_mass", f"demand {did} has close mass {mass} != {ONE / gamma}", (did,)))
        if close and far:
            nearest_far = min(ps.distance(fid, did) for fid in far)
            if cfp.max_close(did) > nearest_far:
                report.append(Violation("close_order",
                                        f"demand {did} has close distance {cfp.max_close(did)} > far {nearest_far}",
                                        (did,)))
        if close and far and mass == ONE / gamma:
            mixed = cfp.avg_close(did) / gamma + (gamma - 1) / gamma * cfp.avg_far(did)
            if mixed != cfp.avg(did):
                report.append(Violation("avg_identity", f"demand {did}: {mixed} != C^avg {cfp.avg(did)}", (did,)))
    return report


def _check_primaries(cfp, primal):
    report = []
    ps = cfp.base
    primaries = ps.primaries
    for position, kappa in enumerate(primaries):
        for other in primaries[position + 1:]:
            shared = sorted(set(cfp.close[kappa]) & set(cfp.close[other]))
            if shared:
                report.append(Violation("primary_close_disjoint", f"primaries {kappa} and {other} share {shared}",
                                        (kappa, other)))

    if primal is not None:
        opened = [ZERO] * ps.instance.num_sites
        for kappa in primaries:
            for fid in cfp.close[kappa]:
                opened[ps.facilities[fid].site] += ps.xbar[kappa][fid]
        for i, total in enumerate(opened):
            if total > primal.y[i]:
                report.append(Violation("primary_close_opening",
                                        f"close sets of primaries use {total} > y {primal.y[i]} at site {i}", (i,)))

    for demand in ps.demands:
        nu, kappa = demand.demand_id, demand.assigned
        if kappa is None or not ps.demands[kappa].primary:
            report.append(Violation("assigned_close_overlap", f"demand {nu} is assigned to non-primary {kappa}", (nu,)))
            continue
        if not set(cfp.close[nu]) & set(cfp.close[kappa]):
            report.append(Violation("assigned_close_overlap",
                                    f"close sets of demand {nu} and primary {kappa} are disjoint", (nu, kappa)))
        own = cfp.avg_close(nu) + cfp.max_close(nu)
        anchor = cfp.avg_close(kappa) + cfp.max_close(kappa)
        if own < anchor:
            report.append(Violation("assigned_close_cost", f"demand {nu} scores {own} < primary {kappa} {anchor}",
                                    (nu, kappa)))
    return report


def _check_siblings(cfp):
    report = []
    ps = cfp.base
    for demand in ps.demands:
        nu = demand.demand_id
        for sibling in ps.siblings(nu):
            if sibling > nu and set(ps.xbar[nu]) & set(ps.xbar[sibling]):
                report.append(Violation("sibling_disjoint", f"siblings {nu} and {sibling} share a facility",
                                        (nu, sibling)))
            if set(ps.xbar[sibling]) & set(cfp.close[demand.assigned]):
                report.append(Violation("sibling_close_disjoint",
                                        f"sibling {sibling} of {nu} meets the close set of {demand.assigned}",
                                        (sibling, nu, demand.assigned)))
    return report


def verify_properties_cf(cfp, primal=None):
    """Return every violated property of a close/far partition.

    Parameters
    ----------
    cfp: CloseFarPartition
        partition to check
    primal: FractionalSolution, optional
        complete solution that was partitioned; enables the site mass
        checks and the bound on primary close sets per site
    """

    ps = cfp.base
    report = _check_mass(ps.instance, primal, ps.facilities, ps.xbar, ps.demands)
    for j in range(ps.instance.num_clients):
        count = len(ps.demands_of(j))
        if count != ps.instance.demand(j):
            report.append(Violation("demand_count", f"client {j} has {count} of {ps.instance.demand(j)} demands", (j,)))
    for facility in ps.facilities:
        if cfp.gamma * facility.ybar > 1:
            report.append(Violation("scaled_opening",
                                    f"gamma * ybar of facility {facility.facility_id} is {cfp.gamma * facility.ybar}",
                                    (facility.facility_id,)))
    split = _check_split(cfp)
    report.extend(split)
    if split:
        return report
    report.extend(_check_primaries(cfp, primal))
    report.extend(_check_siblings(cfp))
    return report
