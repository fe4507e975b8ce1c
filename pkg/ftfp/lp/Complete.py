"""Completeness transform: every connection uses a site fully or not at all.

A pair (i, k) with 0 < x_ik < y_i is removed by splitting site i into i
(keeping y_i = x_ik) and a new site i' (y_i' = y_i - x_ik); for every
client j, x_i'j = max(x_ij - x_ik, 0) and x_ij = min(x_ij, x_ik).

Functions
---------
partial_pairs(primal)
    (site, client) pairs with 0 < x < y
make_complete(instance, primal)
    split sites until the solution is complete
extend_dual(dual, instance)
    copy dual rows of parent sites to their split sites
"""

# Local imports
from ftfp.errors import FeasibilityError, InputError
from ftfp.lp.LPSolve import DualSolution, primal_violations
from ftfp.rational import ZERO


def partial_pairs(primal):
    """Return (site, client) pairs with 0 < x_ij < y_i, client-major."""

    num_clients = len(primal.x[0]) if primal.x else 0
    return [(i, j) for j in range(num_clients) for i in range(len(primal.y))
            if 0 < primal.x[i][j] < primal.y[i]]


def _rebalance(instance, primal, j):
    """Refill client j nearest-site-first; raise if that lowers its cost."""

    before = primal.client_cost(instance, j)
    need = instance.demand(j)
    for i in sorted(range(instance.num_sites), key=lambda i: (instance.dist[i][j], i)):
        take = min(primal.y[i], need)
        primal.x[i][j] = take
        need -= take
    if primal.client_cost(instance, j) != before:
        raise InputError(f"client {j} is not served optimally by the fractional solution")


def make_complete(instance, primal):
    """Split sites until x_ij > 0 implies x_ij = y_i.

    Clients that use more than one site partially are first refilled
    nearest-site-first, which keeps an optimal cost, so at most one split
    per client is needed. New sites copy the parent's cost and distances
    and keep its `origin`.

    Parameters
    ----------
    instance: FtfpInstance
        instance the solution belongs to
    primal: FractionalSolution
        feasible (and optimal) fractional solution

    Returns
    -------
    tuple
        (completed FtfpInstance, completed FractionalSolution)
    """

    report = primal_violations(instance, primal)
    if report:
        raise FeasibilityError(f"cannot complete an infeasible solution: {report[0]}")

    solution = primal.copy()
    pairs = partial_pairs(solution)
    for j in sorted({j for _, j in pairs}):
        if sum(1 for _, k in pairs if k == j) > 1:
            _rebalance(instance, solution, j)

    pairs = partial_pairs(solution)
    while pairs:
        i, k = pairs[0]
        instance, _ = instance.split_site(i)
        cut = solution.x[i][k]
        solution.y.append(solution.y[i] - cut)
        solution.y[i] = cut
        solution.x.append([max(value - cut, ZERO) for value in solution.x[i]])
        solution.x[i] = [min(value, cut) for value in solution.x[i]]
        pairs = partial_pairs(solution)
    return instance, solution


def extend_dual(dual, instance):
    """Return the dual for a completed instance (split sites copy beta rows)."""

    beta = [list(dual.beta[site.origin]) if site.site_id >= len(dual.beta) else list(dual.beta[site.site_id])
            for site in instance.sites]
    return DualSolution(list(dual.alpha), beta)
