"""Primal and dual LP relaxation of FTFP, solved exactly.

Primal:  minimize sum_i f_i y_i + sum_ij d_ij x_ij
         s.t. y_i - x_ij >= 0, sum_i x_ij = r_j, x, y >= 0
Dual:    maximize sum_j r_j alpha_j
         s.t. sum_j beta_ij <= f_i, alpha_j - beta_ij <= d_ij, alpha, beta >= 0

Classes
-------
FractionalSolution
DualSolution
CostBreakdown

Functions
---------
solve_lp(instance)
    exact optimal primal, dual and cost decomposition
primal_violations(instance, primal)
    feasibility report for a primal solution
check_complementary_slackness(instance, primal, dual)
    optimality report for a primal/dual pair
solution_to_dict(primal, dual, breakdown)
    JSON-ready dump
"""

# Standard imports
from dataclasses import dataclass

# Local imports
from ftfp.errors import FeasibilityError, Violation
from ftfp.lp.Simplex import Simplex
from ftfp.rational import ZERO, format_rational


@dataclass
class FractionalSolution:
    """Fractional (x, y) with x[i][j] per site i and client j."""

    x: list
    y: list

    def copy(self):
        return FractionalSolution([list(row) for row in self.x], list(self.y))

    def facility_cost(self, instance):
        return sum((instance.open_cost(i) * y for i, y in enumerate(self.y)), ZERO)

    def client_cost(self, instance, j):
        return sum((instance.dist[i][j] * row[j] for i, row in enumerate(self.x)), ZERO)

    def cost(self, instance):
        return self.facility_cost(instance) + sum(
            (self.client_cost(instance, j) for j in range(instance.num_clients)), ZERO)


@dataclass
class DualSolution:
    """Dual (alpha, beta) with beta[i][j] per site i and client j."""

    alpha: list
    beta: list

    def value(self, instance):
        return sum((client.demand * a for client, a in zip(instance.clients, self.alpha)), ZERO)


@dataclass
class CostBreakdown:
    """F*, C*, per-client C*_j and LP* of a fractional solution."""

    facility_cost: object
    connection_cost: object
    per_client: list
    lp_value: object

    @classmethod
    def from_solution(cls, instance, primal):
        per_client = [primal.client_cost(instance, j) for j in range(instance.num_clients)]
        facility = primal.facility_cost(instance)
        connection = sum(per_client, ZERO)
        return cls(facility, connection, per_client, facility + connection)


def primal_violations(instance, primal):
    """Return feasibility violations of a primal solution.

    Parameters
    ----------
    instance: FtfpInstance
        instance the solution belongs to
    primal: FractionalSolution
        solution to check
    """

    report = []
    n, m = instance.num_sites, instance.num_clients
    if len(primal.y) != n or len(primal.x) != n or any(len(row) != m for row in primal.x):
        return [Violation("shape", f"solution is not sized {n}x{m}")]
    for i in range(n):
        if primal.y[i] < 0:
            report.append(Violation("opening_bounds", f"y[{i}] = {primal.y[i]} < 0", (i,)))
        for j in range(m):
            if not 0 <= primal.x[i][j] <= primal.y[i]:
                report.append(Violation("connection_bounds",
                                        f"x[{i}][{j}] = {primal.x[i][j]} outside [0, y[{i}] = {primal.y[i]}]", (i, j)))
    for j in range(m):
        total = sum((primal.x[i][j] for i in range(n)), ZERO)
        if total != instance.demand(j):
            report.append(Violation("demand_coverage", f"client {j} receives {total} of {instance.demand(j)}", (j,)))
    return report


def _solve_primal(instance):
    n, m = instance.num_sites, instance.num_clients
    x_var = lambda i, j: n + i * m + j
    lp = Simplex(n + n * m)
    for i in range(n):
        for j in range(m):
            lp.add_row({x_var(i, j): 1, i: -1}, Simplex.LE, 0)
    for j in range(m):
        lp.add_row({x_var(i, j): 1 for i in range(n)}, Simplex.EQ, instance.demand(j))
    cost = [instance.open_cost(i) for i in range(n)]
    cost += [instance.dist[i][j] for i in range(n) for j in range(m)]
    status, values, value = lp.minimize(cost)
    if status != Simplex.OPTIMAL:
        raise FeasibilityError(f"primal LP is {status}")
    x = [[values[x_var(i, j)] for j in range(m)] for i in range(n)]
    return FractionalSolution(x, values[:n]), value


def _solve_dual(instance):
    n, m = instance.num_sites, instance.num_clients
    b_var = lambda i, j: m + i * m + j
    lp = Simplex(m + n * m)
    for i in range(n):
        lp.add_row({b_var(i, j): 1 for j in range(m)}, Simplex.LE, instance.open_cost(i))
    for i in range(n):
        for j in range(m):
            lp.add_row({j: 1, b_var(i, j): -1}, Simplex.LE, instance.dist[i][j])
    cost = [-client.demand for client in instance.clients] + [ZERO] * (n * m)
    status, values, value = lp.minimize(cost)
    if status != Simplex.OPTIMAL:
        raise FeasibilityError(f"dual LP is {status}")
    beta = [[values[b_var(i, j)] for j in range(m)] for i in range(n)]
    return DualSolution(values[:m], beta), -value


def solve_lp(instance):
    """Solve the LP relaxation and its dual exactly.

    Idle opening values are trimmed to y_i = max_j x_ij afterwards, which
    only touches zero-cost sites of an optimum.

    Parameters
    ----------
    instance: FtfpInstance
        valid instance with at least one site

    Returns
    -------
    tuple
        (FractionalSolution, DualSolution, CostBreakdown)

    Raises
    ------
    FeasibilityError
        the instance has no feasible solution or duality fails
    """

    primal, primal_value = _solve_primal(instance)
    dual, dual_value = _solve_dual(instance)
    if primal_value != dual_value:
        raise FeasibilityError(f"strong duality fails: primal {primal_value} != dual {dual_value}")
    for i, row in enumerate(primal.x):
        primal.y[i] = max(row, default=ZERO)
    breakdown = CostBreakdown.from_solution(instance, primal)
    if breakdown.lp_value != primal_value:
        raise FeasibilityError(f"trimming changed the optimum: {breakdown.lp_value} != {primal_value}")
    return primal, dual, breakdown


def check_complementary_slackness(instance, primal, dual):
    """Return violations of dual feasibility and complementary slackness.

    Checks x_ij > 0 => alpha_j - beta_ij = d_ij, y_i > 0 => sum_j beta_ij
    = f_i and beta_ij > 0 => x_ij = y_i.
    """

    report = []
    n, m = instance.num_sites, instance.num_clients
    for i in range(n):
        load = sum(dual.beta[i], ZERO)
        if load > instance.open_cost(i):
            report.append(Violation("dual_opening", f"sum beta[{i}] = {load} > f = {instance.open_cost(i)}", (i,)))
        if primal.y[i] > 0 and load != instance.open_cost(i):
            report.append(Violation("opening_slackness",
                                    f"y[{i}] > 0 but sum beta = {load} != f = {instance.open_cost(i)}", (i,)))
        for j in range(m):
            alpha, beta, d = dual.alpha[j], dual.beta[i][j], instance.dist[i][j]
            if alpha < 0 or beta < 0:
                report.append(Violation("dual_sign", f"alpha[{j}] = {alpha}, beta[{i}][{j}] = {beta}", (i, j)))
            if alpha - beta > d:
                report.append(Violation("dual_connection", f"alpha - beta = {alpha - beta} > d = {d}", (i, j)))
            if primal.x[i][j] > 0 and alpha - beta != d:
                report.append(Violation("connection_slackness",
                                        f"x > 0 but alpha - beta = {alpha - beta} != d = {d}", (i, j)))
            if beta > 0 and primal.x[i][j] != primal.y[i]:
                report.append(Violation("dual_connection_slackness",
                                        f"beta > 0 but x = {primal.x[i][j]} != y = {primal.y[i]}", (i, j)))
    return report


def solution_to_dict(primal, dual, breakdown):
    """Return the JSON-ready dump of an LP solution pair."""

    return {
        "x": [[format_rational(v) for v in row] for row in primal.x],
        "y": [format_rational(v) for v in primal.y],
        "alpha": [format_rational(v) for v in dual.alpha],
        "beta": [[format_rational(v) for v in row] for row in dual.beta],
        "F_star": format_rational(breakdown.facility_cost),
        "C_star": format_rational(breakdown.connection_cost),
        "LP_star": format_rational(breakdown.lp_value)
    }
