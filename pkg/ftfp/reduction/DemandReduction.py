"""Demand reduction: integral floors plus a residual with small demands.

An optimal complete solution (x*, y*) is split into x_hat = floor(x*),
y_hat = floor(y*) and the residual (x* - x_hat, y* - y_hat). Every
residual value is below 1, so each residual demand is at most |F|.

Classes
-------
ReductionResult

Functions
---------
reduce(instance, complete_primal)
    split a complete solution into integral part and residual instance
recombine(reduction, residual_solution)
    add a residual integral solution back to the integral part
verify_reduction(reduction, complete_primal)
    check the decomposition identities
"""

# Standard imports
from dataclasses import dataclass

# Local imports
from ftfp.errors import FeasibilityError, InputError, Violation
from ftfp.lp.LPSolve import FractionalSolution, primal_violations
from ftfp.rational import floor_int
from ftfp.rounding.IntegralSolution import IntegralSolution, validate_integral


@dataclass
class ReductionResult:
    """Integral part and residual of a reduced fractional solution.

    Attributes
    ----------
    instance: FtfpInstance
        the (completed) instance that was reduced
    open_floor: list
        y_hat per site
    connect_floor: list
        x_hat[i][j] per site and client
    integral_demands: list
        r_hat per client
    residual_instance: FtfpInstance
        same sites, clients with positive residual demand only
    residual_fractional: FractionalSolution
        (x_dot, y_dot) indexed by residual clients
    residual_clients: list
        residual client index -> client index of `instance`
    """

    instance: object
    open_floor: list
    connect_floor: list
    integral_demands: list
    residual_instance: object
    residual_fractional: FractionalSolution
    residual_clients: list

    @property
    def residual_demands(self):
        """Residual demand per client of `instance` (0 for dropped clients)."""

        demands = [0] * self.instance.num_clients
        for k, j in enumerate(self.residual_clients):
            demands[j] = self.residual_instance.demand(k)
        return demands

    @property
    def integral_part(self):
        """Integral part as a solution; client j uses copies 0..x_hat-1 of each site."""

        connections = [[(i, copy) for i in range(self.instance.num_sites) for copy in range(self.connect_floor[i][j])]
                       for j in range(self.instance.num_clients)]
        return IntegralSolution.build(self.instance, self.open_floor, connections)

    def to_dict(self):
        return {
            "open_floor": list(self.open_floor),
            "connect_floor": [list(row) for row in self.connect_floor],
            "integral_demands": list(self.integral_demands),
            "residual_demands": self.residual_demands,
            "residual_clients": list(self.residual_clients),
            "integral_part": self.integral_part.to_dict()
        }


def reduce(instance, complete_primal):
    """Split an optimal complete solution into floors and residual.

    Parameters
    ----------
    instance: FtfpInstance
        completed instance
    complete_primal: FractionalSolution
        optimal solution with x_ij in {0, y_i}

    Raises
    ------
    InputError
        the solution is infeasible or not complete (names the pair)
    """

    report = primal_violations(instance, complete_primal)
    if report:
        raise InputError(f"cannot reduce an infeasible solution: {report[0]}")
    x, y = complete_primal.x, complete_primal.y
    n, m = instance.num_sites, instance.num_clients
    for i in range(n):
        for j in range(m):
            if 0 < x[i][j] != y[i]:
                raise InputError(f"solution is not complete at site {i}, client {j}: x = {x[i][j]}, y = {y[i]}")

    open_floor = [floor_int(value) for value in y]
    connect_floor = [[floor_int(value) for value in row] for row in x]
    integral_demands = [sum(connect_floor[i][j] for i in range(n)) for j in range(m)]
    residual_demands = [instance.demand(j) - integral_demands[j] for j in range(m)]
    kept = [j for j in range(m) if residual_demands[j] > 0]

    residual = FractionalSolution([[x[i][j] - connect_floor[i][j] for j in kept] for i in range(n)],
                                  [y[i] - open_floor[i] for i in range(n)])
    residual_instance = instance.with_clients(kept, [residual_demands[j] for j in kept])
    return ReductionResult(instance, open_floor, connect_floor, integral_demands,
                           residual_instance, residual, kept)


def recombine(reduction, residual_solution):
    """Add an integral residual solution to the integral part.

    Split sites collapse onto their origin site; at each origin site the
    integral part takes the lowest copy numbers, then the residual.

    Parameters
    ----------
    reduction: ReductionResult
        output of reduce
    residual_solution: IntegralSolution
        feasible solution of reduction.residual_instance

    Returns
    -------
    IntegralSolution
        solution of the instance before completion

    Raises
    ------
    FeasibilityError
        the residual solution is infeasible for the residual instance
    """

    report = validate_integral(reduction.residual_instance, residual_solution)
    if report:
        raise FeasibilityError(f"residual solution is infeasible: {report[0]}")

    completed = reduction.instance
    root = completed.root_instance()
    index = {site.site_id: position for position, site in enumerate(root.sites)}
    origin = [index[site.origin] for site in completed.sites]

    next_free = [0] * root.num_sites
    integral_base, residual_base = [], []
    for s in range(completed.num_sites):
        integral_base.append(next_free[origin[s]])
        next_free[origin[s]] += reduction.open_floor[s]
    for s in range(completed.num_sites):
        residual_base.append(next_free[origin[s]])
        next_free[origin[s]] += residual_solution.open_counts[s]

    connections = [[] for _ in range(completed.num_clients)]
    for j in range(completed.num_clients):
        for s in range(completed.num_sites):
            for copy in range(reduction.connect_floor[s][j]):
                connections[j].append((origin[s], integral_base[s] + copy))
    for k, j in enumerate(reduction.residual_clients):
        for s, copy in residual_solution.connections[k]:
            connections[j].append((origin[s], residual_base[s] + copy))
    return IntegralSolution.build(root, next_free, connections)


def verify_reduction(reduction, complete_primal):
    """Check that floors plus residual reproduce the solution and r_dot <= |F|.

    Parameters
    ----------
    reduction: ReductionResult
        output of reduce
    complete_primal: FractionalSolution
        solution that was reduced
    """

    report = []
    instance, residual = reduction.instance, reduction.residual_fractional
    column = {j: k for k, j in enumerate(reduction.residual_clients)}
    for i in range(instance.num_sites):
        if reduction.open_floor[i] + residual.y[i] != complete_primal.y[i]:
            report.append(Violation("reduction_identity", f"opening at site {i} does not add up", (i,)))
        for j in range(instance.num_clients):
            rest = residual.x[i][column[j]] if j in column else 0
            if reduction.connect_floor[i][j] + rest != complete_primal.x[i][j]:
                report.append(Violation("reduction_identity", f"connection ({i}, {j}) does not add up", (i, j)))
    for j, demand in enumerate(reduction.residual_demands):
        if demand > instance.num_sites:
            report.append(Violation("residual_demand", f"client {j} keeps {demand} > {instance.num_sites}", (j,)))
        if demand + reduction.integral_demands[j] != instance.demand(j):
            report.append(Violation("reduction_identity", f"demands of client {j} do not add up", (j,)))
    return report
