"""Exact two-phase tableau simplex over Fractions.

Classes
-------
Simplex
"""

# Standard imports
from fractions import Fraction

# Local imports
from ftfp.rational import ONE, ZERO


class Simplex:
    """Minimizes c.x subject to linear rows and x >= 0, exactly.

    Bland's rule is used in both phases: the entering column is the
    lowest-index column with negative reduced cost and ties in the ratio
    test leave on the lowest basic variable, so the method cannot cycle.

    Attributes
    ----------
    num_vars: int
        number of structural variables
    rows: list
        (coefficients dict, sense, rhs) per constraint

    Methods
    -------
    add_row(coeffs, sense, rhs)
        append a constraint
    minimize(cost)
        solve and return (status, values, objective)
    """

    LE = "<="
    GE = ">="
    EQ = "="
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    FLIP = {LE: GE, GE: LE, EQ: EQ}

    def __init__(self, num_vars):
        """
        Parameters
        ----------
        num_vars: int
            number of structural variables
        """

        self.num_vars = num_vars
        self.rows = []
        self.pivots = 0

    def add_row(self, coeffs, sense, rhs):
        """Append the constraint sum(coeffs[v] * x_v) `sense` rhs.

        Parameters
        ----------
        coeffs: dict
            variable index -> coefficient
        sense: str
            one of "<=", ">=", "="
        rhs: Fraction
            right hand side
        """

        if sense not in self.FLIP:
            raise ValueError(f"unknown constraint sense {sense!r}")
        self.rows.append(({v: Fraction(c) for v, c in coeffs.items() if c}, sense, Fraction(rhs)))

    def minimize(self, cost):
        """Solve the program for the given cost vector.

        Returns
        -------
        tuple
            (status, values, objective); values and objective are None
            unless status is "optimal"
        """

        tableau, basis, first_artificial, width = self.__initial_tableau()
        if first_artificial < width:
            phase_one = [ZERO] * first_artificial + [ONE] * (width - first_artificial)
            self.__optimize(tableau, basis, phase_one, width)
            if sum(phase_one[var] * tableau[r][-1] for r, var in enumerate(basis)) > 0:
                return self.INFEASIBLE, None, None
            tableau, basis = self.__drop_artificials(tableau, basis, first_artificial)
            width = first_artificial

        full_cost = [Fraction(c) for c in cost] + [ZERO] * (width - self.num_vars)
        if self.__optimize(tableau, basis, full_cost, width) == self.UNBOUNDED:
            return self.UNBOUNDED, None, None

        values = [ZERO] * self.num_vars
        for r, var in enumerate(basis):
            if var < self.num_vars:
                values[var] = tableau[r][-1]
        return self.OPTIMAL, values, sum(c * v for c, v in zip(full_cost, values))

    def __initial_tableau(self):
        """Build the tableau with slack, surplus and artificial columns."""

        n = self.num_vars
        lines = []
        for coeffs, sense, rhs in self.rows:
            row = [ZERO] * n
            for var, value in coeffs.items():
                row[var] = value
            if rhs < 0:
                row, rhs, sense = [-v for v in row], -rhs, self.FLIP[sense]
            lines.append((row, sense, rhs))

        slack, col = {}, n
        for r, (_, sense, _) in enumerate(lines):
            if sense != self.EQ:
                slack[r] = col
                col += 1
        first_artificial = col
        artificial = {}
        for r, (_, sense, _) in enumerate(lines):
            if sense != self.LE:
                artificial[r] = col
                col += 1
        width = col

        tableau, basis = [], []
        for r, (row, sense, rhs) in enumerate(lines):
            line = row + [ZERO] * (width - n) + [rhs]
            if r in slack:
                line[slack[r]] = ONE if sense == self.LE else -ONE
            if r in artificial:
                line[artificial[r]] = ONE
                basis.append(artificial[r])
            else:
                basis.append(slack[r])
            tableau.append(line)
        return tableau, basis, first_artificial, width

    def __optimize(self, tableau, basis, cost, width):
        """Run Bland pivots until optimal or unbounded."""

        reduced = list(cost[:width])
        for r, var in enumerate(basis):
            if cost[var]:
                reduced = [rc - cost[var] * a for rc, a in zip(reduced, tableau[r][:width])]

        while True:
            entering = next((j for j in range(width) if reduced[j] < 0), None)
            if entering is None:
                return self.OPTIMAL
            leaving = None
            for r, line in enumerate(tableau):
                if line[entering] > 0:
                    key = (line[-1] / line[entering], basis[r])
                    if leaving is None or key < leaving[0]:
                        leaving = (key, r)
            if leaving is None:
                return self.UNBOUNDED
            r = leaving[1]
            self.__pivot(tableau, r, entering)
            basis[r] = entering
            factor = reduced[entering]
            reduced = [rc - factor * a if a else rc for rc, a in zip(reduced, tableau[r][:width])]

    def __pivot(self, tableau, r, col):
        self.pivots += 1
        pivot_line = tableau[r]
        value = pivot_line[col]
        if value != 1:
            pivot_line[:] = [v / value for v in pivot_line]
        for k, line in enumerate(tableau):
            factor = line[col]
            if k != r and factor:
                line[:] = [v - factor * w if w else v for v, w in zip(line, pivot_line)]

    def __drop_artificials(self, tableau, basis, first_artificial):
        """Pivot zero-level artificials out of the basis; drop redundant rows."""

        keep = []
        for r, var in enumerate(basis):
            if var >= first_artificial:
                col = next((j for j in range(first_artificial) if tableau[r][j] != 0), None)
                if col is None:
                    continue
                self.__pivot(tableau, r, col)
                basis[r] = col
            keep.append(r)
        tableau = [tableau[r][:first_artificial] + [tableau[r][-1]] for r in keep]
        return tableau, [basis[r] for r in keep]
