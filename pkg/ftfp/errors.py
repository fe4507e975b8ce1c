"""Exceptions and report entries shared by every pipeline stage.

Classes
-------
InputError
    malformed input, bad argument or violated precondition
FeasibilityError
    infeasible solution or broken internal invariant
Violation
    one entry of a report-style check
"""

# Standard imports
from dataclasses import dataclass


class InputError(ValueError):
    """Raised for malformed files, bad arguments and unmet preconditions."""


class FeasibilityError(ValueError):
    """Raised when a solution is infeasible or an internal invariant breaks."""


@dataclass(frozen=True)
class Violation:
    """One violated clause found by a report-style check.

    Attributes
    ----------
    clause: str
        short name of the violated condition
    detail: str
        human readable description with the offending values
    witness: tuple
        indices (sites, clients, facilities or demands) exhibiting it
    """

    clause: str
    detail: str
    witness: tuple = ()

    def __str__(self):
        return f"{self.clause}: {self.detail} {self.witness}"


def clauses(report):
    """Return the set of clause names present in a report."""

    return {violation.clause for violation in report}
