"""Scan of the EBGS ratio bound over gamma.

Functions
---------
cmd_gamma_scan(lo, hi, step, out=None, digits=CSV_DIGITS)
    tabulate the bound curves, optionally write CSV, return the argmin
"""

# Local imports
from ftfp.bench.Pipeline import CSV_DIGITS, write_csv
from ftfp.rounding.Bounds import argmin_gamma, gamma_scan


def cmd_gamma_scan(lo, hi, step, out=None, digits=CSV_DIGITS):
    """Tabulate max{gamma, 1 + 2/e^gamma, (1/e + 1/e^gamma) / (1 - 1/gamma)}.

    Parameters
    ----------
    lo, hi: float
        scan range, 1 < lo < hi < 2
    step: float
        grid step
    out: Path, optional
        CSV file to write

    Returns
    -------
    tuple
        (pandas.DataFrame, argmin gamma, minimum bound)
    """

    table = gamma_scan(lo, hi, step)
    if out is not None:
        write_csv(table, out, digits)
    gamma, bound = argmin_gamma(table)
    return table, gamma, bound
