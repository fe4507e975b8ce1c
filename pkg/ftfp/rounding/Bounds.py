"""Analysis helpers for the gamma trade-off and the fallback inequality.

Functions
---------
ratio_terms(gamma)
    the three approximation-ratio curves at gamma
gamma_scan(lo, hi, step)
    tabulate the curves and their maximum on a grid
chain_inequality_sides(dbar, g)
    exact sides of the chained-product inequality
"""

# Standard imports
from fractions import Fraction

# Local imports
from ftfp.errors import InputError
from ftfp.rational import ONE, ZERO

# Third-party imports
import numpy as np
import pandas as pd


def ratio_terms(gamma):
    """Return (gamma, 1 + 2/e^gamma, (1/e + 1/e^gamma) / (1 - 1/gamma)).

    Accepts a scalar or an array of gammas greater than 1.
    """

    gamma = np.asarray(gamma, dtype=float)
    direct = 1 + 2 * np.exp(-gamma)
    fallback = (np.exp(-1) + np.exp(-gamma)) / (1 - 1 / gamma)
    return gamma, direct, fallback


def gamma_scan(lo, hi, step):
    """Tabulate the ratio curves over [lo, hi] with the given step.

    Returns
    -------
    pandas.DataFrame
        columns gamma, gamma_term, direct_term, fallback_term, bound
    """

    lo, hi, step = float(lo), float(hi), float(step)
    if not 1 < lo < hi < 2:
        raise InputError(f"scan range must satisfy 1 < lo < hi < 2, got [{lo}, {hi}]")
    if step <= 0:
        raise InputError(f"scan step must be positive, got {step}")
    grid = np.linspace(lo, hi, int(round((hi - lo) / step)) + 1)
    gamma_term, direct, fallback = ratio_terms(grid)
    table = pd.DataFrame({"gamma": grid, "gamma_term": gamma_term, "direct_term": direct,
                          "fallback_term": fallback})
    table["bound"] = table[["gamma_term", "direct_term", "fallback_term"]].max(axis=1)
    return table


def argmin_gamma(table):
    """Return (gamma, bound) at the minimum of the scan's bound column."""

    row = table.loc[table["bound"].idxmin()]
    return float(row["gamma"]), float(row["bound"])


def chain_inequality_sides(dbar, g):
    """Return the exact sides (lhs, rhs) of the chained-product inequality.

    lhs = sum_t d_t g_t prod_{z<t} (1 - g_z)
    rhs = (sum_t d_t g_t) (sum_t g_t prod_{z<t} (1 - g_z)) / sum_t g_t

    For dbar sorted ascending and every g_t in (0, 1], lhs <= rhs.
    """

    dbar = [Fraction(value) for value in dbar]
    g = [Fraction(value) for value in g]
    if len(dbar) != len(g) or not g:
        raise InputError("dbar and g must be nonempty and of equal length")
    lhs, chained, survive = ZERO, ZERO, ONE
    for d, weight in zip(dbar, g):
        lhs += d * weight * survive
        chained += weight * survive
        survive *= 1 - weight
    rhs = sum((d * weight for d, weight in zip(dbar, g)), ZERO) * chained / sum(g, ZERO)
    return lhs, rhs
