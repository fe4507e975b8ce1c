"""Random Euclidean FTFP instances on an integer grid.

Functions
---------
generate_euclidean(num_sites, num_clients, r_max, seed)
    deterministic random instance
grid_distance(p, q)
    rational distance between two grid points
"""

# Standard imports
from fractions import Fraction
import math

# Local imports
from ftfp.errors import FeasibilityError, InputError
from ftfp.instance.Instance import FtfpInstance, validate

# Third-party imports
import numpy as np

GRID = 100
COST_RANGE = (1, 100)
DIGITS = 6
MAX_ATTEMPTS = 64


def grid_distance(p, q, digits=DIGITS):
    """Return sqrt(|p - q|^2) rounded half-up to `digits` decimals, exactly.

    Parameters
    ----------
    p, q: tuple
        integer grid coordinates
    digits: int
        number of decimal digits kept
    """

    squared = (int(p[0]) - int(q[0])) ** 2 + (int(p[1]) - int(q[1])) ** 2
    scale = 10 ** digits
    twice = math.isqrt(4 * squared * scale * scale)
    return Fraction((twice + 1) // 2, scale)


def generate_euclidean(num_sites, num_clients, r_max, seed, grid=GRID, cost_range=COST_RANGE):
    """Generate a metric instance from integer points in [0, grid]^2.

    Opening costs are uniform integers in `cost_range`, demands uniform
    in [1, r_max]. The rounded distances are re-validated and the draw is
    repeated on the rare 4-point violation, each attempt on its own
    SeedSequence child so the result depends on `seed` only.

    Parameters
    ----------
    num_sites: int
        number of sites (>= 1)
    num_clients: int
        number of clients (>= 1)
    r_max: int
        largest demand (>= 1)
    seed: int
        unsigned 64-bit seed
    """

    if num_sites < 1 or num_clients < 1:
        raise InputError("an instance needs at least one site and one client")
    if r_max < 1:
        raise InputError("r_max must be at least 1")

    for attempt in range(MAX_ATTEMPTS):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=(attempt,))))
        site_xy = rng.integers(0, grid + 1, size=(num_sites, 2))
        client_xy = rng.integers(0, grid + 1, size=(num_clients, 2))
        costs = rng.integers(cost_range[0], cost_range[1] + 1, size=num_sites)
        demands = rng.integers(1, r_max + 1, size=num_clients)
        dist = [[grid_distance(p, q) for q in client_xy] for p in site_xy]
        instance = FtfpInstance.build([int(c) for c in costs], [int(r) for r in demands], dist)
        if not validate(instance):
            return instance
    raise FeasibilityError(f"no metric instance after {MAX_ATTEMPTS} attempts for seed {seed}")
