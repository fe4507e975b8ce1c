"""Monte-Carlo estimation over seeded rounding trials.

Trial t of a run with seed s uses the seed s xor t. Trials are split into
chunks that run concurrently in worker threads; statistics are computed
with numpy once all chunks are gathered, so the result does not depend
on the number of workers.

Classes
-------
EstimateResult

Functions
---------
trial_seed(seed, trial)
worker_count()
estimate(rounder, trials, seed)
best_of(rounder, k, seed)
"""

# Standard imports
import asyncio
from dataclasses import asdict, dataclass
import os

# Local imports
from ftfp.errors import InputError

# Third-party imports
import numpy as np


@dataclass(frozen=True)
class EstimateResult:
    """Float statistics of a batch of rounding trials."""

    algo: str
    seed: int
    trials: int
    mean_cost: float
    mean_F: float
    mean_C: float
    se: float
    se_F: float
    se_C: float
    fraction_indirect: float
    se_indirect: float
    fraction_no_close: float

    def to_dict(self):
        return asdict(self)


def trial_seed(seed, trial):
    return int(seed) ^ int(trial)


def worker_count():
    """Worker threads for trials, capped by FTFP_THREADS."""

    workers = os.environ.get("FTFP_THREADS")
    if workers is None:
        return os.cpu_count() or 1
    try:
        return max(1, int(workers))
    except ValueError:
        raise InputError(f"FTFP_THREADS must be an integer, got {workers!r}")


def split(trials, chunk_size):
    """Yield consecutive ranges of trial indices."""

    for start in range(0, trials, chunk_size):
        yield range(start, min(start + chunk_size, trials))


def run_chunk(rounder, seed, trials):
    """Return (F, C, fallback count, no-close count) rows for some trials."""

    rows = []
    for t in trials:
        outcome = rounder.sample(trial_seed(seed, t))
        rows.append((float(outcome.solution.facility_cost), float(outcome.solution.connection_cost),
                     len(outcome.fallback), len(outcome.no_close)))
    return rows


async def gather_trials(rounder, seed, trials, workers):
    chunk_size = -(-trials // workers)
    chunks = await asyncio.gather(*(asyncio.to_thread(run_chunk, rounder, seed, chunk)
                                    for chunk in split(trials, chunk_size)))
    return [row for chunk in chunks for row in chunk]


def _se(values):
    if len(values) < 2:
        return 0.0
    return float(np.std(values, ddof=1) / np.sqrt(len(values)))


def estimate(rounder, trials, seed):
    """Run seeded trials and summarize costs and fallback frequency.

    Parameters
    ----------
    rounder: Rounder
        EGUP, ECHS or EBGS instance
    trials: int
        number of trials, at least 1
    seed: int
        base seed in [0, 2**64)

    Returns
    -------
    EstimateResult
        fraction_indirect is the share of non-primary demands connected
        to their target facility (0 when there are none)
    """

    if trials < 1:
        raise InputError(f"trials must be at least 1, got {trials}")
    rounder.plan()
    rows = np.array(asyncio.run(gather_trials(rounder, seed, trials, min(worker_count(), trials))), dtype=float)
    facility, connection = rows[:, 0], rows[:, 1]
    cost = facility + connection
    non_primary = len(rounder.non_primary)
    if non_primary:
        indirect = rows[:, 2] / non_primary
        no_close = rows[:, 3] / non_primary
    else:
        indirect = no_close = np.zeros(trials)
    return EstimateResult(rounder.name, int(seed), int(trials), float(cost.mean()), float(facility.mean()),
                          float(connection.mean()), _se(cost), _se(facility), _se(connection),
                          float(indirect.mean()), _se(indirect), float(no_close.mean()))


def best_of(rounder, k, seed):
    """Return the cheapest of k seeded runs (lowest trial on ties).

    Returns
    -------
    tuple
        (IntegralSolution, trial index)
    """

    if k < 1:
        raise InputError(f"best-of count must be at least 1, got {k}")
    best, best_trial = None, None
    for t in range(k):
        solution = rounder.round(trial_seed(seed, t))
        if best is None or solution.total_cost < best.total_cost:
            best, best_trial = solution, t
    return best, best_trial
