"""Greedy heuristic for the sample based problem.

Starting from the full universe, repeatedly drop the time point contained in
the fewest still-covered samples.  One pass yields a nested region for every
alpha at once.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._validation import check_alpha, coverage_threshold
from .regions import Region


@dataclass(frozen=True)
class GreedyTrajectory:
    """Removal order ``k_1..k_n`` and covered-sample counts after each removal.

    ``covered_after[l]`` is the number of samples (with multiplicity) that are
    subsets of ``A_l = {1..n} minus {k_1..k_l}``.
    """

    removal_order: np.ndarray
    covered_after: np.ndarray
    m: int

    @property
    def n(self):
        return len(self.removal_order)

    @property
    def coverage_after(self):
        return [Fraction(int(c), self.m) for c in self.covered_after]

    def members_after(self, steps):
        return frozenset(int(i) for i in self.removal_order[steps:])


def gather(ptr, data, ids):
    """Concatenate the CSR rows ``ids`` of ``(ptr, data)``; also return row lengths."""
    starts = ptr[ids]
    lens = ptr[ids + 1] - starts
    total = int(lens.sum())
    if total == 0:
        return data[:0], lens
    offsets = np.repeat(starts - np.concatenate([[0], np.cumsum(lens)[:-1]]), lens)
    return data[offsets + np.arange(total)], lens


def greedy_solve(samples):
    """Run the greedy removal over ``samples`` and return its trajectory.

    Ties among minimal-count points go to the smallest index.
    """
    n, mult = samples.n, samples.multiplicities
    counts = samples.point_counts().astype(np.float64)
    counts[0] = np.inf
    alive = np.ones(samples.n_distinct, dtype=bool)
    covered = samples.m
    order = np.empty(n, dtype=np.int64)
    covered_after = np.empty(n + 1, dtype=np.int64)
    covered_after[0] = covered

    for step in range(n):
        i = int(np.argmin(counts))
        order[step] = i
        counts[i] = np.inf
        ids = samples.containing(i)
        ids = ids[alive[ids]]
        if ids.size:
            alive[ids] = False
            covered -= int(mult[ids].sum())
            members, lens = gather(samples.config_ptr, samples.config_members, ids)
            counts -= np.bincount(members, weights=np.repeat(mult[ids], lens), minlength=n + 1)
        covered_after[step + 1] = covered
    return GreedyTrajectory(order, covered_after, samples.m)


def region_for_alpha(trajectory, alpha):
    """The smallest greedy region ``A_l`` that still covers ceil(m(1-alpha)) samples."""
    alpha = check_alpha(alpha)
    need = coverage_threshold(trajectory.m, alpha)
    steps = int(np.count_nonzero(trajectory.covered_after >= need)) - 1
    return Region(
        members=trajectory.members_after(steps),
        alpha=alpha,
        achieved_coverage=Fraction(int(trajectory.covered_after[steps]), trajectory.m),
        optimal=False,
    )
