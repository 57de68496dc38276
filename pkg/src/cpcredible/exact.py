"""Exact solvers for the sample based problem.

``exact_solve`` is a branch-and-bound over which time points to drop.  Dropping
a point discards every sample containing it, so a node is described by the
dropped points, the kept points and the multiplicity still allowed to be
discarded.  An optimal region is always the union of the samples it covers,
which both bounds and closes the search.

``brute_force`` enumerates subsets of the sample union in size order and is
kept as an independent oracle.
"""

from fractions import Fraction
from itertools import combinations
import time

import numpy as np

from ._validation import ValidationError, check_alpha, coverage_threshold
from .greedy import greedy_solve, region_for_alpha
from .regions import Region

BRUTE_FORCE_LIMIT = 22


class _Budget:
    def __init__(self, max_nodes, time_limit):
        self.max_nodes = max_nodes
        self.deadline = None if time_limit is None else time.monotonic() + time_limit
        self.nodes = 0

    def spend(self):
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            return False
        if self.deadline is not None and self.nodes % 256 == 0:
            return time.monotonic() < self.deadline
        return True


class _Instance:
    """Incidence of the non-empty distinct configs restricted to the sample union."""

    def __init__(self, samples, need):
        self.points = samples.union()
        index = {int(p): j for j, p in enumerate(self.points)}
        nonempty = [c for c, cfg in enumerate(samples.configs) if cfg]
        self.free = int(samples.m - samples.multiplicities[nonempty].sum())
        self.B = np.zeros((len(nonempty), len(self.points)), dtype=bool)
        for row, c in enumerate(nonempty):
            self.B[row, [index[i] for i in samples.configs[c]]] = True
        self.mult = samples.multiplicities[nonempty].astype(np.int64)
        self.need = need
        self.budget = int(self.mult.sum()) + self.free - need

    def evaluate(self, alive, included, rem):
        """Forced points, lower bound and branching data for one node."""
        Ba = self.B[alive]
        ma = self.mult[alive]
        cnt = ma @ Ba if Ba.shape[0] else np.zeros(len(self.points), dtype=np.int64)
        keep = included | (cnt > rem)
        missing = (Ba & ~keep).sum(axis=1)
        order = np.argsort(missing, kind="stable")
        reach = self.free + np.cumsum(ma[order])
        hit = int(np.searchsorted(reach, self.need))
        if self.need <= self.free:
            extra = 0
        else:
            extra = int(missing[order[hit]])
        lb = int(keep.sum()) + extra
        if extra:
            # every droppable point pays an equal share of each sample it
            # sits in; the shares of a dropped set never exceed its discards
            cand = (cnt > 0) & ~keep
            inc = Ba & cand
            width = inc.sum(axis=1)
            share = np.divide(ma, width, out=np.zeros(len(ma)), where=width > 0)
            cost = np.sort((share @ inc)[cand])
            drops = int(np.searchsorted(np.cumsum(cost), rem + 1e-9, side="right"))
            lb = max(lb, int(keep.sum()) + len(cost) - drops)
        return keep, cnt, lb, extra == 0


def _search(inst, bound_ok, pick, budget, on_solution, included=None, dropped=None):
    """Depth-first branch and bound from the node fixed by ``included``/``dropped``.

    ``pick(cnt, candidates)`` chooses the branching point and the branch order;
    ``bound_ok(lb)`` decides pruning; ``on_solution(keep)`` returns True to stop.
    Returns False if the budget ran out.
    """
    u = len(inst.points)
    included = np.zeros(u, dtype=bool) if included is None else included
    dropped = np.zeros(u, dtype=bool) if dropped is None else dropped
    alive = ~inst.B[:, dropped].any(axis=1)
    rem = inst.budget - int(inst.mult[~alive].sum())
    if rem < 0:
        return True
    stack = [(alive, included, dropped, rem)]
    while stack:
        if not budget.spend():
            return False
        alive, included, dropped, rem = stack.pop()
        keep, cnt, lb, closed = inst.evaluate(alive, included, rem)
        if not bound_ok(lb):
            continue
        if closed:
            if on_solution(keep):
                return True
            continue
        candidates = np.flatnonzero((cnt > 0) & ~keep & ~dropped)
        j, drop_first = pick(cnt, candidates)
        new_alive = alive & ~inst.B[:, j]
        spent = int(inst.mult[alive & inst.B[:, j]].sum())
        with_j = keep.copy()
        with_j[j] = True
        without_j = dropped.copy()
        without_j[j] = True
        branches = [(alive, with_j, dropped, rem),
                    (new_alive, keep, without_j, rem - spent)]
        if drop_first:
            branches.reverse()
        stack.extend(reversed(branches))
    return True


def exact_solve(samples, alpha, max_nodes=2_000_000, time_limit=None, incumbent=None):
    """A smallest region covering at least ceil(m(1-alpha)) samples.

    Among regions of minimal size the lexicographically smallest member list
    is returned.  If the node or time budget runs out before optimality is
    proven, the best region found so far is returned with ``optimal=False``.

    Parameters
    ----------
    samples : SampleSet
    alpha : float or Fraction in [0, 1]
    max_nodes : int or None
        Total node budget across both search phases.
    time_limit : float or None
        Wall-clock budget in seconds.
    incumbent : Region, optional
        A known feasible region used as the initial upper bound; defaults to
        the greedy region.
    """
    alpha = check_alpha(alpha)
    need = coverage_threshold(samples.m, alpha)
    inst = _Instance(samples, need)
    if incumbent is None:
        incumbent = region_for_alpha(greedy_solve(samples), alpha)
    best = {"members": frozenset(incumbent.members), "size": incumbent.size}
    budget = _Budget(max_nodes, time_limit)

    def to_members(mask):
        return frozenset(int(p) for p in inst.points[mask])

    def record(keep):
        size = int(keep.sum())
        if size < best["size"]:
            best["members"], best["size"] = to_members(keep), size
        return False

    def busiest_keep(cnt, candidates):
        return int(candidates[np.argmax(cnt[candidates])]), False

    proven = _search(inst, lambda lb: lb < best["size"], busiest_keep, budget, record)
    if not proven:
        return _region(samples, best["members"], alpha, optimal=False)

    members = _lexicographic_optimum(inst, best["members"], budget, busiest_keep)
    return _region(samples, members, alpha, optimal=True)


def _lexicographic_optimum(inst, solution, budget, pick):
    """Fix points in ascending order, keeping each one if some optimum still allows it.

    ``solution`` is a known optimum; points already in it need no search.
    Falls back to the current solution if the budget runs out.
    """
    target = len(solution)
    index = {int(p): j for j, p in enumerate(inst.points)}
    current = np.zeros(len(inst.points), dtype=bool)
    current[[index[i] for i in solution]] = True
    included = np.zeros_like(current)
    dropped = np.zeros_like(current)
    for j in range(len(inst.points)):
        if not current[j]:
            trial = included.copy()
            trial[j] = True
            found = []

            def take(keep):
                found.append(keep)
                return True

            if not _search(inst, lambda lb: lb <= target, pick, budget, take, trial, dropped.copy()):
                break
            if found:
                current = found[0]
        if current[j]:
            included[j] = True
        else:
            dropped[j] = True
    return frozenset(int(p) for p in inst.points[current])


def _region(samples, members, alpha, optimal):
    return Region(frozenset(members), alpha, Fraction(samples.covered_count(members), samples.m),
                  optimal=optimal)


def brute_force(samples, alpha):
    """Exhaustive oracle: first feasible subset of the sample union in (size, lex) order."""
    alpha = check_alpha(alpha)
    points = samples.union()
    if len(points) > BRUTE_FORCE_LIMIT:
        raise ValidationError(
            f"brute force refuses unions larger than {BRUTE_FORCE_LIMIT} (got {len(points)})")
    need = coverage_threshold(samples.m, alpha)
    index = {int(p): j for j, p in enumerate(points)}
    masks = np.array([sum(1 << index[i] for i in cfg) for cfg in samples.configs], dtype=np.int64)
    mult = samples.multiplicities
    for size in range(len(points) + 1):
        subsets = np.array([sum(1 << j for j in comb) for comb in combinations(range(len(points)), size)],
                           dtype=np.int64)
        covered = ((subsets[:, None] & masks[None, :]) == masks[None, :]) @ mult
        hit = np.flatnonzero(covered >= need)
        if hit.size:
            chosen = subsets[hit[0]]
            members = frozenset(int(points[j]) for j in range(len(points)) if chosen >> j & 1)
            return _region(samples, members, alpha, optimal=True)
    raise AssertionError("the full union always covers every sample")
