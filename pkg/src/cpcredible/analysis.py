"""Importance and sensitivity of features, and the empirical study harnesses."""

import csv
from dataclasses import dataclass
from fractions import Fraction
import io

import numpy as np

from ._validation import ValidationError, alpha_grid, check_alpha
from .exact import exact_solve
from .greedy import greedy_solve, region_for_alpha
from .models import Geometric, MeanChange, SegmentModel
from .posterior import build_cache, sample_posterior
from .regions import RegionFamily
from .simulate import REPLICA_CHANGEPOINTS, REPLICA_LARGE_JUMPS, replica_spec, simulate

REPLICA_P = Fraction(3, 550)


@dataclass(frozen=True)
class FeatureWindow:
    label: str
    members: frozenset

    @classmethod
    def from_ranges(cls, label, ranges):
        members = frozenset(i for lo, hi in ranges for i in range(lo, hi + 1))
        if not members:
            raise ValidationError(f"feature window {label!r} is empty")
        return cls(label, members)

    @classmethod
    def parse(cls, text):
        """Parse ``label=lo..hi[,lo..hi]``."""
        label, sep, spec = text.partition("=")
        if not sep or not label.strip():
            raise ValidationError(f"window must look like label=lo..hi, got {text!r}")
        ranges = []
        for part in spec.split(","):
            lo, dots, hi = part.strip().partition("..")
            try:
                lo = int(lo)
                hi = int(hi) if dots else lo
            except ValueError:
                raise ValidationError(f"malformed window range {part!r}") from None
            if hi < lo:
                raise ValidationError(f"empty window range {part!r}")
            ranges.append((lo, hi))
        return cls.from_ranges(label.strip(), ranges)

    def check(self, n):
        if min(self.members) < 1 or max(self.members) > n:
            raise ValidationError(f"window {self.label!r} leaves the universe 1..{n}")


def importance(family, window):
    """Smallest grid alpha whose region avoids the window.

    If every region on the grid touches the window the result is one grid
    step above the last alpha, to be read as "at least the last alpha".
    """
    if not len(family):
        raise ValidationError("importance needs a non-empty alpha grid")
    for alpha, region in zip(family.grid, family.regions):
        if not region.members & window.members:
            return Fraction(alpha)
    grid = family.grid
    step = grid[-1] - grid[-2] if len(grid) > 1 else 1 - grid[-1]
    return Fraction(grid[-1] + step)


def sensitivity(samples, window):
    """Fraction of samples with at least one changepoint inside the window."""
    hit = np.zeros(samples.n_distinct, dtype=bool)
    for i in window.members:
        if 1 <= i <= samples.n:
            hit[samples.containing(i)] = True
    return Fraction(int(samples.multiplicities[hit].sum()), samples.m)


def greedy_family(samples, grid=None):
    grid = alpha_grid() if grid is None else [check_alpha(a) for a in grid]
    traj = greedy_solve(samples)
    return RegionFamily(grid, [region_for_alpha(traj, a) for a in grid], nested=True)


def exact_family(samples, grid=None, **budget):
    grid = alpha_grid() if grid is None else [check_alpha(a) for a in grid]
    traj = greedy_solve(samples)
    regions = [exact_solve(samples, a, incumbent=region_for_alpha(traj, a), **budget) for a in grid]
    fam = RegionFamily(grid, regions)
    fam.nested = fam.is_nested()
    return fam


def _cell_seed(*key):
    return int(np.random.SeedSequence([int(k) for k in key]).generate_state(1)[0])


def _quartiles(values):
    q1, med, q3 = np.percentile(np.asarray(values, dtype=float), [25, 50, 75])
    return float(q1), float(med), float(q3)


def region_size(samples, alpha, method="greedy", **budget):
    if method == "greedy":
        return region_for_alpha(greedy_solve(samples), alpha).size, False
    if method == "exact":
        r = exact_solve(samples, alpha, **budget)
        return r.size, r.optimal
    raise ValidationError(f"unknown method {method!r}")


def convergence_study(model, prior, alpha, m_list, reps, seed=0, method="greedy", cache=None, **budget):
    """Region sizes at ``alpha`` for fresh sample sets of each size in ``m_list``.

    Returns ``(rows, summary)``: one row per ``(m, rep)`` and per-``m`` quartiles.
    """
    alpha = check_alpha(alpha)
    cache = build_cache(model, prior) if cache is None else cache
    rows = []
    for m in m_list:
        for rep in range(reps):
            samples = sample_posterior(cache, m, seed=_cell_seed(seed, m, rep))
            size, optimal = region_size(samples, alpha, method, **budget)
            rows.append({"m": int(m), "rep": rep, "size": size, "optimal": optimal})
    summary = []
    for m in m_list:
        sizes = [r["size"] for r in rows if r["m"] == m]
        q1, med, q3 = _quartiles(sizes)
        summary.append({"m": int(m), "q1": q1, "median": med, "q3": q3, "iqr": q3 - q1})
    return rows, summary


def greedy_vs_exact(make_samples, grid, reps, **budget):
    """Compare greedy and exact region sizes on ``reps`` sample sets.

    ``make_samples(rep)`` returns the sample set of one repetition.  Returns
    ``(rows, failures)`` where ``failures[rep]`` counts grid levels at which
    the greedy region is larger than a proven-optimal exact region; cells
    without an optimality proof are flagged and left out of the count.
    """
    grid = [check_alpha(a) for a in grid]
    rows, failures = [], []
    for rep in range(reps):
        samples = make_samples(rep)
        traj = greedy_solve(samples)
        count = 0
        for a in grid:
            g = region_for_alpha(traj, a)
            e = exact_solve(samples, a, incumbent=g, **budget)
            fail = e.optimal and g.size > e.size
            count += fail
            rows.append({"rep": rep, "alpha": a, "greedy_size": g.size, "exact_size": e.size,
                         "optimal": e.optimal, "failure": fail})
        failures.append(count)
    return rows, failures


def replica_cache(seed, n=550):
    """Posterior cache for the simulated mean-change scenario (geometric prior)."""
    spec = replica_spec(seed=seed, n=n)
    y = simulate(spec)
    return build_cache(SegmentModel(MeanChange(1.0, 0.0, 25.0), y), Geometric(float(REPLICA_P)))


def replica_windows(include_irregularity=True):
    """Windows around the simulated truth: midpoints between neighbouring changepoints.

    Also the window ``[1..130]`` for the first, small change and the default
    ``[160..180]`` window for the irregularity near 170.
    """
    cps = REPLICA_CHANGEPOINTS
    windows = []
    for k, c in enumerate(cps):
        if c not in REPLICA_LARGE_JUMPS:
            continue
        lo = (cps[k - 1] + c) // 2 + 1
        hi = (c + cps[k + 1]) // 2 if k + 1 < len(cps) else 550
        windows.append(FeatureWindow.from_ranges(f"cp{c}", [(lo, hi)]))
    windows.append(FeatureWindow.from_ranges("first", [(1, 130)]))
    if include_irregularity:
        windows.append(FeatureWindow.from_ranges("irregularity", [(160, 180)]))
    return windows


def feature_report(family, samples, windows):
    return [{"label": w.label, "importance": importance(family, w), "sensitivity": sensitivity(samples, w)}
            for w in windows]


def compare_models(samples_by_model, alpha):
    """Greedy region sizes at ``alpha`` for sample sets drawn under competing models."""
    alpha = check_alpha(alpha)
    return {name: region_for_alpha(greedy_solve(s), alpha).size for name, s in samples_by_model.items()}


def rows_to_csv(rows, columns=None):
    if not rows:
        return ""
    columns = list(rows[0]) if columns is None else columns
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (format(float(v), ".12g") if isinstance(v, Fraction) else v)
                         for k, v in row.items()})
    return buf.getvalue()
