"""Exact posterior sampling for conjugate changepoint models.

A backward pass computes, for every segment start ``t``, the log of the
probability of the data ``y_t..y_n`` given that a segment starts at ``t``.
Forward simulation then draws the end of each segment in turn.  A
changepoint ``i`` means a new segment starts at ``i``, so configurations are
subsets of ``2..n``.
"""

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.special import logsumexp

from ._validation import ValidationError
from .models import FixedK, Geometric
from .samples import SampleSet, check_config

ENUMERATION_LIMIT = 14
BLOCK_SIZE = 8192


@dataclass
class PosteriorCache:
    """Backward log-quantities for one model/prior pair.

    Geometric prior: ``log_q[t]`` for ``t = 1..n+1`` (index 0 unused).
    Fixed-k prior: ``log_q[j, t]`` with ``j`` changepoints still to place;
    entries that cannot be reached are ``-inf``.
    """

    model: object
    prior: object
    log_q: np.ndarray
    _rows: dict = field(default_factory=dict, repr=False)

    @property
    def n(self):
        return self.model.n

    @property
    def log_evidence(self):
        """Log marginal likelihood of the whole series, prior included."""
        if isinstance(self.prior, Geometric):
            return float(self.log_q[1])
        return float(self.log_q[self.prior.k, 1] + self.prior.log_mass(self.n))

    def transition_cdf(self, t, j=None):
        """Cumulative distribution of the end ``s`` of the segment starting at ``t``.

        Entry ``r`` corresponds to ``s = t + r``.  For the geometric prior the
        last entry is the event "no further changepoint".
        """
        key = (t, j)
        row = self._rows.get(key)
        if row is None:
            row = np.cumsum(np.exp(self._log_transition(t, j)))
            self._rows[key] = row
        return row

    def _log_transition(self, t, j):
        n, q = self.n, self.log_q
        if isinstance(self.prior, Geometric):
            w = self.model.loglik_from(t)
            w[:-1] += self.prior.log_g(np.arange(1, n - t + 1)) + q[t + 1:n + 1]
            w[-1] += float(self.prior.log_survival(n - t))
            return w - q[t]
        last = n - j
        w = self.model.loglik_from(t, last) + q[j - 1, t + 1:last + 2]
        return w - q[j, t]


def build_cache(model, prior):
    """Run the backward recursion in the log domain; O(n^2) (times k for fixed k)."""
    n = model.n
    if isinstance(prior, Geometric):
        log_q = np.full(n + 2, -np.inf)
        log_q[n + 1] = 0.0
        for t in range(n, 0, -1):
            w = model.loglik_from(t)
            w[:-1] += prior.log_g(np.arange(1, n - t + 1)) + log_q[t + 1:n + 1]
            w[-1] += float(prior.log_survival(n - t))
            log_q[t] = logsumexp(w)
        return PosteriorCache(model, prior, log_q)
    if isinstance(prior, FixedK):
        prior.check(n)
        k = prior.k
        log_q = np.full((k + 1, n + 2), -np.inf)
        for t in range(n, 0, -1):
            row = model.loglik_from(t)
            log_q[0, t] = row[-1]
            for j in range(1, min(k, n - t) + 1):
                # segment t..s followed by j-1 changepoints in s+1..n
                log_q[j, t] = logsumexp(row[:n - j - t + 1] + log_q[j - 1, t + 1:n - j + 2])
        return PosteriorCache(model, prior, log_q)
    raise ValidationError(f"unsupported prior {prior!r}")


def _draw_block(cache, size, rng):
    n = cache.n
    fixed = isinstance(cache.prior, FixedK)
    pos = np.ones(size, dtype=np.int64)
    left = np.full(size, cache.prior.k if fixed else 0, dtype=np.int64)
    active = np.arange(size) if not fixed or cache.prior.k > 0 else np.arange(0)
    owners, points = [], []
    while active.size:
        u = rng.random(active.size)
        keys = pos[active] * (n + 2) + left[active]
        order = np.argsort(keys, kind="stable")
        keys_sorted = keys[order]
        cuts = np.flatnonzero(np.diff(keys_sorted)) + 1
        ends = np.empty(active.size, dtype=np.int64)
        for grp in np.split(order, cuts):
            t = int(pos[active[grp[0]]])
            j = int(left[active[grp[0]]]) if fixed else None
            cdf = cache.transition_cdf(t, j)
            r = np.searchsorted(cdf, u[grp] * cdf[-1], side="right")
            ends[grp] = t + np.minimum(r, len(cdf) - 1)
        if fixed:
            going = np.ones(active.size, dtype=bool)
        else:
            going = ends < n
        moved = active[going]
        owners.append(moved)
        points.append(ends[going] + 1)
        pos[moved] = ends[going] + 1
        if fixed:
            left[moved] -= 1
            moved = moved[left[moved] > 0]
        active = moved
    if not owners:
        return Counter({(): size})
    owners = np.concatenate(owners)
    points = np.concatenate(points)
    order = np.argsort(owners, kind="stable")
    owners, points = owners[order], points[order]
    lengths = np.bincount(owners, minlength=size)
    configs = np.split(points, np.cumsum(lengths)[:-1])
    return Counter(tuple(c.tolist()) for c in configs)


def sample_posterior(cache, m, seed=0, block_size=BLOCK_SIZE, n_jobs=1):
    """Draw ``m`` independent exact posterior configurations.

    Samples are generated in blocks of ``block_size``; block ``b`` uses the
    generator seeded by ``(seed, b)``, so blocks can be drawn on separate
    threads (``n_jobs``) and the result is still fixed by ``seed``.
    """
    m = int(m)
    if m < 1:
        raise ValidationError(f"need at least one sample, got m={m}")

    def block(b):
        rng = np.random.default_rng([int(seed), b])
        return _draw_block(cache, min(block_size, m - b * block_size), rng)

    blocks = range(-(-m // block_size))
    if n_jobs and n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            parts = list(pool.map(block, blocks))
    else:
        parts = [block(b) for b in blocks]
    counts = Counter()
    for part in parts:
        counts.update(part)
    return SampleSet.from_counts(cache.n, counts)


def config_log_posterior(model, prior, config):
    """Unnormalised log posterior of one configuration (likelihood times prior)."""
    n = model.n
    cfg = check_config(config, n)
    if cfg and cfg[0] < 2:
        raise ValidationError("changepoints mark segment starts and must lie in 2..n")
    if isinstance(prior, FixedK) and len(cfg) != prior.k:
        return -np.inf
    starts = (1,) + cfg
    ends = tuple(c - 1 for c in cfg) + (n,)
    total = sum(model.loglik(t, s) for t, s in zip(starts, ends))
    if isinstance(prior, FixedK):
        return total + float(prior.log_mass(n))
    lengths = [s - t + 1 for t, s in zip(starts, ends)]
    total += float(np.sum(prior.log_g(lengths[:-1]))) if len(lengths) > 1 else 0.0
    return total + float(prior.log_survival(lengths[-1] - 1))


def enumerate_exact_posterior(model, prior):
    """Normalised posterior over every configuration; refuses ``n`` above 14."""
    n = model.n
    if n > ENUMERATION_LIMIT:
        raise ValidationError(f"enumeration refuses n > {ENUMERATION_LIMIT} (got {n})")
    if isinstance(prior, FixedK):
        prior.check(n)
        sizes = [prior.k]
    else:
        sizes = range(n)
    configs = [c for k in sizes for c in combinations(range(2, n + 1), k)]
    logp = np.array([config_log_posterior(model, prior, c) for c in configs])
    logp -= logsumexp(logp)
    return list(zip(configs, np.exp(logp).tolist()))
