"""Comparison estimators: joined HDR, marginal inclusion, Bonferroni and the lower-bound set."""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._validation import ValidationError, check_alpha, coverage_threshold
from .regions import Region


@dataclass(frozen=True)
class MarginalProfile:
    """Empirical inclusion frequencies ``counts[i-1] / m`` for points ``1..n``."""

    counts: np.ndarray
    m: int

    @property
    def n(self):
        return len(self.counts)

    @property
    def p_hat(self):
        return self.counts / self.m

    def frequency(self, i):
        return Fraction(int(self.counts[i - 1]), self.m)

    def to_csv(self):
        return "index,p_hat\n" + "".join(
            f"{i},{format(c / self.m, '.12g')}\n" for i, c in enumerate(self.counts.tolist(), start=1))


def marginal_profile(samples):
    return MarginalProfile(samples.point_counts()[1:], samples.m)


def _points_above(profile, threshold):
    # counts / m > threshold, evaluated exactly
    scaled = threshold * profile.m
    hits = np.flatnonzero(profile.counts * scaled.denominator > scaled.numerator)
    return frozenset(int(i) + 1 for i in hits)


def bonferroni_region(profile, alpha, samples=None):
    """Points whose inclusion frequency exceeds alpha / n.

    If ``samples`` is given the achieved coverage is measured on them.
    """
    alpha = check_alpha(alpha)
    members = _points_above(profile, alpha / profile.n)
    cov = Fraction(samples.covered_count(members), samples.m) if samples is not None else None
    return Region(members, alpha, cov)


def lower_bound_set(profile, alpha):
    """Points with inclusion frequency above alpha; inside every feasible region."""
    return _points_above(profile, check_alpha(alpha))


def hdr_order(samples, weights):
    """Distinct-config ids sorted by descending weight, ties by config."""
    if callable(weights):
        w = [weights(cfg) for cfg in samples.configs]
    else:
        w = [weights[cfg] if cfg in weights else None for cfg in samples.configs]
    missing = [cfg for cfg, v in zip(samples.configs, w) if v is None]
    if missing:
        raise ValidationError(f"no weight for configuration {missing[0]}")
    # configs are already in lexicographic order, so a stable sort keeps ties ordered
    return sorted(range(samples.n_distinct), key=lambda c: -w[c])


def joined_hdr(samples, weights, alpha):
    """Union of the top ceil(m(1-alpha)) samples ranked by ``weights``.

    ``weights`` is a mapping or a callable from configuration to its
    (unnormalised, possibly log) posterior value.  Pass ``weights=None`` to
    rank by empirical multiplicity instead.
    """
    alpha = check_alpha(alpha)
    if weights is None:
        weights = dict(zip(samples.configs, samples.multiplicities.tolist()))
    need = coverage_threshold(samples.m, alpha)
    members, taken = set(), 0
    for c in hdr_order(samples, weights):
        if taken >= need:
            break
        members.update(samples.configs[c])
        taken += int(samples.multiplicities[c])
    members = frozenset(members)
    return Region(members, alpha, Fraction(samples.covered_count(members), samples.m))
