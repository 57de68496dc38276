"""Conjugate segment likelihoods and changepoint priors."""

from dataclasses import dataclass
import math

import numpy as np
from scipy.special import gammaln

from ._validation import ValidationError, check_positive, check_probability, check_series

_LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class MeanChange:
    """Gaussian segments with known noise variance and a normal prior on the mean.

    ``y_i = mu + eps_i`` with ``eps_i ~ N(0, noise_variance)`` and
    ``mu ~ N(prior_mean, prior_variance)``.
    """

    noise_variance: float = 1.0
    prior_mean: float = 0.0
    prior_variance: float = 25.0

    def __post_init__(self):
        check_positive(self.noise_variance, "noise_variance")
        check_positive(self.prior_variance, "prior_variance")

    def centre(self, y):
        return float(np.mean(y))

    def log_marginal(self, length, s1, s2, offset=0.0):
        """``s1``, ``s2`` are sums of ``y - offset`` and its square over the segment."""
        v, v0, mu0 = self.noise_variance, self.prior_variance, self.prior_mean
        mean = s1 / length
        # within-segment scatter plus the shrunken deviation of the segment mean
        scatter = np.maximum(s2 - s1 * mean, 0.0)
        shift = length * (mean + offset - mu0) ** 2 * v / (v + length * v0)
        return (-0.5 * length * _LOG_2PI - 0.5 * (length - 1) * np.log(v)
                - 0.5 * np.log(v + length * v0) - 0.5 * (scatter + shift) / v)


@dataclass(frozen=True)
class VarianceChange:
    """Zero-mean Gaussian segments with an inverse-gamma prior on the variance."""

    shape: float = 1.0
    scale: float = 1e-4

    def __post_init__(self):
        check_positive(self.shape, "shape")
        check_positive(self.scale, "scale")

    def centre(self, y):
        return 0.0

    def log_marginal(self, length, s1, s2, offset=0.0):
        a, b = self.shape, self.scale
        half = 0.5 * length
        return (a * math.log(b) + gammaln(a + half) - gammaln(a) - half * _LOG_2PI
                - (a + half) * np.log(b + 0.5 * np.maximum(s2, 0.0)))


class SegmentModel:
    """A likelihood family bound to a time series through prefix sums.

    Segments are addressed by 1-based inclusive bounds ``t..s``.
    """

    def __init__(self, family, y):
        self.family = family
        self.y = check_series(y)
        self.n = len(self.y)
        # centring keeps the squared prefix sums from swamping the scatter
        self.offset = family.centre(self.y)
        z = self.y - self.offset
        self._c1 = np.concatenate([[0.0], np.cumsum(z)])
        self._c2 = np.concatenate([[0.0], np.cumsum(z * z)])

    def loglik(self, t, s):
        if not 1 <= t <= s <= self.n:
            raise ValidationError(f"segment bounds must satisfy 1 <= t <= s <= {self.n}, got {t}, {s}")
        return float(self.family.log_marginal(s - t + 1, self._c1[s] - self._c1[t - 1],
                                              self._c2[s] - self._c2[t - 1], self.offset))

    def loglik_from(self, t, last=None):
        """Log marginals of the segments ``t..s`` for ``s = t..last`` (default ``n``)."""
        last = self.n if last is None else last
        s = np.arange(t, last + 1)
        return self.family.log_marginal((s - t + 1).astype(float), self._c1[s] - self._c1[t - 1],
                                        self._c2[s] - self._c2[t - 1], self.offset)


def segment_loglik(model, t, s):
    return model.loglik(t, s)


@dataclass(frozen=True)
class Geometric:
    """Geometric sojourns between changepoints: g(l) = p (1-p)^(l-1)."""

    p: float

    def __post_init__(self):
        check_probability(self.p, "p")

    def log_g(self, length):
        return math.log(self.p) + (np.asarray(length, dtype=float) - 1) * math.log1p(-self.p)

    def log_survival(self, length):
        """log(1 - G(length)), the chance that a sojourn exceeds ``length``."""
        return np.asarray(length, dtype=float) * math.log1p(-self.p)


@dataclass(frozen=True)
class FixedK:
    """Exactly ``k`` changepoints, uniform over their ordered locations."""

    k: int

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 0:
            raise ValidationError(f"k must be a non-negative integer, got {self.k!r}")

    def check(self, n):
        if self.k > n - 1:
            raise ValidationError(f"k={self.k} changepoints do not fit in a series of length {n}")

    def log_mass(self, n):
        return -(gammaln(n) - gammaln(self.k + 1) - gammaln(n - self.k))
