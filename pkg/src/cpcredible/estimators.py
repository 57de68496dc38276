"""scikit-learn style wrappers around the solvers and samplers."""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from ._validation import ValidationError, alpha_grid, check_alpha, check_series
from .exact import brute_force, exact_solve
from .greedy import greedy_solve, region_for_alpha
from .models import FixedK, Geometric, MeanChange, SegmentModel, VarianceChange
from .posterior import build_cache, config_log_posterior, enumerate_exact_posterior, sample_posterior
from .regions import RegionFamily
from .samples import SampleSet


def check_samples(X, n=None):
    """Accept a :class:`SampleSet` or an iterable of configurations (then ``n`` is required)."""
    if isinstance(X, SampleSet):
        if n is not None and n != X.n:
            raise ValidationError(f"sample set has n={X.n}, expected {n}")
        return X
    if n is None:
        raise ValidationError("n is required when samples are given as plain configurations")
    return SampleSet(n, X)


def _check_fitted(est, attr):
    if not hasattr(est, attr):
        raise NotFittedError(f"{type(est).__name__} is not fitted yet; call fit first")


class CredibleRegions(BaseEstimator):
    """Smallest simultaneous credible regions from posterior changepoint samples.

    Parameters
    ----------
    method : {"greedy", "exact", "brute"}
    alphas : sequence of float, optional
        Levels to solve; defaults to ``k/30`` for ``k = 1..29``.
    max_nodes, time_limit :
        Budget for ``method="exact"``.

    Attributes
    ----------
    regions_ : RegionFamily
    trajectory_ : GreedyTrajectory
    n_ : int
    """

    def __init__(self, method="greedy", alphas=None, max_nodes=2_000_000, time_limit=None):
        self.method = method
        self.alphas = alphas
        self.max_nodes = max_nodes
        self.time_limit = time_limit

    def fit(self, X, y=None, n=None):
        samples = check_samples(X, n)
        grid = alpha_grid() if self.alphas is None else [check_alpha(a) for a in self.alphas]
        self.trajectory_ = greedy_solve(samples)
        greedy = [region_for_alpha(self.trajectory_, a) for a in grid]
        if self.method == "greedy":
            regions = greedy
        elif self.method == "exact":
            regions = [exact_solve(samples, a, self.max_nodes, self.time_limit, incumbent=g)
                       for a, g in zip(grid, greedy)]
        elif self.method == "brute":
            regions = [brute_force(samples, a) for a in grid]
        else:
            raise ValidationError(f"unknown method {self.method!r}")
        self.regions_ = RegionFamily(grid, regions)
        self.regions_.nested = self.regions_.is_nested()
        self.n_ = samples.n
        return self

    def region(self, alpha):
        """Region at an arbitrary level; only the greedy path can answer off-grid."""
        _check_fitted(self, "regions_")
        alpha = check_alpha(alpha)
        for a, r in zip(self.regions_.grid, self.regions_.regions):
            if a == alpha:
                return r
        if self.method != "greedy":
            raise ValidationError(f"alpha={alpha} is not on the fitted grid")
        return region_for_alpha(self.trajectory_, alpha)

    def transform(self, X, n=None):
        """Coverage of each fitted region on the sample set ``X`` (one value per level)."""
        _check_fitted(self, "regions_")
        samples = check_samples(X, self.n_ if n is None else n)
        return np.array([samples.covered_count(r.members) / samples.m for r in self.regions_])

    def membership(self):
        """Boolean matrix ``(levels, n)``: is point ``i`` in the region at each level."""
        _check_fitted(self, "regions_")
        out = np.zeros((len(self.regions_), self.n_), dtype=bool)
        for row, r in enumerate(self.regions_):
            out[row, [i - 1 for i in r.members]] = True
        return out


class ChangepointPosterior(BaseEstimator):
    """Conjugate changepoint model with exact posterior sampling.

    Parameters
    ----------
    model : {"mean", "variance"}
        Gaussian mean-change segments (known noise variance, normal prior on
        the mean) or zero-mean variance-change segments (inverse-gamma prior).
    prior : {"geometric", "fixed_k"}
    p : float
        Success probability of the geometric sojourn prior.
    k : int
        Number of changepoints under the fixed-k prior.
    """

    def __init__(self, model="mean", prior="geometric", p=3 / 550, k=1, noise_variance=1.0,
                 prior_mean=0.0, prior_variance=25.0, shape=1.0, scale=1e-4):
        self.model = model
        self.prior = prior
        self.p = p
        self.k = k
        self.noise_variance = noise_variance
        self.prior_mean = prior_mean
        self.prior_variance = prior_variance
        self.shape = shape
        self.scale = scale

    def _family(self):
        if self.model == "mean":
            return MeanChange(self.noise_variance, self.prior_mean, self.prior_variance)
        if self.model == "variance":
            return VarianceChange(self.shape, self.scale)
        raise ValidationError(f"unknown segment model {self.model!r}")

    def _prior(self):
        if self.prior == "geometric":
            return Geometric(float(self.p))
        if self.prior in ("fixed_k", "fixed-k"):
            return FixedK(int(self.k))
        raise ValidationError(f"unknown prior {self.prior!r}")

    def fit(self, X, y=None):
        series = check_series(X)
        self.segment_model_ = SegmentModel(self._family(), series)
        self.prior_ = self._prior()
        self.cache_ = build_cache(self.segment_model_, self.prior_)
        self.log_evidence_ = self.cache_.log_evidence
        self.n_ = len(series)
        return self

    def sample(self, m, seed=0, n_jobs=1):
        _check_fitted(self, "cache_")
        return sample_posterior(self.cache_, m, seed=seed, n_jobs=n_jobs)

    def log_posterior(self, config):
        _check_fitted(self, "cache_")
        return config_log_posterior(self.segment_model_, self.prior_, config)

    def enumerate(self):
        _check_fitted(self, "cache_")
        return enumerate_exact_posterior(self.segment_model_, self.prior_)
