"""Smallest simultaneous credible regions for multiple changepoint locations."""

__version__ = "0.1.0"

from .alternatives import MarginalProfile, bonferroni_region, joined_hdr, lower_bound_set, marginal_profile
from .analysis import FeatureWindow, convergence_study, greedy_vs_exact, importance, sensitivity
from .estimators import ChangepointPosterior, CredibleRegions
from .exact import brute_force, exact_solve
from .greedy import GreedyTrajectory, greedy_solve, region_for_alpha
from .ilp import export_ilp
from .models import FixedK, Geometric, MeanChange, SegmentModel, VarianceChange, segment_loglik
from .posterior import (PosteriorCache, build_cache, config_log_posterior, enumerate_exact_posterior,
                        sample_posterior)
from .regions import Region, RegionFamily
from .samples import ParseError, SampleSet, coverage, read_samples, write_samples
from .simulate import SimulationSpec, simulate
from ._validation import ValidationError

__all__ = [
    "ChangepointPosterior", "CredibleRegions", "FeatureWindow", "FixedK", "Geometric", "GreedyTrajectory",
    "MarginalProfile", "MeanChange", "ParseError", "PosteriorCache", "Region", "RegionFamily", "SampleSet",
    "SegmentModel", "SimulationSpec", "ValidationError", "VarianceChange", "bonferroni_region",
    "brute_force", "build_cache", "config_log_posterior", "convergence_study", "coverage",
    "enumerate_exact_posterior", "exact_solve", "export_ilp", "greedy_solve", "greedy_vs_exact",
    "importance", "joined_hdr", "lower_bound_set", "marginal_profile", "read_samples",
    "region_for_alpha", "sample_posterior", "segment_loglik", "sensitivity", "simulate", "write_samples",
]
