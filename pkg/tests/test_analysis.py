from fractions import Fraction

import numpy as np
import pytest

from cpcredible import ValidationError
from cpcredible._validation import alpha_grid
from cpcredible.analysis import (FeatureWindow, convergence_study, exact_family, feature_report,
                                 greedy_family, greedy_vs_exact, importance, replica_windows,
                                 rows_to_csv, sensitivity)
from cpcredible.models import Geometric, MeanChange, SegmentModel
from cpcredible.regions import Region, RegionFamily
from cpcredible.samples import SampleSet

from conftest import random_samples

GRID = alpha_grid()


def family_touching(window, upto):
    regions = [Region(window if a <= upto else frozenset({1}), a, Fraction(1)) for a in GRID]
    return RegionFamily(GRID, regions)


def test_window_parsing():
    w = FeatureWindow.parse("spike=90..110,200")
    assert w.label == "spike" and len(w.members) == 22 and 200 in w.members
    for bad in ["90..110", "x=", "x=5..3", "x=a..b"]:
        with pytest.raises(ValidationError):
            FeatureWindow.parse(bad)
    with pytest.raises(ValidationError):
        FeatureWindow.parse("x=5..600").check(550)


def test_importance_cases():
    w = FeatureWindow.from_ranges("w", [(40, 60)])
    far = RegionFamily(GRID, [Region(frozenset({1}), a, Fraction(1)) for a in GRID])
    assert importance(far, w) == Fraction(1, 30)
    assert importance(family_touching(w.members, Fraction(1)), w) == 1
    assert importance(family_touching(w.members, Fraction(1, 2)), w) == Fraction(16, 30)
    with pytest.raises(ValidationError):
        importance(RegionFamily([], []), w)


def test_sensitivity_counts():
    S = SampleSet(400, [(100,), (300,)])
    assert sensitivity(S, FeatureWindow.from_ranges("w", [(90, 110)])) == Fraction(1, 2)
    S = SampleSet(5, [(1,), (2, 5)])
    assert sensitivity(S, FeatureWindow.from_ranges("all", [(1, 5)])) == 1


def test_regions_point_to_sensitive_windows(rng):
    # a feasible region avoiding W covers only samples that avoid W
    for _ in range(40):
        S = random_samples(rng, 12, 40)
        fam = exact_family(S, alpha_grid(10))
        for lo in range(1, 12, 3):
            w = FeatureWindow.from_ranges("w", [(lo, lo + 2)])
            sens = sensitivity(S, w)
            assert importance(fam, w) >= sens
            for a, r in zip(fam.grid, fam.regions):
                if sens > a:
                    assert r.members & w.members


def test_greedy_family_nested(rng):
    fam = greedy_family(random_samples(rng, 30, 100))
    assert fam.nested and fam.is_nested() and len(fam) == 29


def test_convergence_rows_and_m_one():
    y = np.r_[np.zeros(30), np.full(30, 3.0)]
    model, prior = SegmentModel(MeanChange(), y), Geometric(0.05)
    rows, summary = convergence_study(model, prior, 0.3, [1, 50], reps=5, seed=2)
    assert len(rows) == 10 and [s["m"] for s in summary] == [1, 50]
    rows2, _ = convergence_study(model, prior, 0.3, [1, 50], reps=5, seed=2)
    assert rows == rows2
    assert all(s["iqr"] >= 0 for s in summary)


def test_m_one_region_is_the_sample():
    y = np.r_[np.zeros(20), np.full(20, 4.0)]
    from cpcredible.posterior import build_cache, sample_posterior
    cache = build_cache(SegmentModel(MeanChange(), y), Geometric(0.05))
    S = sample_posterior(cache, 1, seed=3)
    fam = greedy_family(S, [Fraction(1, 2)])
    assert fam.regions[0].members == frozenset(S.configs[0])


def test_greedy_vs_exact_bounds(rng):
    sets = [random_samples(rng, 15, 40) for _ in range(3)]
    rows, failures = greedy_vs_exact(lambda r: sets[r], alpha_grid(10), 3)
    assert len(rows) == 27
    assert all(0 <= f <= 9 for f in failures)
    assert all(r["greedy_size"] >= r["exact_size"] for r in rows)


def test_greedy_optimal_gives_zero():
    S = SampleSet(5, [(1,), (1,), (2,)])
    _, failures = greedy_vs_exact(lambda r: S, alpha_grid(10), 2)
    assert failures == [0, 0]


def test_replica_windows_and_report(rng):
    labels = [w.label for w in replica_windows()]
    assert labels[:6] == ["cp200", "cp250", "cp300", "cp320", "cp335", "cp350"]
    assert labels[-2:] == ["first", "irregularity"]
    S = random_samples(rng, 550, 20)
    rep = feature_report(greedy_family(S), S, replica_windows())
    text = rows_to_csv(rep)
    assert text.splitlines()[0] == "label,importance,sensitivity"
