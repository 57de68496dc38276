from fractions import Fraction
import math

import numpy as np
import pytest

from cpcredible import ValidationError
from cpcredible.alternatives import (bonferroni_region, joined_hdr, lower_bound_set, marginal_profile)
from cpcredible.exact import exact_solve
from cpcredible.samples import SampleSet, coverage

from conftest import random_samples


def test_marginal_counts():
    prof = marginal_profile(SampleSet(4, [(1,), (1,), (2,)]))
    assert [prof.frequency(i) for i in range(1, 5)] == [Fraction(2, 3), Fraction(1, 3), 0, 0]
    assert prof.to_csv().splitlines()[:2] == ["index,p_hat", "1,0.666666666667"]


def test_marginal_sum_is_mean_cardinality(rng):
    S = random_samples(rng, 12, 60)
    prof = marginal_profile(S)
    mean_card = sum(len(c) * int(k) for c, k in zip(S.configs, S.multiplicities)) / S.m
    assert prof.p_hat.sum() == pytest.approx(mean_card)


def test_uniform_singletons():
    n = 10
    S = SampleSet(n, [(i,) for i in range(1, n + 1)])
    prof = marginal_profile(S)
    assert all(prof.frequency(i) == Fraction(1, n) for i in range(1, n + 1))
    for a in (Fraction(0), Fraction(1, 2), Fraction(99, 100)):
        assert bonferroni_region(prof, a).members == frozenset(range(1, n + 1))
    assert lower_bound_set(prof, Fraction(1, n)) == frozenset()


def test_bonferroni_threshold():
    counts = np.array([200, 9] + [0] * 8)
    from cpcredible.alternatives import MarginalProfile
    prof = MarginalProfile(counts, 1000)
    assert bonferroni_region(prof, 0.1).members == {1}


def test_lower_bound_at_zero_is_union(rng):
    S = random_samples(rng, 15, 20)
    assert lower_bound_set(marginal_profile(S), 0) == frozenset(S.union().tolist())


def test_hdr_alpha_zero_is_union(rng):
    S = random_samples(rng, 10, 25)
    assert joined_hdr(S, None, 0).members == frozenset(S.union().tolist())


def test_hdr_top_two():
    S = SampleSet(6, [(1,), (2, 3), (4,), (5, 6)])
    w = {(1,): -1.0, (2, 3): -3.0, (4,): -2.0, (5, 6): -4.0}
    assert joined_hdr(S, w, 0.5).members == {1, 4}
    assert joined_hdr(S, lambda c: w[c], 0.5).members == {1, 4}


def test_hdr_ties_break_lexicographically():
    S = SampleSet(3, [(2,), (1,)])
    assert joined_hdr(S, lambda c: 0.0, 0.5).members == {1}


def test_hdr_missing_weight():
    S = SampleSet(3, [(2,), (1,)])
    with pytest.raises(ValidationError):
        joined_hdr(S, {(1,): 0.0}, 0.5)


def test_sandwich_and_coverage(rng):
    for _ in range(200):
        S = random_samples(rng, rng.randint(1, 10), rng.randint(1, 30))
        a = Fraction(rng.randint(0, 10), 10)
        prof = marginal_profile(S)
        e = exact_solve(S, a)
        h = joined_hdr(S, None, a)
        b = bonferroni_region(prof, a, S)
        assert h.achieved_coverage >= 1 - a and b.achieved_coverage >= 1 - a
        assert e.size <= h.size and e.size <= b.size
        assert lower_bound_set(prof, a) <= e.members
        assert coverage(b.members, S) == b.achieved_coverage


def test_bonferroni_antitone(rng):
    S = random_samples(rng, 20, 80)
    prof = marginal_profile(S)
    sets = [bonferroni_region(prof, Fraction(k, 10)).members for k in range(11)]
    assert all(b <= a for a, b in zip(sets, sets[1:]))
    assert math.isclose(prof.p_hat.max(), max(prof.frequency(i) for i in range(1, 21)))
