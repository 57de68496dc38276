from fractions import Fraction
import math

import pytest

from cpcredible.exact import exact_solve
from cpcredible.ilp import export_ilp, format_ilp
from cpcredible.samples import SampleSet

from conftest import random_samples

highspy = pytest.importorskip("highspy")


def solve_lp_file(path):
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.readModel(str(path))
    h.run()
    return round(h.getInfo().objective_function_value)


def test_text_layout(small_cover):
    text = format_ilp(small_cover, Fraction(1, 4))
    assert text.splitlines()[2:4] == ["Minimize", " region_size: U1 + U2 + U3"]
    assert " coverage: F1 + F2 + F3 + F4 >= 3" in text
    assert text.rstrip().endswith("End")


def test_small_fixture_objective(tmp_path, small_cover):
    path = tmp_path / "c.lp"
    export_ilp(small_cover, Fraction(1, 4), path)
    assert solve_lp_file(path) == 2


def test_uniform_singletons_objective(tmp_path):
    n = 15
    S = SampleSet(n, [(i,) for i in range(1, n + 1)])
    for a in (Fraction(1, 10), Fraction(1, 2), Fraction(9, 10)):
        path = tmp_path / "u.lp"
        export_ilp(S, a, path)
        assert solve_lp_file(path) == math.ceil((1 - a) * n)


def test_objectives_match_exact(tmp_path, rng):
    for k in range(25):
        S = random_samples(rng, rng.randint(2, 12), rng.randint(1, 30))
        a = Fraction(rng.randint(0, 10), 10)
        path = tmp_path / f"f{k}.lp"
        export_ilp(S, a, path)
        assert solve_lp_file(path) == exact_solve(S, a).size
