import random

import pytest

from cpcredible.samples import SampleSet


def random_samples(rng, n, m, max_size=4, empty_weight=0.1):
    out = []
    for _ in range(m):
        if rng.random() < empty_weight:
            out.append(())
            continue
        k = rng.randint(1, min(n, max_size))
        out.append(tuple(sorted(rng.sample(range(1, n + 1), k))))
    return SampleSet(n, out)


@pytest.fixture
def small_cover():
    # {1},{2},{1,2},{3}: the running exact-solver example
    return SampleSet(3, [(1,), (2,), (1, 2), (3,)])


@pytest.fixture
def three_samples():
    return SampleSet(5, [(2,), (2,), (5,)])


@pytest.fixture
def rng():
    return random.Random(20240611)


_VERDICTS = []


@pytest.fixture
def verdict():
    """Record one acceptance line, then assert it."""
    def check(label, ok, detail):
        _VERDICTS.append(f"{label}: {'PASS' if ok else 'FAIL'} ({detail})")
        assert ok, detail
    return check


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
