import numpy as np
import pytest

from cpcredible import ValidationError
from cpcredible.simulate import (REPLICA_CHANGEPOINTS, SimulationSpec, format_series, format_spec,
                                 parse_series, parse_spec, read_series, replica_spec, returns_spec,
                                 simulate, write_series)


def test_segment_values_follow_changepoints():
    spec = SimulationSpec(n=6, changepoints=(3, 5), params=(0.0, 1.0, 2.0))
    assert spec.segment_values().tolist() == [0, 0, 1, 1, 2, 2]


def test_seeded_and_reproducible():
    a, b = simulate(replica_spec(4)), simulate(replica_spec(4))
    assert np.array_equal(a, b)
    assert not np.array_equal(a, simulate(replica_spec(5)))
    assert len(a) == 550


def test_replica_noise_has_unit_variance():
    spec = replica_spec(0)
    resid = np.concatenate([simulate(replica_spec(s)) - spec.segment_values() for s in range(20)])
    assert resid.var() == pytest.approx(1.0, rel=0.03)


def test_variance_model_scales_noise():
    spec = returns_spec(1)
    y = simulate(spec)
    assert len(y) == 600
    first = y[:spec.changepoints[0] - 1]
    assert first.std() == pytest.approx(np.sqrt(spec.params[0]), rel=0.3)


@pytest.mark.parametrize("kwargs", [
    dict(n=10, changepoints=(1,), params=(0, 1)),
    dict(n=10, changepoints=(5, 5), params=(0, 1, 2)),
    dict(n=10, changepoints=(11,), params=(0, 1)),
    dict(n=10, changepoints=(5,), params=(0,)),
    dict(n=10, changepoints=(5,), params=(1, -1), model="variance"),
    dict(n=10, model="poisson"),
    dict(n=0),
])
def test_invalid_specs(kwargs):
    with pytest.raises(ValidationError):
        SimulationSpec(**kwargs)


def test_spec_round_trip():
    spec = SimulationSpec(n=30, changepoints=(10, 20), params=(0.0, 2.5, -1.0), seed=7)
    assert parse_spec(format_spec(spec)) == spec
    assert parse_spec("# comment\nn = 5\n") == SimulationSpec(n=5)


@pytest.mark.parametrize("text", ["n = 5\nbogus = 1\n", "seed = 1\n", "n = five\n", "n = 5\nparams\n"])
def test_bad_spec_text(text):
    with pytest.raises(ValidationError):
        parse_spec(text)


def test_series_formats():
    assert parse_series("1.5\n2\n").tolist() == [1.5, 2.0]
    assert parse_series("value\n1\n2\n").tolist() == [1.0, 2.0]
    assert parse_series("index,value\n1,0.5\n2,-0.25\n# tail\n").tolist() == [0.5, -0.25]
    with pytest.raises(ValidationError):
        parse_series("1\nabc\n")
    with pytest.raises(ValidationError):
        parse_series("value\n")


def test_series_round_trip_is_exact(tmp_path):
    y = simulate(replica_spec(2))
    path = tmp_path / "y.csv"
    write_series(y, path)
    assert np.array_equal(read_series(path), y)
    assert format_series(read_series(path)) == path.read_text()


def test_replica_layout():
    assert REPLICA_CHANGEPOINTS[0] == 100 and REPLICA_CHANGEPOINTS[-1] == 450
