"""Synthetic piecewise-constant Gaussian series, their config files, and series CSV I/O."""

import csv
from dataclasses import dataclass, field
import io

import numpy as np

from ._validation import ValidationError, check_positive, check_series

# small jumps of +0.5, +1 and +0.8 at 100, 280 and 450; the six large
# jumps alternate +-2.5 so they stand well clear of unit-variance noise
REPLICA_CHANGEPOINTS = (100, 200, 250, 280, 300, 320, 335, 350, 450)
REPLICA_MEANS = (0.0, 0.5, 3.0, 0.5, 1.5, 4.0, 1.5, 4.0, 1.5, 2.3)
REPLICA_LARGE_JUMPS = (200, 250, 300, 320, 335, 350)

# synthetic stand-in for a daily returns series with five variance regimes
RETURNS_CHANGEPOINTS = (90, 200, 310, 400, 520)
RETURNS_SDS = (0.007, 0.016, 0.008, 0.02, 0.01, 0.005)


@dataclass(frozen=True)
class SimulationSpec:
    """Piecewise-constant parameters for a Gaussian series.

    ``changepoints`` are segment starts in ``2..n``.  For ``model="mean"``
    ``params`` are segment means (noise variance ``noise_variance``); for
    ``model="variance"`` they are segment variances around mean zero.
    """

    n: int
    changepoints: tuple = field(default_factory=tuple)
    params: tuple = (0.0,)
    model: str = "mean"
    noise_variance: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"n must be >= 1, got {self.n}")
        cps = tuple(self.changepoints)
        if any(b <= a for a, b in zip(cps, cps[1:])) or (cps and (cps[0] < 2 or cps[-1] > self.n)):
            raise ValidationError(f"changepoints must be strictly increasing within 2..{self.n}")
        if len(self.params) != len(cps) + 1:
            raise ValidationError(f"expected {len(cps) + 1} segment parameters, got {len(self.params)}")
        if self.model not in ("mean", "variance"):
            raise ValidationError(f"model must be 'mean' or 'variance', got {self.model!r}")
        if self.model == "variance":
            for v in self.params:
                check_positive(v, "segment variance")
        check_positive(self.noise_variance, "noise_variance")

    def segment_values(self):
        """Per-time-point parameter sequence of length ``n``."""
        bounds = (1,) + tuple(self.changepoints) + (self.n + 1,)
        return np.repeat(np.asarray(self.params, dtype=float), np.diff(bounds))


def simulate(spec):
    rng = np.random.default_rng(spec.seed)
    values = spec.segment_values()
    noise = rng.standard_normal(spec.n)
    if spec.model == "mean":
        return values + np.sqrt(spec.noise_variance) * noise
    return np.sqrt(values) * noise


def replica_spec(seed=0, n=550):
    """Mean-change scenario with nine changepoints on ``n = 550`` points."""
    return SimulationSpec(n=n, changepoints=REPLICA_CHANGEPOINTS, params=REPLICA_MEANS,
                          model="mean", noise_variance=1.0, seed=seed)


def returns_spec(seed=0):
    return SimulationSpec(n=600, changepoints=RETURNS_CHANGEPOINTS,
                          params=tuple(sd * sd for sd in RETURNS_SDS), model="variance", seed=seed)


# -- flat key-value config ----------------------------------------------
def _floats(text):
    text = text.strip()
    return tuple(float(tok) for tok in text.split(",")) if text else ()


def parse_spec(text):
    """Parse ``key = value`` lines (``#`` comments) into a :class:`SimulationSpec`."""
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValidationError(f"line {lineno}: expected key = value")
        raw[key.strip()] = value.strip()
    unknown = set(raw) - {"n", "seed", "model", "changepoints", "params", "noise_variance"}
    if unknown:
        raise ValidationError(f"unknown simulation keys: {sorted(unknown)}")
    if "n" not in raw:
        raise ValidationError("simulation config needs n")
    try:
        return SimulationSpec(
            n=int(raw["n"]),
            changepoints=tuple(int(v) for v in _floats(raw.get("changepoints", ""))),
            params=_floats(raw.get("params", "0")),
            model=raw.get("model", "mean"),
            noise_variance=float(raw.get("noise_variance", 1.0)),
            seed=int(raw.get("seed", 0)),
        )
    except ValueError as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"malformed simulation config: {exc}") from None


def format_spec(spec):
    return (f"n = {spec.n}\nseed = {spec.seed}\nmodel = {spec.model}\n"
            f"changepoints = {','.join(map(str, spec.changepoints))}\n"
            f"params = {','.join(repr(float(p)) for p in spec.params)}\n"
            f"noise_variance = {float(spec.noise_variance)!r}\n")


def read_spec(path):
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read())


# -- series CSV -----------------------------------------------------------
def parse_series(text):
    """One value per line, or ``index,value`` pairs; an optional header is skipped."""
    values = []
    rows = [r for r in csv.reader(io.StringIO(text)) if r and not r[0].startswith("#")]
    for k, row in enumerate(rows):
        try:
            values.append(float(row[-1]))
        except ValueError:
            if k == 0 and not values:
                continue
            raise ValidationError(f"row {k + 1}: cannot parse {row!r}") from None
    return check_series(values)


def format_series(y):
    return "index,value\n" + "".join(f"{i},{float(v)!r}\n" for i, v in enumerate(y, start=1))


def read_series(path):
    with open(path, encoding="utf-8") as fh:
        return parse_series(fh.read())


def write_series(y, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_series(y))
