"""Input validation helpers shared by the estimators and the CLI."""

from fractions import Fraction
from numbers import Rational, Real

import numpy as np

# floats such as 1/30 are snapped to the nearest rational with a bounded
# denominator so that ceil(m * (1 - alpha)) is not perturbed by rounding
_MAX_DENOMINATOR = 10**6


class ValidationError(ValueError):
    """Raised when an argument lies outside its admissible domain."""


def as_fraction(value):
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, Real):
        if not np.isfinite(value):
            raise ValidationError(f"expected a finite number, got {value!r}")
        return Fraction(float(value)).limit_denominator(_MAX_DENOMINATOR)
    raise ValidationError(f"expected a real number, got {value!r}")


def check_alpha(alpha):
    """Return ``alpha`` as an exact fraction, raising if it is not in [0, 1]."""
    frac = as_fraction(alpha)
    if not 0 <= frac <= 1:
        raise ValidationError(f"alpha must lie in [0, 1], got {alpha!r}")
    return frac


def coverage_threshold(m, alpha):
    """Number of samples a region must cover: ceil(m * (1 - alpha))."""
    need = m * (1 - check_alpha(alpha))
    return -((-need.numerator) // need.denominator)


def check_probability(p, name="p"):
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValidationError(f"{name} must lie in (0, 1), got {p!r}")
    return p


def check_positive(x, name):
    x = float(x)
    if not (np.isfinite(x) and x > 0):
        raise ValidationError(f"{name} must be a positive finite number, got {x!r}")
    return x


def check_series(y):
    arr = np.asarray(y, dtype=float)
    if arr.ndim != 1:
        raise ValidationError(f"time series must be one-dimensional, got shape {arr.shape}")
    if arr.size < 1:
        raise ValidationError("time series must contain at least one value")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("time series contains NaN or infinite values")
    return arr


def alpha_grid(steps=30):
    """The grid {1/steps, ..., (steps-1)/steps} as exact fractions."""
    steps = int(steps)
    if steps < 2:
        raise ValidationError(f"alpha grid needs at least 2 steps, got {steps}")
    return [Fraction(k, steps) for k in range(1, steps)]
