"""Changepoint sample sets, the coverage statistic and the samples file codec.

A sample is a strictly increasing tuple of time indices drawn from the
universe ``1..n``.  Samples are stored deduplicated with multiplicities and
two CSR-style index arrays: configuration -> members and point -> containing
configurations.
"""

from collections import Counter
from fractions import Fraction
import re

import numpy as np

from ._validation import ValidationError


class ParseError(ValueError):
    """Malformed samples file; carries the 1-based line number."""

    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def check_config(config, n):
    """Validate one configuration and return it as a tuple of ints."""
    cfg = tuple(int(i) for i in config)
    for a, b in zip(cfg, cfg[1:]):
        if b <= a:
            raise ValidationError(f"configuration {cfg} is not strictly increasing")
    if cfg and (cfg[0] < 1 or cfg[-1] > n):
        raise ValidationError(f"configuration {cfg} leaves the universe 1..{n}")
    return cfg


class SampleSet:
    """An immutable multiset of changepoint configurations over ``1..n``.

    Parameters
    ----------
    n : int
        Size of the universe; indices are 1-based labels.
    samples : iterable of iterables of int
        Raw samples, duplicates allowed.
    """

    def __init__(self, n, samples):
        n = int(n)
        if n < 1:
            raise ValidationError(f"universe size must be >= 1, got {n}")
        counts = Counter(check_config(s, n) for s in samples)
        self._init(n, counts)

    @classmethod
    def from_counts(cls, n, counts):
        """Build from a mapping ``config -> multiplicity``."""
        self = cls.__new__(cls)
        n = int(n)
        if n < 1:
            raise ValidationError(f"universe size must be >= 1, got {n}")
        merged = Counter()
        for cfg, k in dict(counts).items():
            if int(k) < 0:
                raise ValidationError(f"negative multiplicity for {cfg}")
            if int(k):
                merged[check_config(cfg, n)] += int(k)
        self._init(n, merged)
        return self

    def _init(self, n, counts):
        if not counts:
            raise ValidationError("a sample set needs at least one sample")
        self.n = n
        self.configs = tuple(sorted(counts))
        self.multiplicities = np.array([counts[c] for c in self.configs], dtype=np.int64)
        self.m = int(self.multiplicities.sum())

        sizes = np.array([len(c) for c in self.configs], dtype=np.int64)
        self.config_ptr = np.concatenate([[0], np.cumsum(sizes)])
        self.config_members = np.fromiter(
            (i for c in self.configs for i in c), dtype=np.int64, count=int(sizes.sum())
        )
        self._member_owner = np.repeat(np.arange(len(self.configs)), sizes)

        # inverted index: for point i the distinct-config ids containing it
        order = np.argsort(self.config_members, kind="stable")
        self.point_configs = self._member_owner[order]
        per_point = np.bincount(self.config_members, minlength=n + 1)
        self.point_ptr = np.concatenate([[0], np.cumsum(per_point)])
        for arr in (self.multiplicities, self.config_ptr, self.config_members,
                    self.point_configs, self.point_ptr):
            arr.flags.writeable = False

    # -- accessors -----------------------------------------------------
    @property
    def n_distinct(self):
        return len(self.configs)

    def containing(self, i):
        """Distinct-config ids of the configurations that contain point ``i``."""
        return self.point_configs[self.point_ptr[i]:self.point_ptr[i + 1]]

    def point_counts(self):
        """Multiplicity-weighted number of samples containing each point.

        Returned array has length ``n + 1``; entry 0 is unused.
        """
        return np.bincount(
            self.config_members,
            weights=self.multiplicities[self._member_owner],
            minlength=self.n + 1,
        ).astype(np.int64)

    def union(self):
        return np.unique(self.config_members)

    def expanded(self):
        """Raw sample list in canonical order, multiplicities expanded."""
        out = []
        for cfg, k in zip(self.configs, self.multiplicities):
            out.extend([cfg] * int(k))
        return out

    def covered_mask(self, members):
        """Boolean array over distinct configs: is the config a subset of ``members``?"""
        inside = np.zeros(self.n + 1, dtype=bool)
        idx = np.asarray(list(members) if not isinstance(members, np.ndarray) else members,
                         dtype=np.int64)
        if idx.size and (idx.min() < 1 or idx.max() > self.n):
            raise ValidationError(f"region leaves the universe 1..{self.n}")
        inside[idx] = True
        missing = np.bincount(self._member_owner, weights=~inside[self.config_members],
                              minlength=self.n_distinct)
        return missing == 0

    def covered_count(self, members):
        return int(self.multiplicities[self.covered_mask(members)].sum())

    def __eq__(self, other):
        if not isinstance(other, SampleSet):
            return NotImplemented
        return (self.n == other.n and self.configs == other.configs
                and np.array_equal(self.multiplicities, other.multiplicities))

    def __hash__(self):
        return hash((self.n, self.configs, self.multiplicities.tobytes()))

    def __repr__(self):
        return f"SampleSet(n={self.n}, m={self.m}, distinct={self.n_distinct})"


def coverage(members, samples):
    """Exact fraction of samples (with multiplicity) that are subsets of ``members``."""
    return Fraction(samples.covered_count(members), samples.m)


# -- samples file -------------------------------------------------------
_HEADER = re.compile(r"^\s*n\s*=\s*(\d+)\s+m\s*=\s*(\d+)\s*$")


def parse_samples(text):
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError(1, "missing header 'n=<int> m=<int>'")
    match = _HEADER.match(lines[0])
    if not match:
        raise ParseError(1, f"malformed header {lines[0]!r}")
    n, m = int(match.group(1)), int(match.group(2))
    if n < 1 or m < 1:
        raise ParseError(1, "n and m must be positive")
    body = lines[1:]
    if len(body) != m:
        raise ParseError(len(lines) + 1, f"header declares m={m} but found {len(body)} samples")
    counts = Counter()
    for lineno, line in enumerate(body, start=2):
        try:
            cfg = tuple(int(tok) for tok in line.split())
        except ValueError:
            raise ParseError(lineno, f"non-integer token in {line!r}") from None
        try:
            cfg = check_config(cfg, n)
        except ValidationError as exc:
            raise ParseError(lineno, str(exc)) from None
        counts[cfg] += 1
    return SampleSet.from_counts(n, counts)


def format_samples(samples):
    parts = [f"n={samples.n} m={samples.m}\n"]
    for cfg, k in zip(samples.configs, samples.multiplicities):
        parts.append((" ".join(map(str, cfg)) + "\n") * int(k))
    return "".join(parts)


def read_samples(path):
    with open(path, encoding="utf-8") as fh:
        return parse_samples(fh.read())


def write_samples(samples, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_samples(samples))
