"""Credible regions, families of regions over an alpha grid, and the region CSV."""

import csv
from dataclasses import dataclass, field
from fractions import Fraction
import io

from ._validation import ValidationError, as_fraction


@dataclass(frozen=True)
class Region:
    """A set of time points together with the coverage it achieves.

    ``optimal`` is only true when the region came with a proof of minimality.
    """

    members: frozenset
    alpha: Fraction
    achieved_coverage: Fraction
    optimal: bool = False

    @property
    def size(self):
        return len(self.members)

    @property
    def feasible(self):
        return self.achieved_coverage >= 1 - self.alpha

    def sorted_members(self):
        return sorted(self.members)

    def intervals(self):
        return to_intervals(self.members)


@dataclass
class RegionFamily:
    grid: list
    regions: list
    nested: bool = field(default=False)

    def __post_init__(self):
        if len(self.grid) != len(self.regions):
            raise ValidationError("one region per grid value is required")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValidationError("alpha grid must be strictly increasing")

    def is_nested(self):
        return all(b.members <= a.members for a, b in zip(self.regions, self.regions[1:]))

    def __iter__(self):
        return iter(self.regions)

    def __len__(self):
        return len(self.regions)


def to_intervals(members):
    """Run-length encode a set of integers as sorted inclusive ``(lo, hi)`` pairs."""
    out = []
    for i in sorted(members):
        if out and i == out[-1][1] + 1:
            out[-1][1] = i
        else:
            out.append([i, i])
    return [tuple(iv) for iv in out]


def format_intervals(members):
    return ";".join(str(lo) if lo == hi else f"{lo}-{hi}" for lo, hi in to_intervals(members))


def parse_intervals(text):
    members = set()
    text = text.strip()
    if not text:
        return frozenset()
    for part in text.split(";"):
        lo, sep, hi = part.strip().partition("-")
        try:
            lo = int(lo)
            hi = int(hi) if sep else lo
        except ValueError:
            raise ValidationError(f"malformed interval {part!r}") from None
        if hi < lo:
            raise ValidationError(f"empty interval {part!r}")
        if lo < 1:
            raise ValidationError(f"time points start at 1, got {part!r}")
        members.update(range(lo, hi + 1))
    return frozenset(members)


def _fmt_number(x):
    return format(float(x), ".12g")


REGION_COLUMNS = ["alpha", "achieved_coverage", "size", "members"]


def regions_to_csv(regions, manifest=None):
    buf = io.StringIO()
    if manifest:
        buf.write(f"# manifest={manifest}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REGION_COLUMNS)
    for r in regions:
        writer.writerow([_fmt_number(r.alpha), _fmt_number(r.achieved_coverage), r.size,
                         format_intervals(r.members)])
    return buf.getvalue()


def regions_from_csv(text):
    rows = [line for line in text.splitlines() if not line.startswith("#")]
    reader = csv.DictReader(rows)
    if reader.fieldnames is None or any(c not in reader.fieldnames for c in REGION_COLUMNS):
        raise ValidationError(f"region CSV needs columns {REGION_COLUMNS}")
    regions = []
    for row in reader:
        members = parse_intervals(row["members"])
        if len(members) != int(row["size"]):
            raise ValidationError(f"size column disagrees with members at alpha={row['alpha']}")
        regions.append(Region(members, as_fraction(float(row["alpha"])),
                              as_fraction(float(row["achieved_coverage"]))))
    return regions


def write_regions(regions, path, manifest=None):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(regions_to_csv(regions, manifest))


def read_regions(path):
    with open(path, encoding="utf-8") as fh:
        return regions_from_csv(fh.read())
