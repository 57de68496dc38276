"""Deterministic SVG rendering of region families, optionally under a data panel.

Each region is drawn as a broken horizontal line at height alpha: one
segment per run of consecutive members.
"""

from ._validation import ValidationError
from .regions import to_intervals

WIDTH = 800
MARGIN_LEFT = 50
MARGIN_RIGHT = 20
DATA_HEIGHT = 160
REGION_HEIGHT = 300
GAP = 30


def _f(x):
    return f"{x:.2f}"


def _x_ticks(n):
    step = 1
    for s in (1, 2, 5, 10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000):
        step = s
        if n / s <= 10:
            break
    return list(range(step, n + 1, step))


def render_svg(regions, series=None, n=None, manifest=None):
    """SVG text for ``regions`` (a sequence of Region) over the universe ``1..n``.

    ``n`` defaults to the series length, else to the largest member.
    """
    if series is not None:
        if n is not None and n != len(series):
            raise ValidationError(f"series has {len(series)} points but n={n}")
        n = len(series)
    top_member = max((max(r.members) for r in regions if r.members), default=0)
    if n is None:
        n = max(top_member, 1)
    if top_member > n:
        raise ValidationError(f"region member {top_member} exceeds universe size {n}")

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    data_h = DATA_HEIGHT if series is not None else 0
    region_top = 20 + (data_h + GAP if series is not None else 0)
    height = region_top + REGION_HEIGHT + 30

    def x_left(i):
        return MARGIN_LEFT + (i - 1) / n * plot_w

    def x_mid(i):
        return MARGIN_LEFT + (i - 0.5) / n * plot_w

    def y_alpha(a):
        return region_top + (1 - float(a)) * REGION_HEIGHT

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" '
        f'viewBox="0 0 {WIDTH} {height}">',
    ]
    if manifest:
        out.append(f"<!-- manifest={manifest} -->")
    out.append('<rect x="0" y="0" width="100%" height="100%" fill="white"/>')

    if series is not None:
        lo, hi = float(min(series)), float(max(series))
        span = hi - lo or 1.0
        pts = " ".join(f"{_f(x_mid(i))},{_f(20 + (hi - float(v)) / span * data_h)}"
                       for i, v in enumerate(series, start=1))
        out.append(f'<g id="data"><rect x="{MARGIN_LEFT}" y="20" width="{plot_w}" height="{data_h}" '
                   'fill="none" stroke="#888" stroke-width="0.5"/>')
        out.append(f'<polyline points="{pts}" fill="none" stroke="black" stroke-width="0.6"/></g>')

    out.append(f'<g id="regions"><rect x="{MARGIN_LEFT}" y="{region_top}" width="{plot_w}" '
               f'height="{REGION_HEIGHT}" fill="none" stroke="#888" stroke-width="0.5"/>')
    for r in regions:
        y = _f(y_alpha(r.alpha))
        segs = [f'<line x1="{_f(x_left(lo))}" y1="{y}" x2="{_f(x_left(hi + 1))}" y2="{y}"/>'
                for lo, hi in to_intervals(r.members)]
        out.append(f'<g class="region" data-alpha="{float(r.alpha):.12g}" stroke="black" '
                   f'stroke-width="2">' + "".join(segs) + "</g>")
    out.append("</g>")

    axis_y = region_top + REGION_HEIGHT
    out.append('<g id="axes" font-family="sans-serif" font-size="10" fill="black">')
    for a in (0, 0.5, 1):
        out.append(f'<text x="{MARGIN_LEFT - 6}" y="{_f(y_alpha(a) + 3)}" text-anchor="end">{a:g}</text>')
    out.append(f'<text x="12" y="{_f(region_top + REGION_HEIGHT / 2)}">&#945;</text>')
    for t in _x_ticks(n):
        out.append(f'<text x="{_f(x_mid(t))}" y="{axis_y + 14}" text-anchor="middle">{t}</text>')
    out.append("</g></svg>")
    return "\n".join(out) + "\n"


def write_svg(path, regions, series=None, n=None, manifest=None):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_svg(regions, series, n, manifest))
