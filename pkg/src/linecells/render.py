"""SVG pictures of arrangements.

The one corner of the package where exact values are rounded: coordinates
are printed with 12 significant digits for display only and never read
back.  All clipping decisions are still made in exact arithmetic, so which
elements appear, and the counts a test can assert on, are deterministic.
"""

from __future__ import annotations

from decimal import Decimal, localcontext
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .core import Line, LineFamily, PointR, intersect, side_of

MARGIN = Fraction(1, 10)
FILLS = ("#ffd54d", "#aed581", "#81d4fa", "#f48fb1", "#b39ddb", "#ffab91")


def _fmt(q: Fraction) -> str:
    with localcontext() as ctx:
        ctx.prec = 12
        d = Decimal(int(q.numerator)) / Decimal(int(q.denominator))
    return format(d, "f") if -40 < d.adjusted() < 40 else str(d)


def viewport(f: LineFamily) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """(x0, y0, x1, y1) covering every arrangement vertex with a 10% margin;
    a vertex-free family falls back to its values over x in [-1, 1]."""
    pts = [intersect(a, b) for a, b in combinations(f.lines, 2)]
    if not pts:
        pts = [PointR(x, l.at(x)) for l in f.lines for x in (-1, 0, 1)]
    if not pts:
        pts = [PointR(-1, -1), PointR(1, 1)]
    xs = [p.x for p in pts]
    ys = [p.y for p in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    pad_x = (x1 - x0) * MARGIN or Fraction(1)
    pad_y = (y1 - y0) * MARGIN or Fraction(1)
    return x0 - pad_x, y0 - pad_y, x1 + pad_x, y1 + pad_y


def _clip_line(l: Line, box) -> Optional[tuple[PointR, PointR]]:
    x0, y0, x1, y1 = box
    lo, hi = x0, x1
    if l.m != 0:
        xa = (y0 - l.c) / l.m
        xb = (y1 - l.c) / l.m
        if xa > xb:
            xa, xb = xb, xa
        lo = max(lo, xa)
        hi = min(hi, xb)
    elif not (y0 <= l.c <= y1):
        return None
    if lo > hi:
        return None
    return PointR(lo, l.at(lo)), PointR(hi, l.at(hi))


def _clip_region(constraints, box) -> list[PointR]:
    """Viewport rectangle cut down by each (line, sign) halfplane, exactly."""
    x0, y0, x1, y1 = box
    poly = [PointR(x0, y0), PointR(x1, y0), PointR(x1, y1), PointR(x0, y1)]
    for line, s in constraints:
        nxt: list[PointR] = []
        for a, b in zip(poly, poly[1:] + poly[:1]):
            fa = s * (a.y - line.at(a.x))
            fb = s * (b.y - line.at(b.x))
            if fa >= 0:
                nxt.append(a)
            if (fa > 0 and fb < 0) or (fa < 0 and fb > 0):
                t = fa / (fa - fb)
                nxt.append(PointR(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)))
        poly = nxt
        if not poly:
            return []
    return poly


def render_svg(
    f: LineFamily,
    highlights: Sequence[tuple[Sequence[int], Sequence[int]]] = (),
    size: int = 640,
) -> str:
    """SVG 1.1 document showing every line of f clipped to the viewport.

    Each highlight is a pair (indices, signs) filling the region on the
    given side of each named line; regions missing the viewport are
    dropped.  Output order and counts are deterministic: one <line> per
    family line meeting the viewport, one <polygon> per nonempty highlight.
    """
    if len(f) == 0:
        raise ValueError("nothing to draw")
    box = viewport(f)
    x0, y0, x1, y1 = box
    w = x1 - x0
    h = y1 - y0
    # y grows downward in SVG: flip via a group transform so the picture
    # matches the usual orientation
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size}" height="{size}" '
        f'viewBox="{_fmt(x0)} {_fmt(-y1)} {_fmt(w)} {_fmt(h)}">',
        f'<g transform="scale(1,-1)" stroke-width="{_fmt(w / 320)}">',
    ]
    for hi, (idx, signs) in enumerate(highlights):
        constraints = [(f[i], s) for i, s in zip(idx, signs)]
        poly = _clip_region(constraints, box)
        if not poly:
            continue
        pts = " ".join(f"{_fmt(p.x)},{_fmt(p.y)}" for p in poly)
        fill = FILLS[hi % len(FILLS)]
        parts.append(f'<polygon points="{pts}" fill="{fill}" fill-opacity="0.6" stroke="none"/>')
    for l in f.lines:
        seg = _clip_line(l, box)
        if seg is None:
            continue
        a, b = seg
        parts.append(
            f'<line x1="{_fmt(a.x)}" y1="{_fmt(a.y)}" '
            f'x2="{_fmt(b.x)}" y2="{_fmt(b.y)}" stroke="#1a1a2e"/>'
        )
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
