"""Exact rational lines, points, predicates, and the transforms acting on them.

Every coordinate is a `fractions.Fraction`; floats are rejected at the
boundary so no rounding can leak into a geometric predicate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Optional, Sequence, Union

Rational = Fraction

RationalLike = Union[int, str, Fraction]


class GeometryError(Exception):
    pass


class ParallelLines(GeometryError):
    """Two lines with equal slope were asked for their intersection."""


class Violation(GeometryError):
    """A family failed the general-position check; `indices` names the
    smallest offending tuple in input order."""

    def __init__(self, *indices: int):
        self.indices = indices
        super().__init__(f"{type(self).__name__}{indices}")


class ParallelViolation(Violation):
    pass


class ConcurrentViolation(Violation):
    pass


class DegenerateOutput(GeometryError):
    """A transform produced a family violating general position."""


class MapsToInfinity(GeometryError):
    """A projective map sends an intersection of the family to infinity."""


class ProducesVertical(GeometryError):
    """A projective map would produce a vertical image line."""


def rat(x: RationalLike) -> Fraction:
    """Coerce to an exact rational.  Accepts int, Fraction, and strings like
    "3/4"; floats are rejected rather than silently converted."""
    if isinstance(x, float):
        raise TypeError(f"refusing float {x!r}; pass an int, Fraction, or 'p/q' string")
    return Fraction(x)


def sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class PointR:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", rat(self.x))
        object.__setattr__(self, "y", rat(self.y))


@dataclass(frozen=True)
class Line:
    """The line y = m*x + c.  Vertical lines are unrepresentable."""

    m: Fraction
    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "m", rat(self.m))
        object.__setattr__(self, "c", rat(self.c))

    def at(self, x: RationalLike) -> Fraction:
        return self.m * rat(x) + self.c

    def __str__(self) -> str:
        return f"y = {self.m}x + {self.c}"


def intersect(a: Line, b: Line) -> PointR:
    if a.m == b.m:
        raise ParallelLines(f"{a} and {b} are parallel")
    x = (b.c - a.c) / (a.m - b.m)
    return PointR(x, a.m * x + a.c)


def side_of(l: Line, p: PointR) -> int:
    """+1 if p is strictly above l, -1 strictly below, 0 on the line."""
    return sign(p.y - (l.m * p.x + l.c))


@dataclass(frozen=True)
class LineFamily:
    """A finite set of lines in general position, kept sorted by slope.

    Direct construction sorts the input and rejects duplicate slopes, but
    trusts the caller on concurrency (internal transforms preserve it);
    `check_general_position` is the validating factory for outside input.
    """

    lines: tuple[Line, ...]
    colors: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        lines = tuple(self.lines)
        colors = self.colors
        if colors is not None:
            colors = tuple(colors)
            if len(colors) != len(lines):
                raise ValueError("colors must align one-to-one with lines")
            order = sorted(range(len(lines)), key=lambda i: lines[i].m)
            lines = tuple(lines[i] for i in order)
            colors = tuple(colors[i] for i in order)
        else:
            lines = tuple(sorted(lines, key=lambda l: l.m))
        for i in range(len(lines) - 1):
            if lines[i].m == lines[i + 1].m:
                raise ParallelViolation(i, i + 1)
        object.__setattr__(self, "lines", lines)
        object.__setattr__(self, "colors", colors)

    def __len__(self) -> int:
        return len(self.lines)

    def __iter__(self) -> Iterator[Line]:
        return iter(self.lines)

    def __getitem__(self, i: int) -> Line:
        return self.lines[i]

    def subfamily(self, indices: Iterable[int]) -> "LineFamily":
        idx = sorted(set(indices))
        lines = tuple(self.lines[i] for i in idx)
        colors = tuple(self.colors[i] for i in idx) if self.colors else None
        return LineFamily(lines, colors)

    def slopes(self) -> tuple[Fraction, ...]:
        return tuple(l.m for l in self.lines)


def check_general_position(
    lines: Sequence[Line], colors: Optional[Sequence[str]] = None
) -> LineFamily:
    """Validate no-two-parallel and no-three-concurrent, reporting the
    smallest offending index tuple in *input* order."""
    lines = tuple(lines)
    n = len(lines)
    for i, j in combinations(range(n), 2):
        if lines[i].m == lines[j].m:
            raise ParallelViolation(i, j)
    for i, j, k in combinations(range(n), 3):
        if side_of(lines[k], intersect(lines[i], lines[j])) == 0:
            raise ConcurrentViolation(i, j, k)
    return LineFamily(lines, tuple(colors) if colors is not None else None)


@dataclass(frozen=True)
class UcpTransform:
    """Affine map (x, y) -> (delta*x + b.x, t*delta*x + delta^2*y + b.y).

    Sends slope m to t + delta*m; with delta > 0 this preserves slope order
    and the whole combinatorial type of an arrangement, including which
    cells are unbounded in which direction.
    """

    delta: Fraction
    t: Fraction
    b: PointR = PointR(0, 0)

    def __post_init__(self):
        object.__setattr__(self, "delta", rat(self.delta))
        object.__setattr__(self, "t", rat(self.t))
        if self.delta <= 0:
            raise ValueError("delta must be positive")

    def apply_line(self, l: Line) -> Line:
        m = self.t + self.delta * l.m
        c = self.delta ** 2 * l.c + self.b.y - m * self.b.x
        return Line(m, c)

    def apply_point(self, p: PointR) -> PointR:
        return PointR(
            self.delta * p.x + self.b.x,
            self.t * self.delta * p.x + self.delta ** 2 * p.y + self.b.y,
        )


def apply_ucp(f: LineFamily, T: UcpTransform) -> LineFamily:
    out = LineFamily(tuple(T.apply_line(l) for l in f.lines), f.colors)
    # delta > 0 keeps slopes strictly increasing; anything else is a bug.
    assert out.slopes() == tuple(T.t + T.delta * m for m in f.slopes())
    return out


def reflect(f: LineFamily, axis: str) -> LineFamily:
    """Reflect about x=0 ("vertical") or y=0 ("horizontal").  Both reverse
    the slope order; the horizontal one also swaps cups with caps."""
    if axis == "vertical":
        mapped = tuple(Line(-l.m, l.c) for l in f.lines)
    elif axis == "horizontal":
        mapped = tuple(Line(-l.m, -l.c) for l in f.lines)
    else:
        raise ValueError(f"axis must be 'vertical' or 'horizontal', got {axis!r}")
    colors = f.colors[::-1] if f.colors else None
    return LineFamily(mapped, colors)


Matrix3 = tuple[tuple[Fraction, ...], ...]


def _mat_coerce(M) -> Matrix3:
    rows = tuple(tuple(rat(x) for x in row) for row in M)
    if len(rows) != 3 or any(len(r) != 3 for r in rows):
        raise ValueError("expected a 3x3 matrix")
    return rows


def _mat_inverse(M: Matrix3) -> Matrix3:
    a, b, c = M[0]
    d, e, f = M[1]
    g, h, i = M[2]
    det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    if det == 0:
        raise ValueError("projective matrix is singular")
    adj = (
        (e * i - f * h, c * h - b * i, b * f - c * e),
        (f * g - d * i, a * i - c * g, c * d - a * f),
        (d * h - e * g, b * g - a * h, a * e - b * d),
    )
    return tuple(tuple(x / det for x in row) for row in adj)


def projective_map(f: LineFamily, M) -> LineFamily:
    """Image of the family under the homogeneous point map p -> M p.

    Raises ProducesVertical / MapsToInfinity instead of changing the line
    representation; callers perturb M and retry.
    """
    M = _mat_coerce(M)
    Minv = _mat_inverse(M)
    new_lines = []
    for idx, l in enumerate(f.lines):
        # covector of y = mx + c is (m, -1, c); it maps by right-multiplying
        # with M^{-1}.
        cov = (l.m, Fraction(-1), l.c)
        A, B, C = (
            sum(cov[r] * Minv[r][col] for r in range(3)) for col in range(3)
        )
        if B == 0:
            raise ProducesVertical(f"image of line {idx} ({l}) is vertical")
        new_lines.append(Line(-A / B, -C / B))
    for i, j in combinations(range(len(f)), 2):
        v = intersect(f[i], f[j])
        w = M[2][0] * v.x + M[2][1] * v.y + M[2][2]
        if w == 0:
            raise MapsToInfinity(f"intersection of lines {i},{j} maps to infinity")
    try:
        return check_general_position(new_lines, f.colors)
    except Violation as exc:  # pragma: no cover - impossible once checks pass
        raise DegenerateOutput(str(exc)) from exc
