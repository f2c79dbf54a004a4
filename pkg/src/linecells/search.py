"""Convex-position search over subfamilies and the vertical-configuration
machinery behind the upper-bound argument.

A subfamily is in convex position when it defines a cell bounded by all of
its lines; `max_convex_position` finds the largest such subfamily and
`certify_lower_bound` turns an exhaustive refutation into a certificate.
The vertical-configuration helpers expose the two checkable steps of the
upper-bound proof: after a projective normalization, the sets A (lines
ending a long cup) and B (lines starting a long cap) must be disjoint and
must avoid the minimum-slope line whenever no large convex subfamily
exists.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .arrangement import _covectors, _sign_at, _vertex, defines_cell
from .core import (
    GeometryError,
    LineFamily,
    MapsToInfinity,
    PointR,
    ProducesVertical,
    intersect,
    projective_map,
)
from .cupcap import longest_cup_cap
from .familyio import Certificate, family_hash

DEFAULT_BUDGET = 10 ** 8
BUDGET_ENV = "LINECELLS_BUDGET"

IDENTITY3 = (
    (Fraction(1), Fraction(0), Fraction(0)),
    (Fraction(0), Fraction(1), Fraction(0)),
    (Fraction(0), Fraction(0), Fraction(1)),
)


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_BUDGET


class BudgetExceeded(RuntimeError):
    """Subset budget ran out; `best` carries the strongest result so far."""

    def __init__(self, message: str, best: Optional["ConvexPositionResult"] = None):
        super().__init__(message)
        self.best = best


class FoundNCell(GeometryError):
    def __init__(self, witness: Sequence[int]):
        witness = tuple(witness)
        super().__init__(f"lines {witness} are in convex position")
        self.witness = witness


class NotVertical(GeometryError):
    pass


@dataclass(frozen=True)
class ConvexPositionResult:
    max_k: int
    witness: tuple[int, ...]
    exhaustive: bool


def max_convex_position(
    f: LineFamily, cap: Optional[int] = None, budget: Optional[int] = None
) -> ConvexPositionResult:
    """Largest k (up to `cap`) with some k lines in convex position.

    Searches subset sizes in descending order; sizes at or below the
    longest cup/cap are never enumerated since a k-cup or k-cap already is
    k lines in convex position.  `exhaustive` is set when every subset one
    larger than the answer was refuted (vacuously so at full size).
    """
    n = len(f)
    if n < 2:
        raise ValueError("need at least 2 lines")
    hi = min(cap, n) if cap is not None else n
    if hi < 2:
        raise ValueError("cap must allow at least 2 lines")
    if budget is None:
        budget = default_budget()
    cup, cp = longest_cup_cap(f)
    base = cup.indices if cup.size >= cp.size else cp.indices
    lb = min(len(base), hi)
    base = tuple(base[:lb])

    def wrap(k: int, witness: tuple[int, ...]) -> ConvexPositionResult:
        return ConvexPositionResult(k, witness, exhaustive=(k < hi or hi == n))

    calls = 0
    for k in range(hi, lb, -1):
        for s in combinations(range(n), k):
            if calls >= budget:
                raise BudgetExceeded(
                    f"budget of {budget} subset checks exhausted at size {k}",
                    best=ConvexPositionResult(lb, base, False),
                )
            calls += 1
            if defines_cell(f.subfamily(s)) is not None:
                return wrap(k, s)
    return wrap(lb, base)


def _scan_for_ncell(
    f: LineFamily, n: int, residue: int, step: int
) -> tuple[int, Optional[tuple[int, ...]]]:
    """Check the lexicographic shard where the first index is ≡ residue
    (mod step); returns (subsets checked, first witness or None)."""
    checked = 0
    size = len(f)
    for first in range(residue, size - n + 1, step):
        for rest in combinations(range(first + 1, size), n - 1):
            checked += 1
            s = (first,) + rest
            if defines_cell(f.subfamily(s)) is not None:
                return checked, s
    return checked, None


def certify_lower_bound(
    f: LineFamily,
    n: int,
    budget: Optional[int] = None,
    jobs: int = 1,
) -> Certificate:
    """Exhaustively attest that no n lines of f are in convex position.

    Raises FoundNCell with the lexicographically smallest witness
    otherwise; the verdict and witness do not depend on `jobs`.
    """
    size = len(f)
    if size < n:
        raise ValueError(f"family of {size} lines cannot be tested at n={n}")
    if budget is None:
        budget = default_budget()
    from math import comb

    total = comb(size, n)
    if total > budget:
        raise BudgetExceeded(f"{total} subsets exceed the budget of {budget}")
    t0 = time.perf_counter()
    checked = 0
    hits: list[tuple[int, ...]] = []
    if jobs <= 1 or total < 1024:
        checked, hit = _scan_for_ncell(f, n, 0, 1)
        if hit is not None:
            raise FoundNCell(hit)
    else:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futs = [
                pool.submit(_scan_for_ncell, f, n, r, jobs) for r in range(jobs)
            ]
            for fut in futs:
                c, hit = fut.result()
                checked += c
                if hit is not None:
                    hits.append(hit)
        if hits:
            raise FoundNCell(min(hits))
    return Certificate(
        command=f"lower-bound n={n}",
        input_hash=family_hash(f),
        verdict=f"no {n}-cell",
        witness=None,
        exhaustive=True,
        counts={"lines": size, "subsets": total, "checked": checked},
        seconds=time.perf_counter() - t0,
    )


def is_vertical_configuration(f: LineFamily) -> bool:
    """True when the minimum- and maximum-slope lines cross strictly above
    every other intersection of the family."""
    n = len(f)
    if n < 2:
        raise ValueError("need at least 2 lines")
    top = intersect(f[0], f[n - 1]).y
    for i, j in combinations(range(n), 2):
        if (i, j) == (0, n - 1):
            continue
        if intersect(f[i], f[j]).y >= top:
            return False
    return True


def _convex_hull(points: Sequence[PointR]) -> list[PointR]:
    """Monotone-chain hull, counterclockwise, no repeated first vertex."""
    pts = sorted(set((p.x, p.y) for p in points))
    if len(pts) == 1:
        return [PointR(*pts[0])]

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return [PointR(x, y) for x, y in lower[:-1] + upper[:-1]]


def make_vertical_configuration(f: LineFamily):
    """Projectively renormalize so the extreme-slope pair crosses highest.

    Picks the hull vertex v of all intersections with the smallest (x, y),
    sends a rational line just beyond v to infinity, and retries over a
    deterministic schedule whenever an image line would be vertical.  The
    sent line avoids the hull, so every intersection stays finite and
    convex-position subsets are preserved.  Returns (family, 3x3 matrix).
    """
    n = len(f)
    if n < 2:
        raise ValueError("need at least 2 lines")
    if is_vertical_configuration(f):
        return f, IDENTITY3
    pts = [intersect(f[i], f[j]) for i, j in combinations(range(n), 2)]
    hull = _convex_hull(pts)
    v = min(hull, key=lambda p: (p.x, p.y))
    g1, g2 = next(
        (f[i], f[j])
        for i, j in combinations(range(n), 2)
        if intersect(f[i], f[j]) == v
    )
    i = hull.index(v)
    u, w = hull[i - 1], hull[(i + 1) % len(hull)]
    if u == w:  # degenerate (all intersections collinear)
        w = PointR(u.x + (u.y - v.y), u.y - (u.x - v.x))
    # chord direction at v; the sent line is parallel to it
    dx, dy = w.x - u.x, w.y - u.y
    for tilt in range(8):
        # tilt the direction slightly on retries to break support ties
        ddx = dx + dx * Fraction(tilt, 17) + dy * Fraction(tilt, 13)
        ddy = dy + dy * Fraction(tilt, 17) - dx * Fraction(tilt, 13)
        if ddx == 0 and ddy == 0:
            continue
        a, b = -ddy, ddx
        vals = [a * p.x + b * p.y for p in pts]
        top = max(vals)
        if a * v.x + b * v.y != top:
            # v must attain the maximum of the support form; flip sides
            a, b = -a, -b
            vals = [-x for x in vals]
            top = max(vals)
        if vals.count(top) > 1 or a + b * g1.m == 0 or a + b * g2.m == 0:
            continue  # support tie, or a line of v runs parallel to the cut
        span = top - min(vals) or Fraction(1)
        for halving in range(40):
            t = span * Fraction(1, 2 ** halving)
            # the line a*x + b*y = top + t lies strictly beyond the hull;
            # w(p) = top + t - (a x + b y) is positive there, smallest at v
            row3 = (-a, -b, top + t)
            row2 = (-a, -b, top + t + 1)
            # the image's vertical direction is where row1 vanishes on the
            # sent line; aim it between the cut points of v's two lines so
            # they come out with one steeply positive and one steeply
            # negative slope
            cut = []
            for g in (g1, g2):
                x = (top + t - b * g.c) / (a + b * g.m)
                cut.append(PointR(x, g.at(x)))
            q = PointR((cut[0].x + cut[1].x) / 2, (cut[0].y + cut[1].y) / 2)
            row1 = (-b, a, b * q.x - a * q.y)
            M = (row1, row2, row3)
            try:
                out = projective_map(f, M)
            except (ProducesVertical, MapsToInfinity):
                continue
            if is_vertical_configuration(out):
                return out, M
    raise GeometryError("no vertical renormalization found")  # pragma: no cover


@dataclass(frozen=True)
class VerticalConfigAnalysis:
    is_vertical: bool
    A: frozenset[int]
    B: frozenset[int]


def cup_cap_roles(f: LineFamily, n: int) -> VerticalConfigAnalysis:
    """A = lines ending an (n-1)-cup, B = lines starting an (n-1)-cap.

    Indices refer to slope order.  Requires a vertical configuration; for
    a family with no n lines in convex position the upper-bound argument
    forces A and B disjoint, with the maximum-slope line in neither set
    (and the minimum-slope line trivially never ends a cup).
    """
    if n < 3:
        raise ValueError("roles are defined for n >= 3")
    if not is_vertical_configuration(f):
        raise NotVertical("extreme-slope crossing is not the highest")
    N = len(f)
    cov = _covectors(f)
    need = n - 1
    cup_end = _end_lengths(cov, N, -1)
    A = frozenset(
        j for j in range(N) if any(cup_end[i][j] >= need for i in range(j))
    )
    cap_start = _start_lengths(cov, N, 1)
    B = frozenset(
        i for i in range(N) if any(cap_start[i][j] >= need for j in range(i + 1, N))
    )
    return VerticalConfigAnalysis(True, A, B)


def _end_lengths(cov, N: int, target: int) -> list[list[int]]:
    # chain[i][j]: longest valid run ending with lines (i, j), i < j
    chain = [[0] * N for _ in range(N)]
    for j in range(N):
        for i in range(j):
            best = 2
            for h in range(i):
                if (
                    chain[h][i] >= best
                    and _sign_at(cov[i], _vertex(cov[h], cov[j])) == target
                ):
                    best = chain[h][i] + 1
            chain[i][j] = best
    return chain


def _start_lengths(cov, N: int, target: int) -> list[list[int]]:
    # start[i][j]: longest valid run beginning with lines (i, j), i < j
    start = [[0] * N for _ in range(N)]
    for i in range(N - 1, -1, -1):
        for j in range(i + 1, N):
            best = 2
            for k in range(j + 1, N):
                if (
                    start[j][k] >= best
                    and _sign_at(cov[j], _vertex(cov[i], cov[k])) == target
                ):
                    best = start[j][k] + 1
            start[i][j] = best
    return start
