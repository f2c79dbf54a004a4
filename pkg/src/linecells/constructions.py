"""Deterministic generators for the explicit families behind the bounds:
slope clusters, the recursive cup/cap-free families, the two large families
spanning no n-cell, the fan with no empty cell of five or more sides, and
rationalized regular-polygon side lines.

Every generator is pure and deterministic: the same arguments produce a
bit-identical family.  Tolerances are never exposed; each construction
shrinks its own scale parameters until exact post-checks pass.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Optional, Sequence

from mpmath import iv, mp, nint

from .arrangement import (
    KIND_RIGHT,
    _covector,
    _full_cell_masks,
    _mask_kind,
    _sign_at,
    _sweep,
    _vertex,
    defines_cell,
    empty_cell_census,
)
from .core import (
    Line,
    LineFamily,
    PointR,
    Rational,
    RationalLike,
    UcpTransform,
    Violation,
    apply_ucp,
    check_general_position,
    intersect,
    rat,
    reflect,
)
from .cupcap import longest_cup_cap, orient_points


class UnsupportedN(ValueError):
    """The requested cell size is outside the construction's domain."""


@dataclass(frozen=True)
class ClusterSpec:
    """Target for squeezing a family into a narrow pencil: slopes within
    `epsilon` of the center line's slope, every intersection below the
    x-axis, and all intersections within `epsilon` of each other."""

    center: Line
    epsilon: Rational

    def __post_init__(self):
        object.__setattr__(self, "epsilon", rat(self.epsilon))
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")


def make_cluster(f: LineFamily, spec: ClusterSpec) -> LineFamily:
    """Squeeze `f` toward the center line of `spec`.

    The whole family is pulled toward a fixed point of the center line
    below the x-axis, so for small scales every cluster line runs close to
    the center line itself.  The scale is halved until all three cluster
    conditions verify exactly; slope order and all triple orientations of
    the input survive unchanged.
    """
    if len(f) == 0:
        return f
    center, eps = spec.center, spec.epsilon
    if center.m != 0:
        anchor = PointR((rat(-1) - center.c) / center.m, rat(-1))
    elif center.c < 0:
        anchor = PointR(0, center.c)
    else:
        # horizontal center above the axis: no on-line point is available
        anchor = PointR(0, rat(-1))
    pts = [intersect(a, b) for a, b in combinations(f, 2)]
    spread = max(abs(l.m) for l in f)
    delta = Fraction(1)
    while True:
        if spread * delta <= eps:
            if not pts:
                break
            xs = [delta * p.x for p in pts]
            ys = [center.m * delta * p.x + delta * delta * p.y for p in pts]
            if max(ys) + anchor.y < 0:
                # bounding-box diagonal dominates every pairwise distance
                dx = max(xs) - min(xs)
                dy = max(ys) - min(ys)
                if dx * dx + dy * dy <= eps * eps:
                    break
        delta /= 2
    return apply_ucp(f, UcpTransform(delta, center.m, anchor))


def _concurrent_triple(fam: Sequence[Line]) -> bool:
    cov = [_covector(l) for l in fam]
    for i, j in combinations(range(len(fam)), 2):
        v = _vertex(cov[i], cov[j])
        if any(_sign_at(cov[k], v) == 0 for k in range(j + 1, len(fam)) if k != i):
            return True
    return False


def _certified_union(parts: Sequence[LineFamily]) -> Optional[LineFamily]:
    """Merge cluster families, or None if the attempt must shrink.

    Requires globally distinct slopes, no concurrent triple, and every
    crossing between lines of *different* parts strictly above the x-axis
    (the within-part crossings sit below it by the cluster conditions)."""
    lines = [l for part in parts for l in part]
    if len({l.m for l in lines}) != len(lines):
        return None
    if _concurrent_triple(lines):
        return None
    for fa, fb in combinations(parts, 2):
        for a in fa:
            for b in fb:
                if intersect(a, b).y <= 0:
                    return None
    return LineFamily(tuple(lines))


def cup_cap_free_size(k: int, l: int) -> int:
    """Number of lines in the family avoiding (k+1)-cups and (l+1)-caps."""
    if k < 1 or l < 1:
        raise ValueError("k and l must be at least 1")
    return comb(k + l - 2, k - 1)


# anchors for the two sub-clusters: positive slopes, meeting at (1, 3)
_ANCHOR_SHALLOW = Line(1, 2)
_ANCHOR_STEEP = Line(2, 1)

# exhaustive exclusion checks run only while they are affordable
_EXCLUSION_CHECK_LIMIT = 20
_NCELL_CHECK_LIMIT = 50_000


def _kl_exclusions_ok(fam: LineFamily, k: int, l: int) -> bool:
    if len(fam) > _EXCLUSION_CHECK_LIMIT:
        return True
    cup, cap = longest_cup_cap(fam)
    if cup.size > k or cap.size > l:
        return False
    cov = [_covector(line) for line in fam]
    for idx in combinations(range(len(fam)), 4):
        for mask, bnd in _sweep(cov, idx).items():
            if bnd == 15 and _mask_kind(mask, 4) == KIND_RIGHT:
                return False
    return True


@lru_cache(maxsize=None)
def _build_kl(k: int, l: int) -> LineFamily:
    if k == 1 or l == 1:
        return LineFamily((Line(0, 0),))
    shallow = _build_kl(k - 1, l)
    steep = _build_kl(k, l - 1)
    eps = Fraction(1, 4)
    for _ in range(64):
        fam = _certified_union(
            (
                make_cluster(shallow, ClusterSpec(_ANCHOR_SHALLOW, eps)),
                make_cluster(steep, ClusterSpec(_ANCHOR_STEEP, eps)),
            )
        )
        if fam is not None and _kl_exclusions_ok(fam, k, l):
            assert len(fam) == cup_cap_free_size(k, l)
            return fam
        eps /= 2
    raise AssertionError("cluster scale failed to stabilize")


def build_cup_cap_free(k: int, l: int) -> LineFamily:
    """C(k+l-2, k-1) lines with no (k+1)-cup, no (l+1)-cap, and no
    right-unbounded 4-cell.

    Base case: a single horizontal line.  Recursive case: the k-1 and l-1
    solutions squeezed onto two positive-slope anchor lines that cross
    above the x-axis; the shallower anchor carries the cap-heavy half.
    """
    if k < 1 or l < 1:
        raise ValueError("k and l must be at least 1")
    return _build_kl(k, l)


def _no_ncell(fam: LineFamily, n: int) -> bool:
    if comb(len(fam), n) > _NCELL_CHECK_LIMIT:
        return True
    return all(
        defines_cell(fam.subfamily(idx)) is None
        for idx in combinations(range(len(fam)), n)
    )


def _cluster_replace(
    skeleton: Sequence[Line], payloads: Sequence[LineFamily], forbid: Optional[int]
) -> LineFamily:
    """Replace each skeleton line by a cluster of its payload family.

    One shared epsilon is shrunk until the union passes the certification
    checks; when the subset count is small enough, the absence of any
    `forbid`-cell is verified exhaustively as part of the loop."""
    gaps = [b.m - a.m for a, b in zip(skeleton, skeleton[1:])]
    eps = min([Fraction(1, 4)] + [g / 4 for g in gaps])
    for _ in range(64):
        parts = tuple(
            make_cluster(payload, ClusterSpec(line, eps))
            for line, payload in zip(skeleton, payloads)
        )
        fam = _certified_union(parts)
        if fam is not None and (forbid is None or _no_ncell(fam, forbid)):
            return fam
        eps /= 2
    raise AssertionError("cluster scale failed to stabilize")


def _lift_positive_above(f: LineFamily) -> LineFamily:
    """Shear so every slope is at least 1, then raise all crossings above
    the x-axis."""
    t = 1 - min(f.slopes())
    pts = [intersect(a, b) for a, b in combinations(f, 2)]
    b_y = rat(0)
    if pts:
        low = min(t * p.x + p.y for p in pts)
        if low <= 0:
            b_y = 1 - low
    return apply_ucp(f, UcpTransform(1, t, PointR(0, b_y)))


def _lift_above(f: LineFamily) -> LineFamily:
    """Translate vertically until all crossings are above the x-axis."""
    pts = [intersect(a, b) for a, b in combinations(f, 2)]
    low = min(p.y for p in pts)
    b_y = 1 - low if low <= 0 else rat(0)
    return apply_ucp(f, UcpTransform(1, 0, PointR(0, b_y)))


def no_ncell_basic_size(n: int) -> int:
    """Closed-form size of the single-level family spanning no n-cell."""
    if n < 5:
        raise UnsupportedN("construction requires n >= 5")
    if n % 2 == 0:
        k = (n - 2) // 2
        return comb(2 * k - 2, k - 1) ** 2
    k = (n - 1) // 2
    return (comb(2 * k - 2, k - 1) + 1) * comb(2 * k - 3, k - 1)


def build_no_ncell_basic(n: int) -> LineFamily:
    """Single-level construction: every line of a reflected cup/cap-free
    skeleton is replaced by a cluster, giving a family that spans no
    n-cell.

    Even n uses equal payloads on every skeleton line; odd n puts the full
    payload on the shallowest line only.
    """
    if n < 5:
        raise UnsupportedN("construction requires n >= 5")
    if n % 2 == 0:
        k = (n - 2) // 2
        payload = _build_kl(k, k)
        skeleton = _lift_positive_above(reflect(payload, "vertical"))
        payloads = [payload] * len(skeleton)
    else:
        k = (n - 1) // 2
        big = _build_kl(k, k)
        skeleton = _lift_positive_above(reflect(big, "vertical"))
        payloads = [big] + [_build_kl(k - 1, k)] * (len(skeleton) - 1)
    fam = _cluster_replace(tuple(skeleton), payloads, n)
    assert len(fam) == no_ncell_basic_size(n)
    return fam


def no_ncell_doubled_size(n: int) -> int:
    """Closed-form size of the doubled family spanning no n-cell."""
    return 2 * no_ncell_basic_size(n)


def _doubled_skeleton(k: int) -> LineFamily:
    """2N guide lines: clusters on slopes +1 and -1 meeting above the
    x-axis, reflected about it, then raised until every crossing is above
    it again."""
    base = _build_kl(k, k)
    base_r = reflect(base, "vertical")
    eps = Fraction(1, 4)
    for _ in range(64):
        union = _certified_union(
            (
                make_cluster(base, ClusterSpec(Line(1, 2), eps)),
                make_cluster(base_r, ClusterSpec(Line(-1, 2), eps)),
            )
        )
        if union is not None:
            return _lift_above(reflect(union, "horizontal"))
        eps /= 2
    raise AssertionError("cluster scale failed to stabilize")


def build_no_ncell_doubled(n: int) -> LineFamily:
    """Two-level construction spanning no n-cell, twice the size of the
    basic one.

    The skeleton pairs a mirrored copy with the original; each of its 2N
    lines then carries the cluster of the opposite orientation, so cups
    land on the mirrored half and caps on the plain half.
    """
    if n < 5:
        raise UnsupportedN("construction requires n >= 5")
    k = (n - 2) // 2 if n % 2 == 0 else (n - 1) // 2
    base = _build_kl(k, k)
    base_r = reflect(base, "vertical")
    skeleton = _doubled_skeleton(k)
    half = len(base)
    assert len(skeleton) == 2 * half
    if n % 2 == 0:
        payloads = [base_r] * half + [base] * half
    else:
        small = _build_kl(k - 1, k)
        small_r = reflect(small, "vertical")
        payloads = [base_r] + [small_r] * (half - 1) + [base] + [small] * (half - 1)
    fam = _cluster_replace(tuple(skeleton), payloads, n)
    assert len(fam) == no_ncell_doubled_size(n)
    return fam


def _simplest_in(lo: Fraction, hi: Fraction) -> Fraction:
    """Fraction with the smallest denominator strictly inside (lo, hi);
    both endpoints must be positive."""
    assert 0 < lo < hi
    n = lo.numerator // lo.denominator
    cand = Fraction(n + 1)
    if cand < hi:
        return cand
    frac_lo = lo - n
    frac_hi = hi - n
    if frac_lo == 0:
        m = frac_hi.denominator // frac_hi.numerator
        return n + Fraction(1, m + 1)
    return n + 1 / _simplest_in(1 / frac_hi, 1 / frac_lo)


def build_no_empty_cells(n_lines: int, colored: bool = False) -> LineFamily:
    """A family whose arrangement has no face with five or more bounding
    lines, so no subfamily leaves an empty cell of five or more sides.

    Lines are added one at a time through anchor points that alternate
    between the positive x-axis and the negative y-axis, each line passing
    below every existing crossing.  Passing below all crossings alone is
    not enough: a new line adds one side to every unbounded face it leaves
    unbounded, so the slopes follow a nested zigzag — each slope is pinned
    as the new lower or upper end of a shrinking window, in alternation.
    Any face a later line may still cut then has at most three sides, and
    a cut either bounds it (at four sides) or is the cut that pins the
    window.  Picks hug the window's low end so the slopes stay flat enough
    for the deepening y-axis anchors to remain below the crossing cloud,
    and take the simplest fraction there to keep coefficients small.  With
    `colored`, lines are colored alternately in the order of their x-axis
    crossings.
    """
    if n_lines < 2:
        raise ValueError("need at least 2 lines")
    hug = max(8, 2 * n_lines)
    lines = [Line(1, 0), Line(2, -1)]
    pts = [intersect(lines[0], lines[1])]
    win_lo, win_hi = rat(1), rat(2)
    for i in range(2, n_lines):
        if i % 2 == 0:
            anchor = PointR(i // 2, 0)
        else:
            anchor = PointR(0, -((i + 1) // 2))
        lo, hi = win_lo, win_hi
        for p in pts:
            dx = p.x - anchor.x
            if dx == 0:
                assert p.y > anchor.y, "anchor lies under an existing crossing"
            elif dx > 0:
                hi = min(hi, (p.y - anchor.y) / dx)
            else:
                lo = max(lo, (p.y - anchor.y) / dx)
        assert lo < hi, "no slope fits the window below all crossings"
        m = _simplest_in(lo, lo + (hi - lo) / hug)
        new = Line(m, anchor.y - m * anchor.x)
        pts.extend(intersect(new, old) for old in lines)
        lines.append(new)
        if i % 2 == 0:
            win_hi = m
        else:
            win_lo = m
    fam = check_general_position(lines)
    if not colored:
        return fam
    by_root = sorted(range(len(fam)), key=lambda i: -fam[i].c / fam[i].m)
    colors = [""] * len(fam)
    for rank, i in enumerate(by_root):
        colors[i] = "r" if rank % 2 == 0 else "b"
    return LineFamily(fam.lines, tuple(colors))


def _iv_sign(x) -> int:
    """Certified sign of an interval value, 0 when it straddles zero."""
    if x.a > 0:
        return 1
    if x.b < 0:
        return -1
    return 0


def _iv_lower_fraction(x) -> Fraction:
    """Exact rational value of an interval's lower endpoint."""
    sign, man, exp, _ = x._mpi_[0]
    v = Fraction(man) * (Fraction(2) ** exp if exp >= 0 else Fraction(1, 2**-exp))
    return -v if sign else v


def build_regular_polygon_lines(n_sides: int) -> LineFamily:
    """Rational stand-ins for the side lines of a regular polygon with an
    odd number of sides.

    The true polygon (rotated slightly so no side is vertical) has
    irrational vertices; interval arithmetic certifies its slope order and
    every triple orientation, then the vertices are rounded on a scaled
    integer grid and the grid is refined until the rounded family matches
    the certified combinatorial type exactly.
    """
    if n_sides < 3 or n_sides % 2 == 0:
        raise ValueError("need an odd number of sides, at least 3")
    n = n_sides
    prec = 100
    while True:
        assert prec <= 1 << 16, "interval certification failed to converge"
        iv.prec = prec
        theta = 2 * iv.pi / n
        tilt = iv.mpf(1) / 1000
        vx = [iv.cos(theta * j + tilt) for j in range(n)]
        vy = [iv.sin(theta * j + tilt) for j in range(n)]
        slopes, icepts = [], []
        ok = True
        for j in range(n):
            jj = (j + 1) % n
            dx, dy = vx[jj] - vx[j], vy[jj] - vy[j]
            if _iv_sign(dx) == 0:
                ok = False
                break
            m = dy / dx
            slopes.append(m)
            icepts.append(vy[j] - m * vx[j])
        if ok:
            slope_signs = {}
            for i, j in combinations(range(n), 2):
                s = _iv_sign(slopes[i] - slopes[j])
                if s == 0:
                    ok = False
                    break
                slope_signs[i, j] = s
        if ok:
            orient_signs = {}
            for i, j, k in combinations(range(n), 3):
                det = (slopes[j] - slopes[i]) * (icepts[k] - icepts[i]) - (
                    icepts[j] - icepts[i]
                ) * (slopes[k] - slopes[i])
                s = _iv_sign(det)
                if s == 0:
                    ok = False
                    break
                orient_signs[i, j, k] = s
        if ok:
            break
        prec *= 2
    mp.prec = prec
    denom = 10 ** 6
    for _ in range(8):
        grid = [
            PointR(
                Fraction(round(_iv_lower_fraction(x) * denom), denom),
                Fraction(round(_iv_lower_fraction(y) * denom), denom),
            )
            for x, y in zip(vx, vy)
        ]
        lines = []
        for j in range(n):
            p, q = grid[j], grid[(j + 1) % n]
            if p.x == q.x:
                lines = None
                break
            m = (q.y - p.y) / (q.x - p.x)
            lines.append(Line(m, p.y - m * p.x))
        if lines is not None:
            duals = [PointR(l.m, l.c) for l in lines]
            if all(
                (lines[i].m > lines[j].m) - (lines[i].m < lines[j].m) == s
                for (i, j), s in slope_signs.items()
            ) and all(
                orient_points(duals[i], duals[j], duals[k]) == s
                for (i, j, k), s in orient_signs.items()
            ):
                return check_general_position(lines)
        denom *= 1000
    raise AssertionError("grid refinement failed to converge")


def random_family(
    n_lines: int, rng: random.Random, *, span: int = 12
) -> LineFamily:
    """Rejection-sample a family in general position with small rational
    coefficients; deterministic given the generator state."""
    while True:
        lines = [
            Line(
                Fraction(rng.randint(-span, span), rng.randint(1, 4)),
                Fraction(rng.randint(-span, span), rng.randint(1, 4)),
            )
            for _ in range(n_lines)
        ]
        try:
            return check_general_position(lines)
        except Violation:
            continue


def search_no_empty_4cell(
    n_lines: int = 10, *, seed: int = 0, attempts: int = 200
) -> Optional[LineFamily]:
    """Best-effort random search for a family whose arrangement has no
    4-sided face at all.  Returns the first hit, or None; no guarantee of
    success is attached."""
    rng = random.Random(seed)
    for _ in range(attempts):
        fam = random_family(n_lines, rng)
        census = empty_cell_census(fam)
        if census.total.get(4, 0) == 0:
            return fam
    return None
