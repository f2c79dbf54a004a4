"""Convex structure pulled out of cells in less direct ways: cells crossed
by a prescribed number of outside lines, convex polygons alternating
line-borne edges with prescribed vertices, halfplane selection, and
transversal checks over grouped families.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import prod
from typing import Optional, Sequence

from .arrangement import Face, crossing_lines, defines_cell, face_region, faces
from .core import (
    Line,
    LineFamily,
    PointR,
    check_general_position,
    intersect,
    rat,
    side_of,
    sign,
)
from .cupcap import cup_cap_threshold, longest_cup_cap, orient_points
from .search import BudgetExceeded, default_budget, max_convex_position


class Infeasible(Exception):
    """The requested object does not exist in the given input."""


# ---------------------------------------------------------------------------
# Cells crossed by exactly n outside lines


@dataclass(frozen=True)
class CrossingOrder:
    """Partial order on the lines crossing a cell: i precedes j when their
    chords are disjoint and i's chord separates j's from the anchor."""

    cell: tuple[int, ...]
    anchor: PointR
    relation: frozenset[tuple[int, int]]


def _chord_window(f: LineFamily, t: int, g: Sequence[int], face: Face):
    """Open x-interval where line t runs strictly inside the face, as a
    (lo, hi) pair with None for an unbounded end, or None if empty."""
    lt = f[t]
    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None
    for pos, s in zip(g, face.signs):
        b = f[pos]
        dm = lt.m - b.m
        dc = lt.c - b.c
        if dm == 0:
            if sign(dc) != s:
                return None
            continue
        x0 = -dc / dm
        if sign(dm) == s:
            if lo is None or x0 > lo:
                lo = x0
        else:
            if hi is None or x0 < hi:
                hi = x0
    if lo is not None and hi is not None and lo >= hi:
        return None
    return lo, hi


def _chord_sample(f: LineFamily, t: int, g: Sequence[int], face: Face) -> PointR:
    w = _chord_window(f, t, g, face)
    assert w is not None, "sampled line does not cross the face"
    lo, hi = w
    # two non-parallel constraints leave no full line inside, so one end is finite
    assert lo is not None or hi is not None
    if lo is not None and hi is not None:
        x = (lo + hi) / 2
    elif lo is not None:
        x = lo + 1
    else:
        x = hi - 1
    return PointR(x, f[t].at(x))


def _anchor(f: LineFamily, g: Sequence[int], face: Face, crossing: Sequence[int]) -> PointR:
    """A point on the cell's boundary edge of smallest line index, nudged by
    bisection toward the edge's endpoint until off every crossing line."""
    e = min(face.boundary, key=lambda e: g[e.line])
    ln = f[g[e.line]]
    assert e.kind != "line"
    if e.kind == "segment":
        px = (e.a.x + e.b.x) / 2
        ref = e.a.x
    else:
        fin = e.a if e.a is not None else e.b
        px = fin.x + e.direction
        ref = fin.x
    guard = 0
    while any(side_of(f[t], PointR(px, ln.at(px))) == 0 for t in crossing):
        # edge endpoints are crossings of two cell lines, so no crossing line
        # passes through them and the bisection escapes in finitely many steps
        px = (px + ref) / 2
        guard += 1
        assert guard < 64
    return PointR(px, ln.at(px))


def _assert_strict_order(ground: Sequence[int], rel: frozenset) -> None:
    for i in ground:
        assert (i, i) not in rel
    for i, j in rel:
        assert (j, i) not in rel
    for i, j in rel:
        for k in ground:
            if (j, k) in rel:
                assert (i, k) in rel


def crossing_order(f: LineFamily, g: Sequence[int], face: Face) -> CrossingOrder:
    """Order the lines crossing the given cell by separation from an anchor
    on the cell's boundary; the result is a strict partial order."""
    g = tuple(sorted(g))
    cross = sorted(crossing_lines(f, g, face))
    c = _anchor(f, g, face, cross)
    samples = {t: _chord_sample(f, t, g, face) for t in cross}
    rel = set()
    for i in cross:
        li = f[i]
        ci = side_of(li, c)
        assert ci != 0
        for j in cross:
            if i == j:
                continue
            p = intersect(li, f[j])
            # general position keeps crossings off the cell lines, so the
            # chords are disjoint exactly when p falls outside the cell
            inside = all(side_of(f[pos], p) == s for pos, s in zip(g, face.signs))
            if not inside and side_of(li, samples[j]) == -ci:
                rel.add((i, j))
    relation = frozenset(rel)
    _assert_strict_order(cross, relation)
    return CrossingOrder(g, c, relation)


def _split_once(f: LineFamily, g, face: Face, t: int, c: PointR):
    """Cut the cell along line t, keeping the piece holding the anchor, and
    return it as a cell of its own bounding subfamily."""
    st = side_of(f[t], c)
    assert st != 0
    merged = tuple(sorted(g + (t,)))
    smap = dict(zip(g, face.signs))
    smap[t] = st
    chain = face_region(f.subfamily(merged), tuple(smap[x] for x in merged))
    assert chain is not None
    keep = tuple(sorted({merged[e.line] for e in chain}))
    nf = faces(f.subfamily(keep)).get(tuple(smap[x] for x in keep))
    assert nf is not None
    assert nf.bounding_lines == frozenset(range(len(keep)))
    return keep, nf


def exact_crossing_cell(f: LineFamily, n: int) -> tuple[tuple[int, ...], Face]:
    """A cell of a subfamily of f crossed by exactly n of the other lines.

    Starts from the wedge or triangle crossed most often and repeatedly cuts
    away a maximal element of the crossing order, which lowers the crossing
    count by exactly one; raises Infeasible when even the best seed is
    crossed fewer than n times.
    """
    if n < 0:
        raise ValueError("crossing count must be nonnegative")
    N = len(f)
    if N < 2:
        raise ValueError("need at least 2 lines")
    best = None
    for pair in combinations(range(N), 2):
        for face in faces(f.subfamily(pair)):
            cnt = len(crossing_lines(f, pair, face))
            if best is None or cnt > best[0]:
                best = (cnt, pair, face)
    for tri in combinations(range(N), 3):
        face = defines_cell(f.subfamily(tri))
        assert face is not None
        cnt = len(crossing_lines(f, tri, face))
        if cnt > best[0]:
            best = (cnt, tri, face)
    m, g, face = best
    if m < n:
        raise Infeasible(f"no seed cell is crossed by {n} lines (best: {m})")
    while m > n:
        order = crossing_order(f, g, face)
        cross = sorted(crossing_lines(f, g, face))
        t = min(x for x in cross if all((x, j) not in order.relation for j in cross))
        g, face = _split_once(f, g, face, t, order.anchor)
        m2 = len(crossing_lines(f, g, face))
        assert m2 == m - 1
        m = m2
    return g, face


# ---------------------------------------------------------------------------
# Mixed polygons: half prescribed vertices, half edges on family lines


@dataclass(frozen=True)
class MixedPolygon:
    """Convex 2n-gon whose vertices are listed counterclockwise from the
    lexicographically smallest.  Exactly n vertices (positions in
    point_vertices) are translated input points; edge_lines[i] names the
    family line carrying the edge from vertex i to vertex i+1, or None."""

    translation: PointR
    vertices: tuple[PointR, ...]
    edge_lines: tuple[Optional[int], ...]
    point_vertices: tuple[int, ...]


def _slope(p: PointR, q: PointR) -> Fraction:
    return (q.y - p.y) / (q.x - p.x)


def _longest_point_chain(pts: Sequence[PointR], target: int) -> tuple[int, ...]:
    """Lexicographically smallest maximum chain of x-sorted points whose
    consecutive triples all turn with the given sign (+1 cups, -1 caps)."""
    n = len(pts)
    if n == 1:
        return (0,)
    start = [[2] * n for _ in range(n)]
    for i in range(n - 2, -1, -1):
        row = start[i]
        for j in range(i + 1, n):
            best = 2
            nxt = start[j]
            for k in range(j + 1, n):
                if nxt[k] >= best and orient_points(pts[i], pts[j], pts[k]) == target:
                    best = nxt[k] + 1
            row[j] = best
    top = max(start[i][j] for i in range(n) for j in range(i + 1, n))
    first = min(i for i in range(n) if any(start[i][j] == top for j in range(i + 1, n)))
    second = min(j for j in range(first + 1, n) if start[first][j] == top)
    seq = [first, second]
    while len(seq) < top:
        a, b = seq[-2], seq[-1]
        need = top - len(seq)
        k = min(
            k
            for k in range(b + 1, n)
            if start[b][k] >= need + 1 and orient_points(pts[a], pts[b], pts[k]) == target
        )
        seq.append(k)
    return tuple(seq)


def _xflip_lines(ls: Sequence[Line]) -> tuple[Line, ...]:
    return tuple(Line(-l.m, l.c) for l in reversed(ls))


def _xflip_points(ps: Sequence[PointR]) -> tuple[PointR, ...]:
    return tuple(PointR(-p.x, p.y) for p in reversed(ps))


def _main_branch(lines: Sequence[Line], cps: Sequence[PointR], n: int):
    """Glue a 2n-gon out of a (2n-1)-line cup and a (2n-1)-point cup: the
    lower left runs along the first n lines, the rest are translated points."""
    k = 2 * n - 1
    M = n - 1
    vp = [None] * k
    for i in range(1, k):
        vp[i] = intersect(lines[i - 1], lines[i])
        if i > 1:
            assert vp[i - 1].x < vp[i].x, "line chain is not a cup"
    x_star = (vp[M].x + vp[M + 1].x) / 2
    p = PointR(x_star, lines[M].at(x_star))
    s_before = _slope(cps[M - 1], cps[M])
    s_after = _slope(cps[M], cps[M + 1])
    sigma = (s_before + s_after) / 2
    if lines[M].m <= sigma:
        t = PointR(p.x - cps[M].x, p.y - cps[M].y)
        q0x = vp[1].x - 1
        verts = [PointR(q0x, lines[0].at(q0x))]
        verts.extend(vp[1 : M + 1])
        verts.append(p)
        verts.extend(PointR(t.x + cps[j].x, t.y + cps[j].y) for j in range(M + 1, k))
        return t, verts
    # the mirrored instance lands in the branch above
    t2, v2 = _main_branch(_xflip_lines(lines), _xflip_points(cps), n)
    return PointR(-t2.x, t2.y), [PointR(-q.x, q.y) for q in v2]


def _easy_branch(lines: Sequence[Line], cps: Sequence[PointR], n: int):
    """Glue a 2n-gon out of a (2n-1)-line cup and a (2n-1)-point cap: the
    steep half of the cup carries the bottom, the cap's right half the top."""
    k = 2 * n - 1
    s = [_slope(cps[i], cps[i + 1]) for i in range(k - 1)]
    if lines[-1].m > s[n - 1]:
        mu = lines[n - 1 :]
        rho = cps[n - 1 :]
        bp = [intersect(mu[i - 1], mu[i]) for i in range(1, n)]
        base = bp[-1]
        width = rho[-1].x - rho[0].x
        sigma = (max(s[n - 1], mu[0].m) + mu[-1].m) / 2
        u = Fraction(1)
        guard = 0
        while True:
            zx = base.x + u
            z = PointR(zx, mu[-1].at(zx))
            t = PointR(z.x - rho[-1].x, z.y - rho[-1].y)
            tx0 = t.x + rho[0].x
            ty0 = t.y + rho[0].y
            g = ty0 - mu[0].at(tx0)
            if tx0 > base.x and g > 0:
                x0 = tx0 - g / (sigma - mu[0].m)
                if x0 < bp[0].x:
                    break
            u *= 2
            guard += 1
            assert guard < 200
        verts = [PointR(x0, mu[0].at(x0))]
        verts.extend(bp)
        verts.append(z)
        verts.extend(
            PointR(t.x + rho[j].x, t.y + rho[j].y) for j in range(n - 2, -1, -1)
        )
        return t, verts
    if s[n - 2] > lines[0].m:
        t2, v2 = _easy_branch(_xflip_lines(lines), _xflip_points(cps), n)
        return PointR(-t2.x, t2.y), [PointR(-q.x, q.y) for q in v2]
    # both tests failing would force m[-1] <= s[n-1] < s[n-2] <= m[0] < m[-1]
    raise AssertionError("unreachable: one of the two gluing sides always works")


def _finalize(f: LineFamily, pts: Sequence[PointR], n: int, t: PointR, verts) -> MixedPolygon:
    m2 = 2 * n
    assert len(verts) == m2
    area2 = sum(
        verts[i].x * verts[(i + 1) % m2].y - verts[(i + 1) % m2].x * verts[i].y
        for i in range(m2)
    )
    assert area2 != 0
    if area2 < 0:
        verts = list(reversed(verts))
    start = min(range(m2), key=lambda i: (verts[i].x, verts[i].y))
    verts = verts[start:] + verts[:start]
    for i in range(m2):
        assert orient_points(verts[i - 1], verts[i], verts[(i + 1) % m2]) == 1
    shifted = {PointR(q.x + t.x, q.y + t.y) for q in pts}
    pv = tuple(i for i, v in enumerate(verts) if v in shifted)
    assert len(pv) == n
    el: list[Optional[int]] = []
    for i in range(m2):
        a, b = verts[i], verts[(i + 1) % m2]
        hit = None
        for li, l in enumerate(f.lines):
            if side_of(l, a) == 0 and side_of(l, b) == 0:
                hit = li
                break
        el.append(hit)
    assert sum(1 for x in el if x is not None) == n
    return MixedPolygon(t, tuple(verts), tuple(el), pv)


def mixed_polygon(f: LineFamily, s, n: int) -> MixedPolygon:
    """Convex 2n-gon with n vertices among a translate of the points s and
    the other n edges running along distinct lines of f.

    Both inputs must be in general position; sizes of at least
    cup_cap_threshold(2n-1, 2n-1) on each side always suffice, since then a
    (2n-1)-member cup or cap exists in both and every combination of kinds
    glues (directly or after reflection).
    """
    if n < 2:
        raise ValueError("polygons need at least 4 vertices")
    pts = tuple(
        q if isinstance(q, PointR) else PointR(rat(q[0]), rat(q[1])) for q in s
    )
    spts = tuple(sorted(pts, key=lambda q: (q.x, q.y)))
    for a, b in zip(spts, spts[1:]):
        if a.x == b.x:
            raise ValueError("two points share an x-coordinate")
    for i, j, l in combinations(range(len(spts)), 3):
        if orient_points(spts[i], spts[j], spts[l]) == 0:
            raise ValueError("three points are collinear")

    k = 2 * n - 1
    need = cup_cap_threshold(k, k)
    cup_w, cap_w = longest_cup_cap(f)
    line_cup = tuple(f[i] for i in cup_w.indices[:k]) if cup_w.size >= k else None
    line_cap = tuple(f[i] for i in cap_w.indices[:k]) if cap_w.size >= k else None
    pc = _longest_point_chain(spts, 1)
    pk = _longest_point_chain(spts, -1)
    pt_cup = tuple(spts[i] for i in pc[:k]) if len(pc) >= k else None
    pt_cap = tuple(spts[i] for i in pk[:k]) if len(pk) >= k else None
    if line_cup is None and line_cap is None:
        raise ValueError(f"need a {k}-line cup or cap; {need} lines always contain one")
    if pt_cup is None and pt_cap is None:
        raise ValueError(f"need a {k}-point cup or cap; {need} points always contain one")

    def yflip_lines(ls):
        return tuple(Line(-l.m, -l.c) for l in reversed(ls))

    def yflip_points(ps):
        return tuple(PointR(q.x, -q.y) for q in ps)

    if line_cup is not None and pt_cap is not None:
        t, verts = _easy_branch(line_cup, pt_cap, n)
    elif line_cup is not None and pt_cup is not None:
        t, verts = _main_branch(line_cup, pt_cup, n)
    elif line_cap is not None and pt_cup is not None:
        t2, v2 = _easy_branch(yflip_lines(line_cap), yflip_points(pt_cup), n)
        t = PointR(t2.x, -t2.y)
        verts = [PointR(q.x, -q.y) for q in v2]
    else:
        t2, v2 = _main_branch(yflip_lines(line_cap), yflip_points(pt_cap), n)
        t = PointR(t2.x, -t2.y)
        verts = [PointR(q.x, -q.y) for q in v2]
    return _finalize(f, pts, n, t, verts)


# ---------------------------------------------------------------------------
# Halfplane selection


@dataclass(frozen=True)
class HalfPlane:
    """One side of a line; "above" contains points with larger y."""

    line: Line
    side: str

    def __post_init__(self):
        if self.side not in ("above", "below"):
            raise ValueError('side must be "above" or "below"')

    def contains(self, p: PointR) -> bool:
        return side_of(self.line, p) == (1 if self.side == "above" else -1)


def halfplane_select(hs: Sequence[HalfPlane], n: int) -> tuple[tuple[int, ...], str]:
    """Pick n of the halfplanes whose common intersection, or the common
    intersection of whose complements, contains a cell bounded by all n
    boundary lines.

    Works through a cell P bounded by 2n of the lines: each halfplane either
    holds P or its complement does, so one side reaches n.  Returns indices
    into hs plus the mode ("intersection" or "complements"); Infeasible when
    no 2n lines are in convex position.
    """
    hs = tuple(hs)
    if n < 2:
        raise ValueError("need n >= 2")
    lines = [h.line for h in hs]
    fam = check_general_position(lines)
    pos_by_slope = {l.m: i for i, l in enumerate(lines)}
    r = max_convex_position(fam, cap=2 * n)
    if r.max_k < 2 * n:
        raise Infeasible(f"no {2 * n} of the {len(hs)} boundary lines are in convex position")
    w = r.witness
    P = defines_cell(fam.subfamily(w))
    assert P is not None
    holders = []
    for pos, fi in enumerate(w):
        inp = pos_by_slope[fam[fi].m]
        inside = (P.signs[pos] == 1) == (hs[inp].side == "above")
        holders.append((inp, inside))
    ins = sorted(i for i, ok in holders if ok)
    outs = sorted(i for i, ok in holders if not ok)
    if len(ins) >= n:
        mode, chosen = "intersection", tuple(ins[:n])
    else:
        mode, chosen = "complements", tuple(outs[:n])
    # the witness cell stays bounded by every chosen line after the rest of
    # the 2n are dropped, so the region really is an n-cell
    fam_pos = {pos_by_slope[fam[fi].m]: fi for fi in w}
    sel = sorted(fam_pos[i] for i in chosen)
    rsigns = [P.signs[w.index(fi)] for fi in sel]
    nf = faces(fam.subfamily(sel)).get(rsigns)
    assert nf is not None
    assert nf.bounding_lines == frozenset(range(n))
    return chosen, mode


# ---------------------------------------------------------------------------
# Transversals of grouped families


def _transversal_scan(groups, lo: int, step: int):
    """Scan transversals whose first index is lo, lo+step, ...; return the
    lexicographically first failing index tuple in that slice, or None."""
    sizes = [len(g) for g in groups[1:]]
    for first in range(lo, len(groups[0]), step):
        for rest in product(*(range(sz) for sz in sizes)):
            combo = (first,) + rest
            t = LineFamily(tuple(groups[i].lines[j] for i, j in enumerate(combo)))
            if defines_cell(t) is None:
                return combo
    return None


def check_transversals(
    groups: Sequence[LineFamily],
    n: int,
    *,
    budget: Optional[int] = None,
    jobs: int = 1,
) -> tuple[bool, Optional[tuple[int, ...]]]:
    """Whether every transversal (one line per group) defines an n-cell.

    Returns (True, None) or (False, first_failing) where the witness lists
    one line index per group in lexicographic order.  The union of the
    groups must be in general position; raises BudgetExceeded when the
    number of transversals exceeds the budget.
    """
    groups = tuple(groups)
    if n != len(groups) or n < 2:
        raise ValueError("need one group per cell line and n >= 2")
    if any(len(g) == 0 for g in groups):
        raise ValueError("groups must be nonempty")
    check_general_position([l for g in groups for l in g.lines])
    total = prod(len(g) for g in groups)
    b = default_budget() if budget is None else budget
    if total > b:
        raise BudgetExceeded(f"{total} transversals exceed the budget of {b}", None)
    if jobs <= 1 or total < 256:
        hit = _transversal_scan(groups, 0, 1)
        return (hit is None), hit
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as ex:
        futs = [ex.submit(_transversal_scan, groups, r, jobs) for r in range(jobs)]
        hits = [h for h in (fu.result() for fu in futs) if h is not None]
    hit = min(hits) if hits else None
    return (hit is None), hit
