"""Faces of a line arrangement: enumeration, classification, and censuses.

Hot-path predicates run on integer covectors (A, B, C) with B > 0 scaled
from each line and compare bounds by cross-multiplication, so no Fraction
(and certainly no float) arithmetic happens inside the loops; Fractions
reappear only in returned vertices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from math import gcd
from typing import Iterable, Iterator, Optional, Sequence

from .core import Line, LineFamily, PointR

Cov = tuple[int, int, int]

KIND_BOUNDED = "bounded"
KIND_CUP = "cup"
KIND_CAP = "cap"
KIND_LEFT = "left-unbounded"
KIND_RIGHT = "right-unbounded"


def _covector(l: Line) -> Cov:
    # y = (p/q)x + r/s  <->  -ps*x + qs*y - rq = 0, reduced; B = qs > 0
    p, q = l.m.numerator, l.m.denominator
    r, s = l.c.numerator, l.c.denominator
    a, b, c = -p * s, q * s, -r * q
    g = gcd(gcd(a, b), c)
    return a // g, b // g, c // g


@lru_cache(maxsize=256)
def _covectors(f: LineFamily) -> tuple[Cov, ...]:
    return tuple(_covector(l) for l in f.lines)


def _vertex(u: Cov, v: Cov) -> tuple[int, int, int]:
    """Homogeneous intersection point, normalized to positive last coord."""
    x = u[1] * v[2] - u[2] * v[1]
    y = u[2] * v[0] - u[0] * v[2]
    w = u[0] * v[1] - u[1] * v[0]
    if w < 0:
        x, y, w = -x, -y, -w
    return x, y, w


def _sign_at(c: Cov, p: tuple[int, int, int]) -> int:
    d = c[0] * p[0] + c[1] * p[1] + c[2] * p[2]
    return (d > 0) - (d < 0)


def _sweep(cov: Sequence[Cov], idx: Sequence[int]) -> dict[int, int]:
    """Walk each line of the subfamily `idx` left to right and record, for
    every piece between consecutive crossings, the two faces it borders.

    Returns {face sign-mask: bounding-line mask}; bit p of a mask refers to
    position p within `idx` (which must be ascending, hence slope-sorted).
    Every face of the subarrangement borders at least one piece, so the key
    set is the complete face list.
    """
    k = len(idx)
    if k == 0:
        return {}
    full = (1 << k) - 1
    bounding: dict[int, int] = {}
    for pi in range(k):
        a = cov[idx[pi]]
        xs: list[tuple[int, int, int]] = []
        for pj in range(k):
            if pj == pi:
                continue
            b = cov[idx[pj]]
            num = a[1] * b[2] - a[2] * b[1]
            den = a[0] * b[1] - a[1] * b[0]
            if den < 0:
                num, den = -num, -den
            lo, hi = 0, len(xs)
            while lo < hi:
                mid = (lo + hi) // 2
                if xs[mid][0] * den < num * xs[mid][1]:
                    lo = mid + 1
                else:
                    hi = mid
            xs.insert(lo, (num, den, pj))
        # at x -> -inf the line lies above exactly the steeper lines
        mask = full ^ ((1 << (pi + 1)) - 1)
        bit = 1 << pi
        xs.append((0, 0, -1))  # sentinel flushes the last piece
        for _, _, pj in xs:
            up = mask | bit
            bounding[up] = bounding.get(up, 0) | bit
            bounding[mask] = bounding.get(mask, 0) | bit
            if pj >= 0:
                mask ^= 1 << pj
    assert len(bounding) == 1 + k + k * (k - 1) // 2
    return bounding


def _mask_kind(mask: int, k: int) -> str:
    """Classify a face by its sign mask alone: the face escapes to the
    right iff the +1 lines form a slope prefix, to the left iff a suffix."""
    full = (1 << k) - 1
    if mask == full:
        return KIND_CUP
    if mask == 0:
        return KIND_CAP
    if mask & (mask + 1) == 0:
        return KIND_RIGHT
    comp = full ^ mask
    if comp & (comp + 1) == 0:
        return KIND_LEFT
    return KIND_BOUNDED


def _signs(mask: int, k: int) -> tuple[int, ...]:
    return tuple(1 if mask >> i & 1 else -1 for i in range(k))


Bound = Optional[tuple[int, int, int]]  # (num, den > 0, constraining position)


def _interval(cov: Sequence[Cov], t: int, constraints: Iterable[tuple[int, int]]):
    """Open x-interval of line t inside all halfplane constraints (pos, sign).

    Returns None if empty, else (lo, hi) with each end either None (infinite)
    or (num, den, pos) giving the bound value num/den and the line attaining it.
    """
    a = cov[t]
    lo: Bound = None
    hi: Bound = None
    for pj, s in constraints:
        b = cov[pj]
        alpha = s * (b[0] * a[1] - a[0] * b[1])
        beta = s * (b[2] * a[1] - a[2] * b[1])
        # the constraint restricted to line t reads alpha*x + beta > 0
        if alpha > 0:
            if lo is None or -beta * lo[1] > lo[0] * alpha:
                lo = (-beta, alpha, pj)
        else:
            if hi is None or beta * hi[1] < hi[0] * -alpha:
                hi = (beta, -alpha, pj)
    if lo is not None and hi is not None and lo[0] * hi[1] >= hi[0] * lo[1]:
        return None
    return lo, hi


def _region_recs(cov: Sequence[Cov], n: int, mask: int):
    """Positive-length boundary pieces of the open region with sign mask."""
    recs = []
    for pi in range(n):
        constr = [(pj, 1 if mask >> pj & 1 else -1) for pj in range(n) if pj != pi]
        iv = _interval(cov, pi, constr)
        if iv is not None:
            recs.append((pi, iv[0], iv[1]))
    return recs


@dataclass(frozen=True)
class Edge:
    """One boundary piece of a face, oriented along the boundary walk.
    Rays keep their single finite endpoint and record the x-direction in
    which they extend; a full-line edge (single-line family) has neither."""

    line: int
    a: Optional[PointR]
    b: Optional[PointR]
    direction: int = 0  # +1 extends toward +x, -1 toward -x, 0 for segments

    @property
    def kind(self) -> str:
        if self.a is not None and self.b is not None:
            return "segment"
        if self.a is None and self.b is None:
            return "line"
        return "ray"


def _endpoint(f: LineFamily, pi: int, bound) -> PointR:
    x = Fraction(bound[0], bound[1])
    return PointR(x, f[pi].at(x))


def _chain(f: LineFamily, recs) -> tuple[Edge, ...]:
    """Order boundary pieces into a walk where consecutive edges share a
    vertex; unbounded faces run ray-to-ray, bounded ones close a polygon."""
    if not recs:
        return ()
    if len(recs) == 1 and recs[0][1] is None and recs[0][2] is None:
        return (Edge(recs[0][0], None, None, 0),)

    touch: dict[frozenset, list[int]] = {}
    for t, (pi, lo, hi) in enumerate(recs):
        for bnd in (lo, hi):
            if bnd is not None:
                touch.setdefault(frozenset((pi, bnd[2])), []).append(t)
    used = [False] * len(recs)
    chain: list[Edge] = []

    def emit(t: int, enter_key):
        pi, lo, hi = recs[t]
        used[t] = True
        lo_key = frozenset((pi, lo[2])) if lo is not None else None
        hi_key = frozenset((pi, hi[2])) if hi is not None else None
        lo_pt = _endpoint(f, pi, lo) if lo is not None else None
        hi_pt = _endpoint(f, pi, hi) if hi is not None else None
        dirn = -1 if lo is None else (1 if hi is None else 0)
        if enter_key == lo_key:
            chain.append(Edge(pi, lo_pt, hi_pt, dirn))
            return hi_key
        chain.append(Edge(pi, hi_pt, lo_pt, dirn))
        return lo_key

    rays = [t for t, (_, lo, hi) in enumerate(recs) if lo is None or hi is None]
    if rays:
        assert len(rays) == 2, "an unbounded face has exactly two half-lines"
        key = emit(min(rays, key=lambda t: recs[t][0]), None)
        while key is not None:
            nxt = [t for t in touch[key] if not used[t]]
            assert len(nxt) == 1
            key = emit(nxt[0], key)
    else:
        start = min(range(len(recs)), key=lambda t: recs[t][0])
        start_key = frozenset((recs[start][0], recs[start][1][2]))
        key = emit(start, start_key)
        while True:
            nxt = [t for t in touch[key] if not used[t]]
            if not nxt:
                break
            key = emit(nxt[0], key)
        assert key == start_key, "boundary walk must close"
    assert all(used)
    return tuple(chain)


@dataclass(frozen=True)
class Face:
    signs: tuple[int, ...]
    boundary: tuple[Edge, ...]
    bounding_lines: frozenset[int]
    kind: str
    end_lines: Optional[tuple[int, int]]


@dataclass(frozen=True)
class FaceSet:
    faces: tuple[Face, ...]

    def __len__(self) -> int:
        return len(self.faces)

    def __iter__(self) -> Iterator[Face]:
        return iter(self.faces)

    @cached_property
    def _by_signs(self) -> dict[tuple[int, ...], Face]:
        return {face.signs: face for face in self.faces}

    def get(self, signs: Sequence[int]) -> Optional[Face]:
        return self._by_signs.get(tuple(signs))


def _face_from_mask(f: LineFamily, cov: Sequence[Cov], mask: int) -> Face:
    n = len(f)
    recs = _region_recs(cov, n, mask)
    assert recs, "a realized face has at least one boundary edge"
    kind = _mask_kind(mask, n)
    lefts = sum(1 for _, lo, _ in recs if lo is None)
    rights = sum(1 for _, _, hi in recs if hi is None)
    if kind == KIND_BOUNDED:
        assert lefts == rights == 0
    elif kind == KIND_LEFT:
        assert lefts == 2 and rights == 0
    elif kind == KIND_RIGHT:
        assert lefts == 0 and rights == 2
    else:
        assert lefts == rights == 1
    end = None
    if kind in (KIND_LEFT, KIND_RIGHT):
        end_lines = sorted(pi for pi, lo, hi in recs if lo is None or hi is None)
        end = (end_lines[0], end_lines[1])
    return Face(
        signs=_signs(mask, n),
        boundary=_chain(f, recs),
        bounding_lines=frozenset(pi for pi, _, _ in recs),
        kind=kind,
        end_lines=end,
    )


def faces(f: LineFamily) -> FaceSet:
    """All faces of the arrangement, discovered via the four sign
    completions around every vertex (exhaustive for n >= 2 since every face
    has a vertex; a single line yields the two halfplanes)."""
    n = len(f)
    if n < 1:
        raise ValueError("need at least one line")
    cov = _covectors(f)
    masks: set[int] = set()
    if n == 1:
        masks = {0, 1}
    else:
        for i, j in combinations(range(n), 2):
            v = _vertex(cov[i], cov[j])
            base = 0
            for k in range(n):
                if k != i and k != j and _sign_at(cov[k], v) > 0:
                    base |= 1 << k
            for bi in (0, 1 << i):
                for bj in (0, 1 << j):
                    masks.add(base | bi | bj)
    assert len(masks) == 1 + n + n * (n - 1) // 2
    ordered = sorted(masks, key=lambda m: _signs(m, n))
    return FaceSet(tuple(_face_from_mask(f, cov, m) for m in ordered))


def face_region(f: LineFamily, signs: Sequence[int]):
    """Boundary chain of the open region with the given sign vector, or
    None if that region is empty."""
    n = len(f)
    signs = tuple(signs)
    if len(signs) != n or any(s not in (-1, 1) for s in signs):
        raise ValueError("signs must be a +-1 vector aligned with the family")
    if n == 0:
        return ()
    mask = sum(1 << i for i, s in enumerate(signs) if s > 0)
    recs = _region_recs(_covectors(f), n, mask)
    if not recs:
        return None
    return _chain(f, recs)


def _full_cell_masks(cov: Sequence[Cov], idx: Sequence[int]) -> list[int]:
    full = (1 << len(idx)) - 1
    return [m for m, b in _sweep(cov, idx).items() if b == full]


def defines_cell(g: LineFamily) -> Optional[Face]:
    """The face of g's own arrangement bounded by every line of g, if any.

    For 5 or more lines such a face is unique when it exists; for fewer
    there may be two candidates (four lines always define two 4-cells), in
    which case the bounded one, then the lexicographically smallest sign
    vector, is preferred.
    """
    n = len(g)
    if n < 2:
        raise ValueError("need at least 2 lines")
    cov = _covectors(g)
    cands = _full_cell_masks(cov, tuple(range(n)))
    if not cands:
        return None
    if n >= 5:
        assert len(cands) == 1, "families of >= 5 lines define at most one n-cell"
    best = min(cands, key=lambda m: (_mask_kind(m, n) != KIND_BOUNDED, _signs(m, n)))
    return _face_from_mask(g, cov, best)


def crossing_lines(f: LineFamily, g: Iterable[int], face: Face) -> frozenset[int]:
    """Indices of lines of f outside g whose line meets the interior of the
    given face of the subarrangement on g."""
    g = tuple(sorted(set(g)))
    if len(face.signs) != len(g):
        raise ValueError("face does not belong to the subfamily g")
    cov = _covectors(f)
    constr = [(pos, s) for pos, s in zip(g, face.signs)]
    out = set()
    for t in range(len(f)):
        if t in set(g):
            continue
        if _interval(cov, t, constr) is not None:
            out.add(t)
    return frozenset(out)


def _bits(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


@dataclass
class CellCensus:
    """Counts of empty k-cells (faces bounded by exactly k lines), total and
    bounded-only; with a colored family also the monochromatic restriction."""

    total: dict[int, int] = field(default_factory=dict)
    bounded: dict[int, int] = field(default_factory=dict)
    mono_total: Optional[dict[int, int]] = None
    mono_bounded: Optional[dict[int, int]] = None


def empty_cell_census(f: LineFamily) -> CellCensus:
    n = len(f)
    if n < 1:
        raise ValueError("need at least one line")
    cov = _covectors(f)
    census = CellCensus()
    if f.colors is not None:
        census.mono_total = {}
        census.mono_bounded = {}
    for mask, bnd in _sweep(cov, tuple(range(n))).items():
        k = bnd.bit_count()
        census.total[k] = census.total.get(k, 0) + 1
        is_bounded = _mask_kind(mask, n) == KIND_BOUNDED
        if is_bounded:
            census.bounded[k] = census.bounded.get(k, 0) + 1
        if f.colors is not None:
            if len({f.colors[i] for i in _bits(bnd)}) == 1:
                census.mono_total[k] = census.mono_total.get(k, 0) + 1
                if is_bounded:
                    census.mono_bounded[k] = census.mono_bounded.get(k, 0) + 1
    return census


def empty_triangle_witnesses(f: LineFamily) -> tuple[tuple[int, int, int], ...]:
    """For every line, the triangle it forms with the two lines crossing
    nearest to it is an empty 3-cell; returns the deduplicated triples.

    At most three lines can nominate the same triangle, so at least N/3
    distinct empty triangles come out.
    """
    n = len(f)
    if n < 3:
        return ()
    cov = _covectors(f)
    verts = [(j, k, _vertex(cov[j], cov[k])) for j, k in combinations(range(n), 2)]
    found: set[tuple[int, int, int]] = set()
    for i in range(n):
        a = cov[i]
        best = None  # (|value|, w, (j, k)); lex order of verts breaks ties
        for j, k, v in verts:
            if i == j or i == k:
                continue
            val = abs(a[0] * v[0] + a[1] * v[1] + a[2] * v[2])
            if best is None or val * best[1] < best[0] * v[2]:
                best = (val, v[2], (j, k))
        trio = tuple(sorted((i, *best[2])))
        found.add(trio)
    for trio in found:
        # the nominated triangle really is empty: no other line crosses the
        # bounded cell of the three
        tri_masks = [
            m
            for m in _full_cell_masks(cov, trio)
            if _mask_kind_sub(m, cov, trio) == KIND_BOUNDED
        ]
        assert len(tri_masks) == 1
        constr = [(pos, 1 if tri_masks[0] >> p & 1 else -1) for p, pos in enumerate(trio)]
        for t in range(n):
            if t not in trio:
                assert _interval(cov, t, constr) is None
    return tuple(sorted(found))


def _mask_kind_sub(mask: int, cov: Sequence[Cov], idx: Sequence[int]) -> str:
    return _mask_kind(mask, len(idx))
