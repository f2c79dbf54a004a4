"""Wiring diagrams: combinatorial simple pseudoline arrangements.

A diagram on n wires is the sequence of adjacent transpositions read left to
right; position p (1-based, 1..n-1) swaps the wires currently at heights
p-1 and p counted from the bottom.  Wires are named by their starting
height.  Every pair must cross exactly once, so a diagram carries C(n,2)
swaps and ends in the reversed order.

Two diagrams are considered equal when their swap sequences differ only by
exchanging adjacent swaps at distance >= 2 (which touch disjoint wire
pairs): such sequences draw the same arrangement.  The lexicographically
smallest sequence in that class is the stored normal form.  Checking a
property on one representative per class (and per symmetry orbit) is sound
for anything invariant under redrawing, which includes all face structure.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .core import LineFamily, intersect


def _normalize(swaps: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically smallest equivalent word: slide each swap left
    past earlier swaps that are larger by at least 2 (those commute)."""
    out: list[int] = []
    for s in swaps:
        out.append(s)
        i = len(out) - 1
        while i > 0 and out[i - 1] >= s + 2:
            out[i] = out[i - 1]
            out[i - 1] = s
            i -= 1
    return tuple(out)


def _simulate(n: int, swaps: Sequence[int]):
    order = list(range(n))
    crossed = set()
    for p in swaps:
        if not 1 <= p <= n - 1:
            raise ValueError(f"swap position {p} out of range 1..{n - 1}")
        a, b = order[p - 1], order[p]
        pair = (a, b) if a < b else (b, a)
        if pair in crossed:
            raise ValueError(f"wires {pair} cross twice")
        crossed.add(pair)
        order[p - 1], order[p] = b, a
    return order, crossed


@dataclass(frozen=True, eq=False)
class WiringDiagram:
    n: int
    swaps: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "swaps", tuple(self.swaps))
        if self.n < 2:
            raise ValueError("need at least 2 wires")
        if len(self.swaps) != self.n * (self.n - 1) // 2:
            raise ValueError("a complete diagram has C(n,2) swaps")
        _simulate(self.n, self.swaps)

    @cached_property
    def normal_form(self) -> tuple[int, ...]:
        return _normalize(self.swaps)

    def canonical_form(self) -> tuple[int, ...]:
        """Smallest normal form over the symmetry group: identity,
        top-bottom flip (p -> n-p), left-right reversal, and both."""
        cands = []
        for word in (self.swaps, tuple(reversed(self.swaps))):
            cands.append(_normalize(word))
            cands.append(_normalize(tuple(self.n - p for p in word)))
        return min(cands)

    def is_canonical(self) -> bool:
        return self.normal_form == self.canonical_form()

    def __eq__(self, other) -> bool:
        if not isinstance(other, WiringDiagram):
            return NotImplemented
        return self.n == other.n and self.normal_form == other.normal_form

    def __hash__(self) -> int:
        return hash((self.n, self.normal_form))

    def __str__(self) -> str:
        return " ".join(str(p) for p in self.swaps)


def wiring_from_family(f: LineFamily) -> WiringDiagram:
    """Sweep the family left to right.  Wire w starts at height w, and the
    bottom wire at x = -inf is the steepest line, so wire w is the line with
    slope rank n-1-w.  Crossings sharing an x-coordinate involve disjoint,
    non-adjacent wire pairs (three sharing a line would be concurrent), so
    processing them bottom-up is valid and any order draws the same diagram.
    """
    n = len(f)
    if n < 2:
        raise ValueError("need at least 2 lines")
    events = []
    for i, j in combinations(range(n), 2):
        events.append((intersect(f[i], f[j]).x, i, j))
    events.sort(key=lambda e: e[0])
    height = {i: n - 1 - i for i in range(n)}
    order = list(range(n - 1, -1, -1))
    swaps = []
    t = 0
    while t < len(events):
        u = t
        while u < len(events) and events[u][0] == events[t][0]:
            u += 1
        group = sorted(events[t:u], key=lambda e: min(height[e[1]], height[e[2]]))
        for _, i, j in group:
            hi, hj = height[i], height[j]
            lo = min(hi, hj)
            assert abs(hi - hj) == 1, "crossing wires must be height-adjacent"
            order[lo], order[lo + 1] = order[lo + 1], order[lo]
            height[i], height[j] = hj, hi
            swaps.append(lo + 1)
        t = u
    return WiringDiagram(n, tuple(swaps))


def enumerate_wiring_diagrams(n: int, up_to_symmetry: bool = True) -> tuple[WiringDiagram, ...]:
    """All simple wiring diagrams on n wires, one per equivalence class;
    with up_to_symmetry also quotiented by the 4-element symmetry group.

    Enumerates exactly the normal-form words: depth-first, allowing the
    next swap at position p only if the wires there have not crossed and
    p >= previous - 1 (a smaller p would commute backwards into a smaller
    word, which would be a duplicate of another class representative).
    """
    if not 2 <= n <= 8:
        raise ValueError("supported range is 2..8 wires")
    total = n * (n - 1) // 2
    order = list(range(n))
    crossed = [[False] * n for _ in range(n)]
    word: list[int] = []
    words: list[tuple[int, ...]] = []

    def rec(last: int):
        if len(word) == total:
            words.append(tuple(word))
            return
        for p in range(max(1, last - 1), n):
            a, b = order[p - 1], order[p]
            if crossed[a][b]:
                continue
            crossed[a][b] = crossed[b][a] = True
            order[p - 1], order[p] = b, a
            word.append(p)
            rec(p)
            word.pop()
            order[p - 1], order[p] = a, b
            crossed[a][b] = crossed[b][a] = False

    rec(1)
    out = [WiringDiagram(n, w) for w in sorted(words)]
    if up_to_symmetry:
        out = [wd for wd in out if wd.is_canonical()]
    return tuple(out)


def wd_delete(wd: WiringDiagram, keep: Iterable[int]) -> WiringDiagram:
    """Restriction to a wire subset, renumbered by starting height."""
    kept = sorted(set(keep))
    if len(kept) < 2:
        raise ValueError("keep at least 2 wires")
    if kept[0] < 0 or kept[-1] >= wd.n:
        raise ValueError("wire id out of range")
    flag = [False] * wd.n
    for w in kept:
        flag[w] = True
    order = list(range(wd.n))
    swaps = []
    for p in wd.swaps:
        a, b = order[p - 1], order[p]
        if flag[a] and flag[b]:
            below = sum(1 for h in range(p - 1) if flag[order[h]])
            swaps.append(below + 1)
        order[p - 1], order[p] = b, a
    return WiringDiagram(len(kept), tuple(swaps))


@dataclass(frozen=True)
class WDFace:
    bounding_wires: frozenset[int]
    bounded: bool


def wd_faces(wd: WiringDiagram) -> tuple[WDFace, ...]:
    """Faces by a single sweep.  Between consecutive wire heights live open
    regions; a swap at position p closes the region in gap p, opens a fresh
    one bounded by the two crossing wires, and hands the regions in gaps
    p-1 and p+1 their new neighboring wire.  A face is bounded iff a swap
    both opened and closed it."""
    n = wd.n
    order = list(range(n))
    open_faces: list[tuple[set[int], bool]] = []
    for g in range(n + 1):
        bnd = set()
        if g > 0:
            bnd.add(order[g - 1])
        if g < n:
            bnd.add(order[g])
        open_faces.append((bnd, False))
    out = []
    for p in wd.swaps:
        a, b = order[p - 1], order[p]
        bnd, by_swap = open_faces[p]
        out.append(WDFace(frozenset(bnd), by_swap))
        order[p - 1], order[p] = b, a
        open_faces[p] = ({a, b}, True)
        open_faces[p - 1][0].add(b)
        open_faces[p + 1][0].add(a)
    for bnd, _ in open_faces:
        out.append(WDFace(frozenset(bnd), False))
    assert len(out) == 1 + n + n * (n - 1) // 2
    return tuple(out)


def wd_spans_n_cell(wd: WiringDiagram, n: int) -> bool:
    """True iff some n-wire subset keeps a face bounded by all n wires."""
    if n < 2:
        raise ValueError("n-cells need n >= 2")
    if n > wd.n:
        raise ValueError("not enough wires")
    for sub_wires in combinations(range(wd.n), n):
        sub = wd if n == wd.n else wd_delete(wd, sub_wires)
        for face in wd_faces(sub):
            if len(face.bounding_wires) == n:
                return True
    return False
