"""Cups and caps of line families, point duality, and longest-chain DP.

A slope-sorted family is a cup when every interior line passes strictly
above the crossing of its two neighbors (cap: strictly below); two lines or
fewer are both at once.  Under the duality line y = mx + c -> point (m, c),
line cups correspond exactly to point caps and vice versa.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Sequence

from .arrangement import _covectors, _sign_at, _vertex
from .core import Line, LineFamily, PointR, sign

CUP = "cup"
CAP = "cap"
BOTH = "both"
NEITHER = "neither"


def dualize(l: Line) -> PointR:
    return PointR(l.m, l.c)


def orient_points(p: PointR, q: PointR, r: PointR) -> int:
    """+1 for a counterclockwise (left) turn, -1 for clockwise, 0 collinear."""
    return sign((q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x))


def cup_cap_threshold(k: int, l: int) -> int:
    """Smallest family size forcing a k-cup or an l-cap: C(k+l-4, k-2) + 1."""
    if k < 2 or l < 2:
        raise ValueError("cups and caps of fewer than 2 lines are unconditional")
    return comb(k + l - 4, k - 2) + 1


def classify_cupcap(g: LineFamily) -> str:
    n = len(g)
    if n < 1:
        raise ValueError("need at least one line")
    if n <= 2:
        return BOTH
    cov = _covectors(g)
    seen = {_sign_at(cov[j], _vertex(cov[j - 1], cov[j + 1])) for j in range(1, n - 1)}
    # -1: the neighbors' crossing lies below the middle line (cup triple)
    if seen == {-1}:
        return CUP
    if seen == {1}:
        return CAP
    return NEITHER


@dataclass(frozen=True)
class CupCapWitness:
    kind: str
    indices: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.indices)


def _longest_chain(cov, n: int, target: int) -> tuple[int, ...]:
    """Lexicographically smallest maximum chain whose interior triples all
    have the given sign (-1 cups, +1 caps)."""
    if n == 1:
        return (0,)
    # start[i][j]: longest valid chain beginning with lines i then j
    start = [[2] * n for _ in range(n)]
    for i in range(n - 2, -1, -1):
        row = start[i]
        for j in range(i + 1, n):
            best = 2
            nxt = start[j]
            cj = cov[j]
            ci = cov[i]
            for k in range(j + 1, n):
                if nxt[k] >= best and _sign_at(cj, _vertex(ci, cov[k])) == target:
                    best = nxt[k] + 1
            row[j] = best
    top = max(start[i][j] for i in range(n) for j in range(i + 1, n))
    first = min(i for i in range(n) if any(start[i][j] == top for j in range(i + 1, n)))
    second = min(j for j in range(first + 1, n) if start[first][j] == top)
    seq = [first, second]
    while len(seq) < top:
        a, b = seq[-2], seq[-1]
        need = top - len(seq)  # lines still to append after this choice covers one
        k = min(
            k
            for k in range(b + 1, n)
            if start[b][k] >= need + 1
            and _sign_at(cov[b], _vertex(cov[a], cov[k])) == target
        )
        seq.append(k)
    return tuple(seq)


def longest_cup_cap(f: LineFamily) -> tuple[CupCapWitness, CupCapWitness]:
    """Maximum cup and maximum cap over all subfamilies, with witnesses."""
    n = len(f)
    if n < 1:
        raise ValueError("need at least one line")
    cov = _covectors(f)
    return (
        CupCapWitness(CUP, _longest_chain(cov, n, -1)),
        CupCapWitness(CAP, _longest_chain(cov, n, 1)),
    )
