import random
from fractions import Fraction
from itertools import combinations

import pytest

from linecells.arrangement import empty_cell_census
from linecells.core import Line, LineFamily, check_general_position
from linecells.pseudolines import (
    WDFace,
    WiringDiagram,
    enumerate_wiring_diagrams,
    wd_delete,
    wd_faces,
    wd_spans_n_cell,
    wiring_from_family,
)

TRIANGLE = check_general_position([Line(-1, -1), Line(0, 0), Line(1, -2)])


def random_family(rng, n, span=12):
    while True:
        lines = []
        slopes = set()
        for _ in range(n):
            while True:
                m = Fraction(rng.randint(-span, span), rng.randint(1, 4))
                if m not in slopes:
                    slopes.add(m)
                    break
            lines.append(Line(m, Fraction(rng.randint(-span, span), rng.randint(1, 4))))
        try:
            return check_general_position(lines)
        except Exception:
            continue


def all_words(n):
    """Every valid complete swap sequence, no normal-form pruning."""
    total = n * (n - 1) // 2
    order = list(range(n))
    crossed = set()
    word, out = [], []

    def rec():
        if len(word) == total:
            out.append(tuple(word))
            return
        for p in range(1, n):
            a, b = order[p - 1], order[p]
            pair = (min(a, b), max(a, b))
            if pair in crossed:
                continue
            crossed.add(pair)
            order[p - 1], order[p] = b, a
            word.append(p)
            rec()
            word.pop()
            order[p - 1], order[p] = a, b
            crossed.remove(pair)

    rec()
    return out


def test_diagram_validation():
    WiringDiagram(2, (1,))
    with pytest.raises(ValueError):
        WiringDiagram(2, (1, 1))
    with pytest.raises(ValueError):
        WiringDiagram(3, (1, 2))  # incomplete
    with pytest.raises(ValueError):
        WiringDiagram(3, (1, 3, 1))  # position out of range


def test_equality_mod_commutation():
    w1 = WiringDiagram(4, (1, 2, 1, 3, 2, 1))
    w2 = WiringDiagram(4, (1, 2, 3, 1, 2, 1))  # swapped the commuting 1,3
    assert w1 == w2
    assert hash(w1) == hash(w2)
    assert w1.swaps != w2.swaps
    w3 = WiringDiagram(3, (1, 2, 1))
    assert w3 != WiringDiagram(3, (2, 1, 2))


def test_canonical_three_wires():
    a = WiringDiagram(3, (1, 2, 1))
    b = WiringDiagram(3, (2, 1, 2))
    assert a.canonical_form() == (1, 2, 1) == b.canonical_form()
    assert a.is_canonical() and not b.is_canonical()


def test_enumeration_class_counts():
    # commutation classes of complete diagrams: published census values
    assert len(enumerate_wiring_diagrams(2, up_to_symmetry=False)) == 1
    assert len(enumerate_wiring_diagrams(3, up_to_symmetry=False)) == 2
    assert len(enumerate_wiring_diagrams(4, up_to_symmetry=False)) == 8
    assert len(enumerate_wiring_diagrams(5, up_to_symmetry=False)) == 62
    assert len(enumerate_wiring_diagrams(6, up_to_symmetry=False)) == 908


def test_enumeration_matches_bruteforce_words():
    for n in (3, 4, 5):
        words = all_words(n)
        classes = {WiringDiagram(n, w).normal_form for w in words}
        enum = enumerate_wiring_diagrams(n, up_to_symmetry=False)
        assert {wd.normal_form for wd in enum} == classes
        cands = {WiringDiagram(n, w).canonical_form() for w in words}
        enum_sym = enumerate_wiring_diagrams(n, up_to_symmetry=True)
        assert {wd.normal_form for wd in enum_sym} == cands


def test_enumeration_symmetry_counts():
    assert len(enumerate_wiring_diagrams(2)) == 1
    assert len(enumerate_wiring_diagrams(3)) == 1


def test_wiring_from_family_small():
    f2 = LineFamily((Line(0, 0), Line(1, 0)))
    assert wiring_from_family(f2).swaps == (1,)
    wd = wiring_from_family(TRIANGLE)
    assert wd.swaps == (2, 1, 2)


def test_wiring_from_family_with_x_ties():
    # (0,0) and (0,1) are distinct crossings sharing x=0
    f = check_general_position([Line(1, 0), Line(-1, 0), Line(2, 1), Line(-2, 1)])
    wd = wiring_from_family(f)
    assert len(wd.swaps) == 6


def test_wd_delete_small():
    wd = WiringDiagram(3, (1, 2, 1))
    assert wd_delete(wd, (0, 1, 2)) == wd
    assert wd_delete(wd, (0, 2)).swaps == (1,)
    with pytest.raises(ValueError):
        wd_delete(wd, (1,))


def test_wd_delete_consistency_with_geometry():
    rng = random.Random(51)
    for _ in range(25):
        n = rng.randint(3, 6)
        f = random_family(rng, n)
        wd = wiring_from_family(f)
        size = rng.randint(2, n)
        sub = tuple(sorted(rng.sample(range(n), size)))
        wires = [n - 1 - i for i in sub]  # wire of slope-rank i is n-1-i
        assert wd_delete(wd, wires) == wiring_from_family(f.subfamily(sub))


def test_wd_faces_small():
    fs2 = wd_faces(WiringDiagram(2, (1,)))
    assert len(fs2) == 4
    assert all(face.bounding_wires == frozenset({0, 1}) for face in fs2)
    assert sum(face.bounded for face in fs2) == 0
    fs3 = wd_faces(WiringDiagram(3, (1, 2, 1)))
    sizes = sorted(len(face.bounding_wires) for face in fs3)
    assert sizes == [2, 2, 2, 3, 3, 3, 3]
    assert sum(face.bounded for face in fs3) == 1


def test_wd_faces_agree_with_geometry():
    rng = random.Random(52)
    for _ in range(30):
        n = rng.randint(2, 7)
        f = random_family(rng, n)
        census = empty_cell_census(f)
        hist: dict[int, int] = {}
        hist_bounded: dict[int, int] = {}
        for face in wd_faces(wiring_from_family(f)):
            k = len(face.bounding_wires)
            hist[k] = hist.get(k, 0) + 1
            if face.bounded:
                hist_bounded[k] = hist_bounded.get(k, 0) + 1
        assert hist == census.total
        assert hist_bounded == census.bounded


def test_every_small_diagram_spans():
    for wd in enumerate_wiring_diagrams(3, up_to_symmetry=False):
        assert wd_spans_n_cell(wd, 3)
    for wd in enumerate_wiring_diagrams(4, up_to_symmetry=False):
        assert wd_spans_n_cell(wd, 4)
        assert wd_spans_n_cell(wd, 3)


def test_spans_monotone_under_more_wires():
    rng = random.Random(53)
    for _ in range(10):
        f = random_family(rng, 6)
        wd = wiring_from_family(f)
        for sub_wires in combinations(range(6), 5):
            if wd_spans_n_cell(wd_delete(wd, sub_wires), 4):
                assert wd_spans_n_cell(wd, 4)
                break


def test_realizable_diagrams_appear_in_enumeration():
    rng = random.Random(54)
    enum5 = set(enumerate_wiring_diagrams(5, up_to_symmetry=False))
    for _ in range(40):
        f = random_family(rng, 5)
        assert wiring_from_family(f) in enum5
