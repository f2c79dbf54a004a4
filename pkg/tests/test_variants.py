"""Cells with a prescribed crossing count, mixed polygons, halfplane
selection, and transversal checks."""

import random
from fractions import Fraction as F

import pytest

from linecells.arrangement import crossing_lines, defines_cell, faces
from linecells.constructions import (
    ClusterSpec,
    build_cup_cap_free,
    build_no_ncell_doubled,
    build_regular_polygon_lines,
    make_cluster,
    random_family,
)
from linecells.core import (
    Line,
    LineFamily,
    ParallelViolation,
    PointR,
    check_general_position,
    side_of,
)
from linecells.cupcap import orient_points
from linecells.search import BudgetExceeded
from linecells.variants import (
    HalfPlane,
    Infeasible,
    check_transversals,
    crossing_order,
    exact_crossing_cell,
    halfplane_select,
    mixed_polygon,
)


# ---------------------------------------------------------------------------
# exact crossing counts


def test_exact_crossing_frozen_cells():
    f = random_family(12, random.Random(5))
    expected = {
        0: (0, 5, 10, 11),
        1: (0, 5, 10),
        2: (0, 5, 9),
        3: (0, 5, 7, 8),
        5: (0, 5, 6),
    }
    for n, want in expected.items():
        g, face = exact_crossing_cell(f, n)
        assert g == want
        assert len(crossing_lines(f, g, face)) == n


def test_exact_crossing_every_count_down_from_best():
    f = random_family(9, random.Random(2))
    top, _ = None, None
    for n in range(9):
        try:
            g, face = exact_crossing_cell(f, n)
        except Infeasible:
            top = n - 1
            break
        assert len(crossing_lines(f, g, face)) == n
        # the cell is genuinely bounded by every line it reports
        assert face.bounding_lines == frozenset(range(len(g)))
    else:
        top = 8
    assert top >= 6  # 9 lines leave at least 7 crossing a wedge somewhere


def test_exact_crossing_infeasible_and_validation():
    f = random_family(12, random.Random(5))
    with pytest.raises(Infeasible):
        exact_crossing_cell(f, 11)
    with pytest.raises(ValueError):
        exact_crossing_cell(f, -1)
    with pytest.raises(ValueError):
        exact_crossing_cell(random_family(1, random.Random(0)), 0)


def test_crossing_order_is_strict_partial_order():
    f = random_family(11, random.Random(7))
    from itertools import combinations

    for pair in combinations(range(6), 2):
        for face in faces(f.subfamily(pair)):
            order = crossing_order(f, pair, face)
            rel = order.relation
            ground = sorted(crossing_lines(f, pair, face))
            for i in ground:
                assert (i, i) not in rel
            for i, j in rel:
                assert (j, i) not in rel
                for k in ground:
                    if (j, k) in rel:
                        assert (i, k) in rel
            # the anchor sits on the cell boundary, off every crossing line
            for t in ground:
                assert side_of(f[t], order.anchor) != 0


def test_split_decrements_by_one_each_round():
    f = random_family(10, random.Random(4))
    # replay the internal walk one level up: each requested count succeeds,
    # and the n-cell for count n embeds the n+1 history only through its API
    counts = []
    for n in range(8, -1, -1):
        g, face = exact_crossing_cell(f, n)
        counts.append(len(crossing_lines(f, g, face)))
    assert counts == list(range(8, -1, -1))


# ---------------------------------------------------------------------------
# mixed polygons


def _check_mixed(f, pts, n, mp):
    """Independent replay of every promised property."""
    verts = mp.vertices
    assert len(verts) == 2 * n
    m2 = 2 * n
    for i in range(m2):
        assert orient_points(verts[i - 1], verts[i], verts[(i + 1) % m2]) == 1
    t = mp.translation
    shifted = {PointR(q.x + t.x, q.y + t.y) for q in pts}
    on_pts = [i for i, v in enumerate(verts) if v in shifted]
    assert tuple(on_pts) == mp.point_vertices
    assert len(on_pts) == n
    hits = []
    for i in range(m2):
        a, b = verts[i], verts[(i + 1) % m2]
        carrier = None
        for li, l in enumerate(f.lines):
            if side_of(l, a) == 0 and side_of(l, b) == 0:
                carrier = li
        hits.append(carrier)
    assert tuple(hits) == mp.edge_lines
    lined = [x for x in hits if x is not None]
    assert len(lined) == n
    assert len(set(lined)) == n


def test_mixed_square_from_vee_and_point_cup():
    f = LineFamily((Line(-1, 0), Line(0, -2), Line(1, 0)))
    pts = [PointR(0, 0), PointR(1, -1), PointR(2, 0)]
    mp = mixed_polygon(f, pts, 2)
    assert mp.translation == PointR(2, -4)
    assert mp.vertices == (
        PointR(-3, -2),
        PointR(3, -5),
        PointR(4, -4),
        PointR(2, -2),
    )
    assert mp.edge_lines == (None, None, 0, 1)
    assert mp.point_vertices == (1, 2)
    _check_mixed(f, pts, 2, mp)


def test_mixed_square_from_vee_and_point_cap():
    f = LineFamily((Line(-1, 0), Line(0, -2), Line(1, 0)))
    pts = [PointR(0, 0), PointR(1, 1), PointR(2, 0)]
    mp = mixed_polygon(f, pts, 2)
    assert mp.translation == PointR(-1, -3)
    assert mp.vertices == (
        PointR(-3, -3),
        PointR(1, -3),
        PointR(0, -2),
        PointR(-2, -2),
    )
    assert mp.edge_lines == (None, None, 1, 2)
    assert mp.point_vertices == (1, 2)
    _check_mixed(f, pts, 2, mp)


def _tangent_cup(xs):
    # tangents to y = x*x leave the region above them all as a common cell
    return LineFamily(tuple(Line(2 * a, -a * a) for a in xs))


def _tangent_cap(xs):
    return LineFamily(tuple(Line(-2 * a, a * a) for a in xs))


def test_mixed_hexagons_all_four_chain_kinds():
    xs = [F(i) for i in (-2, -1, 0, 1, 2)]
    cup_pts = [PointR(x, x * x) for x in xs]
    cap_pts = [PointR(x, -x * x) for x in xs]
    cases = [
        (_tangent_cup(xs), cup_pts, PointR(0, 0), (0, 1, 2, None, None, None), (3, 4, 5)),
        (_tangent_cup(xs), cap_pts, PointR(F(7, 2), 22), (2, 3, 4, None, None, None), (3, 4, 5)),
        (_tangent_cap(xs), cup_pts, PointR(F(7, 2), -22), (None, None, None, 0, 1, 2), (1, 2, 3)),
        (_tangent_cap(xs), cap_pts, PointR(0, 0), (None, None, None, 2, 3, 4), (1, 2, 3)),
    ]
    for f, pts, t, edges, pv in cases:
        mp = mixed_polygon(f, pts, 3)
        assert mp.translation == t
        assert mp.edge_lines == edges
        assert mp.point_vertices == pv
        _check_mixed(f, pts, 3, mp)


def test_mixed_steep_lines_shallow_points():
    # middle line steeper than the point chords: the mirrored gluing applies
    f = _tangent_cup([F(i) for i in (0, 1, 2, 3, 4)])
    pts = [PointR(F(i), F(i * i)) for i in (-10, -9, -8, -7, -6)]
    mp = mixed_polygon(f, pts, 3)
    assert mp.translation == PointR(10, -60)
    assert mp.edge_lines == (None, None, 2, 3, 4, None)
    assert mp.point_vertices == (0, 1, 2)
    _check_mixed(f, pts, 3, mp)


def _random_points(k, rng):
    while True:
        pts = [
            PointR(
                F(rng.randint(-300, 300), rng.randint(1, 7)),
                F(rng.randint(-300, 300), rng.randint(1, 7)),
            )
            for _ in range(k)
        ]
        if len({p.x for p in pts}) == k:
            return pts


def test_mixed_random_families_and_points():
    # 3 of each side suffice for squares, 21 for hexagons
    for n, size in ((2, 3), (3, 21)):
        done = 0
        for seed in range(8):
            rng = random.Random(1000 * n + seed)
            f = random_family(size, rng)
            pts = _random_points(size, rng)
            try:
                mp = mixed_polygon(f, pts, n)
            except ValueError:
                continue  # collinear triple in the random draw
            _check_mixed(f, pts, n, mp)
            done += 1
        assert done >= 6


def test_mixed_validation():
    f = _tangent_cup([F(i) for i in (-2, -1, 0, 1, 2)])
    with pytest.raises(ValueError):
        mixed_polygon(f, [PointR(0, 0), PointR(0, 1), PointR(1, 0)], 2)
    with pytest.raises(ValueError):
        mixed_polygon(f, [PointR(0, 0), PointR(1, 1), PointR(2, 2)], 2)
    with pytest.raises(ValueError):
        mixed_polygon(f, [PointR(0, 0), PointR(1, -1), PointR(2, 0)], 1)
    with pytest.raises(ValueError):
        # plenty of points but too few lines for a 5-member chain
        mixed_polygon(f.subfamily((0, 1)), [PointR(F(i), F(i * i)) for i in range(21)], 3)


# ---------------------------------------------------------------------------
# halfplane selection


def _replay_halfplanes(hs, n, chosen, mode):
    # the promised region (intersection of the halfplanes, or of their
    # complements) must itself be a face bounded by all n of its lines
    lines = [hs[i].line for i in chosen]
    fam = check_general_position(lines)
    by_slope = {l.m: i for i, l in enumerate(lines)}
    want = []
    for pos in range(n):
        h = hs[chosen[by_slope[fam[pos].m]]]
        s = 1 if h.side == "above" else -1
        want.append(s if mode == "intersection" else -s)
    face = faces(fam).get(tuple(want))
    assert face is not None
    assert face.bounding_lines == frozenset(range(n))


def test_halfplanes_around_a_heptagon():
    g7 = build_regular_polygon_lines(7)
    origin = PointR(0, 0)
    hs = [HalfPlane(l, "above" if side_of(l, origin) > 0 else "below") for l in g7.lines]
    chosen, mode = halfplane_select(hs, 3)
    assert (chosen, mode) == ((0, 1, 2), "intersection")
    _replay_halfplanes(hs, 3, chosen, mode)
    flipped = [HalfPlane(h.line, "below" if h.side == "above" else "above") for h in hs]
    chosen2, mode2 = halfplane_select(flipped, 3)
    assert (chosen2, mode2) == ((0, 1, 2), "complements")
    _replay_halfplanes(flipped, 3, chosen2, mode2)


def test_halfplanes_mixed_sides_random():
    f10 = random_family(10, random.Random(11))
    rng = random.Random(12)
    hs = [HalfPlane(l, rng.choice(["above", "below"])) for l in f10.lines]
    chosen, mode = halfplane_select(hs, 3)
    assert (chosen, mode) == ((0, 1, 3), "intersection")
    _replay_halfplanes(hs, 3, chosen, mode)


def test_halfplanes_random_replay_loop():
    for seed in range(10):
        rng = random.Random(900 + seed)
        f = random_family(9, rng)
        hs = [HalfPlane(l, rng.choice(["above", "below"])) for l in f.lines]
        chosen, mode = halfplane_select(hs, 2)
        _replay_halfplanes(hs, 2, chosen, mode)


def test_halfplanes_infeasible_when_no_convex_position():
    d5 = build_no_ncell_doubled(5)
    hs = [HalfPlane(l, "above") for l in d5.lines]
    chosen, mode = halfplane_select(hs, 2)
    assert (chosen, mode) == ((0, 5), "intersection")
    _replay_halfplanes(hs, 2, chosen, mode)
    with pytest.raises(Infeasible):
        halfplane_select(hs, 3)


def test_halfplane_validation():
    with pytest.raises(ValueError):
        HalfPlane(Line(0, 0), "left")
    hs = [HalfPlane(l, "above") for l in random_family(6, random.Random(1)).lines]
    with pytest.raises(ValueError):
        halfplane_select(hs, 1)


def test_halfplane_contains():
    h = HalfPlane(Line(1, 0), "above")
    assert h.contains(PointR(0, 1))
    assert not h.contains(PointR(0, -1))
    assert not h.contains(PointR(0, 0))
    assert HalfPlane(Line(1, 0), "below").contains(PointR(0, -1))


# ---------------------------------------------------------------------------
# transversals


def _pentagon_clusters(eps):
    base = build_regular_polygon_lines(5)
    shapes = [random_family(3, random.Random(100 + i)) for i in range(5)]
    return [make_cluster(shapes[i], ClusterSpec(base[i], eps)) for i in range(5)]


def test_transversals_tight_clusters_all_define_cells():
    groups = _pentagon_clusters(F(1, 8))
    assert check_transversals(groups, 5) == (True, None)


def test_transversals_loose_clusters_fail_with_witness():
    groups = _pentagon_clusters(F(1, 2))
    ok, wit = check_transversals(groups, 5)
    assert (ok, wit) == (False, (0, 0, 0, 2, 0))
    picked = tuple(groups[i].lines[j] for i, j in enumerate(wit))
    assert defines_cell(LineFamily(picked)) is None


def test_transversals_polluted_group_jobs_agree():
    groups = _pentagon_clusters(F(1, 8))
    polluted = [LineFamily(groups[0].lines + (Line(-10, 3),))] + groups[1:]
    ok, wit = check_transversals(polluted, 5)
    assert (ok, wit) == (False, (3, 0, 0, 0, 0))
    assert check_transversals(polluted, 5, jobs=2) == (ok, wit)
    picked = tuple(polluted[i].lines[j] for i, j in enumerate(wit))
    assert defines_cell(LineFamily(picked)) is None
    # earlier transversals in lexicographic order all define their cell
    assert defines_cell(LineFamily(tuple(polluted[i].lines[0] for i in range(5)))) is not None


def test_transversals_singletons_without_convex_position():
    d5 = build_no_ncell_doubled(5)
    groups = [d5.subfamily((i,)) for i in range(5)]
    assert check_transversals(groups, 5) == (False, (0, 0, 0, 0, 0))
    ccf = build_cup_cap_free(5, 5)
    groups2 = [ccf.subfamily((i,)) for i in range(5)]
    assert check_transversals(groups2, 5) == (True, None)


def test_transversals_validation_and_budget():
    groups = _pentagon_clusters(F(1, 8))
    with pytest.raises(ValueError):
        check_transversals(groups, 4)
    with pytest.raises(ValueError):
        check_transversals([groups[0]], 1)
    with pytest.raises(BudgetExceeded):
        check_transversals(groups, 5, budget=100)
    dup = [groups[0]] + groups[1:4] + [groups[0]]
    with pytest.raises(ParallelViolation):
        check_transversals(dup, 5)
