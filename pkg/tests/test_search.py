"""Convex-position search, certification, and the vertical renormalization."""

import random

import pytest

from linecells import Line, LineFamily, rat
from linecells.arrangement import defines_cell
from linecells.constructions import (
    build_cup_cap_free,
    build_no_ncell_doubled,
    random_family,
)
from linecells.search import (
    IDENTITY3,
    BudgetExceeded,
    ConvexPositionResult,
    FoundNCell,
    NotVertical,
    certify_lower_bound,
    cup_cap_roles,
    is_vertical_configuration,
    make_vertical_configuration,
    max_convex_position,
)


def test_certify_doubled_5():
    cert = certify_lower_bound(build_no_ncell_doubled(5), 5)
    assert cert.verdict == "no 5-cell"
    assert cert.exhaustive
    assert cert.counts == {"lines": 6, "subsets": 6, "checked": 6}
    assert cert.witness is None


def test_certify_doubled_6():
    cert = certify_lower_bound(build_no_ncell_doubled(6), 6)
    assert cert.verdict == "no 6-cell"
    assert cert.counts == {"lines": 8, "subsets": 28, "checked": 28}


def test_max_convex_doubled():
    r5 = max_convex_position(build_no_ncell_doubled(5))
    assert r5 == ConvexPositionResult(4, (0, 2, 3, 5), exhaustive=True)
    r6 = max_convex_position(build_no_ncell_doubled(6))
    assert r6 == ConvexPositionResult(5, (0, 1, 2, 3, 4), exhaustive=True)
    # witnesses replay against the arrangement directly
    f5, f6 = build_no_ncell_doubled(5), build_no_ncell_doubled(6)
    assert defines_cell(f5.subfamily(r5.witness)) is not None
    assert defines_cell(f6.subfamily(r6.witness)) is not None


def test_max_convex_cap():
    r = max_convex_position(build_no_ncell_doubled(5), cap=3)
    assert r.max_k == 3
    assert not r.exhaustive
    assert defines_cell(build_no_ncell_doubled(5).subfamily(r.witness)) is not None


def test_found_ncell_is_lex_min():
    f = random_family(4, random.Random(7))
    with pytest.raises(FoundNCell) as exc:
        certify_lower_bound(f, 4)
    assert exc.value.witness == (0, 1, 2, 3)
    assert defines_cell(f.subfamily(exc.value.witness)) is not None


def test_certify_rejects_short_family():
    with pytest.raises(ValueError):
        certify_lower_bound(build_no_ncell_doubled(5).subfamily((0, 1, 2)), 5)


def test_budget_exceeded_certify():
    with pytest.raises(BudgetExceeded):
        certify_lower_bound(build_no_ncell_doubled(6), 6, budget=10)


def test_budget_exceeded_carries_best():
    f = build_no_ncell_doubled(6)
    with pytest.raises(BudgetExceeded) as exc:
        max_convex_position(f, budget=3)
    best = exc.value.best
    assert best == ConvexPositionResult(4, (0, 2, 4, 6), exhaustive=False)
    assert defines_cell(f.subfamily(best.witness)) is not None


def test_jobs_do_not_change_outcome():
    # an immediate hit and a deep hit, serial and parallel
    for f, n in ((build_cup_cap_free(5, 5), 5), (random_family(13, random.Random(3)), 5)):
        seen = []
        for jobs in (1, 2):
            with pytest.raises(FoundNCell) as exc:
                certify_lower_bound(f, n, jobs=jobs)
            seen.append(exc.value.witness)
        assert seen[0] == seen[1] == (0, 1, 2, 3, 4)


def test_vertical_predicate():
    low = LineFamily((Line(-1, 0), Line(0, -5), Line(1, 0)))
    assert is_vertical_configuration(low)
    high = LineFamily((Line(-1, 0), Line(0, 5), Line(1, 0)))
    assert not is_vertical_configuration(high)
    with pytest.raises(ValueError):
        is_vertical_configuration(LineFamily((Line(0, 0),)))


def test_make_vertical_identity_short_circuit():
    f = LineFamily((Line(-1, 0), Line(0, -5), Line(1, 0)))
    out, m = make_vertical_configuration(f)
    assert out == f
    assert m == IDENTITY3


def test_make_vertical_random_families():
    """Renormalization yields verticality and preserves convex-position size."""
    for seed in range(10):
        f = random_family(5, random.Random(seed))
        out, m = make_vertical_configuration(f)
        assert is_vertical_configuration(out)
        assert len(out) == len(f)
        assert max_convex_position(out).max_k == max_convex_position(f).max_k
        assert len(m) == 3 and all(len(row) == 3 for row in m)


def test_roles_three_lines():
    f = LineFamily((Line(0, 0), Line(1, 0), Line(rat(-1), rat(1))))
    v, _ = make_vertical_configuration(f)
    roles = cup_cap_roles(v, 3)
    assert roles.is_vertical
    assert roles.A == frozenset({1, 2})
    assert roles.B == frozenset({0, 1})


def test_roles_require_verticality():
    high = LineFamily((Line(-1, 0), Line(0, 5), Line(1, 0)))
    with pytest.raises(NotVertical):
        cup_cap_roles(high, 3)
    low = LineFamily((Line(-1, 0), Line(0, -5), Line(1, 0)))
    with pytest.raises(ValueError):
        cup_cap_roles(low, 2)


def _certified_corpus():
    """Families with no 5 lines in convex position, plus their target n."""
    out = [(build_no_ncell_doubled(5), 5), (build_no_ncell_doubled(6), 6)]
    for seed in range(30):
        for n_lines in (5, 6):
            f = random_family(n_lines, random.Random(seed))
            try:
                certify_lower_bound(f, 5)
            except FoundNCell:
                continue
            out.append((f, 5))
    return out


def test_roles_on_certified_families():
    """Whenever no n lines sit in convex position: the cup-ending and
    cap-starting sets are disjoint, the min-slope line ends no cup, and the
    max-slope line is in neither set."""
    corpus = _certified_corpus()
    assert len(corpus) >= 10
    for f, n in corpus:
        v, _ = make_vertical_configuration(f)
        roles = cup_cap_roles(v, n)
        N = len(v)
        assert roles.is_vertical
        assert not (roles.A & roles.B)
        assert 0 not in roles.A
        assert N - 1 not in roles.A | roles.B


def test_certify_agrees_with_max_convex():
    for seed in range(8):
        f = random_family(7, random.Random(seed))
        r = max_convex_position(f)
        if r.max_k >= 5:
            with pytest.raises(FoundNCell):
                certify_lower_bound(f, 5)
        else:
            assert certify_lower_bound(f, 5).verdict == "no 5-cell"


def test_subfamily_never_beats_family():
    for seed in range(4):
        f = random_family(8, random.Random(seed))
        whole = max_convex_position(f).max_k
        rng = random.Random(100 + seed)
        for _ in range(3):
            sub = f.subfamily(sorted(rng.sample(range(8), 6)))
            assert max_convex_position(sub).max_k <= whole
