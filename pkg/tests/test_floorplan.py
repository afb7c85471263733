import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multiwall.errors import DegeneratePathError, PlanError
from multiwall.floorplan import (
    FloorPlan,
    Point2D,
    Wall,
    WallCategory,
    crossing_matrix,
    straight_line_distance,
    validate_plan,
    wall_crossings,
)

from conftest import plan_from_segments
from oracles import exact_count, random_integer_case

BRICK = WallCategory("brick", 6.0, 0.2, "brick")


def test_empty_plan_is_valid():
    plan = FloorPlan()
    assert validate_plan(plan) is plan


def test_dangling_category_names_wall():
    plan = FloorPlan("p", (), (Wall((0, 0), (1, 0), "brick"),))
    with pytest.raises(PlanError, match="wall 0") as info:
        validate_plan(plan)
    assert info.value.wall_index == 0


def test_zero_length_wall():
    plan = FloorPlan("p", (BRICK,), (Wall((0, 0), (0, 1), "brick"), Wall((2, 2), (2, 2), "brick")))
    with pytest.raises(PlanError, match="zero-length") as info:
        validate_plan(plan)
    assert info.value.wall_index == 1


def test_non_finite_coordinate():
    plan = FloorPlan("p", (BRICK,), (Wall((0, math.nan), (0, 1), "brick"),))
    with pytest.raises(PlanError, match="wall 0: non-finite"):
        validate_plan(plan)


@pytest.mark.parametrize("cat", [
    WallCategory("x", -1.0, 0.2),
    WallCategory("x", 1.0, 0.0),
])
def test_bad_category(cat):
    with pytest.raises(PlanError):
        validate_plan(FloorPlan("p", (cat,), ()))


def test_duplicate_category_ids():
    with pytest.raises(PlanError, match="duplicate"):
        validate_plan(FloorPlan("p", (BRICK, BRICK), ()))


@pytest.mark.parametrize("tx, rx, expected", [
    ((0, 0), (0, 0), 0.0),
    ((0, 0), (3, 4), 5.0),
    ((1.0, 2.0), (3.15, 2.0), 2.15),
])
def test_straight_line_distance(tx, rx, expected):
    assert straight_line_distance(tx, rx) == pytest.approx(expected, abs=1e-12)


def test_empty_plan_no_crossings():
    assert wall_crossings(FloorPlan(), (0, 0), (5, 3)).m_total == 0


def test_perpendicular_crossing(make_plan):
    plan = make_plan([((2, -1), (2, 1))])
    report = wall_crossings(plan, (0, 0), (4, 0))
    assert report.m_total == 1
    assert report.crossed_wall_indices == (0,)
    assert report.per_category_counts == {"c0": 1}
    assert report.warnings == ()


def test_degenerate_path(make_plan):
    with pytest.raises(DegeneratePathError):
        wall_crossings(make_plan([((2, -1), (2, 1))]), (1, 1), (1, 1))


def test_endpoint_graze_counts(make_plan):
    # path passes exactly through the wall's end point
    plan = make_plan([((2, 0), (2, 3))])
    assert wall_crossings(plan, (0, 0), (4, 0)).m_total == 1


def test_collinear_overlap_warns(make_plan):
    plan = make_plan([((1, 0), (3, 0))])
    report = wall_crossings(plan, (0, 0), (4, 0))
    assert report.m_total == 0
    assert len(report.warnings) == 1
    assert "grazing propagation not modeled" in report.warnings[0]


def test_collinear_disjoint_is_silent(make_plan):
    plan = make_plan([((5, 0), (7, 0))])
    report = wall_crossings(plan, (0, 0), (4, 0))
    assert report.m_total == 0 and report.warnings == ()


@pytest.mark.parametrize("tx, rx, end", [((2, 0), (4, 0), "tx"), ((0, 0), (2, 0.5), "rx")])
def test_endpoint_on_wall_warns(make_plan, tx, rx, end):
    plan = make_plan([((2, -1), (2, 1))])
    report = wall_crossings(plan, tx, rx)
    assert report.m_total == 0
    assert report.warnings and f"{end} lies on the wall" in report.warnings[0]


def test_endpoint_within_eps_of_wall(make_plan):
    plan = make_plan([((2, -1), (2, 1))])
    report = wall_crossings(plan, (2 + 1e-12, 0), (4, 0))
    assert report.m_total == 0 and report.warnings


def test_corner_pierced_counts_each_wall(make_plan):
    plan = make_plan([((2, 0), (2, 2)), ((2, 2), (4, 2))])
    report = wall_crossings(plan, (0, 0), (4, 4))
    assert report.crossed_wall_indices == (0, 1)


def test_per_category_counts(make_plan):
    plan = make_plan([((1, -1), (1, 1)), ((2, -1), (2, 1)), ((3, -1), (3, 1))], losses=[5, 7, 5])
    report = wall_crossings(plan, (0, 0), (4, 0))
    assert report.per_category_counts == {"c0": 2, "c1": 1}
    assert report.m_total == sum(report.per_category_counts.values()) == 3


def test_crossing_matrix_matches_scalar():
    rng = np.random.default_rng(3)
    for _ in range(50):
        walls, tx, rx = random_integer_case(rng, 6)
        plan = plan_from_segments(walls)
        pts = rng.integers(-4, 5, (20, 2)).astype(float)
        hits = crossing_matrix(plan, tx, pts[:, 0], pts[:, 1])
        for k, (x, y) in enumerate(pts):
            if (x, y) == tx:
                assert not hits[k].any()
                continue
            report = wall_crossings(plan, tx, (x, y))
            assert tuple(np.flatnonzero(hits[k])) == report.crossed_wall_indices


def test_oracle_agreement_random_integer():
    rng = np.random.default_rng(20240101)
    for _ in range(1000):
        walls, tx, rx = random_integer_case(rng, int(rng.integers(0, 9)))
        plan = plan_from_segments(walls)
        assert wall_crossings(plan, tx, rx).m_total == exact_count(walls, tx, rx)


coord = st.integers(-6, 6)
point = st.tuples(coord, coord)
segment = st.tuples(point, point).filter(lambda s: s[0] != s[1])


@settings(max_examples=300, deadline=None)
@given(walls=st.lists(segment, max_size=8), tx=point, rx=point, extra=segment)
def test_crossing_properties(walls, tx, rx, extra):
    if tx == rx:
        return
    plan = plan_from_segments(walls)
    m = wall_crossings(plan, tx, rx).m_total
    assert m == wall_crossings(plan, rx, tx).m_total
    assert 0 <= m <= len(walls)
    assert m == exact_count(walls, tx, rx)
    assert wall_crossings(plan_from_segments(walls + [extra]), tx, rx).m_total >= m


def _rot90(p, k):
    x, y = p
    for _ in range(k % 4):
        x, y = -y, x
    return (x, y)


@settings(max_examples=200, deadline=None)
@given(walls=st.lists(segment, max_size=8), tx=point, rx=point,
       k=st.integers(0, 3), dx=st.integers(-20, 20), dy=st.integers(-20, 20))
def test_rigid_motion_invariance(walls, tx, rx, k, dx, dy):
    if tx == rx:
        return

    def move(p):
        x, y = _rot90(p, k)
        return (x + dx, y + dy)

    m = wall_crossings(plan_from_segments(walls), tx, rx).m_total
    moved = [(move(a), move(b)) for a, b in walls]
    assert wall_crossings(plan_from_segments(moved), move(tx), move(rx)).m_total == m


def test_point_is_tuple_compatible():
    p = Point2D(1.0, 2.0)
    assert p == (1.0, 2.0)
    assert Wall((0, 0), (1, 1), "x").a == Point2D(0, 0)
