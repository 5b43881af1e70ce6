import pytest
from hypothesis import given, settings, strategies as st

from marginal.errors import DimensionError, MembershipError, QualificationError
from marginal.geometry import (
    EQUAL, INCOMPARABLE, SUBSET, SUPERSET, HPolyhedron, VPolyhedron, cone_hull, coordinate_subspace,
    empty, full_space, intersect, interval_bounds, minkowski_sum, normal_cone_at,
    normal_cone_intersection_rule, origin, project, same_set, set_relation, singleton, span_hull,
    support, to_hrep, to_vrep,
)
from marginal.rational import INF, Q, dot

from conftest import interval

SQUARE = HPolyhedron(2, [((-1, 0), 0), ((1, 0), 1), ((0, -1), 0), ((0, 1), 1)])
SEGMENT = VPolyhedron(2, [(1, 1), (-1, -1)])


def pts(V):
    return sorted(tuple(p) for p in V.points)


# ---------------------------------------------------------------- conversions

def test_square_vertices():
    V = to_vrep(SQUARE)
    assert pts(V) == [(0, 0), (0, 1), (1, 0), (1, 1)] and not V.rays and not V.lines


def test_unbounded_vrep():
    V = to_vrep(HPolyhedron(2, [((1, 0), 1), ((-1, 0), 1), ((1, -1), 0)]))
    assert pts(V) == [(-1, -1), (1, 1)]
    assert [tuple(r) for r in V.rays] == [(0, 1)] and not V.lines


def test_inconsistent_bounds_are_empty():
    V = to_vrep(HPolyhedron(1, [((1,), -1), ((-1,), 0)]))
    assert V.points == () and V.is_empty()


def test_segment_hrep():
    H = to_hrep(SEGMENT)
    assert same_set(H, HPolyhedron(2, [((1, 0), 1), ((-1, 0), 1)], [((1, -1), 0)]))
    assert len(H.ineqs) == 2 and len(H.eqs) == 1


def test_ray_and_line_hrep():
    H = to_hrep(VPolyhedron(2, [(0, 0)], rays=[(0, 1)]))
    assert same_set(H, HPolyhedron(2, [((0, -1), 0)], [((1, 0), 0)]))
    H = to_hrep(VPolyhedron(2, [(0, 0)], lines=[(1, 0)]))
    assert same_set(H, HPolyhedron(2, (), [((0, 1), 0)]))
    assert len(H.eqs) == 1 and not H.ineqs


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        HPolyhedron(2, [((1,), 0)])
    with pytest.raises(DimensionError):
        minkowski_sum(SQUARE, interval(0, 1))


# ---------------------------------------------------------------- set algebra

def test_minkowski_examples():
    S = minkowski_sum(SEGMENT, VPolyhedron(2, [(0, 0)], rays=[(0, 1)]))
    assert same_set(S, HPolyhedron(2, [((1, 0), 1), ((-1, 0), 1), ((1, -1), 0)]))
    assert same_set(minkowski_sum(SQUARE, origin(2)), SQUARE)
    assert same_set(minkowski_sum(interval(0, 1), interval(0, 1)), interval(0, 2))
    assert minkowski_sum(SQUARE, empty(2)).is_empty()


def test_intersection_examples():
    band = HPolyhedron(2, [((1, 0), 1), ((-1, 0), 1), ((1, -1), 0)])
    cut = intersect(band, coordinate_subspace(2, [1]))
    assert pts(cut.v) == [(-1, 0), (0, 0)]
    assert same_set(intersect(SQUARE, full_space(2)), SQUARE)
    assert intersect(interval(1, None), interval(None, 0)).is_empty()


def test_projection_examples():
    seg = VPolyhedron(2, [(-1, 0), (0, 0)])
    assert same_set(project(seg.h, [0]), interval(-1, 0))
    assert same_set(project(SQUARE, [0, 1]), SQUARE)
    strip = HPolyhedron(2, [((1, -1), 0), ((-1, 1), 1)])
    assert same_set(project(strip, [0]), full_space(1))
    assert project(empty(3), [1]).is_empty()


def test_cone_and_span_hulls():
    assert same_set(cone_hull(singleton((0, 1))), VPolyhedron(2, [(0, 0)], rays=[(0, 1)]))
    assert same_set(cone_hull(VPolyhedron(1, [(1,), (2,)])), interval(0, None))
    line = span_hull([(1, 1)])
    assert line.contains((Q(-7, 3), Q(-7, 3))) and not line.contains((1, 0))


def test_set_relations():
    assert set_relation(interval(-1, 0), interval(-1, 1)) == SUBSET
    assert set_relation(interval(-1, 1), interval(-1, 0)) == SUPERSET
    assert set_relation(SQUARE, SQUARE.v) == EQUAL
    assert set_relation(interval(0, 1), interval(2, 3)) == INCOMPARABLE


def test_support_values():
    assert support(SQUARE, (1, 1)) == 2
    assert support(interval(0, None), (1,)) == INF
    assert support(empty(1), (1,)) == -INF


def test_interval_bounds():
    assert interval_bounds(interval(None, 3)) == (None, 3)
    assert interval_bounds(empty(1)) is None


# ---------------------------------------------------------------- normal cones

def test_normal_cone_examples():
    assert same_set(normal_cone_at(full_space(2), (5, -1)), origin(2))
    assert same_set(normal_cone_at(interval(None, 0), (0,)), interval(0, None))
    corner = normal_cone_at(SQUARE, (1, 1))
    assert same_set(corner, VPolyhedron(2, [(0, 0)], rays=[(1, 0), (0, 1)]))
    with pytest.raises(MembershipError):
        normal_cone_at(SQUARE, (2, 0))


def test_intersection_rule_examples():
    A1 = HPolyhedron(2, [((1, 0), 0)])
    A2 = HPolyhedron(2, [((0, 1), 0)])
    N = normal_cone_intersection_rule([A1, A2], (0, 0))
    assert same_set(N, VPolyhedron(2, [(0, 0)], rays=[(1, 0), (0, 1)]))
    assert same_set(normal_cone_intersection_rule([full_space(2), full_space(2)], (3, 4)), origin(2))
    with pytest.raises(QualificationError):
        normal_cone_intersection_rule([interval(None, 0), interval(0, None)], (0,))


# ---------------------------------------------------------------- properties

coef = st.integers(-5, 5)


@st.composite
def hpolys(draw, max_dim=4, max_rows=6):
    dim = draw(st.integers(1, max_dim))
    rows = draw(st.lists(st.tuples(st.lists(coef, min_size=dim, max_size=dim), coef),
                         max_size=max_rows))
    return HPolyhedron(dim, rows)


@settings(max_examples=150, deadline=None)
@given(hpolys())
def test_round_trip(P):
    V = to_vrep(P)
    assert same_set(to_hrep(V), P)
    assert V.is_empty() == (not P.feasible())


@settings(max_examples=100, deadline=None)
@given(hpolys())
def test_normal_cone_duality(P):
    V = P.v
    for z in V.points:
        N = normal_cone_at(P, z)
        for w in N.rays + N.lines:
            assert all(dot(w, tuple(p - q for p, q in zip(pt, z))) <= 0 for pt in V.points)
            assert all(dot(w, r) <= 0 for r in V.rays)
            assert all(dot(w, l) == 0 for l in V.lines)


@settings(max_examples=80, deadline=None)
@given(hpolys(max_dim=3), st.data())
def test_projection_soundness(P, data):
    keep = sorted(data.draw(st.sets(st.integers(0, P.dim - 1), min_size=1)))
    proj = project(P, keep)
    for _ in range(5):
        q = [Q(data.draw(st.integers(-6, 6)), data.draw(st.integers(1, 3))) for _ in keep]
        # a completion exists iff the slice is feasible
        fixed = coordinate_subspace(P.dim, keep, q)
        assert proj.contains(q) == intersect(P, fixed).feasible()


@st.composite
def polytopes(draw, dim):
    points = draw(st.lists(st.lists(coef, min_size=dim, max_size=dim), min_size=1, max_size=4))
    return VPolyhedron(dim, points)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda d: st.tuples(polytopes(d), polytopes(d), st.lists(coef, min_size=d, max_size=d))))
def test_minkowski_support_additivity(args):
    P, R, d = args
    assert support(minkowski_sum(P, R), d) == support(P, d) + support(R, d)


@settings(max_examples=60, deadline=None)
@given(st.lists(hpolys(max_dim=2, max_rows=3), min_size=2, max_size=3).filter(
    lambda ps: len({p.dim for p in ps}) == 1))
def test_intersection_rule_matches_direct(sets):
    meet = sets[0]
    for S in sets[1:]:
        meet = intersect(meet, S)
    for z in meet.v.points:
        try:
            N = normal_cone_intersection_rule(sets, z)
        except QualificationError:
            continue
        assert same_set(N, normal_cone_at(meet, z))
