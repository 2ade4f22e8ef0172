import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given
from hypothesis import strategies as st

from supdiff import polykernel as pk
from supdiff.generators import rand_bounded_polyhedron, rand_hrep_polyhedron, rand_nonempty_polyhedron, rand_vec

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 3)


def I(lo, hi):
    return pk.interval(lo, hi)


def half_line(v, r):
    return pk.from_vrep([[v]], [[r]])


# -- constructors and conversions --------------------------------------------


def test_from_hrep_examples():
    P = pk.from_hrep([([1], 1)], 1)
    assert not P.is_empty() and not P.is_bounded()
    assert P.vertices == ((Fr(1),),) and P.rays == ((Fr(-1),),)
    assert pk.from_hrep([([1], 0), ([-1], -1)], 1).is_empty()
    plane = pk.from_hrep([], 2)
    assert pk.set_equal(plane, pk.whole_space(2))
    assert pk.set_equal(plane, pk.from_vrep([[0, 0]], [[1, 0], [-1, 0], [0, 1], [0, -1]]))


def test_simplex_hrep():
    S = pk.from_vrep([[0, 0], [1, 0], [0, 1]])
    expected = pk.from_hrep([([-1, 0], 0), ([0, -1], 0), ([1, 1], 1)], 2)
    assert pk.set_equal(S, expected)
    assert len(S.inequalities) == 3


def test_dimension_cap(monkeypatch):
    monkeypatch.setenv("SUPDIFF_MAX_DIM", "2")
    with pytest.raises(pk.DimensionError):
        pk.from_hrep([], 3)
    monkeypatch.setenv("SUPDIFF_MAX_DIM", "99")
    assert pk.max_dim() == pk.HARD_DIM_CAP


@given(seeds, st.integers(1, 4), st.integers(0, 10))
def test_round_trip(seed, n, m):
    rng = random.Random(seed)
    P = rand_hrep_polyhedron(rng, n, m)
    verts, rays = pk.to_vrep(P)
    Q = pk.from_vrep(verts, rays, n) if verts else pk.empty(n)
    assert pk.set_equal(P, Q)
    R = pk.from_hrep(pk.to_hrep(Q), n)
    assert pk.set_equal(P, R)
    for v in verts:
        assert pk.contains_point(P, v)


# -- membership and set operations ---------------------------------------------


def test_contains_point_exact():
    assert pk.contains_point(I(0, 1), [1])
    assert not pk.contains_point(I(0, 1), [1 + Fr(1, 10**9)])
    assert pk.contains_point(pk.from_vrep([[0, 0], [1, 0], [0, 1]]), [Fr(1, 3), Fr(1, 3)])


def test_minkowski_examples():
    assert pk.set_equal(pk.minkowski_sum(I(0, 1), I(0, 1)), I(0, 2))
    assert pk.minkowski_sum(I(0, 1), pk.empty(1)).is_empty()
    assert pk.set_equal(pk.minkowski_sum(half_line(0, 1), half_line(0, -1)), pk.whole_space(1))


def test_hull_union_examples():
    assert pk.set_equal(pk.hull_union([pk.point([0]), pk.point([1])]), I(0, 1))
    pts = [pk.point([Fr(t, 2 * t - 1)]) for t in (2, 3)]
    H = pk.hull_union([I(0, 1)] + pts)
    assert pk.set_equal(H, I(0, 1))
    assert pk.set_equal(pk.hull_union([half_line(0, 1), pk.point([-1])]), half_line(-1, 1))
    assert pk.hull_union([pk.empty(2), pk.empty(2)], 2).is_empty()


def test_scale_examples():
    assert pk.set_equal(pk.scale(I(0, 2), Fr(1, 2)), I(0, 1))
    assert pk.scale(pk.empty(1), 3).is_empty()
    C = pk.cone([[1, 2]], 2)
    assert pk.set_equal(pk.scale(C, Fr(7, 3)), C)
    assert pk.set_equal(pk.scale(I(1, 2), 0), pk.origin(1))


def test_recession_examples():
    assert pk.set_equal(pk.recession_cone(half_line(1, -1)), pk.cone([[-1]], 1))
    assert pk.set_equal(pk.recession_cone(I(0, 1)), pk.origin(1))
    H = pk.hull_union([I(0, 1), pk.point([Fr(2, 3)]), pk.point([Fr(3, 5)])])
    assert pk.set_equal(pk.recession_cone(H), pk.origin(1))
    assert pk.set_equal(pk.recession_cone(pk.empty(2)), pk.origin(2))


def test_intersect_examples():
    assert pk.set_equal(pk.intersect(I(0, 2), I(1, 3)), I(1, 2))
    assert pk.intersect(I(0, 1), I(2, 3)).is_empty()
    P = pk.from_vrep([[0, 0], [1, 2]], [[1, 0]])
    assert pk.set_equal(pk.intersect(P, P), P)


def test_set_equal_examples():
    assert pk.set_equal(I(0, 1), pk.hull_union([pk.point([0]), pk.point([1])]))
    assert pk.set_equal(pk.empty(1), pk.empty(1))
    assert pk.set_equal(pk.cone([[1]], 1), pk.cone([[2]], 1))
    assert not pk.set_equal(I(0, 1), I(0, 2))


def test_support_value_examples():
    assert pk.support_value(I(-1, 1), [1]) == 1
    assert pk.support_value(pk.empty(1), [5]) == pk.NEG_INF
    assert pk.support_value(half_line(1, -1), [-1]) == pk.INF


def test_eps_normal_examples():
    left = half_line(1, -1)
    assert pk.set_equal(pk.eps_normal_set(left, [1], 1), half_line(0, 1))
    assert pk.set_equal(pk.eps_normal_set(left, [0], 1), I(0, 1))
    box = pk.from_vrep([[0, 0], [1, 0], [0, 1], [1, 1]])
    assert pk.set_equal(pk.eps_normal_set(box, [1, 1], 0), pk.cone([[1, 0], [0, 1]], 2))
    assert pk.eps_normal_set(left, [2], 1).is_empty()


def test_full_dimensional():
    assert pk.is_full_dimensional(pk.from_vrep([[0, 0], [1, 0], [0, 1]]))
    assert not pk.is_full_dimensional(pk.from_vrep([[0, 0], [1, 1]]))
    assert not pk.is_full_dimensional(pk.empty(2))


def test_project_last():
    P = pk.from_vrep([[0, 0], [1, 5]], [[0, 1]])
    assert pk.set_equal(pk.project_last(P), I(0, 1))


# -- identities ---------------------------------------------------------------


@given(seeds, dims)
def test_recession_of_intersection(seed, n):
    rng = random.Random(seed)
    sets = [rand_nonempty_polyhedron(rng, n) for _ in range(rng.randint(1, 3))]
    lhs = pk.intersect_all([pk.recession_cone(A) for A in sets], n)
    with_origin = pk.intersect_all([pk.hull_union([A, pk.origin(n)]) for A in sets], n)
    assert pk.set_equal(lhs, pk.recession_cone(with_origin))
    meet = pk.intersect_all(sets, n)
    if not meet.is_empty():
        assert pk.set_equal(lhs, pk.recession_cone(meet))
    for A in sets:
        assert pk.set_equal(pk.recession_cone(A), pk.recession_cone(pk.hull_union([A, pk.origin(n)])))


@given(seeds, dims)
def test_subspace_sum(seed, n):
    rng = random.Random(seed)
    P = rand_nonempty_polyhedron(rng, n)
    d = rand_vec(rng, n, nonzero=True)
    L = pk.cone([d, tuple(-v for v in d)], n)
    R = pk.recession_cone(pk.minkowski_sum(P, L))
    assert pk.set_equal(R, pk.minkowski_sum(R, L))


@given(seeds, dims)
def test_support_domain_duality(seed, n):
    rng = random.Random(seed)
    P = rand_nonempty_polyhedron(rng, n)
    rec = pk.recession_cone(P)
    for _ in range(5):
        u = rand_vec(rng, n, -3, 3)
        finite = pk.support_value(P, u) < pk.INF
        in_polar = all(pk.dot(u, r) <= 0 for r in rec.rays)
        assert finite == in_polar


@given(seeds, dims)
def test_sum_and_hull_share_recession(seed, n):
    rng = random.Random(seed)
    P = rand_nonempty_polyhedron(rng, n)
    Q = rand_nonempty_polyhedron(rng, n)
    lhs = pk.recession_cone(pk.minkowski_sum(P, Q))
    assert pk.set_equal(lhs, pk.recession_cone(pk.hull_union([P, Q])))


@given(seeds, dims, st.fractions(min_value=Fr(1, 10), max_value=10))
def test_scaled_and_bounded_terms_do_not_change_recession(seed, n, gamma):
    rng = random.Random(seed)
    P = rand_nonempty_polyhedron(rng, n)
    Q = rand_nonempty_polyhedron(rng, n)
    C = rand_bounded_polyhedron(rng, n)
    lhs = pk.recession_cone(pk.hull_union([P, pk.scale(Q, gamma), C]))
    assert pk.set_equal(lhs, pk.recession_cone(pk.hull_union([P, Q])))


@given(seeds, dims, st.fractions(min_value=0, max_value=3), st.fractions(min_value=Fr(1, 10), max_value=10))
def test_eps_normal_scaling(seed, n, eps, lam):
    rng = random.Random(seed)
    P = rand_nonempty_polyhedron(rng, n)
    x = P.vertices[0] if not P.rays else tuple(v + r for v, r in zip(P.vertices[0], P.rays[0]))
    scaled = pk.eps_normal_set(P, x, lam * eps)
    assert pk.set_equal(scaled, pk.scale(pk.eps_normal_set(P, x, eps), lam))
    assert pk.subset(pk.eps_normal_set(P, x, 0), pk.eps_normal_set(P, x, eps))
