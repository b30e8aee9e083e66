"""Exact-geometry engine: representations, conversions, clipping, volume."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyshift.catalog import reeve_tetrahedron, standard_simplex
from polyshift.errors import DegenerateInput, Infeasible, SingularMatrix, Unbounded
from polyshift.geometry import (
    HalfSpace,
    Polytope,
    affine_image,
    as_vec,
    bounding_box,
    clip,
    determinant,
    dilate,
    facets_from_vertices,
    halfspace,
    identity_matrix,
    intersect,
    minkowski_sum,
    polytope_from_json,
    polytope_to_json,
    segment,
    unit_cube,
    vertices_from_facets,
    volume,
)

F = Fraction


def hexagon():
    return minkowski_sum(
        minkowski_sum(segment((0, 0), (1, 0)), segment((0, 0), (0, 1))),
        segment((0, 0), (1, 1)),
    )


def shoelace(points):
    """Independent polygon-area oracle (vertices in hull order)."""
    total = F(0)
    for i in range(len(points)):
        x1, y1 = points[i]
        x2, y2 = points[(i + 1) % len(points)]
        total += x1 * y2 - x2 * y1
    return abs(total) / 2


# ---------------------------------------------------------------------------
# determinants


def test_determinant_identity():
    assert determinant(identity_matrix(3)) == 1


def test_determinant_2x2_by_hand():
    # cofactor expansion by hand: 1*2 - 1*0
    assert determinant([(1, 1), (0, 2)]) == 2


@pytest.mark.parametrize("n", [1, 2, 5, 9])
def test_determinant_reeve_edge_matrix(n):
    assert determinant([(0, 1, 0), (1, 0, 0), (1, 1, n)]) == -n


def test_determinant_rejects_non_square():
    with pytest.raises(DegenerateInput):
        determinant([(1, 2, 3), (4, 5, 6)])


small_mats = st.integers(-4, 4).flatmap(
    lambda _: st.lists(
        st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=3, max_size=3
    )
)


@given(small_mats, small_mats)
@settings(max_examples=60, deadline=None)
def test_determinant_is_multiplicative(a, b):
    from polyshift.geometry import mat_mul, as_mat

    prod = mat_mul(as_mat(a), as_mat(b))
    assert determinant(prod) == determinant(a) * determinant(b)


# ---------------------------------------------------------------------------
# facet / vertex enumeration


def test_unit_square_facets():
    square = Polytope(2, [(0, 0), (1, 0), (0, 1), (1, 1)])
    keys = {h.key() for h in facets_from_vertices(square)}
    expected = {
        halfspace((-1, 0), 0).key(),
        halfspace((0, -1), 0).key(),
        halfspace((1, 0), 1).key(),
        halfspace((0, 1), 1).key(),
    }
    assert keys == expected


def test_simplex3_facets():
    facets = facets_from_vertices(standard_simplex(3))
    assert len(facets) == 4
    keys = {h.key() for h in facets}
    assert halfspace((1, 1, 1), 1).key() in keys
    for i in range(3):
        normal = [0, 0, 0]
        normal[i] = -1
        assert halfspace(normal, 0).key() in keys


def test_reeve_facets_tight_at_three_vertices():
    t2 = reeve_tetrahedron(2)
    facets = facets_from_vertices(t2)
    assert len(facets) == 4
    for h in facets:
        assert sum(1 for v in t2.vertices if h.value(v) == 0) == 3


def test_facets_require_full_dimension():
    flat = Polytope(3, [(0, 0, 0), (1, 0, 0), (0, 1, 0)])
    with pytest.raises(DegenerateInput):
        facets_from_vertices(flat)


def test_box_vertices_from_facets():
    for d in (2, 3):
        hss = []
        for i in range(d):
            e = [0] * d
            e[i] = 1
            hss.append(halfspace(e, 2))
            hss.append(halfspace([-x for x in e], 1))
        p = vertices_from_facets(hss, d)
        assert len(p.vertices) == 2**d


def test_slab_piece_vertices_from_facets():
    # cube cut to 1 <= x+y+z <= 2: exactly the six 0/1 points at levels 1, 2
    hss = []
    for i in range(3):
        e = [0, 0, 0]
        e[i] = 1
        hss.append(halfspace(e, 1))
        hss.append(halfspace([-x for x in e], 0))
    hss.append(halfspace((1, 1, 1), 2))
    hss.append(halfspace((-1, -1, -1), -1))
    p = vertices_from_facets(hss, 3)
    expected = {
        tuple(map(F, v))
        for v in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1)]
    }
    assert set(p.vertices) == expected


def test_shifted_simplex_intersection_from_facets():
    a = standard_simplex(2)
    b = a.translated((F(1, 2), 0))
    hss = list(a.facets()) + list(b.facets())
    p = vertices_from_facets(hss, 2)
    assert volume(p) == F(1, 8)


def test_vertices_from_facets_unbounded():
    with pytest.raises(Unbounded):
        vertices_from_facets([halfspace((1, 0), 0), halfspace((0, 1), 0)], 2)


def test_vertices_from_facets_infeasible():
    with pytest.raises(Infeasible):
        vertices_from_facets(
            [halfspace((1,), 0), halfspace((-1,), -1)], 1
        )


def test_round_trip_catalog():
    bodies = [
        standard_simplex(2),
        standard_simplex(3),
        reeve_tetrahedron(3),
        unit_cube(3),
        hexagon(),
    ]
    for p in bodies:
        q = vertices_from_facets(p.facets(), p.dim)
        assert q == p


# ---------------------------------------------------------------------------
# clip / intersect


def test_clip_noop():
    c = unit_cube(3)
    assert clip(c, halfspace((1, 0, 0), 1)) == c


def test_clip_cube_corner_gives_simplex():
    assert clip(unit_cube(3), halfspace((1, 1, 1), 1)) == standard_simplex(3)


def test_clip_to_empty():
    assert clip(standard_simplex(2), halfspace((-1, 0), -2)).is_empty


def test_clip_volume_additivity():
    p = reeve_tetrahedron(2)
    h = halfspace((1, 2, -1), F(1, 3))
    assert volume(clip(p, h)) + volume(clip(p, h.flipped())) == volume(p)


@given(
    st.integers(-2, 3),
    st.integers(-2, 3),
    st.integers(-2, 3),
    st.fractions(min_value=-2, max_value=2, max_denominator=7),
)
@settings(max_examples=40, deadline=None)
def test_clip_additivity_random_plane(a, b, c, off):
    if a == 0 and b == 0 and c == 0:
        return
    p = unit_cube(3)
    h = halfspace((a, b, c), off)
    assert volume(clip(p, h)) + volume(clip(p, h.flipped())) == 1


def test_intersect_self():
    p = reeve_tetrahedron(2)
    assert intersect(p, p) == p


def test_intersect_disjoint_layer_triangles():
    from polyshift.verifier import reeve_layer_triangle

    r1 = reeve_layer_triangle(2, 1, F(1, 2))
    r2 = reeve_layer_triangle(2, 2, F(1, 2))
    assert intersect(r1, r2).is_empty


def test_intersect_touching_translates_zero_volume():
    t2 = reeve_tetrahedron(2)
    cap = intersect(t2, t2.translated((0, 0, 1)))
    assert not cap.is_empty
    assert volume(cap) == 0
    assert all(v[2] <= 1 for v in cap.vertices)


def test_intersection_contained_in_both():
    p = unit_cube(3)
    q = reeve_tetrahedron(3).translated((0, 0, -1))
    cap = intersect(p, q)
    for v in cap.vertices:
        assert p.contains(v) and q.contains(v)


# ---------------------------------------------------------------------------
# volume


def test_volume_simplices():
    for d in (1, 2, 3, 4):
        assert volume(standard_simplex(d)) == F(1, math.factorial(d))


def test_volume_cube():
    for d in (1, 2, 3, 4):
        assert volume(unit_cube(d)) == 1


@pytest.mark.parametrize("n", [1, 2, 3, 7])
def test_volume_reeve(n):
    assert volume(reeve_tetrahedron(n)) == F(n, 6)


def test_volume_lower_dimensional_is_zero():
    flat = Polytope(3, [(0, 0, 0), (1, 0, 0), (0, 1, 0)])
    assert volume(flat) == 0
    assert volume(Polytope.empty(3)) == 0


def test_volume_dilation_scaling():
    for p in (standard_simplex(3), reeve_tetrahedron(2)):
        base = volume(p)
        for n in range(1, 6):
            assert volume(dilate(p, n)) == F(n) ** p.dim * base


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3))
@settings(max_examples=40, deadline=None)
def test_volume_affine_scaling(mat):
    if determinant(mat) == 0:
        return
    p = reeve_tetrahedron(1)
    img = affine_image(p, mat, (1, -2, 0))
    assert volume(img) == abs(determinant(mat)) * volume(p)


def test_volume_against_float_hull_oracle():
    # independent cross-check through a floating-point hull library
    import numpy as np
    from scipy.spatial import ConvexHull

    from polyshift.catalog import random_lattice_polytope

    for seed in range(5):
        p = random_lattice_polytope(3, 6, 2, seed=seed)
        hull = ConvexHull(np.array([[float(c) for c in v] for v in p.vertices]))
        assert abs(float(volume(p)) - hull.volume) < 1e-9


# ---------------------------------------------------------------------------
# Minkowski sums and affine maps


def test_minkowski_with_origin():
    p = reeve_tetrahedron(2)
    origin = Polytope(3, [(0, 0, 0)])
    assert minkowski_sum(p, origin) == p


def test_minkowski_hexagon():
    h = hexagon()
    expected = {
        tuple(map(F, v))
        for v in [(0, 0), (1, 0), (2, 1), (2, 2), (1, 2), (0, 1)]
    }
    assert set(h.vertices) == expected
    ordered = [(0, 0), (1, 0), (2, 1), (2, 2), (1, 2), (0, 1)]
    assert volume(h) == shoelace([tuple(map(F, v)) for v in ordered]) == 3


def test_minkowski_commutative_associative():
    a = standard_simplex(2)
    b = Polytope(2, [(0, 0), (1, 1)])
    c = Polytope(2, [(0, 0), (-1, 2)])
    assert minkowski_sum(a, b) == minkowski_sum(b, a)
    assert minkowski_sum(minkowski_sum(a, b), c) == minkowski_sum(
        a, minkowski_sum(b, c)
    )


def test_affine_identity():
    p = reeve_tetrahedron(2)
    assert affine_image(p, identity_matrix(3), (0, 0, 0)) == p


def test_affine_simplex_transform():
    # columns of the matrix = edge vectors, translation = base vertex
    target = [(1, 1, 0), (2, 1, 0), (1, 3, 0), (1, 1, 5)]
    v0 = as_vec(target[0])
    cols = [tuple(F(a) - b for a, b in zip(v, v0)) for v in target[1:]]
    mat = tuple(zip(*cols))
    img = affine_image(standard_simplex(3), mat, v0)
    assert set(img.vertices) == {as_vec(v) for v in target}


def test_affine_negation():
    img = affine_image(
        standard_simplex(2), ((-1, 0), (0, -1)), (0, 0)
    )
    assert set(img.vertices) == {as_vec(v) for v in [(0, 0), (-1, 0), (0, -1)]}


def test_affine_rejects_singular():
    with pytest.raises(SingularMatrix):
        affine_image(standard_simplex(2), ((1, 1), (1, 1)), (0, 0))


def test_bounding_boxes():
    assert bounding_box(standard_simplex(3)) == (as_vec((0, 0, 0)), as_vec((1, 1, 1)))
    assert bounding_box(reeve_tetrahedron(5)) == (as_vec((0, 0, 0)), as_vec((1, 1, 5)))
    assert bounding_box(hexagon()) == (as_vec((0, 0)), as_vec((2, 2)))


# ---------------------------------------------------------------------------
# lattice flag, JSON round trip


def test_lattice_flag():
    assert standard_simplex(3).is_lattice
    shifted = standard_simplex(3).translated((F(1, 2), 0, 0))
    assert not shifted.is_lattice


def test_json_round_trip():
    p = reeve_tetrahedron(4).translated((F(1, 2), F(-2, 3), 0))
    q = polytope_from_json(polytope_to_json(p))
    assert q == p


def test_json_rejects_zero_denominator():
    with pytest.raises(DegenerateInput):
        polytope_from_json({"dim": 1, "vertices": [["1/0"]]})


def test_json_rejects_bad_shape():
    with pytest.raises(DegenerateInput):
        polytope_from_json({"dim": 2, "vertices": [["1"]]})
    with pytest.raises(DegenerateInput):
        polytope_from_json({"vertices": [["1"]]})


def test_normalization_drops_interior_points():
    p = Polytope(2, [(0, 0), (2, 0), (0, 2), (1, 1), (1, 0)])
    assert set(p.vertices) == {as_vec(v) for v in [(0, 0), (2, 0), (0, 2)]}
