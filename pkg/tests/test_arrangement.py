import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperstokes.arrangement import (
    AffineForm,
    Arrangement,
    GenericityError,
    OnHyperplaneError,
    analyze,
    chamber_of_point,
    classify_dplus,
    cone_membership,
    edge_direction,
    enumerate_chambers,
    enumerate_vertices,
    expected_chamber_count,
    separating_set,
    validate_genericity,
)
from hyperstokes.instances import points_on_line, random_arrangement, triangle

from helpers import lp_chamber_signs, lp_minimum_of_f0, random_instances


def plane(*forms, weights=None, f0=(1, 0)):
    fs = tuple(AffineForm(lin, c) for lin, c in forms)
    return Arrangement(2, fs, weights or (0.5,) * len(fs), f0)


class TestValidation:
    def test_triangle_is_generic(self):
        assert validate_genericity(triangle(2, 1, (0.3, 0.4, 0.5))) == []

    def test_coincident_points_on_line(self):
        arr = Arrangement(1, (AffineForm((1,), 0), AffineForm((1,), 0)), (0.5, 0.5), (1,))
        kinds = {v.kind: v.indices for v in validate_genericity(arr)}
        assert kinds["concurrent"] == (1, 2)

    def test_parallel_lines_flagged_as_dependent(self):
        arr = plane(((1, 0), 0), ((1, 0), -1), ((0, 1), 0), f0=(1, Fraction(1, 3)))
        violations = validate_genericity(arr)
        assert [(v.kind, v.indices) for v in violations] == [("dependent", (1, 2))]

    def test_f0_constant_on_an_edge(self):
        # f0 = x is constant along the line x = 0
        arr = plane(((1, 0), 0), ((1, 1), -1), ((0, 1), 0), f0=(1, 0))
        found = [(v.kind, v.indices) for v in validate_genericity(arr)]
        assert ("f0-constant-on-edge", (1,)) in found

    def test_parallel_pair_with_f0_along_them(self):
        arr = plane(((1, 0), 0), ((1, 0), -1), ((0, 1), 0), f0=(1, 0))
        found = {(v.kind, v.indices) for v in validate_genericity(arr)}
        assert found == {("dependent", (1, 2)), ("f0-constant-on-edge", (1,)),
                         ("f0-constant-on-edge", (2,))}

    def test_f0_collision(self):
        arr = plane(((1, 0), 0), ((0, 1), 0), ((1, 1), -1), f0=(1, 1))
        assert "f0-collision" in {v.kind for v in validate_genericity(arr)}

    def test_three_concurrent_lines(self):
        arr = plane(((1, 0), 0), ((0, 1), 0), ((1, 1), 0), f0=(3, 1))
        assert ("concurrent", (1, 2, 3)) in [(v.kind, v.indices) for v in validate_genericity(arr)]

    def test_geometry_refuses_nongeneric(self):
        arr = Arrangement(1, (AffineForm((1,), 0), AffineForm((2,), 0)), (0.5, 0.5), (1,))
        with pytest.raises(GenericityError):
            analyze(arr)

    def test_bad_inputs(self):
        with pytest.raises(ValueError):
            AffineForm((0, 0), 1)
        with pytest.raises(ValueError):
            Arrangement(1, (AffineForm((1,), 0),), (0.0,), (1,))
        with pytest.raises(ValueError):
            Arrangement(2, (AffineForm((1, 0), 0),), (0.5,), (1, 0))


class TestVertices:
    def test_triangle_vertices(self):
        a, b = Fraction(5, 2), Fraction(3, 4)
        vs = enumerate_vertices(triangle(a, b, (0.3, 0.4, 0.5)))
        assert [v.indices for v in vs] == [(1, 2), (1, 3), (2, 3)]
        assert [v.point for v in vs] == [(0, 0), (0, 1), (1, 0)]
        assert [v.f0_value for v in vs] == [0, b, a]
        assert [v.orientation_sign for v in vs] == [1, 1, -1]

    def test_points_on_line_in_order(self):
        vs = enumerate_vertices(points_on_line([3, 0, 1], (0.5,) * 3))
        assert [v.point for v in vs] == [(0,), (1,), (3,)]

    def test_four_lines_have_six_vertices(self):
        arr = plane(((1, 0), 0), ((0, 1), 0), ((1, 1), -1), ((1, -2), 3), f0=(3, 1))
        vs = enumerate_vertices(arr)
        assert len(vs) == 6
        # brute-force pairwise intersections
        lin = np.array([[1, 0], [0, 1], [1, 1], [1, -2]], float)
        c = np.array([0, 0, -1, 3], float)
        for v in vs:
            i, j = (x - 1 for x in v.indices)
            p = np.linalg.solve(lin[[i, j]], -c[[i, j]])
            assert np.allclose(p, [float(x) for x in v.point])

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10_000), st.integers(1, 3), st.integers(0, 4))
    def test_vertex_invariants(self, seed, k, extra):
        arr = random_arrangement(np.random.default_rng(seed), k, k + extra)
        vs = enumerate_vertices(arr)
        assert len(vs) == len(list(itertools.combinations(range(arr.n), k)))
        assert all(a.f0_value < b.f0_value for a, b in zip(vs, vs[1:]))
        for v in vs:
            assert all((arr.form(j)(v.point) == 0) == (j in v.indices) for j in arr.labels)
            assert v.orientation_sign in (1, -1)


class TestEdges:
    def test_triangle_edges(self):
        arr = triangle(3, 2, (0.3, 0.4, 0.5))
        assert edge_direction(arr, (2,)).direction == (Fraction(1, 3), 0)
        assert edge_direction(arr, (1,)).direction == (0, Fraction(1, 2))
        assert edge_direction(arr, (3,)).direction == (1, -1)

    def test_line_edge(self):
        assert edge_direction(points_on_line([0], (0.5,)), ()).direction == (1,)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10_000), st.integers(2, 3))
    def test_edge_normalization(self, seed, k):
        arr = random_arrangement(np.random.default_rng(seed), k, k + 2)
        for u in itertools.combinations(arr.labels, k - 1):
            e = edge_direction(arr, u).direction
            assert arr.f0_value(e) == 1
            assert all(arr.form(j).lin(e) == 0 for j in u)


class TestChambers:
    def test_small_counts(self):
        assert len(enumerate_chambers(points_on_line([0, 1], (0.5, 0.5)))) == 3
        assert len(enumerate_chambers(triangle(2, 1, (0.3, 0.4, 0.5)))) == 7

    @pytest.mark.parametrize("seed", range(6))
    def test_counts_match_lp_enumeration(self, seed):
        rng = np.random.default_rng(100 + seed)
        k = 1 + seed % 3
        arr = random_arrangement(rng, k, min(10, k + 3 + seed))
        chambers = enumerate_chambers(arr)
        assert len(chambers) == expected_chamber_count(arr.n, arr.k)
        assert {c.signs for c in chambers} == lp_chamber_signs(arr)

    def test_interior_points_are_interior(self):
        for arr in random_instances(7, 10):
            for c in enumerate_chambers(arr):
                assert all(arr.form(j)(c.interior_point) * c.sign_of(j) > 0 for j in arr.labels)

    def test_four_lines_eleven_chambers(self):
        arr = plane(((1, 0), 0), ((0, 1), 0), ((1, 1), -1), ((1, -2), 3), f0=(3, 1))
        assert len(enumerate_chambers(arr)) == 11
        assert len(lp_chamber_signs(arr)) == 11


class TestDplus:
    def test_line(self):
        geo = analyze(points_on_line([0, 1], (0.5, 0.5)))
        dp = {c.signs: c.min_vertex.indices for c in geo.chambers if c.in_dplus}
        assert dp == {(1, -1): (1,), (1, 1): (2,)}

    def test_triangle(self):
        geo = analyze(triangle(2, 1, (0.3, 0.4, 0.5)))
        assert sum(c.in_dplus for c in geo.chambers) == 3
        assert geo.delta[(1, 2)].signs == (1, 1, -1)
        assert geo.delta[(1, 2)].bounded

    def test_bounded_chambers_are_in_dplus(self):
        for arr in random_instances(11, 15):
            for c in analyze(arr).chambers:
                if c.bounded:
                    assert c.in_dplus

    @pytest.mark.parametrize("seed", range(4))
    def test_against_lp(self, seed):
        for arr in random_instances(200 + seed, 4, max_n=6):
            geo = analyze(arr)
            assert len(geo.dplus) == len(geo.vertices)
            assert {c.min_vertex.indices for c in geo.dplus} == {v.indices for v in geo.vertices}
            for c in geo.chambers:
                bounded_below, argmin = lp_minimum_of_f0(arr, c.signs)
                assert bounded_below == c.in_dplus
                if c.in_dplus:
                    assert np.allclose(argmin, [float(x) for x in c.min_vertex.point], atol=1e-7)

    def test_delta_x_contains_x_on_closure_and_f0_above(self):
        for arr in random_instances(5, 10):
            geo = analyze(arr)
            for v in geo.vertices:
                ch = geo.delta[v.indices]
                assert v.indices in ch.vertices
                assert arr.f0_value(ch.interior_point) > v.f0_value

    def test_classify_is_idempotent(self):
        arr = triangle(2, 1, (0.3, 0.4, 0.5))
        once = classify_dplus(arr, enumerate_chambers(arr))
        assert classify_dplus(arr, once) == once


class TestSeparationAndCones:
    def test_separating_set_basics(self):
        geo = analyze(triangle(2, 1, (0.3, 0.4, 0.5)))
        d1, d3 = geo.delta[(1, 2)], geo.delta[(2, 3)]
        assert separating_set(d1, d1) == frozenset()
        assert 2 in separating_set(d1, d3)
        line = analyze(points_on_line([0, 1], (0.5, 0.5)))
        assert separating_set(*line.dplus) == {2}

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.tuples(st.sampled_from((1, -1)), st.sampled_from((1, -1)),
                              st.sampled_from((1, -1))), min_size=5, max_size=5))
    def test_separating_set_triangle_inequality(self, columns):
        from hyperstokes.arrangement import Chamber

        a, b, c = (Chamber(tuple(col[i] for col in columns), (), False) for i in range(3))
        assert separating_set(a, c) <= separating_set(a, b) | separating_set(b, c)
        assert separating_set(a, b) == separating_set(b, a)

    def test_cone_membership_line(self):
        geo = analyze(points_on_line([0, 1], (0.5, 0.5)))
        x1, x2 = geo.vertices
        assert cone_membership(geo.arr, x1, x2).status == "interior"
        assert cone_membership(geo.arr, x2, x1).status == "outside"
        same = cone_membership(geo.arr, x1, x1)
        assert same.status == "boundary" and all(a == 0 for a in same.coefficients.values())

    def test_cone_membership_triangle(self):
        geo = analyze(triangle(2, 1, (0.3, 0.4, 0.5)))
        x1, x2, x3 = geo.vertices
        m = cone_membership(geo.arr, x1, x3)
        # X3 = (1, 0) = X1 + 2 e_{2}, e_{2} = (1/2, 0): on the ray of the cone
        assert m.status == "boundary"
        assert m.coefficients == {1: 2, 2: 0}

    def test_points_along_cone_edges_are_on_boundary(self):
        for arr in random_instances(3, 8):
            geo = analyze(arr)
            for v in geo.vertices:
                for j in v.indices:
                    e = geo.cone_direction(v, j)
                    moved = type(v)(v.indices, tuple(p + Fraction(1, 10**6) * c
                                                     for p, c in zip(v.point, e)), 0, 1)
                    # a single generator is the whole cone when k = 1
                    expected = "interior" if arr.k == 1 else "boundary"
                    assert cone_membership(arr, v, moved).status == expected


class TestChamberOfPoint:
    def test_triangle_and_line(self):
        arr = triangle(2, 1, (0.3, 0.4, 0.5))
        assert chamber_of_point(arr, (0.1, 0.1)).signs == (1, 1, -1)
        assert chamber_of_point(arr, (Fraction(1, 10), Fraction(1, 10))).signs == (1, 1, -1)
        line = points_on_line([0, 1], (0.5, 0.5))
        assert chamber_of_point(line, (0.5,)).signs == (1, -1)

    def test_on_hyperplane(self):
        arr = triangle(2, 1, (0.3, 0.4, 0.5))
        with pytest.raises(OnHyperplaneError) as info:
            chamber_of_point(arr, (0, Fraction(1, 3)))
        assert info.value.index == 1
        with pytest.raises(OnHyperplaneError):
            chamber_of_point(arr, (1e-12, 0.3))
