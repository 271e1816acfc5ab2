from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aggclosure.errors import DegenerateFacetError
from aggclosure.polyhedra import (
    GE,
    LE,
    LinearInequality,
    contains,
    embed_with_free_axis,
    facet_lattice_tuple,
    hrep_to_vrep,
    in_generated_set,
    intersect,
    make_inequality,
    orthant,
    poly_equal,
    poly_subset,
    positive_normal_facets,
    vrep_to_hrep,
    whole_space,
)


def mk(normal, rhs, sense):
    return make_inequality(normal, rhs, sense)


def rendered(poly):
    return poly.render_lines()


class TestInequalityCanonicalForm:
    def test_scaling_collapses(self):
        assert mk((2, 4), 6, LE) == mk((1, 2), 3, LE)

    def test_fractions_cleared(self):
        assert mk((Fraction(1, 2), Fraction(1, 3)), Fraction(1, 6), GE) == mk((3, 2), 1, GE)

    def test_sign_orientation_flips_sense(self):
        assert mk((-1, -2), -2, LE) == mk((1, 2), 2, GE)

    def test_zero_normal_rejected(self):
        with pytest.raises(ValueError):
            mk((0, 0), 1, LE)

    def test_render(self):
        assert mk((1, 2), 2, LE).render() == "1 2 <= 2"

    def test_direct_construction_validates(self):
        with pytest.raises(ValueError):
            LinearInequality((2, 4), 6, LE)
        with pytest.raises(ValueError):
            LinearInequality((-1, 2), 3, LE)
        with pytest.raises(ValueError):
            LinearInequality((1, 2), 3, "==")


class TestVrepToHrep:
    def test_triangle(self):
        poly = vrep_to_hrep([(0, 0), (2, 0), (0, 1)])
        assert rendered(poly) == ["1 0 >= 0", "0 1 >= 0", "1 2 <= 2"]
        assert poly.integral_flag and poly.affine_dim == 2

    def test_point_plus_unit_rays_is_orthant(self):
        poly = vrep_to_hrep([(0, 0)], [(1, 0), (0, 1)])
        assert rendered(poly) == ["1 0 >= 0", "0 1 >= 0"]

    def test_up_closed_segment(self):
        poly = vrep_to_hrep([(2, 0), (0, 2)], [(1, 0), (0, 1)])
        assert rendered(poly) == ["1 0 >= 0", "0 1 >= 0", "1 1 >= 2"]

    def test_interior_generators_dropped(self):
        poly = vrep_to_hrep([(0, 0), (2, 0), (0, 1), (1, 0), (Fraction(1, 2), Fraction(1, 4))])
        assert poly.vrep_points == ((Fraction(0), Fraction(0)), (Fraction(0), Fraction(1)), (Fraction(2), Fraction(0)))

    def test_lower_dimensional_segment_gets_equality_pair(self):
        poly = vrep_to_hrep([(1, 1), (2, 2)])
        assert rendered(poly) == ["1 -1 <= 0", "1 -1 >= 0", "1 1 >= 2", "1 1 <= 4"]
        assert poly.affine_dim == 1

    def test_single_point(self):
        poly = vrep_to_hrep([(3, 5)])
        assert poly.affine_dim == 0
        assert set(rendered(poly)) == {"1 0 <= 3", "1 0 >= 3", "0 1 <= 5", "0 1 >= 5"}

    def test_needs_a_point(self):
        with pytest.raises(ValueError):
            vrep_to_hrep([], [(1, 0)])


class TestHrepToVrep:
    def test_triangle_inverse(self):
        poly = hrep_to_vrep([mk((1, 0), 0, GE), mk((0, 1), 0, GE), mk((1, 2), 2, LE)], 2)
        assert poly.vrep_points == ((0, 0), (0, 1), (2, 0))
        assert poly.vrep_rays == ()

    def test_covering_inverse(self):
        poly = hrep_to_vrep([mk((1, 0), 0, GE), mk((0, 1), 0, GE), mk((1, 1), 2, GE)], 2)
        assert poly.vrep_points == ((0, 2), (2, 0))
        assert poly.vrep_rays == ((0, 1), (1, 0))

    def test_infeasible(self):
        poly = hrep_to_vrep([mk((1,), 0, GE), mk((1,), -1, LE)], 1)
        assert not poly.feasible
        assert rendered(poly) == ["infeasible"]

    def test_redundant_parallel_rows_merged(self):
        poly = hrep_to_vrep([mk((1,), 0, GE), mk((1,), 5, LE), mk((1,), 2, LE)], 1)
        assert rendered(poly) == ["1 >= 0", "1 <= 2"]

    def test_halfplane_with_lineality(self):
        poly = hrep_to_vrep([mk((1, 1), 1, LE)], 2)
        assert poly.feasible
        assert rendered(poly) == ["1 1 <= 1"]
        assert (1, -1) in poly.vrep_rays and (-1, 1) in poly.vrep_rays

    def test_lineality_infeasible_band(self):
        poly = hrep_to_vrep([mk((1, 1), 1, LE), mk((1, 1), 3, GE)], 2)
        assert not poly.feasible

    def test_whole_space_has_empty_hrep(self):
        poly = hrep_to_vrep([], 2)
        assert poly.feasible and poly.hrep == ()


class TestContains:
    def setup_method(self):
        self.poly = hrep_to_vrep([mk((1, 0), 0, GE), mk((0, 1), 0, GE), mk((1, 2), 2, LE)], 2)

    def test_inside(self):
        assert contains(self.poly, (1, 0))

    def test_outside(self):
        assert not contains(self.poly, (Fraction(3, 2), Fraction(1, 2)))

    def test_boundary(self):
        assert contains(self.poly, (2, 0))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            contains(self.poly, (1, 0, 0))


class TestIntersect:
    def test_interval_pair(self):
        a = hrep_to_vrep([mk((1,), 0, GE), mk((1,), 2, LE)], 1)
        b = hrep_to_vrep([mk((1,), 0, GE), mk((1,), 1, LE)], 1)
        both = intersect([a, b])
        assert rendered(both) == ["1 >= 0", "1 <= 1"]

    def test_idempotent(self):
        a = hrep_to_vrep([mk((1, 0), 0, GE), mk((0, 1), 0, GE), mk((1, 2), 2, LE)], 2)
        assert poly_equal(intersect([a, a]), a)

    def test_triangle_cut_by_vertical_strip(self):
        a = hrep_to_vrep([mk((1, 0), 0, GE), mk((0, 1), 0, GE), mk((1, 2), 2, LE)], 2)
        b = hrep_to_vrep([mk((1, 0), 0, GE), mk((0, 1), 0, GE), mk((1, 0), 1, LE)], 2)
        both = intersect([a, b])
        assert both.vrep_points == (
            (0, 0),
            (0, 1),
            (1, 0),
            (1, Fraction(1, 2)),
        )

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError):
            intersect([])


class TestPositiveNormalFacets:
    def test_packing_triangle(self):
        poly = hrep_to_vrep([mk((1, 0), 0, GE), mk((0, 1), 0, GE), mk((1, 2), 2, LE)], 2)
        assert positive_normal_facets(poly) == [mk((1, 2), 2, LE)]

    def test_orthant_has_none(self):
        assert positive_normal_facets(orthant(2)) == []

    def test_covering(self):
        poly = hrep_to_vrep([mk((1, 0), 0, GE), mk((0, 1), 0, GE), mk((1, 1), 2, GE)], 2)
        assert positive_normal_facets(poly) == [mk((1, 1), 2, GE)]

    def test_lower_dimensional_rejected(self):
        seg = vrep_to_hrep([(1, 1), (2, 2)])
        with pytest.raises(ValueError):
            positive_normal_facets(seg)

    def test_positive_facet_tight_along_ray_detected(self):
        half = hrep_to_vrep([mk((1, 1), 0, LE)], 2)
        with pytest.raises(RuntimeError):
            positive_normal_facets(half)


class TestFacetLatticeTuple:
    def test_packing(self):
        poly = hrep_to_vrep([mk((1, 0), 0, GE), mk((0, 1), 0, GE), mk((1, 2), 2, LE)], 2)
        assert facet_lattice_tuple(poly, mk((1, 2), 2, LE)) == ((0, 1), (2, 0))

    def test_covering(self):
        poly = hrep_to_vrep([mk((1, 0), 0, GE), mk((0, 1), 0, GE), mk((1, 1), 2, GE)], 2)
        assert facet_lattice_tuple(poly, mk((1, 1), 2, GE)) == ((0, 2), (2, 0))

    def test_one_dimensional(self):
        poly = hrep_to_vrep([mk((1,), 0, GE), mk((1,), 2, LE)], 1)
        assert facet_lattice_tuple(poly, mk((1,), 2, LE)) == ((2,),)

    def test_not_a_facet(self):
        poly = hrep_to_vrep([mk((1, 0), 0, GE), mk((0, 1), 0, GE), mk((1, 2), 2, LE)], 2)
        with pytest.raises(ValueError):
            facet_lattice_tuple(poly, mk((1, 1), 5, LE))

    def test_degenerate_unbounded_facet(self):
        half = hrep_to_vrep([mk((1, 1), 0, LE)], 2)
        with pytest.raises(DegenerateFacetError, match="degenerate facet"):
            facet_lattice_tuple(half, mk((1, 1), 0, LE))

    def test_fractional_polyhedron_rejected(self):
        poly = hrep_to_vrep([mk((1, 0), 0, GE), mk((0, 1), 0, GE), mk((2, 3), 4, LE)], 2)
        with pytest.raises(ValueError):
            facet_lattice_tuple(poly, mk((2, 3), 4, LE))


class TestSubsetEqualEmbed:
    def test_subset(self):
        inner = hrep_to_vrep([mk((1, 0), 0, GE), mk((0, 1), 0, GE), mk((1, 1), 1, LE)], 2)
        outer = hrep_to_vrep([mk((1, 0), 0, GE), mk((0, 1), 0, GE), mk((1, 2), 2, LE)], 2)
        assert poly_subset(inner, outer)
        assert not poly_subset(outer, inner)

    def test_equal_is_representation_free(self):
        a = hrep_to_vrep([mk((1, 0), 0, GE), mk((0, 1), 0, GE), mk((1, 2), 2, LE), mk((1, 1), 9, LE)], 2)
        b = vrep_to_hrep([(0, 0), (2, 0), (0, 1)])
        assert poly_equal(a, b)

    def test_embed_interval(self):
        seg = hrep_to_vrep([mk((1,), 0, GE), mk((1,), 2, LE)], 1)
        cyl = embed_with_free_axis(seg, 0)
        assert rendered(cyl) == ["1 0 >= 0", "0 1 >= 0", "0 1 <= 2"]
        assert (1, 0) in cyl.vrep_rays

    def test_embed_axis_position(self):
        seg = hrep_to_vrep([mk((1,), 0, GE), mk((1,), 2, LE)], 1)
        cyl = embed_with_free_axis(seg, 1)
        assert rendered(cyl) == ["1 0 >= 0", "0 1 >= 0", "1 0 <= 2"]

    def test_orthant_and_whole_space(self):
        assert rendered(orthant(3)) == ["1 0 0 >= 0", "0 1 0 >= 0", "0 0 1 >= 0"]
        assert whole_space(2).hrep == ()
        assert poly_subset(orthant(2), whole_space(2))


point2 = st.tuples(st.integers(0, 6), st.integers(0, 6))


class TestProperties:
    @settings(max_examples=60, deadline=None)
    @given(st.lists(point2, min_size=1, max_size=7), point2)
    def test_contains_matches_generator_membership(self, pts, probe):
        poly = vrep_to_hrep(pts)
        assert contains(poly, probe) == in_generated_set(probe, pts, [])

    @settings(max_examples=40, deadline=None)
    @given(st.lists(point2, min_size=1, max_size=6))
    def test_round_trip_preserves_vertices(self, pts):
        poly = vrep_to_hrep(pts)
        back = hrep_to_vrep(poly.hrep, 2)
        assert poly_equal(poly, back)
        assert back.vrep_points == poly.vrep_points

    @settings(max_examples=40, deadline=None)
    @given(st.lists(point2, min_size=1, max_size=6), st.lists(point2, min_size=1, max_size=6), point2)
    def test_intersection_membership(self, pa, pb, probe):
        a = vrep_to_hrep(pa)
        b = vrep_to_hrep(pb)
        both = intersect([a, b])
        expect = contains(a, probe) and contains(b, probe)
        got = both.feasible and contains(both, probe)
        assert got == expect

    @settings(max_examples=40, deadline=None)
    @given(
        st.lists(
            st.tuples(st.integers(0, 5), st.integers(0, 5), st.integers(0, 5)),
            min_size=1,
            max_size=6,
        )
    )
    def test_three_dimensional_round_trip(self, pts):
        poly = vrep_to_hrep(pts, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
        back = hrep_to_vrep(poly.hrep, 3)
        assert poly_equal(poly, back)
