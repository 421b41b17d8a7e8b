import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from combslope.errors import DomainError
from combslope.geometry import (
    BoundaryArc,
    HalfLine,
    HSegment,
    RectWitness,
    dist_to_halfline,
    dist_to_hsegment,
    level_set_arc,
    mobius_to_zero,
    nearest_point_on_halfline,
    nearest_point_on_hsegment,
    require_finite,
    slope_of,
    tangent_ray,
)

finite_floats = st.floats(min_value=-50, max_value=50, allow_nan=False)
points = st.builds(complex, finite_floats, finite_floats)
angles = st.floats(min_value=0.0, max_value=2 * math.pi, exclude_max=True)


class TestHalfLine:
    def test_distance_examples(self):
        assert dist_to_halfline(0j, HalfLine(1 + 1j)) == 1.0
        assert dist_to_halfline(2 + 1j, HalfLine(1 + 1j)) == 1.0
        assert dist_to_halfline(3 + 4j, HalfLine(0j)) == 5.0

    def test_nearest_examples(self):
        assert nearest_point_on_halfline(0j, HalfLine(1 + 1j)) == 1j
        assert nearest_point_on_halfline(2 + 1j, HalfLine(1 + 1j)) == 1 + 1j
        assert nearest_point_on_halfline(-5 + 0.3j, HalfLine(1 + 0j)) == -5 + 0j

    def test_on_ray_is_zero(self):
        h = HalfLine(2 - 1j)
        assert dist_to_halfline(2 - 1j, h) == 0.0
        assert dist_to_halfline(-7 - 1j, h) == 0.0

    @given(points, points)
    def test_distance_matches_nearest_point(self, p, anchor):
        h = HalfLine(anchor)
        assert dist_to_halfline(p, h) == pytest.approx(
            abs(p - nearest_point_on_halfline(p, h)), abs=1e-12
        )

    @given(points, points, st.floats(min_value=0, max_value=100))
    def test_nearest_point_is_minimal(self, p, anchor, back):
        h = HalfLine(anchor)
        assert dist_to_halfline(p, h) <= abs(p - (anchor - back)) + 1e-12

    def test_rejects_nonfinite_anchor(self):
        with pytest.raises(DomainError):
            HalfLine(complex(math.nan, 0))


class TestHSegment:
    def test_distance_clamps(self):
        s = HSegment(-1.0, 2.0, 1.0)
        assert dist_to_hsegment(0.5 + 1j, s) == 0.0
        assert dist_to_hsegment(3 + 1j, s) == 1.0
        assert dist_to_hsegment(0 + 0j, s) == 1.0
        assert nearest_point_on_hsegment(5 + 2j, s) == 2 + 1j

    def test_needs_positive_extent(self):
        with pytest.raises(DomainError):
            HSegment(1.0, 1.0, 0.0)


class TestRectWitness:
    def test_contains_is_strict(self):
        r = RectWitness(0j, 1.0, 1.0, 2.0)
        assert r.contains(0j)
        assert not r.contains(1 + 0j)  # on the vertical border of the open set
        assert not r.contains(1j)

    def test_horizontal_border_segments(self):
        r = RectWitness(1j, 2.0, 1.0, 4.0)
        top, bottom = r.horizontal_border()
        assert (top.y, top.x_lo, top.x_hi) == (3.0, -2.0, 2.0)
        assert (bottom.y, bottom.x_lo, bottom.x_hi) == (0.0, -2.0, 2.0)

    def test_requires_positive_dims(self):
        with pytest.raises(DomainError):
            RectWitness(0j, 0.0, 1.0, 1.0)


class TestSlopeOf:
    def test_examples(self):
        assert slope_of(1, 0) == 0.0
        assert slope_of(1, 1 - 0.1j) == pytest.approx(math.pi / 2, abs=1e-15)
        assert slope_of(1, 0.9) == 0.0

    def test_undefined_at_base_point(self):
        with pytest.raises(DomainError):
            slope_of(1, 1)

    def test_rejects_points_beyond_tangent(self):
        with pytest.raises(DomainError):
            slope_of(1, 2 + 0j)

    def test_rejects_off_circle_base(self):
        with pytest.raises(DomainError):
            slope_of(0.5, 0)

    @given(angles, st.floats(min_value=0, max_value=0.999), angles)
    def test_range_on_closed_disk(self, phi, r, psi):
        b = cmath.exp(1j * phi)
        z = r * cmath.exp(1j * psi)
        val = slope_of(b, z)
        assert -math.pi / 2 <= val <= math.pi / 2


class TestMobius:
    def test_identity_at_zero(self):
        t = mobius_to_zero(0j)
        assert t(0.3 + 0.4j) == 0.3 + 0.4j

    def test_sends_base_to_zero(self):
        t = mobius_to_zero(0.5 + 0j)
        assert t(0.5) == 0
        assert t(1) == pytest.approx(1)

    def test_rejects_boundary_base(self):
        with pytest.raises(DomainError):
            mobius_to_zero(1 + 0j)

    @given(
        st.floats(min_value=0, max_value=0.95),
        angles,
        angles,
    )
    def test_preserves_unit_circle(self, r, phi, theta):
        t = mobius_to_zero(r * cmath.exp(1j * phi))
        assert abs(abs(t(cmath.exp(1j * theta))) - 1.0) < 1e-12

    def test_inverse_round_trip(self):
        t = mobius_to_zero(0.3 - 0.2j)
        z = -0.1 + 0.55j
        assert t.inverse()(t(z)) == pytest.approx(z, abs=1e-15)


class TestBoundaryArc:
    def test_normalizes_endpoints(self):
        arc = BoundaryArc(-1 + 1e-12j, 1 + 0j)
        assert abs(abs(arc.start) - 1) == 0.0

    def test_central_angle(self):
        assert BoundaryArc(-1, 1).central_angle == pytest.approx(math.pi)
        assert BoundaryArc(1j, 1).central_angle == pytest.approx(math.pi / 2)
        assert BoundaryArc(1, 1j).central_angle == pytest.approx(3 * math.pi / 2)

    def test_complement_angle(self):
        arc = BoundaryArc(cmath.exp(2j), cmath.exp(0.7j))
        total = arc.central_angle + arc.complement().central_angle
        assert total == pytest.approx(2 * math.pi, abs=1e-12)

    def test_rejects_equal_endpoints(self):
        with pytest.raises(DomainError):
            BoundaryArc(1, 1)


class TestLevelArc:
    def test_half_level_of_antipodal_arcs_is_diameter(self):
        for start, end in ((-1, 1), (-1j, 1j)):
            la = level_set_arc(0.5, BoundaryArc(start, end))
            assert la.is_straight
            assert la.radius == math.inf
            mid = la.point_at(0.5)
            assert abs(mid - (complex(start) + complex(end)) / 2) < 1e-12

    def test_endpoints_are_exact(self):
        arc = BoundaryArc(cmath.exp(2.2j), cmath.exp(0.4j))
        la = level_set_arc(0.3, arc)
        assert la.point_at(0.0) == arc.start
        assert la.point_at(1.0) == arc.end

    def test_quarter_level_bulges_away_from_arc(self):
        # the k = 1/4 locus of the upper semicircle lies in the lower half disk
        la = level_set_arc(0.25, BoundaryArc(-1, 1))
        assert not la.is_straight
        assert la.point_at(0.5).imag < 0

    def test_meets_circle_at_level_angle(self):
        # angle between the arc tangent at the end point and the clockwise
        # circle tangent equals level * pi
        for level in (0.1, 0.25, 0.5, 0.75, 0.9):
            for arc in (BoundaryArc(-1, 1), BoundaryArc(cmath.exp(2.5j), cmath.exp(1.1j))):
                la = level_set_arc(level, arc)
                t = la.tangent_at_end()
                ang = abs(cmath.phase(t / (-1j * arc.end)))
                assert ang == pytest.approx(level * math.pi, abs=1e-9)

    def test_rejects_bad_level(self):
        arc = BoundaryArc(-1, 1)
        for level in (0.0, 1.0, -0.2, 1.3):
            with pytest.raises(DomainError):
                level_set_arc(level, arc)

    def test_parameter_domain(self):
        la = level_set_arc(0.4, BoundaryArc(-1, 1))
        with pytest.raises(DomainError):
            la.point_at(1.5)


class TestTangentRay:
    def test_half_level_ray_is_real_axis(self):
        ray = tangent_ray(0.5, BoundaryArc(-1, 1))
        assert ray.angle == 0.0
        assert ray.point_at(0.25) == pytest.approx(0.75)
        assert slope_of(1, ray.point_at(0.25)) == 0.0

    @pytest.mark.parametrize("level,expected", [(0.25, math.pi / 4), (0.75, -math.pi / 4)])
    def test_constant_slope_on_ray(self, level, expected):
        # s below ~1e-4 hits float cancellation in 1 - z itself, so sample
        # from 1e-3 outward
        ray = tangent_ray(level, BoundaryArc(-1, 1))
        for s in (1e-3, 0.1, 0.5, 0.9 * ray.max_param):
            assert slope_of(1, ray.point_at(s)) == pytest.approx(expected, abs=1e-12)

    @given(
        st.floats(min_value=0.05, max_value=0.95),
        angles,
        st.floats(min_value=0.02, max_value=0.99),
    )
    @settings(max_examples=200)
    def test_slope_identity_everywhere(self, level, phi, frac):
        base = cmath.exp(1j * phi)
        arc = BoundaryArc(-base, base)
        ray = tangent_ray(level, arc)
        z = ray.point_at(frac * ray.max_param)
        assert slope_of(base, z) == pytest.approx(math.pi * (0.5 - level), abs=1e-12)

    def test_ray_enters_open_disk(self):
        ray = tangent_ray(0.3, BoundaryArc(-1j, 1j))
        for s in (1e-3, 0.2, 0.5):
            assert abs(ray.point_at(s * ray.max_param)) < 1.0

    def test_tangent_to_level_arc(self):
        for level in (0.2, 0.5, 0.7):
            arc = BoundaryArc(cmath.exp(2.8j), cmath.exp(0.9j))
            ray = tangent_ray(level, arc)
            la = level_set_arc(level, arc)
            cross = (ray.direction.conjugate() * la.tangent_at_end()).imag
            assert abs(cross) < 1e-9
            # both orientations point into the disk
            dot = (ray.direction.conjugate() * la.tangent_at_end()).real
            assert dot > 0

    def test_rejects_bad_level(self):
        with pytest.raises(DomainError):
            tangent_ray(1.0, BoundaryArc(-1, 1))


def test_require_finite():
    assert require_finite(1 + 2j) == 1 + 2j
    with pytest.raises(DomainError):
        require_finite(complex(math.inf, 0))
