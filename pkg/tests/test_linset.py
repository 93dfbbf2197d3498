import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypermass.hcore import (
    HPoint,
    dist,
    ideal_endpoints,
    intersect,
    line_through,
    line_through_point,
    midpoint,
)
from hypermass.lamina import Disk, GeodesicTriangle, Lamina, PolarGraph, RadialAffine, RegularPolygon, lamina_moment
from hypermass.linset import (
    LinearSet,
    archimedes_moment,
    linset_centroid,
    linset_mass,
    linset_moment_about_line,
    linset_moment_about_point,
    linset_point_mass,
    linset_transversal,
    pencil_slice,
)
from hypermass.pmass import combine, moment_about_line, system_centroid

from test_lamina import random_triangles

ORIGIN = HPoint.from_gauss(0.0, 0.0)


def axis_line(theta=0.3, base=ORIGIN):
    return line_through_point(base, theta)


def uniform(lo, hi, density=1.0, carrier=None):
    return LinearSet(carrier or axis_line(), ((lo, hi),), density)


def riemann(f, lo, hi, n=400_000):
    """Midpoint Riemann sum; the oracle for the two-interval examples."""
    h = (hi - lo) / n
    s = lo + h * (np.arange(n) + 0.5)
    return float(np.sum(f(s)) * h)


def two_interval_moment(a):
    f = lambda s: np.sinh(s - a)
    return riemann(f, 0.0, 1.0) + riemann(f, 2.0, 3.0)


class TestLinearSet:
    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            LinearSet(axis_line(), ())

    def test_rejects_overlapping(self):
        with pytest.raises(ValueError):
            LinearSet(axis_line(), ((0.0, 1.0), (0.5, 2.0)))

    def test_rejects_zero_length(self):
        with pytest.raises(ValueError):
            uniform(1.0, 1.0)

    def test_rejects_nonpositive_constant_density(self):
        with pytest.raises(ValueError):
            uniform(0.0, 1.0, density=0.0)

    def test_rejects_vanishing_density_function(self):
        with pytest.raises(ValueError):
            uniform(0.0, 1.0, density=lambda s: 0.0 * s)

    def test_intervals_are_sorted(self):
        S = LinearSet(axis_line(), ((2.0, 3.0), (0.0, 1.0)))
        assert S.intervals == ((0.0, 1.0), (2.0, 3.0))
        assert S.hull == (0.0, 3.0)

    def test_segment_endpoints(self):
        a, b = HPoint.from_gauss(0.7, 1.0), HPoint.from_gauss(1.1, 2.5)
        S = LinearSet.segment(a, b)
        (lo, hi), = S.intervals
        assert hi - lo == pytest.approx(dist(a, b), rel=1e-12)
        np.testing.assert_allclose(S.points(lo), a.vec, atol=1e-12)
        np.testing.assert_allclose(S.points(hi), b.vec, atol=1e-12)

    def test_restrict(self):
        S = LinearSet(axis_line(), ((0.0, 1.0), (2.0, 3.0)))
        assert S.restrict(0.5, 2.5).intervals == ((0.5, 1.0), (2.0, 2.5))


class TestMomentAboutPoint:
    @pytest.mark.parametrize("d", [0.1, 1.0, 5.0])
    def test_symmetric_segment_is_balanced_at_midpoint(self, d):
        assert linset_moment_about_point(uniform(-d / 2, d / 2), 0.0) == pytest.approx(0.0, abs=1e-12 * math.cosh(d))

    @pytest.mark.parametrize("d", [0.1, 1.0, 5.0])
    def test_segment_from_origin(self, d):
        assert linset_moment_about_point(uniform(0.0, d), 0.0) == pytest.approx(math.cosh(d) - 1.0, rel=1e-13)

    def test_linear_density(self):
        # integral of s sinh s on [0, 1] is [s cosh s - sinh s] = 1/e
        S = uniform(0.0, 1.0, density=lambda s: s)
        assert linset_moment_about_point(S, 0.0) == pytest.approx(math.exp(-1.0), rel=1e-13)

    def test_interior_point_splits_integrand(self):
        a = 0.37
        expected = (math.cosh(2.0 - a) - 1.0) - (math.cosh(a) - 1.0)
        assert linset_moment_about_point(uniform(0.0, 2.0), a) == pytest.approx(expected, rel=1e-13)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(-2.0, 2.0), st.floats(0.0, 2.0), st.floats(0.01, 1.5))
    def test_strictly_decreasing(self, lo, a, step):
        S = LinearSet(axis_line(), ((lo, lo + 1.0), (lo + 1.5, lo + 2.0)), density=lambda s: 1.0 + 0.5 * np.sin(s))
        assert linset_moment_about_point(S, lo + a + step) < linset_moment_about_point(S, lo + a)

    def test_reversal_negates(self):
        m = axis_line()
        S = uniform(0.2, 1.7, density=lambda s: 1 + s * s, carrier=m)
        R = LinearSet(m.reverse(), ((-1.7, -0.2),), density=lambda s: 1 + s * s)
        assert linset_moment_about_point(R, -0.5) == pytest.approx(-linset_moment_about_point(S, 0.5), rel=1e-13)


class TestCentroid:
    @pytest.mark.parametrize("lo, hi", [(0.0, 1.0), (-3.0, 4.0), (1.5, 1.6)])
    def test_uniform_segment_midpoint(self, lo, hi):
        assert linset_centroid(uniform(lo, hi)) == pytest.approx((lo + hi) / 2, abs=1e-12)

    def test_symmetric_pair(self):
        S = LinearSet(axis_line(), ((-3.0, -1.0), (1.0, 3.0)))
        assert linset_centroid(S) == pytest.approx(0.0, abs=1e-12)

    def test_two_intervals_against_riemann_root(self):
        from scipy.optimize import brentq

        expected = brentq(two_interval_moment, 0.0, 3.0, xtol=1e-14)
        S = LinearSet(axis_line(), ((0.0, 1.0), (2.0, 3.0)))
        assert linset_centroid(S) == pytest.approx(expected, abs=1e-9)
        assert expected == pytest.approx(1.5, abs=1e-12)

    def test_uneven_intervals_against_riemann_root(self):
        from scipy.optimize import brentq

        f = lambda a: riemann(lambda s: np.sinh(s - a), 0.0, 0.5) + riemann(lambda s: np.sinh(s - a), 2.0, 3.0)
        expected = brentq(f, 0.0, 3.0, xtol=1e-14)
        S = LinearSet(axis_line(), ((0.0, 0.5), (2.0, 3.0)))
        assert linset_centroid(S) == pytest.approx(expected, abs=1e-9)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(-3, 3), st.floats(0.05, 4), st.floats(0.1, 3), st.floats(-0.4, 0.4))
    def test_moment_vanishes_at_centroid(self, lo, length, c0, c1):
        S = uniform(lo, lo + length, density=lambda s: c0 + c1 * (s - lo) / length * c0)
        c = linset_centroid(S)
        scale = S.integrate(lambda s: np.ones_like(s)) * math.sinh(length)
        assert abs(linset_moment_about_point(S, c)) <= 1e-12 * max(scale, 1.0)
        assert lo <= c <= lo + length

    def test_orientation_independent(self):
        m = axis_line(1.1, HPoint.from_gauss(0.4, 2.0))
        S = LinearSet(m, ((0.0, 0.7), (1.0, 2.5)), density=lambda s: 2 + s)
        R = LinearSet(m.reverse(), ((-2.5, -1.0), (-0.7, 0.0)), density=lambda s: 2 - s)
        np.testing.assert_allclose(
            linset_point_mass(S).location.vec, linset_point_mass(R).location.vec, atol=1e-12
        )


class TestMass:
    @pytest.mark.parametrize("d", [0.1, 1.0, 5.0])
    def test_uniform_segment(self, d):
        assert linset_mass(uniform(0.0, d)) == pytest.approx(2 * math.sinh(d / 2), abs=1e-10)

    @pytest.mark.parametrize("eps", [1e-2, 1e-4, 1e-6])
    def test_point_like_interval(self, eps):
        assert linset_mass(uniform(0.3, 0.3 + eps, density=1.0 / eps)) == pytest.approx(1.0, abs=eps)

    def test_two_intervals_against_riemann(self):
        S = LinearSet(axis_line(), ((0.0, 1.0), (2.0, 3.0)))
        c = 1.5
        expected = riemann(lambda s: np.cosh(s - c), 0.0, 1.0) + riemann(lambda s: np.cosh(s - c), 2.0, 3.0)
        assert linset_mass(S) == pytest.approx(expected, abs=1e-10)

    def test_mass_exceeds_total_density(self):
        S = uniform(0.0, 2.0, density=lambda s: 1 + s)
        assert linset_mass(S) > S.integrate(lambda s: np.ones_like(s))


class TestMomentAboutLine:
    def test_carrier(self):
        m = axis_line(0.8, HPoint.from_gauss(0.5, 1.0))
        S = LinearSet(m, ((-1.0, 2.0),), density=lambda s: 1 + s * s)
        assert linset_moment_about_line(S, m) == pytest.approx(0.0, abs=1e-14)

    def test_perpendicular_through_centroid(self):
        m = axis_line(0.8, HPoint.from_gauss(0.5, 1.0))
        S = LinearSet(m, ((-1.0, 0.5), (0.9, 2.0)), density=lambda s: np.exp(s))
        c = HPoint.from_vector(S.points(linset_centroid(S)))
        perp = line_through_point(c, 0.8 + math.pi / 2)
        assert linset_moment_about_line(S, perp) == pytest.approx(0.0, abs=1e-10)

    @settings(max_examples=40, deadline=None)
    @given(
        st.floats(0, 1.5), st.floats(0, 2 * math.pi), st.floats(0, math.pi),
        st.floats(0, 1.5), st.floats(0, 2 * math.pi), st.floats(0, math.pi),
    )
    def test_equals_centroid_point_mass(self, r1, t1, a1, r2, t2, a2):
        S = LinearSet(
            line_through_point(HPoint.from_gauss(r1, t1), a1),
            ((-1.0, 0.2), (0.6, 1.4)),
            density=lambda s: 1.5 + np.cos(s),
        )
        m = line_through_point(HPoint.from_gauss(r2, t2), a2)
        direct = linset_moment_about_line(S, m)
        assert direct == pytest.approx(moment_about_line(linset_point_mass(S), m), abs=1e-9)


class TestDecomposition:
    @pytest.mark.parametrize("cuts", [(0.5,), (0.2, 1.3), (0.1, 0.4, 0.9, 1.6)])
    def test_fold_of_pieces(self, cuts):
        m = axis_line(2.0, HPoint.from_gauss(0.3, 0.4))
        S = LinearSet(m, ((-0.5, 2.0),), density=lambda s: 1.2 + np.sin(3 * s))
        edges = (-0.5,) + cuts + (2.0,)
        pieces = [linset_point_mass(S.restrict(a, b)) for a, b in zip(edges[:-1], edges[1:])]
        folded = pieces[0]
        for p in pieces[1:]:
            folded = combine(folded, p)
        whole = linset_point_mass(S)
        assert dist(folded.location, whole.location) < 1e-10
        assert folded.weight == pytest.approx(whole.weight, rel=1e-10)


class TestTransversal:
    def test_error_ratio_per_doubling(self):
        S = uniform(0.0, 2.5, density=lambda s: 0.5 + s)
        whole = linset_point_mass(S)
        errs = []
        for n in (4, 8, 16, 32, 64):
            approx = system_centroid(linset_transversal(S, n))
            errs.append(dist(approx.location, whole.location) + abs(approx.weight - whole.weight))
        ratios = [b / a for a, b in zip(errs[:-1], errs[1:])]
        assert all(r < 0.75 for r in ratios), ratios

    def test_cells_proportional_to_length(self):
        S = LinearSet(axis_line(), ((0.0, 1.0), (2.0, 5.0)))
        assert len(linset_transversal(S, 8)) == 8

    def test_rejects_zero_cells(self):
        with pytest.raises(ValueError):
            linset_transversal(uniform(0.0, 1.0), 0)


# ---------------------------------------------------------------------------
# pencil reduction
# ---------------------------------------------------------------------------

def scalene():
    rng = np.random.default_rng(3)
    th = np.sort(rng.uniform(0, 2 * math.pi, 3))
    return [HPoint.from_gauss(r, t) for r, t in zip(rng.uniform(0.2, 1.5, 3), th)]


class TestArchimedes:
    @pytest.mark.parametrize("pencil", [0.0, 1.0, 2.5, 4.4])
    def test_disk_about_diameter(self, pencil):
        c = HPoint.from_gauss(0.6, 1.2)
        L = Lamina(Disk(c, 1.3))
        m = line_through_point(c, pencil + 0.7)
        assert archimedes_moment(L, pencil, m).value == pytest.approx(0.0, abs=1e-6)

    @pytest.mark.parametrize("k", range(4))
    def test_matches_direct_quadrature_for_triangles(self, k):
        a, b, c = random_triangles(4, seed=77)[k]
        L = Lamina(GeodesicTriangle(a, b, c), RadialAffine(1.0, 0.3, ORIGIN))
        m = line_through_point(HPoint.from_gauss(0.4, 2.0 * k), 0.5 + k)
        direct = lamina_moment(L, m)
        sliced = archimedes_moment(L, 0.7 * k + 0.1, m)
        assert sliced.value == pytest.approx(direct.value, abs=1e-7)

    @pytest.mark.parametrize("pencil", [0.3, 3.0])
    def test_matches_direct_quadrature_for_disk_and_polygon(self, pencil):
        m = line_through_point(HPoint.from_gauss(0.9, 0.2), 1.0)
        for region in (Disk(HPoint.from_gauss(0.5, 2.0), 0.9), RegularPolygon(HPoint.from_gauss(0.3, 4.0), 5, 0.8)):
            L = Lamina(region)
            assert archimedes_moment(L, pencil, m).value == pytest.approx(lamina_moment(L, m).value, abs=1e-7)

    def test_matches_direct_quadrature_for_polar_graph(self):
        L = Lamina(PolarGraph(HPoint.from_gauss(0.3, 1.0), (0.8, 1.0, 0.7, 0.9, 1.1, 0.6)))
        m = line_through_point(ORIGIN, 0.4)
        assert archimedes_moment(L, 2.0, m).value == pytest.approx(lamina_moment(L, m).value, abs=1e-6)

    def test_empty_slices_are_none(self):
        a, b, c = scalene()
        L = Lamina(GeodesicTriangle(a, b, c))
        phi = ideal_endpoints(line_through(b, c))[1]
        xs = np.linspace(-3, 3, 7)
        assert any(pencil_slice(L, phi, x) is None for x in (-1e6, 1e6))
        assert all(pencil_slice(L, phi, x) is None or pencil_slice(L, phi, x).intervals for x in xs)

    def test_rejects_single_slice(self):
        L = Lamina(Disk(ORIGIN, 1.0))
        with pytest.raises(ValueError):
            archimedes_moment(L, 0.0, axis_line(), slices=1)


class TestMedianSlices:
    """For a uniform scalene triangle, slicing by the pencil through the
    ideal point of BC does not balance the median AD: the median point of a
    slice is not its midpoint, so the slice moments about AD do not vanish.
    The reduction itself agrees with direct quadrature."""

    def setup_method(self):
        self.a, self.b, self.c = scalene()
        self.L = Lamina(GeodesicTriangle(self.a, self.b, self.c))
        self.median = line_through(self.a, midpoint(self.b, self.c))
        self.pencil = ideal_endpoints(line_through(self.b, self.c))[1]

    def slices(self, weighted):
        out = []
        for x in np.linspace(-2.0, 2.0, 81):
            s = pencil_slice(self.L, self.pencil, x, weighted=weighted)
            if s is not None and s.hull[1] - s.hull[0] > 0.05:
                out.append(s)
        assert len(out) >= 3
        return out

    def test_reduction_matches_direct_moment(self):
        sliced = archimedes_moment(self.L, self.pencil, self.median)
        direct = lamina_moment(self.L, self.median)
        assert sliced.value == pytest.approx(direct.value, abs=1e-10)
        assert abs(direct.value) > 1e-3

    def test_median_does_not_bisect_slices(self):
        for s in self.slices(weighted=False):
            g = intersect(s.carrier, self.median)
            at = float(s.carrier.arclength(g.vec))
            lo, hi = s.hull
            assert abs((at - lo) - (hi - at)) > 1e-3

    @pytest.mark.parametrize("weighted", [False, True])
    def test_slice_moments_about_median_nonzero(self, weighted):
        moments = [linset_moment_about_line(s, self.median) for s in self.slices(weighted)]
        assert max(abs(v) for v in moments) > 1e-3


class TestPencilSlice:
    def test_disk_slice_symmetric_about_perpendicular(self):
        L = Lamina(Disk(ORIGIN, 1.0))
        s = pencil_slice(L, 0.0, 0.0, weighted=False)
        assert s is not None
        c = HPoint.from_vector(s.points(linset_centroid(s)))
        # the slice through the centre is a diameter
        assert dist(c, ORIGIN) < 1e-10

    def test_weighted_density_is_divided_by_height(self):
        L = Lamina(Disk(ORIGIN, 1.0))
        plain = pencil_slice(L, 0.0, 0.1, weighted=False)
        weighted = pencil_slice(L, 0.0, 0.1, weighted=True)
        assert plain.intervals == weighted.intervals
        s = np.array([sum(plain.hull) / 2])
        assert not np.allclose(plain.lam(s), weighted.lam(s))
