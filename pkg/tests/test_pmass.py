import itertools
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from hypermass.errors import CoincidentPoints, EqualWeights, NoExternalCentroid
from hypermass.hcore import (
    HPoint,
    dist,
    foot_of_perpendicular,
    line_through,
    line_through_point,
    midpoint,
    point_along,
    signed_sinh_dist,
)
from hypermass.pmass import (
    LeverForce,
    PointMass,
    PointMassSystem,
    combine,
    external_centroid,
    is_balanced,
    lever_resultant,
    moment_about_line,
    moment_about_point,
    system_centroid,
    system_mass_direct,
    system_moment,
    unsigned_moment,
)

angle = st.floats(-math.pi, math.pi)


@st.composite
def points(draw, rmax=3.0):
    return HPoint.from_gauss(draw(st.floats(0.0, rmax)), draw(angle))


@st.composite
def masses(draw, rmax=3.0):
    return PointMass(draw(points(rmax)), draw(st.floats(0.01, 100.0)))


@st.composite
def lines(draw):
    a, b = draw(points(2.5)), draw(points(2.5))
    assume(dist(a, b) > 1e-3)
    return line_through(a, b)


def bisect(f, lo, hi, tol=1e-14, iters=200):
    """Plain bisection for a sign change of ``f`` on ``[lo, hi]``."""
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


def internal_oracle(x, y, d):
    """Offset ``t`` from X of the balance point and the weight from the defining equations."""
    t = bisect(lambda t: x * math.sinh(t) - y * math.sinh(d - t), 0.0, d)
    return t, x * math.cosh(t) + y * math.cosh(d - t)


class TestMoments:
    def test_point_definitions(self):
        x = HPoint.from_gauss(1.0, 0.3)
        assert moment_about_point(PointMass(x, 2.0), x) == 0.0
        assert moment_about_point(PointMass(x, 2.0), HPoint.from_gauss(2.0, 0.3)) == pytest.approx(
            2 * math.sinh(1.0))

    @given(masses(), points())
    def test_point_linear_in_weight(self, p, n):
        a = moment_about_point(p, n)
        assert moment_about_point(PointMass(p.location, 2 * p.weight), n) == pytest.approx(2 * a)

    @given(masses(), lines())
    def test_line_against_foot(self, p, m):
        v = moment_about_line(p, m)
        assert moment_about_line(p, m.reverse()) == -v
        f = foot_of_perpendicular(m, p.location)
        assert abs(v) == pytest.approx(p.weight * math.sinh(dist(p.location, f)), rel=1e-9, abs=1e-10)

    def test_on_line(self):
        a, b = HPoint.from_gauss(1, 0), HPoint.from_gauss(1, 2)
        assert abs(moment_about_line(PointMass(a, 3.0), line_through(a, b))) < 1e-14

    def test_weight_validation(self):
        with pytest.raises(ValueError):
            PointMass(HPoint.origin(), 0.0)
        with pytest.raises(ValueError):
            PointMass(HPoint.origin(), float("nan"))


class TestCombine:
    def test_coincident(self):
        p = HPoint.from_gauss(1.0, 1.0)
        z = combine(PointMass(p, 1.0), PointMass(p, 2.5))
        assert z.location == p and z.weight == 3.5

    @given(points(), points(), st.floats(0.1, 10))
    def test_equal_weights(self, a, b, w):
        assume(dist(a, b) > 1e-6)
        z = combine(PointMass(a, w), PointMass(b, w))
        assert dist(z.location, midpoint(a, b)) < 1e-10
        assert z.weight == pytest.approx(2 * w * math.cosh(dist(a, b) / 2), rel=1e-12)

    def test_bisection_oracle_example(self):
        a, b = HPoint.origin(), HPoint.from_gauss(1.0, 0.0)
        z = combine(PointMass(a, 1.0), PointMass(b, 2.0))
        t, w = internal_oracle(1.0, 2.0, 1.0)
        assert dist(a, z.location) == pytest.approx(t, abs=1e-12)
        assert z.weight == pytest.approx(w, rel=1e-13)

    @settings(max_examples=300)
    @given(masses(), masses())
    def test_defining_equations(self, p, q):
        d = dist(p.location, q.location)
        assume(d > 1e-6)
        z = combine(p, q)
        t, w = internal_oracle(p.weight, q.weight, d)
        xz, yz = dist(p.location, z.location), dist(q.location, z.location)
        assert xz == pytest.approx(t, abs=1e-10)
        assert xz + yz == pytest.approx(d, abs=1e-9)
        assert p.weight * math.sinh(xz) == pytest.approx(q.weight * math.sinh(yz), rel=1e-8, abs=1e-9)
        assert z.weight == pytest.approx(w, rel=1e-10)

    @given(masses(), masses())
    def test_commutative_exactly(self, p, q):
        a, b = combine(p, q), combine(q, p)
        assert a.location == b.location and a.weight == b.weight

    @settings(max_examples=300)
    @given(masses(), masses(), masses())
    def test_associative(self, p, q, r):
        a = combine(combine(p, q), r)
        b = combine(p, combine(q, r))
        assert dist(a.location, b.location) < 1e-10
        assert abs(a.weight - b.weight) <= 1e-12 * a.weight

    @settings(max_examples=300)
    @given(masses(), masses(), lines())
    def test_moment_additivity(self, p, q, m):
        z = combine(p, q)
        lhs = moment_about_line(z, m)
        rhs = moment_about_line(p, m) + moment_about_line(q, m)
        scale = abs(moment_about_line(p, m)) + abs(moment_about_line(q, m)) + z.weight
        assert abs(lhs - rhs) <= 1e-10 * scale

    @given(masses(), masses())
    def test_mutual_balance(self, p, q):
        assume(dist(p.location, q.location) > 1e-3)
        z = combine(p, q)
        trio = [p, q, z]
        for i, j, k in itertools.permutations(range(3)):
            a = moment_about_point(trio[i], trio[k].location)
            b = moment_about_point(trio[j], trio[k].location)
            if k == 2:
                assert a == pytest.approx(b, rel=1e-8, abs=1e-9)


class TestExternalCentroid:
    def test_no_finite_point_below_exp_d(self):
        a, b = HPoint.origin(), HPoint.from_gauss(1.0, 0.0)
        # weight ratio 2 < e: x sinh(t) = y sinh(t + d) has no root
        with pytest.raises(NoExternalCentroid):
            external_centroid(PointMass(a, 2.0), PointMass(b, 1.0))

    def test_root_finder_oracle(self):
        a, b = HPoint.origin(), HPoint.from_gauss(1.0, 0.0)
        z = external_centroid(PointMass(a, 4.0), PointMass(b, 1.0))
        # Z beyond X at distance t: 4 sinh t = sinh(t + 1)
        t = bisect(lambda t: 4 * math.sinh(t) - math.sinh(t + 1), 0.0, 5.0)
        assert dist(a, z.location) == pytest.approx(t, abs=1e-10)
        assert z.location.u < 0  # on the far side of X from Y
        assert z.weight == pytest.approx(abs(4 * math.cosh(t) - math.cosh(t + 1)), rel=1e-10)

    def test_equal_weights(self):
        with pytest.raises(EqualWeights):
            external_centroid(PointMass(HPoint.origin(), 1.0), PointMass(HPoint.from_gauss(1, 0), 1.0))

    def test_coincident(self):
        with pytest.raises(CoincidentPoints):
            external_centroid(PointMass(HPoint.origin(), 2.0), PointMass(HPoint.origin(), 1.0))

    @settings(max_examples=200)
    @given(masses(2.0), masses(2.0))
    def test_defining_equations(self, p, q):
        d = dist(p.location, q.location)
        assume(d > 1e-3)
        r = max(p.weight, q.weight) / min(p.weight, q.weight)
        assume(r > math.exp(d) * (1 + 1e-6))
        z = external_centroid(p, q)
        xz, yz = dist(p.location, z.location), dist(q.location, z.location)
        assert abs(abs(xz - yz) - d) < 1e-8
        assert abs(signed_sinh_dist(line_through(p.location, q.location), z.location)) < 1e-9 * z.location.t
        assert p.weight * math.sinh(xz) == pytest.approx(q.weight * math.sinh(yz), rel=1e-8)
        assert z.weight == pytest.approx(abs(p.weight * math.cosh(xz) - q.weight * math.cosh(yz)),
                                         rel=1e-8, abs=1e-9)

    @settings(max_examples=100)
    @given(masses(2.0), masses(2.0))
    def test_lines_with_equal_moments(self, p, q):
        assume(dist(p.location, q.location) > 1e-2)
        z = combine(p, q)
        for k in range(6):
            m = line_through_point(z.location, k * math.pi / 6 + 0.1)
            a = p.weight * abs(signed_sinh_dist(m, p.location))
            b = q.weight * abs(signed_sinh_dist(m, q.location))
            assert a == pytest.approx(b, rel=1e-8, abs=1e-9)


class TestSystems:
    def test_single(self):
        p = PointMass(HPoint.from_gauss(1, 1), 2.0)
        assert system_centroid([p]) == p
        assert system_mass_direct([p], p.location) == 2.0

    def test_empty(self):
        with pytest.raises(ValueError):
            PointMassSystem([])

    def test_equal_vertex_masses_at_medians(self):
        a, b, c = HPoint.from_gauss(1, 0.1), HPoint.from_gauss(1.6, 2.0), HPoint.from_gauss(0.7, 4.0)
        z = system_centroid([PointMass(p, 1.0) for p in (a, b, c)])
        for p, q, r in ((a, b, c), (b, c, a), (c, a, b)):
            m = line_through(p, midpoint(q, r))
            assert abs(signed_sinh_dist(m, z.location)) < 1e-12

    def test_permutations(self):
        rng = np.random.default_rng(3)
        s = [PointMass(HPoint.from_gauss(*rng.uniform([0, -3], [3, 3])), rng.uniform(0.1, 5)) for _ in range(6)]
        base = system_centroid(s)
        for _ in range(20):
            z = system_centroid([s[i] for i in rng.permutation(6)])
            assert dist(z.location, base.location) < 1e-9
            assert abs(z.weight - base.weight) < 1e-9 * base.weight

    @settings(max_examples=100)
    @given(st.lists(masses(), min_size=1, max_size=50))
    def test_mass_formula(self, s):
        z = system_centroid(s)
        assert system_mass_direct(s, z.location) == pytest.approx(z.weight, rel=1e-9)

    @given(masses(), masses())
    def test_two_mass_formula(self, p, q):
        z = combine(p, q)
        assert system_mass_direct([p, q], z.location) == pytest.approx(z.weight, rel=1e-10)

    @settings(max_examples=100)
    @given(st.lists(masses(), min_size=1, max_size=12), lines())
    def test_moment_of_centroid(self, s, m):
        z = system_centroid(s)
        assert system_moment(s, m) == pytest.approx(moment_about_line(z, m),
                                                    abs=1e-9 * (unsigned_moment(s, m) + z.weight))

    @settings(max_examples=100)
    @given(st.lists(masses(), min_size=2, max_size=12), angle)
    def test_balanced_through_centroid(self, s, phi):
        z = system_centroid(s)
        m = line_through_point(z.location, phi)
        assert abs(system_moment(s, m)) < 1e-9 * (unsigned_moment(s, m) + z.weight)
        assert is_balanced(s, m, 1e-8)
        off = line_through_point(point_along(z.location, foot_or_far(z.location, m), 0.1), phi)
        assert not is_balanced(s, off, 1e-8)

    def test_balanced_for_nearly_coincident_pair(self):
        s = [PointMass(HPoint(1.0, 0.0, 0.0), 1.0), PointMass(HPoint(1.0, 5e-324, 0.0), 1.0)]
        m = line_through_point(system_centroid(s).location, 1.0)
        assert is_balanced(s, m, 1e-8)

    def test_symmetric_pair(self):
        m = line_through(HPoint.from_gauss(1, math.pi), HPoint.from_gauss(1, 0))
        s = [PointMass(HPoint.from_gauss(0.8, 0.5), 1.0), PointMass(HPoint.from_gauss(0.8, -0.5), 1.0)]
        assert is_balanced(s, m, 1e-12)
        with pytest.raises(ValueError):
            is_balanced(s, m, 0.0)

    def test_moment_determines_centroid(self):
        rng = np.random.default_rng(5)
        s1 = [PointMass(HPoint.from_gauss(*rng.uniform([0, -3], [2, 3])), rng.uniform(0.5, 2)) for _ in range(4)]
        z = system_centroid(s1)
        # a two-mass system with the same centroid point-mass
        a = point_along(z.location, HPoint.from_gauss(3, 1.0), 0.7)
        b = point_along(a, z.location, 1.4)
        pair = [PointMass(a, 1.0), PointMass(b, 1.0)]
        scale = z.weight / system_centroid(pair).weight
        pair = [PointMass(a, scale), PointMass(b, scale)]
        s3 = s1[:-1] + [PointMass(s1[-1].location, s1[-1].weight * 1.01)]
        diff_same, diff_other = 0.0, 0.0
        for _ in range(100):
            m = line_through(HPoint.from_gauss(*rng.uniform([0, -3], [2, 3])),
                             HPoint.from_gauss(*rng.uniform([0, -3], [2, 3])))
            diff_same = max(diff_same, abs(system_moment(s1, m) - system_moment(pair, m)))
            diff_other = max(diff_other, abs(system_moment(s1, m) - system_moment(s3, m)))
        assert dist(system_centroid(pair).location, z.location) < 1e-9
        assert diff_same < 1e-9 * z.weight
        assert diff_other > 1e-4


def foot_or_far(p, m):
    """A point off ``p`` on the perpendicular to ``m`` (or any other point if ``p`` is on it)."""
    f = foot_of_perpendicular(m, p)
    if dist(f, p) > 1e-6:
        return f
    n = m.normal
    return HPoint.from_vector(np.cosh(1.0) * p.vec + np.sinh(1.0) * n)


class TestLever:
    def test_symmetric(self):
        e, f = lever_resultant(LeverForce(2.0, -0.8), LeverForce(2.0, 0.8))
        assert abs(e) < 1e-15
        assert f == pytest.approx(4 * math.cosh(0.8), rel=1e-14)

    def test_oracle(self):
        e, f = lever_resultant(LeverForce(1.0, 0.0), LeverForce(2.0, 1.0))
        t, w = internal_oracle(1.0, 2.0, 1.0)
        assert e == pytest.approx(t, abs=1e-12)
        assert f == pytest.approx(w, rel=1e-13)

    @given(st.floats(0.1, 10), st.floats(0.1, 10), st.floats(-2, 2), st.floats(0.01, 3))
    def test_lever_law(self, f1, f2, c, gap):
        e, f3 = lever_resultant(LeverForce(f1, c), LeverForce(f2, c + gap))
        c1, c2 = e - c, c + gap - e
        assert f1 * math.sinh(c1) == pytest.approx(f2 * math.sinh(c2), rel=1e-9, abs=1e-11)
        assert f3 == pytest.approx(f1 * math.cosh(c1) + f2 * math.cosh(c2), rel=1e-12)
        # moment of the resultant about A equals F2 sinh(c1 + c2)
        assert f3 * math.sinh(c1) == pytest.approx(f2 * math.sinh(c1 + c2), rel=1e-9, abs=1e-11)

    def test_magnitude_validation(self):
        with pytest.raises(ValueError):
            LeverForce(0.0, 1.0)
