import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from valencelab import antidyn as ad
from valencelab.antidyn import SpherePoint, chordal
from valencelab.argprin import jacobian_inverse_map
from valencelab.cpoly import UnivarPoly
from valencelab.errors import CommonFactor, FatouViolation, InvalidDegree, InvalidParameter
from valencelab.verify import hausdorff
from valencelab.zerocount import solve_polyanalytic

INF = SpherePoint.infinity()


class TestSpherePoint:
    def test_recharts_outside_radius(self):
        x = SpherePoint.finite(10)
        assert x.chart == ad.RECIPROCAL and x.value == pytest.approx(0.1)
        assert x.to_complex() == pytest.approx(10)

    def test_infinity(self):
        assert INF.is_infinity
        assert SpherePoint.parse(complex("inf")).is_infinity

    def test_chordal_to_infinity(self):
        assert chordal(SpherePoint.finite(0), INF) == pytest.approx(2)
        assert chordal(SpherePoint.finite(1), INF) == pytest.approx(np.sqrt(2))

    @given(st.floats(-1.9, 1.9), st.floats(-1.9, 1.9), st.floats(-1.9, 1.9), st.floats(-1.9, 1.9))
    def test_chordal_matches_formula(self, a, b, c, d):
        z, w = complex(a, b), complex(c, d)
        expected = 2 * abs(z - w) / np.sqrt((1 + abs(z) ** 2) * (1 + abs(w) ** 2))
        assert chordal(SpherePoint.finite(z), SpherePoint.finite(w)) == pytest.approx(expected, abs=1e-12)


class TestFamilies:
    def test_extremal(self):
        r = ad.extremal_family(3)
        assert r.numerator == UnivarPoly([-2])
        assert r.denominator == UnivarPoly([0, -3, 0, 1])
        assert ad.extremal_family(2).denominator == UnivarPoly([0, -2, 1])

    def test_extremal_invalid(self):
        with pytest.raises(InvalidDegree):
            ad.extremal_family(1)

    def test_sharpness_c_zero_fixed_points(self):
        r = ad.sharpness_family(3, 2.0, 0.0)
        assert ad.sharpness_radius(3, 2.0) == pytest.approx(1)
        for z in (1j, -1j):
            assert r(z) == pytest.approx(np.conj(z))

    @pytest.mark.parametrize("A, C", [(0.0, 0.5), (-1.0, 0.5), (1.0, -0.1)])
    def test_sharpness_invalid(self, A, C):
        with pytest.raises(InvalidParameter):
            ad.sharpness_family(3, A, C)

    def test_common_factor(self):
        with pytest.raises(CommonFactor):
            ad.RationalMap(UnivarPoly([-1, 1]), UnivarPoly([-1, 0, 1]))

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    @pytest.mark.parametrize("A", [0.5, 1, 10, 100])
    def test_critical_and_fixed_when_c_zero(self, n, A):
        r = ad.sharpness_family(n, A, 0.0)
        R = ad.sharpness_radius(n, A)
        W = r.derivative_numerator()
        for k in range(n - 1):
            z = R * np.exp(1j * np.pi * (1 + 2 * k) / (n - 1))
            assert abs(r(z) - np.conj(z)) <= 1e-8 * max(1, abs(z))
            assert abs(W(z)) / abs(r.denominator(z)) ** 2 <= 1e-8


class TestEvalSphere:
    def test_extremal_two_cycle(self):
        r = ad.extremal_family(3)
        assert ad.eval_sphere(r, INF).to_complex() == 0
        assert ad.eval_sphere(r, SpherePoint.finite(0)).is_infinity

    def test_extremal_fixed(self):
        assert ad.eval_sphere(ad.extremal_family(3), SpherePoint.finite(1)).to_complex() == pytest.approx(1)

    def test_mobius(self):
        r = ad.RationalMap(UnivarPoly([1, 2]), UnivarPoly([3, 1]))
        z = 0.3 + 0.4j
        assert ad.eval_sphere(r, SpherePoint.finite(z)).to_complex() == pytest.approx((2 * z + 1) / (z + 3))
        assert ad.eval_sphere(r, INF).to_complex() == pytest.approx(2)

    @given(st.floats(0.5, 2.0), st.floats(0, 2 * np.pi))
    def test_chart_independence(self, radius, angle):
        r = ad.sharpness_family(3, 100.0, 0.68)
        z = radius * np.exp(1j * angle)
        a = ad.eval_sphere(r, SpherePoint(ad.FINITE, z))
        b = ad.eval_sphere(r, SpherePoint(ad.RECIPROCAL, 1 / z))
        assert chordal(a, b) <= 1e-9


class TestCriticalPoints:
    def test_extremal3(self):
        crit = ad.critical_points(ad.extremal_family(3))
        finite = sorted(x.to_complex().real for x, m in crit if not x.is_infinity)
        assert finite == pytest.approx([-1, 1])
        assert [m for x, m in crit if x.is_infinity] == [2]

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_inverse_family_census(self, rng, n):
        """For 1/p - conj(b): infinity of order n-1 plus the zeros of p'."""
        p = UnivarPoly(rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1))
        r = ad.inverse_poly_map(p, 0.3 - 0.2j)
        crit = ad.critical_points(r)
        assert sum(m for _, m in crit) == 2 * n - 2
        assert [m for x, m in crit if x.is_infinity] == [n - 1]
        finite = [x.to_complex() for x, _ in crit if not x.is_infinity]
        from valencelab.cpoly import all_roots

        if n > 2:
            assert hausdorff(finite, all_roots(p.derivative()).locations) <= 1e-8

    def test_degree_one_rejected(self):
        with pytest.raises(InvalidDegree):
            ad.critical_points(ad.RationalMap(UnivarPoly([0, 2]), UnivarPoly([1])))


class TestIteration:
    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_extremal_infinity_two_cycle(self, n):
        orbit = ad.iterate_antirational(ad.extremal_family(n), INF)
        assert orbit.status == ad.CYCLE and orbit.period == 2
        assert {x.is_infinity for x in orbit.cycle_points()} == {True, False}

    def test_extremal_fixed_critical(self):
        orbit = ad.iterate_antirational(ad.extremal_family(3), SpherePoint.finite(1))
        assert orbit.status == ad.CONVERGED
        assert orbit.limit.to_complex() == pytest.approx(1)

    def test_sharpness_infinity_slow_convergence(self):
        """Slow alternating approach to 2.31 is not mistaken for a two-cycle."""
        orbit = ad.iterate_antirational(ad.sharpness_family(3, 100.0, 0.68), INF)
        assert orbit.status in (ad.CONVERGED, ad.EXHAUSTED)
        assert orbit.points[-1].to_complex() == pytest.approx(2.3103, abs=1e-3)

    def test_exhausted(self):
        orbit = ad.iterate_antirational(ad.sharpness_family(3, 100.0, 0.68), INF, max_iter=5)
        assert orbit.status == ad.EXHAUSTED and len(orbit.points) == 6


class TestFixedPoints:
    def test_extremal3_superattracting(self):
        fps = ad.attracting_fixed_points(ad.extremal_family(3))
        assert sorted(f.location.to_complex().real for f in fps) == pytest.approx([-1, 1])
        assert all(f.type == ad.SUPERATTRACTING for f in fps)

    def test_sharpness3(self):
        fps = ad.attracting_fixed_points(ad.sharpness_family(3, 100.0, 0.68))
        locs = [f.location.to_complex() for f in fps]
        assert hausdorff(locs, [1.257 + 2.069j, 1.257 - 2.069j, 2.31]) <= 1e-2

    def test_infinity_fixed(self):
        # r = z^2 + 1/2 fixes infinity superattractingly
        r = ad.RationalMap(UnivarPoly([0.5, 0, 1]), UnivarPoly([1]))
        inf = [f for f in ad.fixed_points(r) if f.location.is_infinity]
        assert len(inf) == 1 and inf[0].type == ad.SUPERATTRACTING

    def test_duality_with_zero_counting(self, rng):
        """Fixed points are the zeros of conj(r) - z, attracting exactly when sense-preserving."""
        p = UnivarPoly(rng.normal(size=4) + 1j * rng.normal(size=4))
        b = 0.4 + 0.1j
        r = ad.inverse_poly_map(p, b)
        fps = ad.fixed_points(r)
        zeros = solve_polyanalytic(ad.fixed_point_equation(r)).locations
        assert hausdorff([f.location.to_complex() for f in fps], zeros) <= 1e-6
        for f in fps:
            jac, _ = jacobian_inverse_map(p, f.location.to_complex())
            assert (jac > 0) == f.is_attracting

    def test_multiplier_types(self):
        assert ad._classify_multiplier(0.0) == ad.SUPERATTRACTING
        assert ad._classify_multiplier(0.5) == ad.ATTRACTING
        assert ad._classify_multiplier(1.0) == ad.INDIFFERENT
        assert ad._classify_multiplier(1.5) == ad.REPELLING


class TestFatou:
    def test_extremal3(self):
        rep = ad.fatou_check(ad.extremal_family(3))
        assert rep.attracting_count == 2
        inf = [c for c in rep.captures if c.critical_point.is_infinity][0]
        assert inf.status == ad.CYCLE and inf.fixed_point is None
        assert all(len(f.captured_critical_points) == 1 for f in rep.fixed_points)

    def test_sharpness3_captures(self):
        rep = ad.fatou_check(ad.sharpness_family(3, 100.0, 0.68))
        locs = [f.location.to_complex() for f in rep.fixed_points]
        for c in rep.captures:
            target = locs[c.fixed_point]
            if c.critical_point.is_infinity:
                assert target == pytest.approx(2.3103, abs=1e-3)
            else:
                # the imaginary-axis critical points go to the nearer of the conjugate pair
                assert np.sign(target.imag) == np.sign(c.critical_point.to_complex().imag)

    def test_no_attracting_points_passes(self):
        # z -> conj(2/z^2): fixed points on |z| = 2^(1/3) are repelling
        r = ad.RationalMap(UnivarPoly([2]), UnivarPoly([0, 0, 1]))
        rep = ad.fatou_check(r)
        assert rep.attracting_count == 0 and rep.passed

    def test_violation_raised(self, monkeypatch):
        monkeypatch.setattr(ad, "iterate_antirational", lambda r, x: ad.Orbit((SpherePoint.finite(0.5j),), ad.EXHAUSTED))
        with pytest.raises(FatouViolation):
            ad.fatou_check(ad.extremal_family(3))

    def test_degree_one_rejected(self):
        with pytest.raises(InvalidDegree):
            ad.fatou_check(ad.RationalMap(UnivarPoly([0, 2]), UnivarPoly([1])))
