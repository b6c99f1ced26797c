import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from valencelab.cpoly import BivarPoly, UnivarPoly
from valencelab.errors import InfiniteValence, NotCoprime, ResidualFailure
from valencelab.settings import use_settings
from valencelab.verify import extremal_polynomials, hausdorff
from valencelab.zerocount import (
    PRESERVING,
    REVERSING,
    SINGULAR,
    classify_zero,
    find_zeros_grid,
    logharmonic_radius,
    newton_polish,
    normalized_residual,
    solve_logharmonic,
    solve_polyanalytic,
)


def mono(k, c=1.0):
    return UnivarPoly.monomial(k, c)


class TestLogharmonic:
    @pytest.mark.parametrize("n, m", [(2, 1), (3, 1), (5, 2), (6, 5)])
    def test_minimal_valence(self, n, m):
        rep = solve_logharmonic(mono(n), mono(m), 1)
        roots = np.exp(2j * np.pi * np.arange(n - m) / (n - m))
        assert rep.count == n - m
        assert hausdorff(rep.locations, roots) <= 1e-8

    def test_z3_zbar(self):
        rep = solve_logharmonic(mono(3), mono(1), 1)
        assert sorted(z.real for z in rep.locations) == pytest.approx([-1, 1])
        assert rep.lower_bound == 2

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_extremal_count(self, n):
        rep = solve_logharmonic(*extremal_polynomials(n))
        assert rep.count == 3 * n - 3
        assert rep.bounds_satisfied
        assert rep.three_n_bound == 3 * n - 1

    def test_extremal_orientations(self):
        rep = solve_logharmonic(*extremal_polynomials(3))
        # P = p conj(q) - w has the opposite orientation to conj(r) - z
        assert (rep.n_plus, rep.n_minus) == (4, 2)

    def test_constant_multiple(self):
        q = UnivarPoly([1, 0, 1])
        with pytest.raises(InfiniteValence):
            solve_logharmonic(q * 2, q, 1)

    def test_negative_multiple_is_empty(self):
        """-|q|^2 = 1 has no solutions even though P and Q share a factor."""
        q = UnivarPoly([1, 0, 1])
        assert solve_logharmonic(q * -2, q, 1).count == 0

    @pytest.mark.parametrize("c", [1 + 1e-3j, 0.5 + 0.3j])
    @pytest.mark.parametrize("d", [1, 2, 3, 4])
    def test_nonreal_multiple_is_empty(self, rng, c, d):
        """Rank-deficient least-squares minima of |P| are neither zeros nor failures."""
        q = UnivarPoly(rng.normal(size=d + 1) + 1j * rng.normal(size=d + 1))
        assert solve_logharmonic(q * c, q, 1).count == 0

    def test_w_zero(self):
        rep = solve_logharmonic(UnivarPoly([0, 1, 1]), mono(1), 0)
        assert sorted(z.real for z in rep.locations) == pytest.approx([-1, 0])

    def test_report_dict_schema(self):
        d = solve_logharmonic(mono(3), mono(1), 1).to_dict()
        assert set(d) == {"zeros", "count", "n_plus", "n_minus", "bounds", "bounds_satisfied"}
        assert set(d["zeros"][0]) == {"re", "im", "orientation", "order", "jacobian", "residual"}
        assert set(d["bounds"]) == {"bezout", "resultant", "bh", "lower"}

    def test_residual_failure_on_absurd_tolerance(self):
        with use_settings(tol_accept=1e-22):
            with pytest.raises(ResidualFailure):
                solve_logharmonic(*extremal_polynomials(3))


class TestPolyanalytic:
    def test_z_zbar2(self):
        rep = solve_polyanalytic(BivarPoly([[-1, 0, 0], [0, 0, 1]]))
        assert rep.count == 1 and rep.locations[0] == pytest.approx(1)

    def test_z2_zbar(self):
        rep = solve_polyanalytic(BivarPoly([[-1, 0], [0, 0], [0, 1]]))
        assert rep.count == 1 and rep.locations[0] == pytest.approx(1)

    def test_circle_not_coprime(self):
        with pytest.raises(NotCoprime):
            solve_polyanalytic(BivarPoly([[-1, 0], [0, 1]]))

    def test_general_grid_against_oracle(self, rng):
        for _ in range(5):
            P = BivarPoly(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
            rep = solve_polyanalytic(P)
            assert rep.count <= 2 * 2 + 2 * 2
            for z in rep.locations:
                assert normalized_residual(P, z) <= 1e-7


class TestClassify:
    def test_reversing(self):
        rec = classify_zero(BivarPoly([[-1, 0, 0], [0, 0, 1]]), 1)
        assert rec.jacobian == pytest.approx(-3)
        assert (rec.orientation, rec.order) == (REVERSING, -1)

    def test_analytic(self):
        rec = classify_zero(BivarPoly([[-2], [1]]), 2)
        assert rec.jacobian == pytest.approx(1)
        assert (rec.orientation, rec.order) == (PRESERVING, 1)

    def test_singular(self):
        # |z|^2 - 1 has a degenerate jacobian along the whole circle
        rec = classify_zero(BivarPoly([[-1, 0], [0, 1]]), 1)
        assert rec.orientation == SINGULAR and rec.degenerate


class TestNewton:
    def test_polish_converges(self):
        P = BivarPoly.from_logharmonic(mono(3), mono(1), 1)
        z = newton_polish(P, [0.9 + 0.1j])
        assert z[0] == pytest.approx(1, abs=1e-12)

    @given(st.floats(0.5, 1.5), st.floats(-0.4, 0.4))
    def test_residual_never_increases(self, x, y):
        P = BivarPoly.from_logharmonic(mono(3), mono(1), 1)
        z0 = complex(x, y)
        assert normalized_residual(P, newton_polish(P, [z0]))[0] <= normalized_residual(P, z0)


class TestGridOracle:
    def test_circle_samples(self):
        pts = find_zeros_grid(BivarPoly([[-1, 0], [0, 1]]), (-2, 2, -2, 2), grid_n=10)
        assert len(pts) > 3
        assert np.abs(np.abs(pts) - 1).max() <= 1e-8

    def test_extremal_agrees(self):
        p, q, w = extremal_polynomials(3)
        rep = solve_logharmonic(p, q, w)
        R = logharmonic_radius(p, q, w)
        grid = find_zeros_grid(BivarPoly.from_logharmonic(p * (1 / w), q, 1), (-R, R, -R, R), 60)
        assert hausdorff(rep.locations, grid) <= 1e-6

    def test_single_zero(self):
        pts = find_zeros_grid(BivarPoly([[-1, 0], [0, 0], [0, 1]]), (-2, 2, -2, 2))
        assert len(pts) == 1 and pts[0] == pytest.approx(1)
