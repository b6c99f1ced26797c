import numpy as np
import pytest

from valencelab.argprin import (
    Contour,
    enclosing_radius,
    inverse_map,
    inverse_map_zeros,
    ledger,
    pole_orders,
    winding_number,
)
from valencelab.cpoly import UnivarPoly
from valencelab.errors import ContourTooClose, IsolationFailure, SingularZeroPresent

UNIT = Contour(0j, 1.0)


def extremal_inverse(n):
    """p with 1/conj(p) - z having the extremal zeros: p = (z^n/n - z) / w, w = -(n-1)/n."""
    p = UnivarPoly.monomial(n, 1 / n) - UnivarPoly.monomial(1)
    return p * (-n / (n - 1))


def sharpness_inverse(n, A):
    K = n * (A / (n - 1)) ** ((n - 1) / (n + 1))
    return (UnivarPoly.monomial(n) + UnivarPoly.monomial(1, K)) * (1 / A)


class TestWinding:
    def test_analytic_and_antianalytic(self):
        assert winding_number(lambda z: -z, UNIT) == 1
        assert winding_number(np.conj, UNIT) == -1

    def test_high_winding_needs_refinement(self):
        C = Contour(0j, 1.0, samples=8)
        assert winding_number(lambda z: z**5, C) == 5

    def test_off_center(self):
        assert winding_number(lambda z: z, Contour(3 + 0j, 1.0)) == 0

    def test_too_close(self):
        with pytest.raises(ContourTooClose):
            winding_number(lambda z: z - 1, UNIT)

    def test_large_circle_is_one(self):
        p = UnivarPoly([1, 2, 0.5])
        F = inverse_map(p, 0.3)
        R = enclosing_radius(p, 0.3, inverse_map_zeros(p, 0.3))
        assert winding_number(F, Contour(0j, R)) == 1
        assert winding_number(F, Contour(0j, 2 * R)) == 1

    def test_additivity(self, rng):
        """Large-contour winding is the sum over small circles about zeros and poles."""
        p = UnivarPoly(rng.normal(size=4) + 1j * rng.normal(size=4))
        b = 0.2 - 0.5j
        F = inverse_map(p, b)
        zeros = inverse_map_zeros(p, b)
        poles = pole_orders(p, b, zeros)
        total = -sum(k for _, k in poles)
        pts = zeros + [a for a, _ in poles]
        for z in zeros:
            gap = min(abs(z - o) for o in pts if o != z)
            total += winding_number(F, Contour(z, 0.4 * gap))
        R = enclosing_radius(p, b, zeros)
        assert winding_number(F, Contour(0j, R)) == total


class TestPoleOrders:
    def test_simple_poles(self):
        orders = pole_orders(UnivarPoly([0, -3, 0, 1]), 0.7)
        assert [k for _, k in orders] == [-1, -1, -1]

    def test_double_pole(self):
        orders = pole_orders(UnivarPoly([0, 0, 1]), 0.1j)
        assert len(orders) == 1
        assert orders[0][1] == -2

    def test_linear(self):
        assert pole_orders(UnivarPoly([-5, 1]), 1.0) == [(pytest.approx(5), -1)]

    def test_isolation_failure(self):
        with pytest.raises(IsolationFailure):
            pole_orders(UnivarPoly([-1, 1]), 0.3, zeros=[1 + 1e-6])


class TestLedger:
    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_extremal(self, n):
        L = ledger(extremal_inverse(n), 0.0)
        assert (L.winding, L.n_plus, L.n_minus, L.p_plus, L.p_minus) == (1, n - 1, 2 * n - 2, 0, n)
        assert L.balanced

    def test_sharpness3(self):
        L = ledger(sharpness_inverse(3, 100.0), -0.68)
        assert (L.n_plus, L.n_minus) == (3, 5)
        assert L.n_plus + L.n_minus == 8 and L.balanced

    def test_sharpness4(self):
        L = ledger(sharpness_inverse(4, 250.0), -0.86)
        assert (L.n_plus, L.n_minus) == (4, 7)

    def test_random_identity(self, rng):
        for _ in range(5):
            n = int(rng.integers(2, 6))
            p = UnivarPoly(rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1))
            b = complex(rng.normal(), rng.normal())
            L = ledger(p, b)
            assert L.balanced
            assert L.n_minus == L.n_plus + n - 1
            assert L.n_plus <= n
            assert L.n_plus + L.n_minus <= 3 * n - 1

    def test_small_contour_counts_only_inside(self):
        L = ledger(extremal_inverse(3), 0.0, Contour(1 + 0j, 0.3))
        assert L.balanced
        assert (L.n_plus, L.p_minus) == (1, 0)

    def test_singular_zero(self):
        """p = 2 - z: the only zero is z = 1, where |p'| = |p|^2."""
        with pytest.raises(SingularZeroPresent):
            ledger(UnivarPoly([2, -1]), 0.0)

    def test_dict(self):
        d = ledger(extremal_inverse(3), 0.0).to_dict()
        assert set(d) == {"winding", "n_plus", "n_minus", "p_plus", "p_minus", "balanced", "pole_orders"}
