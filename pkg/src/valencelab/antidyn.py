"""Dynamics of anti-rational maps z -> conj(r(z)) on the Riemann sphere."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .cpoly import BivarPoly, UnivarPoly, all_roots, vanishing_order
from .errors import (
    CommonFactor,
    FatouViolation,
    InvalidDegree,
    InvalidParameter,
    NotCoprime,
    RiemannHurwitzMismatch,
)
from .settings import get_settings
from .zerocount import solve_polyanalytic

FINITE = "finite"
RECIPROCAL = "reciprocal"

ATTRACTING = "attracting"
SUPERATTRACTING = "superattracting"
REPELLING = "repelling"
INDIFFERENT = "indifferent"


@dataclass(frozen=True)
class SpherePoint:
    """A point of the sphere; in the reciprocal chart ``value`` is u = 1/z (u = 0 is infinity)."""

    chart: str
    value: complex

    @classmethod
    def finite(cls, z: complex) -> "SpherePoint":
        return cls(FINITE, complex(z)).normalized()

    @classmethod
    def infinity(cls) -> "SpherePoint":
        return cls(RECIPROCAL, 0j)

    @classmethod
    def parse(cls, z) -> "SpherePoint":
        """From a complex number, or any infinite value meaning the point at infinity."""
        if isinstance(z, SpherePoint):
            return z
        z = complex(z)
        if not np.isfinite(z):
            return cls.infinity()
        return cls.finite(z)

    def normalized(self) -> "SpherePoint":
        radius = get_settings().chart_switch_radius
        if abs(self.value) <= radius:
            return self
        other = RECIPROCAL if self.chart == FINITE else FINITE
        return SpherePoint(other, 1 / self.value)

    @property
    def is_infinity(self) -> bool:
        return self.chart == RECIPROCAL and self.value == 0

    def to_complex(self) -> complex:
        if self.chart == FINITE:
            return self.value
        return complex("inf") if self.value == 0 else 1 / self.value

    def conj(self) -> "SpherePoint":
        # conj(1/u) = 1/conj(u), so conjugation acts the same way in both charts
        return SpherePoint(self.chart, self.value.conjugate())

    def to_sphere(self) -> np.ndarray:
        """Coordinates on the unit sphere; chordal distance is Euclidean distance there."""
        v = self.value
        s = 1 + abs(v) ** 2
        if self.chart == FINITE:
            return np.array([2 * v.real / s, 2 * v.imag / s, (abs(v) ** 2 - 1) / s])
        return np.array([2 * v.real / s, -2 * v.imag / s, (1 - abs(v) ** 2) / s])

    def to_dict(self) -> dict:
        if self.is_infinity:
            return {"re": None, "im": None, "infinity": True}
        z = self.to_complex()
        return {"re": z.real, "im": z.imag, "infinity": False}

    def __repr__(self):
        return "SpherePoint(inf)" if self.is_infinity else f"SpherePoint({self.to_complex()})"


def chordal(x: SpherePoint, y: SpherePoint) -> float:
    """Chordal distance 2|z-w| / sqrt((1+|z|^2)(1+|w|^2)), finite at infinity."""
    if x.chart == y.chart:
        a, b = x.value, y.value
        return 2 * abs(a - b) / np.sqrt((1 + abs(a) ** 2) * (1 + abs(b) ** 2))
    return float(np.linalg.norm(x.to_sphere() - y.to_sphere()))


class RationalMap:
    """r = numerator / denominator with no common roots."""

    def __init__(self, numerator: UnivarPoly, denominator: UnivarPoly, check: bool = True):
        if denominator.is_zero():
            raise InvalidParameter("denominator is the zero polynomial")
        self.numerator = numerator
        self.denominator = denominator
        self.degree = max(numerator.degree, denominator.degree, 0)
        if check:
            self._check_coprime()

    def _check_coprime(self) -> None:
        num, den = self.numerator, self.denominator
        if num.is_zero() or den.degree < 1 or num.degree < 0:
            return
        for root in all_roots(den):
            z = root.location
            scale = num.scale() * max(1.0, abs(z)) ** num.degree
            if abs(num(z)) <= 1e-8 * scale:
                raise CommonFactor(f"numerator and denominator share the root {z}")

    def __call__(self, z):
        return self.numerator(z) / self.denominator(z)

    def derivative(self, z):
        return self.derivative_numerator()(z) / self.denominator(z) ** 2

    def derivative_numerator(self) -> UnivarPoly:
        """num' den - num den', with cancelled top coefficients cleared."""
        num, den = self.numerator, self.denominator
        W = num.derivative() * den - num * den.derivative()
        bound = (
            np.convolve(np.abs(num.derivative().coeffs), np.abs(den.coeffs))
            if num.degree > 0
            else np.zeros(1)
        )
        bound2 = np.convolve(np.abs(num.coeffs), np.abs(den.derivative().coeffs))
        size = max(len(bound), len(bound2), len(W.coeffs))
        b = np.zeros(size)
        b[: len(bound)] += bound
        b[: len(bound2)] += bound2
        c = np.zeros(size, complex)
        c[: len(W.coeffs)] = W.coeffs
        c[np.abs(c) <= 1e-12 * b] = 0
        return UnivarPoly(c)

    def reversed_pair(self) -> tuple[UnivarPoly, UnivarPoly]:
        """(N, D) with r(1/u) = N(u) / D(u)."""
        d = self.degree
        return self.numerator.reversed(d), self.denominator.reversed(d)

    def __repr__(self):
        return f"RationalMap({self.numerator!r}, {self.denominator!r})"


def extremal_family(n: int) -> RationalMap:
    """-(n-1) / (z^n - n z)."""
    if n < 2:
        raise InvalidDegree(f"n must be >= 2, got {n}")
    den = UnivarPoly.monomial(n) - UnivarPoly.monomial(1, n)
    return RationalMap(UnivarPoly([-(n - 1)]), den)


def sharpness_family(n: int, A: float, C: float) -> RationalMap:
    """A / (z (z^(n-1) + n (A/(n-1))^((n-1)/(n+1)))) + C over a common denominator."""
    if n < 2:
        raise InvalidDegree(f"n must be >= 2, got {n}")
    if not A > 0:
        raise InvalidParameter(f"A must be positive, got {A}")
    if not C >= 0:
        raise InvalidParameter(f"C must be nonnegative, got {C}")
    K = n * (A / (n - 1)) ** ((n - 1) / (n + 1))
    den = UnivarPoly.monomial(n) + UnivarPoly.monomial(1, K)
    num = den * C + A
    return RationalMap(num, den)


def sharpness_radius(n: int, A: float) -> float:
    """R(A, n) = (A/(n-1))^(1/(n+1)): radius of the critical fixed points when C = 0."""
    return (A / (n - 1)) ** (1 / (n + 1))


def inverse_poly_map(p: UnivarPoly, b: complex) -> RationalMap:
    """r = 1/p - conj(b); its anti-fixed points solve 1/conj(p(z)) - b - z = 0."""
    num = UnivarPoly([1]) - p * np.conj(b)
    return RationalMap(num, p)


def eval_sphere(r: RationalMap, x: SpherePoint) -> SpherePoint:
    """r(x), computed in whichever chart keeps the result bounded."""
    if x.chart == FINITE:
        top, bottom = r.numerator(x.value), r.denominator(x.value)
    else:
        N, D = r.reversed_pair()
        top, bottom = N(x.value), D(x.value)
    if abs(top) <= abs(bottom):
        return SpherePoint(FINITE, top / bottom)
    return SpherePoint(RECIPROCAL, bottom / top)


def _anti_step(r: RationalMap, x: SpherePoint) -> SpherePoint:
    return eval_sphere(r, x).conj()


def multiplier(r: RationalMap, x: SpherePoint) -> float:
    """|r'| at a fixed point, in the chart containing it (invariant under the chart change)."""
    if x.chart == FINITE:
        return float(abs(r.derivative(x.value)))
    # psi(u) = 1 / r(1/u) = D(u) / N(u)
    N, D = r.reversed_pair()
    u = x.value
    top = D.derivative()(u) * N(u) - D(u) * N.derivative()(u)
    return float(abs(top / N(u) ** 2))


def _classify_multiplier(lam: float) -> str:
    st = get_settings()
    if lam <= st.tol_super:
        return SUPERATTRACTING
    if lam < 1 - st.tol_neutral:
        return ATTRACTING
    if lam > 1 + st.tol_neutral:
        return REPELLING
    return INDIFFERENT


def infinity_multiplicity(r: RationalMap) -> int:
    """Local degree of r at infinity minus one, read off in the reciprocal chart."""
    N, D = r.reversed_pair()
    if D.coeffs[0] == 0:
        k, _ = vanishing_order(D, 0)  # r(inf) = inf; 1/r = D/N vanishes to order k
        return k - 1
    size = max(len(N.coeffs), len(D.coeffs))
    Nc = np.zeros(size, complex)
    Dc = np.zeros(size, complex)
    Nc[: len(N.coeffs)] = N.coeffs
    Dc[: len(D.coeffs)] = D.coeffs
    G = Nc * Dc[0] - Dc * Nc[0]
    # cancellation between the two products leaves rounding residue, not signal
    G[np.abs(G) <= 1e-12 * (np.abs(Nc * Dc[0]) + np.abs(Dc * Nc[0]))] = 0
    nonzero = np.flatnonzero(G)
    return int(nonzero[0]) - 1 if nonzero.size else 0


def critical_points(r: RationalMap) -> list[tuple[SpherePoint, int]]:
    """Critical points with multiplicity, infinity included; totals 2 deg - 2."""
    if r.degree < 2:
        raise InvalidDegree(f"critical census needs degree >= 2, got {r.degree}")
    W = r.derivative_numerator()
    out: list[tuple[SpherePoint, int]] = []
    if W.degree >= 1:
        for root in all_roots(W):
            out.append((SpherePoint.finite(root.location), root.multiplicity))
    k_inf = infinity_multiplicity(r)
    if k_inf > 0:
        out.append((SpherePoint.infinity(), k_inf))
    total = sum(m for _, m in out)
    if total != 2 * r.degree - 2:
        raise RiemannHurwitzMismatch(
            f"critical multiplicities sum to {total}, expected {2 * r.degree - 2}"
        )
    return out


CONVERGED = "converged"
CYCLE = "cycle"
EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class Orbit:
    points: tuple[SpherePoint, ...]
    status: str
    period: Optional[int] = None

    @property
    def limit(self) -> Optional[SpherePoint]:
        return self.points[-1] if self.status == CONVERGED else None

    def cycle_points(self) -> tuple[SpherePoint, ...]:
        if self.status != CYCLE:
            return ()
        return self.points[-self.period:]


def iterate_antirational(
    r: RationalMap, x0: SpherePoint, max_iter: int | None = None
) -> Orbit:
    """Orbit of x -> conj(r(x)); stops on a stabilized fixed point or cycle of period <= max_period."""
    st = get_settings()
    max_iter = st.max_iter if max_iter is None else max_iter
    window = st.stabilization_window
    x = SpherePoint.parse(x0)
    points = [x]
    coords = [x.to_sphere()]
    # streak[p] counts consecutive steps with d(x_k, x_{k-p}) < tol
    streak = np.zeros(st.max_period + 1, dtype=int)
    periods = np.arange(1, st.max_period + 1)
    for k in range(1, max_iter + 1):
        x = _anti_step(r, x)
        points.append(x)
        c = x.to_sphere()
        coords.append(c)
        avail = periods[periods <= k]
        back = np.array([coords[k - p] for p in avail])
        close = np.linalg.norm(back - c, axis=1) < st.tol_orbit
        streak[avail] = np.where(close, streak[avail] + 1, 0)
        for p in np.flatnonzero(streak[1:] >= window) + 1:
            p = int(p)
            if p == 1:
                return Orbit(tuple(points), CONVERGED, 1)
            # slow alternating convergence mimics a cycle; real cycles have separated points
            last = np.array(coords[-p:])
            gaps = np.linalg.norm(last[:, None, :] - last[None, :, :], axis=2)
            if gaps[np.triu_indices(p, 1)].min() > st.cycle_separation:
                return Orbit(tuple(points), CYCLE, p)
    return Orbit(tuple(points), EXHAUSTED)


@dataclass(frozen=True)
class FixedPointRecord:
    location: SpherePoint
    multiplier_modulus: float
    type: str
    captured_critical_points: tuple[SpherePoint, ...] = field(default=())

    @property
    def is_attracting(self) -> bool:
        return self.type in (ATTRACTING, SUPERATTRACTING)

    def to_dict(self) -> dict:
        d = self.location.to_dict()
        d.update(multiplier=self.multiplier_modulus, type=self.type)
        return d


def fixed_point_equation(r: RationalMap) -> BivarPoly:
    """num(z) - conj(z) den(z): its zeros are the finite fixed points of conj(r)."""
    num, den = r.numerator.coeffs, r.denominator.coeffs
    grid = np.zeros((max(len(num), len(den)), 2), dtype=complex)
    grid[: len(num), 0] = num
    grid[: len(den), 1] = -den
    return BivarPoly(grid)


def fixed_points(r: RationalMap) -> list[FixedPointRecord]:
    """Every fixed point of z -> conj(r(z)) on the sphere, typed by multiplier."""
    if r.degree < 2:
        raise InvalidDegree(f"dynamics needs degree >= 2, got {r.degree}")
    report = solve_polyanalytic(fixed_point_equation(r))
    out = []
    for zr in report.zeros:
        x = SpherePoint.finite(zr.location)
        lam = multiplier(r, x)
        out.append(FixedPointRecord(x, lam, _classify_multiplier(lam)))
    if r.numerator.degree > r.denominator.degree:
        inf = SpherePoint.infinity()
        lam = multiplier(r, inf)
        out.append(FixedPointRecord(inf, lam, _classify_multiplier(lam)))
    return out


def attracting_fixed_points(r: RationalMap) -> list[FixedPointRecord]:
    return [f for f in fixed_points(r) if f.is_attracting]


@dataclass(frozen=True)
class Capture:
    critical_point: SpherePoint
    multiplicity: int
    status: str
    fixed_point: Optional[int]  # index into FatouReport.fixed_points
    period: Optional[int] = None
    mode: Optional[str] = None  # converged, radius or contraction


@dataclass(frozen=True)
class FatouReport:
    fixed_points: tuple[FixedPointRecord, ...]  # attracting ones, with captures filled in
    captures: tuple[Capture, ...]
    critical_points: tuple[tuple[SpherePoint, int], ...]
    attracting_count: int
    attracting_bound: int
    passed: bool

    def to_dict(self) -> dict:
        return {
            "critical_points": [
                dict(x.to_dict(), multiplicity=m) for x, m in self.critical_points
            ],
            "attracting_fixed_points": [f.to_dict() for f in self.fixed_points],
            "captures": [
                dict(
                    critical=c.critical_point.to_dict(),
                    status=c.status,
                    fixed_point=c.fixed_point,
                    period=c.period,
                    mode=c.mode,
                )
                for c in self.captures
            ],
            "attracting_count": self.attracting_count,
            "attracting_bound": self.attracting_bound,
            "passed": self.passed,
        }


def _match(x: SpherePoint, fps: Sequence[FixedPointRecord], radius: float) -> Optional[int]:
    best, idx = radius, None
    for i, f in enumerate(fps):
        d = chordal(x, f.location)
        if d <= best:
            best, idx = d, i
    return idx


def _contraction_capture(orbit: Orbit, fps: Sequence[FixedPointRecord]) -> Optional[int]:
    """Index of the attracting fixed point whose linear regime the orbit has entered.

    Near x* the two-step map contracts distances by |lambda|^2; an orbit that
    is close to x* and shows exactly that ratio on its tail is attracted,
    however slowly.
    """
    st = get_settings()
    tail = orbit.points[-(4 * st.stabilization_window + 2):]
    idx = _match(tail[-1], fps, st.contraction_radius)
    if idx is None:
        return None
    f = fps[idx]
    d = np.array([chordal(x, f.location) for x in tail])
    if np.any(d[:-2] == 0):
        return idx
    ratio = d[2:] / d[:-2]
    lam2 = f.multiplier_modulus**2
    if ratio.max() < 1 and np.abs(ratio - lam2).max() <= st.contraction_tol:
        return idx
    return None


def fatou_check(r: RationalMap, raise_on_violation: bool = True) -> FatouReport:
    """Iterate each distinct critical point once and record which attracting fixed point takes it.

    A critical point of any multiplicity can only be attracted to one fixed
    point, so the number of distinct critical points bounds the number of
    attracting fixed points.
    """
    st = get_settings()
    crit = critical_points(r)
    attracting = attracting_fixed_points(r)
    captures = []
    taken: dict[int, list[SpherePoint]] = {i: [] for i in range(len(attracting))}
    for x, mult in crit:
        orbit = iterate_antirational(r, x)
        idx, mode = None, None
        if orbit.status == CONVERGED:
            idx, mode = _match(orbit.points[-1], attracting, 1e-6), CONVERGED
        elif orbit.status == EXHAUSTED:
            idx, mode = _match(orbit.points[-1], attracting, st.capture_radius), "radius"
            if idx is None:
                idx, mode = _contraction_capture(orbit, attracting), "contraction"
        if idx is None:
            mode = None
        else:
            taken[idx].append(x)
        captures.append(Capture(x, mult, orbit.status, idx, orbit.period, mode))
    fps = tuple(
        FixedPointRecord(f.location, f.multiplier_modulus, f.type, tuple(taken[i]))
        for i, f in enumerate(attracting)
    )
    passed = all(f.captured_critical_points for f in fps)
    if not passed and raise_on_violation:
        lonely = [f.location for f in fps if not f.captured_critical_points]
        raise FatouViolation(f"attracting fixed points with no critical orbit: {lonely}")
    return FatouReport(fps, tuple(captures), tuple(crit), len(fps), len(crit), passed)


__all__ = [
    "SpherePoint",
    "RationalMap",
    "Orbit",
    "FixedPointRecord",
    "FatouReport",
    "Capture",
    "NotCoprime",
    "extremal_family",
    "sharpness_family",
    "sharpness_radius",
    "inverse_poly_map",
    "eval_sphere",
    "chordal",
    "multiplier",
    "critical_points",
    "infinity_multiplicity",
    "iterate_antirational",
    "fixed_points",
    "attracting_fixed_points",
    "fixed_point_equation",
    "fatou_check",
]
