"""Acceptance battery: twelve numbered criteria, each seeded and timed."""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import antidyn as ad
from .argprin import Contour, enclosing_radius, inverse_map, ledger, pole_orders, winding_number
from .cpoly import BivarPoly, UnivarPoly
from .errors import InfiniteValence, SingularZeroPresent, ValenceError
from .resultant import (
    coefficient_discrepancy,
    is_coprime,
    resultant_bareiss,
    resultant_interp,
    sylvester_matrix,
)
from .sweep import sweep_cell
from .zerocount import (
    find_zeros_grid,
    logharmonic_radius,
    normalized_residual,
    solve_logharmonic,
    solve_polyanalytic,
)

DEFAULT_SEED = 20240611


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float
    limit: Optional[float] = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        budget = f" (limit {self.limit:g} s)" if self.limit else ""
        return f"[{status}] {self.number:>2} {self.name}: {self.detail} [{self.seconds:.2f} s{budget}]"

    def to_dict(self) -> dict:
        return {
            "criterion": self.number,
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "seconds": round(self.seconds, 3),
            "limit": self.limit,
        }


def _cgauss(rng: np.random.Generator, size: int) -> np.ndarray:
    return rng.normal(size=size) + 1j * rng.normal(size=size)


def _rand_poly(rng: np.random.Generator, degree: int) -> UnivarPoly:
    c = _cgauss(rng, degree + 1)
    while abs(c[-1]) < 0.1:
        c[-1] = _cgauss(rng, 1)[0]
    return UnivarPoly(c)


def hausdorff(a, b) -> float:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.size == 0 and b.size == 0:
        return 0.0
    if a.size == 0 or b.size == 0:
        return float("inf")
    d = np.abs(a[:, None] - b[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def _roots_of_unity(k: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(k) / k)


def extremal_polynomials(n: int) -> tuple[UnivarPoly, UnivarPoly, complex]:
    """p = z^n/n - z, q = z, w = -(n-1)/n."""
    p = UnivarPoly.monomial(n, 1 / n) - UnivarPoly.monomial(1)
    return p, UnivarPoly.monomial(1), -(n - 1) / n


# criteria -----------------------------------------------------------------


def c1_minimal_valence(rng) -> tuple[bool, str]:
    bad = []
    for n in range(2, 7):
        for m in range(1, n):
            rep = solve_logharmonic(UnivarPoly.monomial(n), UnivarPoly.monomial(m), 1.0)
            ok = rep.count == n - m
            if ok:
                ok = hausdorff(rep.locations, _roots_of_unity(n - m)) <= 1e-8
            if not ok:
                bad.append((n, m, rep.count))
    return not bad, f"15 (n, m) pairs, failures {bad}"


def c2_extremal_valence(rng) -> tuple[bool, str]:
    bad = []
    for n in range(2, 7):
        p, q, w = extremal_polynomials(n)
        rep = solve_logharmonic(p, q, w)
        P = BivarPoly.from_logharmonic(p * (1 / w), q, 1.0)
        locs = rep.locations
        unity_ok = all(
            np.min(np.abs(locs - u)) <= 1e-8 and normalized_residual(P, u) <= 1e-8
            for u in _roots_of_unity(n - 1)
        )
        L = ledger(p * (1 / w), 0.0)
        ok = rep.count == 3 * n - 3 and unity_ok and L.n_plus == n - 1 and L.n_minus == 2 * n - 2
        if not ok:
            bad.append((n, rep.count, L.n_plus, L.n_minus))
    return not bad, f"n = 2..6, failures {bad}"


def c3_sharpness_3(rng) -> tuple[bool, str]:
    row = sweep_cell(3, 100.0, 0.68)
    r = ad.sharpness_family(3, 100.0, 0.68)
    report = ad.fatou_check(r, raise_on_violation=False)
    locs = np.array([f.location.to_complex() for f in report.fixed_points])
    target = np.array([1.257 + 2.069j, 1.257 - 2.069j, 2.31])
    close = locs.size == 3 and hausdorff(locs, target) <= 1e-2
    inf_capture = [c for c in report.captures if c.critical_point.is_infinity]
    real_idx = int(np.argmin(np.abs(locs - 2.31))) if locs.size else -1
    inf_ok = bool(inf_capture) and inf_capture[0].fixed_point == real_idx
    ok = row.attracting_count == 3 and row.total_zeros == 8 and close and inf_ok
    return ok, (
        f"attracting {row.attracting_count}, zeros {row.total_zeros}, "
        f"locations {np.round(locs, 4).tolist()}, infinity captured by 2.31: {inf_ok}"
    )


def c4_sharpness_4(rng) -> tuple[bool, str]:
    row = sweep_cell(4, 250.0, 0.86)
    ok = row.attracting_count == 4 and row.total_zeros == 11
    return ok, f"attracting {row.attracting_count}, zeros {row.total_zeros}, status {row.status}"


def c5_extremal_dynamics(rng) -> tuple[bool, str]:
    bad = []
    for n in range(2, 7):
        r = ad.extremal_family(n)
        census = sum(m for _, m in ad.critical_points(r))
        orbit = ad.iterate_antirational(r, ad.SpherePoint.infinity())
        cyc = orbit.cycle_points()
        cycle_ok = (
            orbit.status == ad.CYCLE
            and orbit.period == 2
            and any(x.is_infinity for x in cyc)
            and any(not x.is_infinity and abs(x.to_complex()) < 1e-12 for x in cyc)
        )
        fps = [f for f in ad.fixed_points(r) if f.type == ad.SUPERATTRACTING]
        super_ok = len(fps) == n - 1 and all(f.multiplier_modulus <= 1e-8 for f in fps)
        if fps:
            locs = [f.location.to_complex() for f in fps]
            super_ok = super_ok and hausdorff(locs, _roots_of_unity(n - 1)) <= 1e-8
        if not (census == 2 * n - 2 and cycle_ok and super_ok):
            bad.append(n)
    return not bad, f"n = 2..6, failures {bad}"


def c6_resultant_oracles(rng) -> tuple[bool, str]:
    worst, bad = 0.0, 0
    for _ in range(50):
        n, m = (int(v) for v in rng.integers(1, 5, size=2))
        p = rng.integers(-5, 6, size=n + 1).astype(complex)
        q = rng.integers(-5, 6, size=m + 1).astype(complex)
        p[-1] = p[-1] or 1
        q[-1] = q[-1] or 1
        w = complex(rng.integers(1, 6))
        P = BivarPoly.from_logharmonic(UnivarPoly(p), UnivarPoly(q), w)
        Q = P.conj_pair()
        a = resultant_interp(P, Q)
        b = resultant_bareiss(P, Q)
        d = coefficient_discrepancy(a, b)
        worst = max(worst, d)
        if d > 1e-8 or b.degree > n * n + m * m or a.degree > n * n + m * m:
            bad += 1
    return bad == 0, f"50 integer pairs, worst relative discrepancy {worst:.2e}, failures {bad}"


def c7_coprimacy(rng) -> tuple[bool, str]:
    generic_ok = 0
    for _ in range(100):
        n, m = (int(v) for v in rng.integers(1, 5, size=2))
        P = BivarPoly.from_logharmonic(_rand_poly(rng, n), _rand_poly(rng, m), 1.0)
        generic_ok += is_coprime(P, P.conj_pair())
    multiple_ok = control_ok = 0
    for _ in range(100):
        q = _rand_poly(rng, int(rng.integers(1, 5)))
        c = complex(_cgauss(rng, 1)[0])
        for const, bucket in ((c, "multiple"), (abs(c), "control")):
            P = BivarPoly.from_logharmonic(q * const, q, 1.0)
            flagged = not is_coprime(P, P.conj_pair())
            try:
                solve_logharmonic(q * const, q, 1.0)
                raised = False
            except InfiniteValence:
                raised = True
            if flagged and raised:
                if bucket == "multiple":
                    multiple_ok += 1
                else:
                    control_ok += 1
    ok = generic_ok == 100 and multiple_ok == 100
    return ok, (
        f"generic coprime {generic_ok}/100; complex-constant multiples flagged {multiple_ok}/100; "
        f"positive-real control flagged {control_ok}/100"
    )


def c8_closed_form(rng) -> tuple[bool, str]:
    mismatches = []
    for k in range(20):
        n, m = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        z0 = complex(_cgauss(rng, 1)[0])
        q = UnivarPoly.from_roots([z0]) * _rand_poly(rng, m - 1)
        pc = _cgauss(rng, n + 1)
        pc[0] = 0  # p0 = 0
        p = UnivarPoly(pc)
        P = BivarPoly.from_logharmonic(p, q, 1.0)
        value = np.linalg.det(sylvester_matrix(P, P.conj_pair()).evaluate(np.conj(z0)))
        expected = (-1) ** m * (q.lead * np.conj(p(z0))) ** n
        rel = abs(value - expected) / abs(expected)
        if rel > 1e-8:
            mismatches.append((n, m, round(float((value / expected).real), 6)))
    odd = all((n * m) % 2 == 1 for n, m, _ in mismatches)
    return not mismatches, (
        f"{20 - len(mismatches)}/20 match; mismatches (n, m, ratio) {mismatches}; "
        f"all mismatches have odd n*m: {odd}"
    )


def c9_bounds(rng) -> tuple[bool, str]:
    bad = []
    for k in range(200):
        n, m = (int(v) for v in rng.integers(1, 5, size=2))
        p, q = _rand_poly(rng, n), _rand_poly(rng, m)
        w = complex(_cgauss(rng, 1)[0])
        try:
            rep = solve_logharmonic(p, q, w)
            ok = rep.count <= n * n + m * m
            if m == 1:
                ok = ok and rep.count <= 3 * n - 1
            if n > m:
                ok = ok and rep.count >= n - m
            P = BivarPoly.from_logharmonic(p * (1 / w), q, 1.0)
            other = solve_polyanalytic(P.conj_pair())
            ok = ok and hausdorff(rep.locations, other.locations) <= 1e-6
        except ValenceError as exc:
            ok = False
            rep = exc
        if not ok:
            bad.append((k, n, m))
    return not bad, f"200 random instances, failures {bad[:10]}"


def _random_inverse_instance(rng):
    """Random p (degree 2..5) and b whose F has no singular zeros."""
    while True:
        p = _rand_poly(rng, int(rng.integers(2, 6)))
        b = complex(_cgauss(rng, 1)[0])
        try:
            return p, b, ledger(p, b)
        except SingularZeroPresent:
            continue


def c10_ledger(rng) -> tuple[bool, str]:
    bad = []
    for k in range(30):
        p, b, L = _random_inverse_instance(rng)
        n = p.degree
        orders = sum(o for _, o in pole_orders(p, b))
        R = enclosing_radius(p, b)
        doubled = winding_number(inverse_map(p, b), Contour(0j, 2 * R))
        ok = (
            L.balanced
            and L.winding == L.n_plus - L.n_minus + n
            and L.winding == 1
            and doubled == 1
            and orders == -n
        )
        if not ok:
            bad.append((k, L.winding, L.n_plus, L.n_minus, orders))
    return not bad, f"30 random instances, failures {bad}"


def _random_rational(rng) -> ad.RationalMap:
    while True:
        d = int(rng.integers(2, 6))
        dn, dd = int(rng.integers(0, d + 1)), int(rng.integers(0, d + 1))
        if rng.random() < 0.5:
            dn = d
        else:
            dd = d
        try:
            return ad.RationalMap(_rand_poly(rng, dn), _rand_poly(rng, dd))
        except ValenceError:
            continue


def c11_fatou(rng) -> tuple[bool, str]:
    failures = []
    maps = [("random", _random_rational(rng), None) for _ in range(50)]
    maps += [(f"extremal{n}", ad.extremal_family(n), n) for n in range(2, 7)]
    maps += [
        ("sharp3", ad.sharpness_family(3, 100.0, 0.68), 3),
        ("sharp4", ad.sharpness_family(4, 250.0, 0.86), 4),
        ("sharp3-base", ad.sharpness_family(3, 1.0, 0.0), 3),
    ]
    for k in range(10):
        p, b, _ = _random_inverse_instance(rng)
        maps.append((f"inverse{k}", ad.inverse_poly_map(p, b), p.degree))
    for label, r, n in maps:
        try:
            rep = ad.fatou_check(r, raise_on_violation=False)
            ok = rep.passed and (n is None or rep.attracting_count <= n)
        except ValenceError as exc:
            ok = False
        if not ok:
            failures.append(label)
    return not failures, f"{len(maps)} maps, failures {failures}"


def c12_cross_oracle(rng) -> tuple[bool, str]:
    worst, bad = 0.0, []
    for k in range(50):
        n, m = (int(v) for v in rng.integers(1, 4, size=2))
        p, q = _rand_poly(rng, n), _rand_poly(rng, m)
        w = complex(_cgauss(rng, 1)[0])
        try:
            rep = solve_logharmonic(p, q, w)
        except ValenceError as exc:
            bad.append((k, type(exc).__name__))
            continue
        R = logharmonic_radius(p, q, w)
        P = BivarPoly.from_logharmonic(p * (1 / w), q, 1.0)
        grid = find_zeros_grid(P, (-R, R, -R, R), grid_n=80)
        h = hausdorff(rep.locations, grid)
        worst = max(worst, h)
        if h > 1e-6:
            bad.append((k, rep.count, len(grid)))
    return not bad, f"50 instances, worst Hausdorff {worst:.2e}, failures {bad}"


CRITERIA: list[tuple[int, str, Callable, Optional[float]]] = [
    (1, "minimal valence", c1_minimal_valence, 5.0),
    (2, "extremal valence", c2_extremal_valence, 30.0),
    (3, "sharpness n=3", c3_sharpness_3, 10.0),
    (4, "sharpness n=4", c4_sharpness_4, 10.0),
    (5, "extremal dynamics", c5_extremal_dynamics, None),
    (6, "resultant oracle equivalence", c6_resultant_oracles, 20.0),
    (7, "coprimacy dichotomy", c7_coprimacy, None),
    (8, "closed-form resultant at a zero of q", c8_closed_form, None),
    (9, "bound satisfaction", c9_bounds, None),
    (10, "ledger balance", c10_ledger, None),
    (11, "Fatou capture", c11_fatou, None),
    (12, "cross-oracle zero sets", c12_cross_oracle, None),
]


def run_criterion(number: int, seed: int = DEFAULT_SEED) -> CriterionResult:
    _, name, fn, limit = next(c for c in CRITERIA if c[0] == number)
    rng = np.random.default_rng([seed, number])
    start = time.perf_counter()
    try:
        passed, detail = fn(rng)
    except Exception as exc:  # a crash is a failed criterion, not a crashed battery
        passed, detail = False, f"raised {type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    if limit is not None and elapsed > limit:
        passed = False
        detail += f"; over time budget"
    return CriterionResult(number, name, bool(passed), detail, elapsed, limit)


def verify_all(seed: int = DEFAULT_SEED, only: Optional[list[int]] = None) -> list[CriterionResult]:
    numbers = only or [c[0] for c in CRITERIA]
    return [run_criterion(k, seed) for k in numbers]
