"""Zeros of polyanalytic polynomials by resultant elimination.

The resultant of P and its conjugate pair Q, taken in z, is a polynomial in
zbar.  Every zero z of P(z, conj z) gives a root conj(z) of it, so the
candidates are the conjugated resultant roots; each is polished by Newton's
method on the real 2x2 system and accepted on a normalized residual test.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import resultant as res
from .cpoly import BivarPoly, UnivarPoly, all_roots, wirtinger
from .errors import InfiniteValence, NotCoprime, ResidualFailure
from .settings import get_settings

PRESERVING = "preserving"
REVERSING = "reversing"
SINGULAR = "singular"


@dataclass(frozen=True)
class ZeroRecord:
    location: complex
    residual: float
    orientation: str
    order: int
    jacobian: float
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {
            "re": self.location.real,
            "im": self.location.imag,
            "orientation": self.orientation,
            "order": self.order,
            "jacobian": self.jacobian,
            "residual": self.residual,
        }


@dataclass(frozen=True)
class ValenceReport:
    zeros: tuple[ZeroRecord, ...]
    count: int
    n_plus: int
    n_minus: int
    bezout: int
    resultant_bound: int
    three_n_bound: Optional[int]
    lower_bound: Optional[int]
    bounds_satisfied: bool
    notes: tuple[str, ...] = field(default=())

    @property
    def n_singular(self) -> int:
        return self.count - self.n_plus - self.n_minus

    @property
    def locations(self) -> np.ndarray:
        return np.array([z.location for z in self.zeros], dtype=complex)

    def to_dict(self) -> dict:
        return {
            "zeros": [z.to_dict() for z in self.zeros],
            "count": self.count,
            "n_plus": self.n_plus,
            "n_minus": self.n_minus,
            "bounds": {
                "bezout": self.bezout,
                "resultant": self.resultant_bound,
                "bh": self.three_n_bound,
                "lower": self.lower_bound,
            },
            "bounds_satisfied": self.bounds_satisfied,
        }


def normalized_residual(P: BivarPoly, z) -> np.ndarray:
    return np.abs(P(z)) / P.residual_scale(z)


def newton_step(P: BivarPoly, z) -> np.ndarray:
    """One Newton correction; zero where the Jacobian is singular."""
    dz, dzbar = wirtinger(P)
    z = np.array(z, dtype=complex, ndmin=1)
    c = -P(z)
    a = dz(z)
    b = dzbar(z)
    det = np.abs(a) ** 2 - np.abs(b) ** 2
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        step = (np.conj(a) * c - b * np.conj(c)) / det
    singular = ~np.isfinite(step) | (np.abs(det) <= 1e-12 * (np.abs(a) ** 2 + np.abs(b) ** 2))
    if np.any(singular):
        # minimum-norm step of the real 2x2 system; columns are the images of 1 and i
        a_s, b_s, c_s = a[singular], b[singular], c[singular]
        col1 = a_s + b_s
        col2 = 1j * (a_s - b_s)
        J = np.stack(
            [np.stack([col1.real, col2.real], -1), np.stack([col1.imag, col2.imag], -1)], -2
        )
        rhs = np.stack([c_s.real, c_s.imag], -1)[..., None]
        d = (np.linalg.pinv(J, rcond=1e-12) @ rhs)[..., 0]
        step[singular] = d[:, 0] + 1j * d[:, 1]
    step[~np.isfinite(step)] = 0
    return step


def newton_polish(P: BivarPoly, z, steps: int | None = None) -> np.ndarray:
    """Newton's method for P(z, conj z) = 0 viewed as two real equations.

    With a = dP/dz and b = dP/dzbar the linearization a*d + b*conj(d) = -P
    solves to d = (conj(a)*c - b*conj(c)) / (|a|^2 - |b|^2), c = -P.
    Each point keeps its best iterate, so the residual never increases.
    """
    steps = get_settings().newton_steps if steps is None else steps
    z = np.array(z, dtype=complex, ndmin=1)
    best = z.copy()
    best_r = normalized_residual(P, z)
    for _ in range(steps):
        step = newton_step(P, z)
        # limit wild steps from near-singular Jacobians
        cap = 0.5 * np.maximum(1.0, np.abs(z))
        big = np.abs(step) > cap
        step[big] *= cap[big] / np.abs(step[big])
        z = z + step
        r = normalized_residual(P, z)
        improved = np.isfinite(r) & (r < best_r)
        best[improved] = z[improved]
        best_r[improved] = r[improved]
        if np.all(np.abs(step) <= 1e-16 * np.maximum(1.0, np.abs(z))):
            break
    return best


def _jacobian(P: BivarPoly, z0: complex) -> tuple[float, float]:
    """(|P_z|^2 - |P_zbar|^2, |P_z|^2 + |P_zbar|^2) at z0."""
    dz, dzbar = wirtinger(P)
    a = abs(dz(z0)) ** 2
    b = abs(dzbar(z0)) ** 2
    return a - b, a + b


def classify_zero(P: BivarPoly, z0: complex) -> ZeroRecord:
    """Orientation from the sign of the real Jacobian |P_z|^2 - |P_zbar|^2."""
    z0 = complex(z0)
    jac, size = _jacobian(P, z0)
    resid = float(normalized_residual(P, z0))
    tol = get_settings().tol_jac
    if jac > tol * size:
        return ZeroRecord(z0, resid, PRESERVING, 1, jac)
    if jac < -tol * size:
        return ZeroRecord(z0, resid, REVERSING, -1, jac)
    # order left at the +1 placeholder; higher orders are not computed
    return ZeroRecord(z0, resid, SINGULAR, 1, jac, degenerate=True)


def _canonical(points: Sequence[complex]) -> list[complex]:
    return sorted(points, key=lambda z: (round(z.real, 9), round(z.imag, 9)))


def dedupe(points: Sequence[complex], radius: float | None = None) -> list[complex]:
    radius = get_settings().dedupe_radius if radius is None else radius
    kept: list[complex] = []
    for z in points:
        if all(abs(z - k) > radius * max(1.0, abs(z)) for k in kept):
            kept.append(complex(z))
    return kept


def _eliminate(P: BivarPoly) -> list[complex]:
    """Zeros of P(z, conj z) via the zbar-resultant; raises NotCoprime if it vanishes."""
    st = get_settings()
    Q = P.conj_pair()
    R, zero = res._interp(P, Q)
    if zero:
        raise NotCoprime("resultant of P and its conjugate vanishes identically")
    if R.degree < 1:
        return []
    roots = all_roots(R)
    cand = np.conj(roots.locations)
    polished = newton_polish(P, cand)
    r = normalized_residual(P, polished)
    # a point where Newton keeps moving is a local minimum of |P|, not a zero
    settled = np.abs(newton_step(P, polished)) <= np.sqrt(st.tol_accept) * np.maximum(
        1.0, np.abs(polished)
    )
    order = np.argsort(r)
    accepted: list[complex] = []
    for k in order:
        z = complex(polished[k])
        if not np.isfinite(r[k]) or not settled[k]:
            continue
        near = any(abs(z - a) <= st.dedupe_radius * max(1.0, abs(z)) for a in accepted)
        if r[k] <= st.tol_accept:
            if not near:
                accepted.append(z)
        elif r[k] <= st.tol_nearby and not near:
            jac, size = _jacobian(P, z)
            if abs(jac) <= st.tol_jac * size:
                # rank-deficient least-squares minimum: nothing isolated to certify
                continue
            raise ResidualFailure(
                f"candidate {z} converges (residual {r[k]:.3g}) but fails tol_accept={st.tol_accept:g}"
            )
    return _canonical(accepted)


def _report(
    P: BivarPoly,
    zeros: Sequence[complex],
    bezout: int,
    resultant_bound: int,
    three_n_bound: Optional[int] = None,
    lower_bound: Optional[int] = None,
) -> ValenceReport:
    records = tuple(classify_zero(P, z) for z in zeros)
    n_plus = sum(r.orientation == PRESERVING for r in records)
    n_minus = sum(r.orientation == REVERSING for r in records)
    count = len(records)
    ok = count <= resultant_bound
    if three_n_bound is not None:
        ok = ok and count <= three_n_bound
    if lower_bound is not None:
        ok = ok and count >= lower_bound
    return ValenceReport(
        records, count, n_plus, n_minus, bezout, resultant_bound, three_n_bound, lower_bound, ok
    )


def solve_polyanalytic(P: BivarPoly) -> ValenceReport:
    """All zeros of a general polyanalytic P, with Bezout N^2 and resultant n^2+m^2 bounds."""
    n, m = max(P.deg_z, 0), max(P.deg_zbar, 0)
    zeros = _eliminate(P)
    N = P.total_degree
    return _report(P, zeros, N * N, n * n + m * m)


def solve_logharmonic(p: UnivarPoly, q: UnivarPoly, w: complex = 1.0) -> ValenceReport:
    """Solutions of p(z) conj(q(z)) = w."""
    n, m = p.degree, q.degree
    bezout, rbound, tri = res.bounds(n, m)
    w = complex(w)
    if w == 0:
        # p(z) conj(q(z)) = 0 splits into p = 0 or q = 0
        pts = dedupe([r.location for r in all_roots(p)] + [r.location for r in all_roots(q)])
        P = BivarPoly.from_logharmonic(p, q, 0)
        return _report(P, _canonical(pts), bezout, rbound, tri, None)
    p1 = p * (1 / w)
    P = BivarPoly.from_logharmonic(p1, q, 1.0)
    lower = n - m if n > m else None
    try:
        zeros = _eliminate(P)
    except NotCoprime:
        # not coprime forces p1 = c q with c real; c|q|^2 = 1 is a curve when c > 0
        c = p1.lead / q.lead
        if c.real > 0:
            raise InfiniteValence("p is a constant multiple of q: the solution set is a curve")
        return _report(P, [], bezout, rbound, tri, None)
    return _report(P, zeros, bezout, rbound, tri, lower)


def logharmonic_radius(p: UnivarPoly, q: UnivarPoly, w: complex) -> float:
    """A radius outside which |p(z) q(z)| > |w|, from coefficient moduli only."""

    def lower(poly: UnivarPoly, r: float) -> float:
        c = np.abs(poly.coeffs)
        return c[-1] * r ** (len(c) - 1) - sum(c[k] * r**k for k in range(len(c) - 1))

    r = 1.0
    while not (lower(p, r) > 0 and lower(q, r) > 0 and lower(p, r) * lower(q, r) > abs(w)):
        r *= 1.25
    return r


def resultant_radius(P: BivarPoly) -> float:
    """Cauchy radius of the zbar-resultant; bounds every zero of P."""
    from .cpoly import cauchy_radius

    R = res.resultant_interp(P, P.conj_pair())
    return cauchy_radius(R)


def find_zeros_grid(
    P: BivarPoly, box: tuple[float, float, float, float], grid_n: int = 60
) -> list[complex]:
    """Independent oracle: Newton from every point of a grid_n x grid_n seed grid.

    ``box`` is (xmin, xmax, ymin, ymax).  Converged points are deduplicated;
    zeros with tiny basins can be missed, so this is a test aid only.
    """
    st = get_settings()
    xmin, xmax, ymin, ymax = box
    xs = np.linspace(xmin, xmax, grid_n)
    ys = np.linspace(ymin, ymax, grid_n)
    seeds = (xs[None, :] + 1j * ys[:, None]).ravel()
    z = newton_polish(P, seeds, steps=max(st.newton_steps, 80))
    r = normalized_residual(P, z)
    good = z[np.isfinite(r) & (r <= 1e-10)]
    pad = 0.05 * max(xmax - xmin, ymax - ymin)
    inside = good[
        (good.real >= xmin - pad) & (good.real <= xmax + pad)
        & (good.imag >= ymin - pad) & (good.imag <= ymax + pad)
    ]
    rr = normalized_residual(P, inside)
    return _canonical(dedupe(list(inside[np.argsort(rr)])))
