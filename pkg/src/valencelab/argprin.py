"""Winding numbers along circles and the argument-principle ledger.

For F(z) = 1/conj(p(z)) - b - z the zeros are the solutions of
p(z) conj(z + b) = 1 and the poles sit at the zeros of p.  Every pole is
sense-reversing, so the ledger reads winding = n_plus - n_minus + n for a
contour enclosing everything.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .cpoly import UnivarPoly, all_roots
from .errors import ContourTooClose, IsolationFailure, NonIntegralWinding, SingularZeroPresent
from .settings import get_settings
from .zerocount import solve_logharmonic


@dataclass(frozen=True)
class Contour:
    center: complex
    radius: float
    samples: int = 256

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"radius must be positive, got {self.radius}")

    def point(self, t: np.ndarray) -> np.ndarray:
        return self.center + self.radius * np.exp(1j * t)

    def distance(self, z: complex) -> float:
        return abs(abs(z - self.center) - self.radius)

    def contains(self, z: complex) -> bool:
        return abs(z - self.center) < self.radius


@dataclass(frozen=True)
class Ledger:
    winding: int
    n_plus: int
    n_minus: int
    p_plus: int
    p_minus: int
    balanced: bool
    pole_orders: tuple[tuple[complex, int], ...] = ()

    def to_dict(self) -> dict:
        return {
            "winding": self.winding,
            "n_plus": self.n_plus,
            "n_minus": self.n_minus,
            "p_plus": self.p_plus,
            "p_minus": self.p_minus,
            "balanced": self.balanced,
            "pole_orders": [
                {"re": z.real, "im": z.imag, "order": k} for z, k in self.pole_orders
            ],
        }


def winding_number(F: Callable[[np.ndarray], np.ndarray], C: Contour) -> int:
    """Total argument increment of F along C divided by 2 pi.

    Samples are refined by bisection on every arc whose argument step reaches
    pi/2, so for continuous nonvanishing F the discrete sum is the true one.
    """
    st = get_settings()
    t = np.linspace(0.0, 2 * np.pi, max(C.samples, 8), endpoint=False)
    values = np.asarray(F(C.point(t)), dtype=complex)
    while True:
        mags = np.abs(values)
        scale = float(np.max(mags))
        if not np.all(np.isfinite(values)) or mags.min() < st.clearance * scale:
            raise ContourTooClose(
                f"|F| drops to {mags.min():.3g} on the contour (scale {scale:.3g})"
            )
        nxt = np.roll(values, -1)
        steps = np.angle(nxt / values)
        bad = np.flatnonzero(np.abs(steps) >= np.pi / 2)
        if bad.size == 0:
            break
        if t.size + bad.size > st.max_samples:
            raise ContourTooClose(f"refinement exceeded {st.max_samples} samples")
        t_next = np.append(t[1:], 2 * np.pi)
        mids = 0.5 * (t[bad] + t_next[bad])
        t = np.concatenate([t, mids])
        values = np.concatenate([values, np.asarray(F(C.point(mids)), dtype=complex)])
        order = np.argsort(t, kind="stable")
        t, values = t[order], values[order]
    raw = float(np.sum(steps)) / (2 * np.pi)
    k = int(round(raw))
    if abs(raw - k) > 0.1:
        raise NonIntegralWinding(f"argument increment {raw:.6f} turns is not near an integer")
    return k


def inverse_map(p: UnivarPoly, b: complex) -> Callable[[np.ndarray], np.ndarray]:
    """F(z) = 1/conj(p(z)) - b - z as a vectorized callable."""
    b = complex(b)

    def F(z):
        z = np.asarray(z, dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            return 1 / np.conj(p(z)) - b - z

    return F


def inverse_map_zeros(p: UnivarPoly, b: complex) -> list[complex]:
    """Zeros of F, i.e. solutions of p(z) conj(z + b) = 1."""
    q = UnivarPoly([complex(b), 1.0])
    return [r.location for r in solve_logharmonic(p, q, 1.0).zeros]


def jacobian_inverse_map(p: UnivarPoly, z: complex) -> tuple[float, float]:
    """(1 - |p'|^2/|p|^4, 1 + |p'|^2/|p|^4): F_z = -1 and |F_zbar| = |p'|/|p|^2."""
    g = abs(p.derivative()(z)) ** 2 / abs(p(z)) ** 4
    return 1 - g, 1 + g


def _pole_radius(a: complex, others: Sequence[complex]) -> float:
    st = get_settings()
    if not others:
        return 1.0
    gap = min(abs(a - o) for o in others)
    if gap < 2 * st.min_pole_radius:
        raise IsolationFailure(f"point at {a} is within {gap:.3g} of another zero or pole")
    return min(0.5 * gap, 1.0)


def pole_orders(
    p: UnivarPoly, b: complex, zeros: Optional[Sequence[complex]] = None
) -> list[tuple[complex, int]]:
    """Order of each pole of F, as minus the winding on a small isolating circle.

    A pole where F behaves like 1/conj((z-a)^k) winds +k times and has order -k.
    """
    if p.degree < 1:
        raise ValueError("p must be nonconstant")
    F = inverse_map(p, b)
    if zeros is None:
        zeros = inverse_map_zeros(p, b)
    poles = [r.location for r in all_roots(p)]
    out = []
    for i, a in enumerate(poles):
        others = [z for j, z in enumerate(poles) if j != i] + list(zeros)
        radius = _pole_radius(a, others)
        k = winding_number(F, Contour(a, radius, get_settings().contour_samples))
        out.append((a, -k))
    return sorted(out, key=lambda t: (round(t[0].real, 9), round(t[0].imag, 9)))


def enclosing_radius(p: UnivarPoly, b: complex, zeros: Sequence[complex] = ()) -> float:
    """A circle radius about 0 enclosing every zero and pole of F with room to spare."""
    pts = [abs(r.location) for r in all_roots(p)] + [abs(z) for z in zeros]
    return 2 * max(pts + [1.0]) + 1


def ledger(p: UnivarPoly, b: complex, C: Optional[Contour] = None) -> Ledger:
    """Counts of zeros and poles of F inside C against the winding of F along C."""
    st = get_settings()
    zeros = inverse_map_zeros(p, b)
    if C is None:
        C = Contour(0j, enclosing_radius(p, b, zeros), st.contour_samples)
    F = inverse_map(p, b)
    n_plus = n_minus = 0
    for z in zeros:
        jac, size = jacobian_inverse_map(p, z)
        if abs(jac) <= st.tol_jac * size:
            raise SingularZeroPresent(f"zero at {z} has vanishing jacobian {jac:.3g}")
        if C.distance(z) < st.clearance * max(1.0, C.radius):
            raise ContourTooClose(f"zero at {z} lies on the contour")
        if C.contains(z):
            if jac > 0:
                n_plus += 1
            else:
                n_minus += 1
    orders = pole_orders(p, b, zeros)
    inside = [(a, k) for a, k in orders if C.contains(a)]
    # every pole of F is sense-reversing
    p_plus = 0
    p_minus = -sum(k for _, k in inside)
    winding = winding_number(F, C)
    balanced = winding == n_plus - n_minus - (p_plus - p_minus)
    return Ledger(winding, n_plus, n_minus, p_plus, p_minus, balanced, tuple(orders))


__all__ = [
    "Contour",
    "Ledger",
    "winding_number",
    "inverse_map",
    "inverse_map_zeros",
    "jacobian_inverse_map",
    "pole_orders",
    "enclosing_radius",
    "ledger",
]
