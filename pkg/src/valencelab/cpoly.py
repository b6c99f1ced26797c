"""Dense complex polynomials in one variable and in the pair (z, conj z).

Coefficients are stored in ascending degree.  ``UnivarPoly`` holds p, q and
resultant outputs; ``BivarPoly`` holds polyanalytic polynomials
``P(z, zbar) = sum c[i, j] z**i zbar**j`` evaluated on the constraint
``zbar = conj(z)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import NoConvergence, ZeroPolynomial
from .settings import get_settings

ZERO_DEGREE = -1  # degree reported for the zero polynomial


def _as_coeffs(coeffs) -> np.ndarray:
    arr = np.array(coeffs, dtype=complex).ravel()
    if arr.size == 0:
        arr = np.zeros(1, dtype=complex)
    nz = np.flatnonzero(arr)
    arr = arr[: nz[-1] + 1] if nz.size else arr[:1] * 0
    arr.setflags(write=False)
    return arr


class UnivarPoly:
    """Polynomial ``sum coeffs[k] z**k`` with trimmed complex coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[complex] | np.ndarray):
        self.coeffs = _as_coeffs(coeffs)

    # construction helpers
    @classmethod
    def monomial(cls, k: int, c: complex = 1.0) -> "UnivarPoly":
        coeffs = np.zeros(k + 1, dtype=complex)
        coeffs[k] = c
        return cls(coeffs)

    @classmethod
    def from_roots(cls, roots: Sequence[complex], lead: complex = 1.0) -> "UnivarPoly":
        coeffs = np.array([lead], dtype=complex)
        for r in roots:
            coeffs = np.convolve(coeffs, [-r, 1.0])
        return cls(coeffs)

    @property
    def degree(self) -> int:
        return ZERO_DEGREE if self.is_zero() else len(self.coeffs) - 1

    @property
    def lead(self) -> complex:
        return complex(self.coeffs[-1])

    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    def scale(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def __call__(self, z):
        return eval_univar(self, z)

    def derivative(self) -> "UnivarPoly":
        if len(self.coeffs) == 1:
            return UnivarPoly([0])
        return UnivarPoly(self.coeffs[1:] * np.arange(1, len(self.coeffs)))

    def antiderivative(self, constant: complex = 0) -> "UnivarPoly":
        k = np.arange(1, len(self.coeffs) + 1)
        return UnivarPoly(np.concatenate([[constant], self.coeffs / k]))

    def conj(self) -> "UnivarPoly":
        """The polynomial with conjugated coefficients, so conj(p(z)) = p.conj()(conj(z))."""
        return UnivarPoly(np.conj(self.coeffs))

    def reversed(self, degree: int | None = None) -> "UnivarPoly":
        """``z**d p(1/z)`` for ``d = degree`` (default: own degree)."""
        d = self.degree if degree is None else degree
        padded = np.zeros(d + 1, dtype=complex)
        padded[: len(self.coeffs)] = self.coeffs
        return UnivarPoly(padded[::-1])

    def _coerce(self, other) -> "UnivarPoly":
        return other if isinstance(other, UnivarPoly) else UnivarPoly([other])

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        out = np.zeros(n, dtype=complex)
        out[: len(self.coeffs)] += self.coeffs
        out[: len(other.coeffs)] += other.coeffs
        return UnivarPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return UnivarPoly(-self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, UnivarPoly):
            return UnivarPoly(np.convolve(self.coeffs, other.coeffs))
        return UnivarPoly(self.coeffs * complex(other))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = UnivarPoly([1])
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, UnivarPoly) and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def allclose(self, other: "UnivarPoly", rtol: float = 1e-8) -> bool:
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n, complex)
        b = np.zeros(n, complex)
        a[: len(self.coeffs)] = self.coeffs
        b[: len(other.coeffs)] = other.coeffs
        ref = max(np.max(np.abs(a)), np.max(np.abs(b)), 1e-300)
        return bool(np.max(np.abs(a - b)) <= rtol * ref)

    def __repr__(self):
        return f"UnivarPoly({[complex(c) for c in self.coeffs]})"


def eval_univar(p: UnivarPoly, z):
    """Horner evaluation; ``z`` may be a scalar or an array."""
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for c in p.coeffs[::-1]:
        acc = acc * z + c
    return complex(acc) if acc.ndim == 0 else acc


class BivarPoly:
    """Polynomial ``sum c[i, j] z**i zbar**j`` stored as a dense grid."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        grid = np.array(coeffs, dtype=complex)
        if grid.ndim != 2:
            grid = np.atleast_2d(grid)
        rows = np.flatnonzero(np.any(grid != 0, axis=1))
        cols = np.flatnonzero(np.any(grid != 0, axis=0))
        if rows.size == 0:
            grid = np.zeros((1, 1), dtype=complex)
        else:
            grid = grid[: rows[-1] + 1, : cols[-1] + 1].copy()
        grid.setflags(write=False)
        self.coeffs = grid

    @classmethod
    def from_logharmonic(cls, p: UnivarPoly, q: UnivarPoly, w: complex = 1.0) -> "BivarPoly":
        """``p(z) conj(q(z)) - w``."""
        grid = np.outer(p.coeffs, np.conj(q.coeffs))
        grid[0, 0] -= w
        return cls(grid)

    @classmethod
    def from_z_coeffs(cls, polys: Sequence[UnivarPoly]) -> "BivarPoly":
        """Assemble from the z-coefficient polynomials a_i(zbar)."""
        width = max(len(a.coeffs) for a in polys)
        grid = np.zeros((len(polys), width), dtype=complex)
        for i, a in enumerate(polys):
            grid[i, : len(a.coeffs)] = a.coeffs
        return cls(grid)

    def is_zero(self) -> bool:
        return self.coeffs.shape == (1, 1) and self.coeffs[0, 0] == 0

    @property
    def deg_z(self) -> int:
        return ZERO_DEGREE if self.is_zero() else self.coeffs.shape[0] - 1

    @property
    def deg_zbar(self) -> int:
        return ZERO_DEGREE if self.is_zero() else self.coeffs.shape[1] - 1

    @property
    def total_degree(self) -> int:
        if self.is_zero():
            return ZERO_DEGREE
        i, j = np.nonzero(self.coeffs)
        return int(np.max(i + j))

    def scale(self) -> float:
        return float(np.sum(np.abs(self.coeffs)))

    def residual_scale(self, z) -> np.ndarray:
        """Coefficient scale times ``max(1, |z|)**(deg_z + deg_zbar)``."""
        r = np.maximum(1.0, np.abs(np.asarray(z)))
        return self.scale() * r ** max(self.deg_z + self.deg_zbar, 0)

    def z_coeffs(self) -> list[UnivarPoly]:
        """The a_i(zbar) with ``P = sum a_i(zbar) z**i``."""
        return [UnivarPoly(row) for row in self.coeffs]

    def conj_pair(self) -> "BivarPoly":
        """Q with Q(z, conj z) = conj(P(z, conj z)): swap the variables and conjugate."""
        return BivarPoly(np.conj(self.coeffs.T))

    def __call__(self, z):
        return eval_bivar(self, z)

    def evaluate(self, z1, z2):
        """Evaluate at independent values of the two formal variables."""
        z1 = np.asarray(z1, dtype=complex)
        z2 = np.asarray(z2, dtype=complex)
        acc = np.zeros(np.broadcast(z1, z2).shape, dtype=complex)
        for row in self.coeffs[::-1]:
            inner = np.zeros_like(acc)
            for c in row[::-1]:
                inner = inner * z2 + c
            acc = acc * z1 + inner
        return complex(acc) if acc.ndim == 0 else acc

    def __eq__(self, other):
        return isinstance(other, BivarPoly) and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def __repr__(self):
        return f"BivarPoly({self.coeffs.tolist()})"


def eval_bivar(P: BivarPoly, z):
    """``P(z, conj(z))``."""
    z = np.asarray(z, dtype=complex)
    return P.evaluate(z, np.conj(z))


def wirtinger(P: BivarPoly) -> tuple[BivarPoly, BivarPoly]:
    """Formal partials with respect to z and zbar."""
    c = P.coeffs
    i = np.arange(c.shape[0])[:, None]
    j = np.arange(c.shape[1])[None, :]
    dz = (c * i)[1:, :] if c.shape[0] > 1 else np.zeros((1, 1))
    dzbar = (c * j)[:, 1:] if c.shape[1] > 1 else np.zeros((1, 1))
    return BivarPoly(dz), BivarPoly(dzbar)


@dataclass(frozen=True)
class Root:
    location: complex
    multiplicity: int
    residual: float


@dataclass(frozen=True)
class RootSet:
    roots: tuple[Root, ...]

    @property
    def locations(self) -> np.ndarray:
        return np.array([r.location for r in self.roots], dtype=complex)

    def expanded(self) -> np.ndarray:
        """Locations repeated by multiplicity."""
        return np.array(
            [r.location for r in self.roots for _ in range(r.multiplicity)], dtype=complex
        )

    @property
    def total_multiplicity(self) -> int:
        return sum(r.multiplicity for r in self.roots)

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)


def _root_scale(p: UnivarPoly, z) -> np.ndarray:
    return p.scale() * np.maximum(1.0, np.abs(z)) ** p.degree


def _aberth(c: np.ndarray, z: np.ndarray, max_sweeps: int) -> tuple[np.ndarray, bool]:
    """Aberth-Ehrlich iteration on monic-irrelevant coefficients ``c`` (ascending)."""
    dc = c[1:] * np.arange(1, len(c))
    n = len(z)
    absc = np.abs(c)
    for _ in range(max_sweeps):
        pz = np.polyval(c[::-1], z)
        dpz = np.polyval(dc[::-1], z)
        # stop a root once its value is at rounding level
        err = np.polyval(absc[::-1], np.abs(z)) * 4e-16 * n
        active = np.abs(pz) > err
        if not active.any():
            return z, True
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pz / dpz
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            s = inv.sum(axis=1)
            step = ratio / (1.0 - ratio * s)
        step = np.where(np.isfinite(step), step, 0.0)
        z = np.where(active, z - step, z)
        if np.all(np.abs(step[active]) <= 1e-15 * np.maximum(1.0, np.abs(z[active]))):
            return z, True
    return z, False


def _newton_polish(c: np.ndarray, z: np.ndarray, steps: int = 3) -> np.ndarray:
    dc = c[1:] * np.arange(1, len(c))
    for _ in range(steps):
        pz = np.polyval(c[::-1], z)
        dpz = np.polyval(dc[::-1], z)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = pz / dpz
        ok = np.isfinite(step) & (np.abs(step) < 1e-3 * np.maximum(1.0, np.abs(z)))
        znew = np.where(ok, z - step, z)
        better = np.abs(np.polyval(c[::-1], znew)) <= np.abs(pz)
        z = np.where(better, znew, z)
    return z


def _polish_cluster(c: np.ndarray, loc: complex, mult: int) -> tuple[complex, int]:
    """Newton-polish a k-fold root as a simple root of the (k-1)-th derivative."""
    d = c
    for _ in range(mult - 1):
        d = d[1:] * np.arange(1, len(d))
    return complex(_newton_polish(d, np.array([loc]))[0]), mult


def _taylor(p: UnivarPoly, z0: complex) -> np.ndarray:
    """Coefficients of p(z0 + h) in powers of h (repeated synthetic division)."""
    c = list(p.coeffs)
    n = len(c)
    out = []
    for _ in range(n):
        acc = 0j
        q = []
        for a in reversed(c):
            acc = acc * z0 + a
            q.append(acc)
        out.append(q[-1])
        c = list(reversed(q[:-1]))
        if not c:
            break
    return np.array(out, dtype=complex)


def _taylor_scales(p: UnivarPoly, z0: complex) -> np.ndarray:
    absp = UnivarPoly(np.abs(p.coeffs))
    return np.abs(_taylor(absp, abs(z0)))


def vanishing_order(p: UnivarPoly, z0: complex) -> tuple[int, complex]:
    """Order of vanishing of p at z0 and the leading local coefficient p^(k)(z0)/k!."""
    if p.is_zero():
        raise ZeroPolynomial("vanishing order of the zero polynomial")
    tol = get_settings().tol_vanish
    t = _taylor(p, complex(z0))
    s = _taylor_scales(p, complex(z0))
    for k, (tk, sk) in enumerate(zip(t, s)):
        if abs(tk) > tol * sk:
            return k, complex(tk)
    # numerically the top coefficient is never below its own scale
    return p.degree, complex(t[-1])


def _cluster(p: UnivarPoly, z: np.ndarray) -> list[tuple[complex, int]]:
    """Merge root approximations into (location, multiplicity) pairs.

    Points within ``cluster_radius`` merge unconditionally.  Looser groups (up
    to ``cluster_probe_radius``) merge only if the derivatives confirm a
    multiple root at the centroid, since a k-fold root is only resolved to
    about eps**(1/k).
    """
    st = get_settings()
    groups = [[complex(v)] for v in z]

    def link(radius, confirm):
        merged = True
        while merged:
            merged = False
            for a in range(len(groups)):
                for b in range(a + 1, len(groups)):
                    ca = np.mean(groups[a])
                    cb = np.mean(groups[b])
                    r = radius * max(1.0, abs(ca), abs(cb))
                    if abs(ca - cb) <= r:
                        cand = groups[a] + groups[b]
                        if confirm:
                            centre, _ = _polish_cluster(p.coeffs, np.mean(cand), len(cand))
                            if abs(centre - np.mean(cand)) > r or not _is_multiple_root(
                                p, centre, len(cand)
                            ):
                                continue
                        groups[a] = cand
                        del groups[b]
                        merged = True
                        break
                if merged:
                    break

    link(st.cluster_radius, confirm=False)
    link(st.cluster_probe_radius, confirm=True)
    return [(complex(np.mean(g)), len(g)) for g in groups]


def _is_multiple_root(p: UnivarPoly, c: complex, k: int) -> bool:
    st = get_settings()
    t = _taylor(p, c)[:k]
    s = _taylor_scales(p, c)[:k]
    if abs(t[0]) > st.tol_residual * float(_root_scale(p, c)):
        return False
    return bool(np.all(np.abs(t) <= st.tol_vanish * s))


def _initial_guesses(c: np.ndarray, stretch: float, phase: float) -> np.ndarray:
    """Starting points on circles read off the upper convex hull of (k, log|c_k|).

    Each hull edge from k_i to k_j carries k_j - k_i roots of modulus close to
    (|c_ki| / |c_kj|)^(1 / (k_j - k_i)).
    """
    m = len(c) - 1
    ks = np.flatnonzero(c)
    logs = np.log(np.abs(c[ks]))
    hull: list[int] = []
    for i in range(len(ks)):
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            cross = (ks[b] - ks[a]) * (logs[i] - logs[a]) - (logs[b] - logs[a]) * (ks[i] - ks[a])
            if cross >= 0:
                hull.pop()
            else:
                break
        hull.append(i)
    out = []
    for a, b in zip(hull[:-1], hull[1:]):
        count = int(ks[b] - ks[a])
        radius = np.exp((logs[a] - logs[b]) / count) * stretch
        angles = phase + 2 * np.pi * np.arange(count) / count + 0.7 * len(out) / m
        out.extend(radius * np.exp(1j * angles))
    return np.array(out, dtype=complex)


def all_roots(p: UnivarPoly, seed: int = 0) -> RootSet:
    """All complex roots with multiplicity (Aberth-Ehrlich plus Newton polishing)."""
    if p.is_zero():
        raise ZeroPolynomial("all_roots of the zero polynomial")
    st = get_settings()
    n = p.degree
    if n == 0:
        return RootSet(())
    c = p.coeffs / p.lead
    # exact zero roots are peeled off first
    nz = int(np.flatnonzero(c)[0])
    c = c[nz:]
    m = len(c) - 1
    if m >= 1:
        rng = np.random.default_rng(seed)
        ok = False
        for attempt in range(st.root_restarts + 1):
            if attempt == 0:
                z0 = _initial_guesses(c, 1.0, 0.4)
            else:
                z0 = _initial_guesses(c, rng.uniform(0.5, 1.5), rng.uniform(0, 2 * np.pi))
            z, _ = _aberth(c, z0, st.root_max_sweeps)
            if not np.all(np.isfinite(z)):
                continue
            pairs = [_polish_cluster(c, loc, mult) for loc, mult in _cluster(p, z)]
            locs = np.array([loc for loc, _ in pairs])
            res = np.abs(np.polyval(c[::-1], locs))
            scale = np.max(np.abs(c)) * np.maximum(1.0, np.abs(locs)) ** m
            if np.all(res <= st.tol_residual * scale):
                ok = True
                break
        if not ok:
            raise NoConvergence(f"simultaneous iteration failed for degree {m}")
    else:
        pairs = []
    if nz:
        pairs.append((0j, nz))
    roots = []
    for loc, mult in sorted(pairs, key=lambda t: (round(t[0].real, 12), round(t[0].imag, 12))):
        res = abs(p(loc)) / float(_root_scale(p, loc))
        roots.append(Root(loc, mult, res))
    return RootSet(tuple(roots))


def cauchy_radius(p: UnivarPoly) -> float:
    """``1 + max|c_k| / |lead|``: every root lies within this radius."""
    if p.degree < 1:
        return 1.0
    return 1.0 + float(np.max(np.abs(p.coeffs[:-1]))) / abs(p.lead)

