"""Sylvester matrices with polynomial entries and their determinants.

The z-Sylvester matrix of P and Q eliminates the first variable; its entries
are polynomials in the second variable (zbar), and so is its determinant.
Two independent routes compute that determinant: sampling plus inverse DFT
interpolation in floating point, and fraction-free (Bareiss) elimination in
exact Gaussian-rational arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .cpoly import BivarPoly, UnivarPoly
from .errors import DegenerateShape, EntrySwell, InvalidDegrees
from .settings import get_settings


@dataclass(frozen=True)
class PolyMatrix:
    size: int
    entries: tuple[tuple[UnivarPoly, ...], ...]

    def evaluate(self, x: complex) -> np.ndarray:
        return np.array([[e(x) for e in row] for row in self.entries], dtype=complex)

    def max_entry_degree(self) -> int:
        return max(e.degree for row in self.entries for e in row)


@dataclass(frozen=True)
class ResultantReport:
    resultant: UnivarPoly
    identically_zero: bool
    degree_bound: int
    method_agreement: Optional[float]


def _z_degrees(P: BivarPoly, Q: BivarPoly) -> tuple[int, int]:
    n, s = max(P.deg_z, 0), max(Q.deg_z, 0)
    if n == 0 and s == 0:
        raise DegenerateShape("both polynomials are constant in z")
    return n, s


def degree_bound(P: BivarPoly, Q: BivarPoly) -> int:
    """``n t + m s`` for the resultant eliminating z."""
    n, s = _z_degrees(P, Q)
    m, t = max(P.deg_zbar, 0), max(Q.deg_zbar, 0)
    return n * t + m * s


def sylvester_matrix(P: BivarPoly, Q: BivarPoly) -> PolyMatrix:
    """The (n+s) x (n+s) matrix: s shifted rows of a_n..a_0, then n shifted rows of d_s..d_0."""
    n, s = _z_degrees(P, Q)
    a = P.z_coeffs()
    d = Q.z_coeffs()
    zero = UnivarPoly([0])
    size = n + s
    rows = []
    for i in range(s):
        row = [zero] * size
        for k in range(n + 1):
            row[i + k] = a[n - k]
        rows.append(tuple(row))
    for i in range(n):
        row = [zero] * size
        for k in range(s + 1):
            row[i + k] = d[s - k]
        rows.append(tuple(row))
    return PolyMatrix(size, tuple(rows))


def _sample(P: BivarPoly, Q: BivarPoly):
    """Determinants at D+1 rotated, scaled roots of unity.

    Returns (values, radius, rotation, best smallest-to-largest singular value ratio).
    """
    S = sylvester_matrix(P, Q)
    D = degree_bound(P, Q)
    N = D + 1
    # the unit circle keeps every coefficient's interpolation error at
    # eps * sum|c_k|, uniformly across k
    rho = 1.0
    n, s = _z_degrees(P, Q)
    lead_a = P.z_coeffs()[n]
    lead_d = Q.z_coeffs()[s]
    base = 2 * np.pi * np.arange(N) / N
    theta = 0.0
    for attempt in range(16):
        theta = attempt * 0.6180339887 * 2 * np.pi / N / 16
        x = rho * np.exp(1j * (theta + base))
        la = np.abs(lead_a(x))
        ld = np.abs(lead_d(x))
        if la.min() > 1e-8 * max(la.max(), 1e-300) and ld.min() > 1e-8 * max(ld.max(), 1e-300):
            break
    values = np.empty(N, dtype=complex)
    # a nonzero resultant leaves some sample matrix well conditioned; an identically
    # zero one makes every sample singular to working precision
    spread = 0.0
    for j, xj in enumerate(x):
        M = S.evaluate(xj)
        values[j] = np.linalg.det(M)
        norms = np.linalg.norm(M, axis=1)
        if np.all(norms > 0):
            sv = np.linalg.svd(M / norms[:, None], compute_uv=False)
            spread = max(spread, float(sv[-1] / sv[0]))
    return values, rho, theta, spread


def _interp(P: BivarPoly, Q: BivarPoly) -> tuple[UnivarPoly, bool]:
    values, rho, theta, spread = _sample(P, Q)
    N = len(values)
    tol = get_settings().tol_zero
    if spread <= tol:
        return UnivarPoly([0]), True
    k = np.arange(N)
    coeffs = np.fft.fft(values) / N / (rho * np.exp(1j * theta)) ** k
    # drop tail coefficients that sit at interpolation noise level
    noise = 1e-13 * np.max(np.abs(values)) / rho**k * N
    top = N - 1
    while top > 0 and abs(coeffs[top]) <= noise[top]:
        top -= 1
    re_part = np.where(np.abs(coeffs.real) <= noise, 0.0, coeffs.real)
    im_part = np.where(np.abs(coeffs.imag) <= noise, 0.0, coeffs.imag)
    coeffs = re_part + 1j * im_part
    return UnivarPoly(coeffs[: top + 1]), False


def resultant_interp(P: BivarPoly, Q: BivarPoly) -> UnivarPoly:
    """Determinant of the z-Sylvester matrix as a polynomial in zbar, by interpolation."""
    return _interp(P, Q)[0]


# exact route -------------------------------------------------------------


class _G:
    """Exact Gaussian integer re + i*im."""

    __slots__ = ("re", "im")

    def __init__(self, re: int, im: int = 0):
        self.re = re
        self.im = im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __add__(self, o):
        return _G(self.re + o.re, self.im + o.im)

    def __sub__(self, o):
        return _G(self.re - o.re, self.im - o.im)

    def __mul__(self, o):
        return _G(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def __truediv__(self, o):
        den = o.re * o.re + o.im * o.im
        re, rr = divmod(self.re * o.re + self.im * o.im, den)
        im, ri = divmod(self.im * o.re - self.re * o.im, den)
        if rr or ri:
            raise ArithmeticError("inexact Gaussian-integer division")
        return _G(re, im)

    def to_complex(self, denom: int) -> complex:
        return complex(Fraction(self.re, denom), Fraction(self.im, denom))


_ZERO = _G(0)


def _trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def _padd(p, q, sign=1):
    out = []
    for k in range(max(len(p), len(q))):
        a = p[k] if k < len(p) else _ZERO
        b = q[k] if k < len(q) else _ZERO
        out.append(a + b if sign > 0 else a - b)
    return _trim(out)


def _pmul(p, q):
    if not p or not q:
        return []
    out = [_ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return _trim(out)


def _pdiv_exact(p, q):
    """Quotient of p by q; the remainder must vanish (Bareiss guarantees it)."""
    p = list(p)
    if not p:
        return []
    dq = len(q) - 1
    quot = [_ZERO] * (len(p) - dq)
    lead = q[-1]
    for k in range(len(p) - 1, dq - 1, -1):
        c = p[k] / lead
        quot[k - dq] = c
        if c:
            for j in range(dq + 1):
                p[k - dq + j] = p[k - dq + j] - c * q[j]
    if any(p[:dq]):
        raise ArithmeticError("inexact division in fraction-free elimination")
    return _trim(quot)


def _lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def resultant_bareiss(P: BivarPoly, Q: BivarPoly) -> UnivarPoly:
    """Same determinant by fraction-free elimination over exact polynomials."""
    S = sylvester_matrix(P, Q)
    cap = get_settings().bareiss_degree_cap
    # clear the (power-of-two) denominators of every float coefficient
    fracs = [
        [[(Fraction(c.real), Fraction(c.imag)) for c in e.coeffs] for e in row]
        for row in S.entries
    ]
    L = 1
    for row in fracs:
        for e in row:
            for re, im in e:
                L = _lcm(L, re.denominator, im.denominator)
    M = [[_trim([_G(int(re * L), int(im * L)) for re, im in e]) for e in row] for row in fracs]
    size = S.size
    sign = 1
    prev = [_G(1)]
    for k in range(size - 1):
        if not M[k][k]:
            swap = next((i for i in range(k + 1, size) if M[i][k]), None)
            if swap is None:
                return UnivarPoly([0])
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                num = _padd(_pmul(M[k][k], M[i][j]), _pmul(M[i][k], M[k][j]), -1)
                M[i][j] = _pdiv_exact(num, prev)
                if len(M[i][j]) - 1 > cap:
                    raise EntrySwell(f"intermediate degree {len(M[i][j]) - 1} exceeds cap {cap}")
            M[i][k] = []
        prev = M[k][k]
    det = M[size - 1][size - 1]
    if not det:
        return UnivarPoly([0])
    scale = L**size
    return UnivarPoly([sign * c.to_complex(scale) for c in det])


def compute_resultant(P: BivarPoly, Q: BivarPoly, method: str = "interp") -> ResultantReport:
    """Resultant plus diagnostics; ``method`` is interp, bareiss or both."""
    if method not in ("interp", "bareiss", "both"):
        raise ValueError(f"unknown method {method!r}")
    bound = degree_bound(P, Q)
    agreement = None
    if method == "bareiss":
        res = resultant_bareiss(P, Q)
        zero = res.is_zero()
    else:
        res, zero = _interp(P, Q)
        if method == "both":
            exact = resultant_bareiss(P, Q)
            agreement = coefficient_discrepancy(res, exact)
    return ResultantReport(res, zero, bound, agreement)


def coefficient_discrepancy(a: UnivarPoly, b: UnivarPoly) -> float:
    """Max coefficient difference relative to the larger coefficient magnitude."""
    n = max(len(a.coeffs), len(b.coeffs))
    x = np.zeros(n, complex)
    y = np.zeros(n, complex)
    x[: len(a.coeffs)] = a.coeffs
    y[: len(b.coeffs)] = b.coeffs
    ref = max(np.max(np.abs(x)), np.max(np.abs(y)))
    return 0.0 if ref == 0 else float(np.max(np.abs(x - y)) / ref)


def is_coprime(P: BivarPoly, Q: BivarPoly) -> bool:
    """True iff the resultant does not vanish identically."""
    return not _interp(P, Q)[1]


def bounds(n: int, m: int) -> tuple[int, int, Optional[int]]:
    """(Bezout (n+m)^2, resultant n^2+m^2, 3n-1 when m == 1)."""
    if n < 1 or m < 1:
        raise InvalidDegrees(f"degrees must be >= 1, got n={n}, m={m}")
    return (n + m) ** 2, n * n + m * m, (3 * n - 1 if m == 1 else None)
