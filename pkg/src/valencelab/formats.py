"""Text and JSON formats for polynomials.

Univariate lists are comma-separated complex literals in ascending degree
(``-1,0,3`` is 3z**2 - 1).  Literals follow the grammar ``a``, ``bi``,
``a+bi``, ``a-bi``.  Bivariate grids are JSON arrays of rows with each scalar
written as ``[re, im]``.
"""
from __future__ import annotations

import json
import math
import re

from .cpoly import BivarPoly, UnivarPoly
from .errors import ParseError

_REAL = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(
    rf"^(?:(?P<re>{_REAL})(?P<im>[+-](?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?i?"
    rf"|(?P<pure>{_REAL})i)$"
)


def parse_complex(token: str) -> complex:
    tok = token.strip().replace(" ", "")
    if tok.lower() in ("inf", "infinity", "oo"):
        raise ParseError(f"infinite value not allowed here: {token!r}", token)
    if tok in ("i", "+i"):
        return 1j
    if tok == "-i":
        return -1j
    # a+i / a-i shorthand
    tok = re.sub(r"([+-])i$", r"\g<1>1i", tok)
    m = _COMPLEX_RE.match(tok)
    if not m:
        raise ParseError(f"malformed complex literal: {token!r}", token)
    if m.group("pure") is not None:
        return complex(0.0, float(m.group("pure")))
    re_part = float(m.group("re"))
    im_txt = m.group("im")
    if im_txt is None:
        if tok.endswith("i"):
            return complex(0.0, re_part)
        return complex(re_part, 0.0)
    if not tok.endswith("i"):
        raise ParseError(f"malformed complex literal: {token!r}", token)
    return complex(re_part, float(im_txt))


def parse_coeffs(text: str) -> UnivarPoly:
    if text is None or not text.strip():
        raise ParseError("empty coefficient list", text)
    return UnivarPoly([parse_complex(tok) for tok in text.split(",")])


def format_complex(z: complex, digits: int = 12) -> str:
    re_s = f"{z.real:.{digits}g}"
    im = z.imag
    if im == 0:
        return re_s
    sign = "-" if im < 0 or (im == 0 and math.copysign(1, im) < 0) else "+"
    return f"{re_s}{sign}{abs(im):.{digits}g}i"


def format_coeffs(p: UnivarPoly) -> str:
    return ",".join(format_complex(complex(c)) for c in p.coeffs)


def _scalar(value) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(isinstance(v, (int, float)) for v in value):
        return complex(value[0], value[1])
    if isinstance(value, str):
        return parse_complex(value)
    raise ParseError(f"malformed grid scalar: {value!r}", str(value))


def grid_from_json(data) -> BivarPoly:
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise ParseError("grid must be a JSON array of arrays", str(data))
    width = max(len(r) for r in data)
    rows = [[_scalar(v) for v in r] + [0j] * (width - len(r)) for r in data]
    return BivarPoly(rows)


def grid_to_json(P: BivarPoly) -> list:
    return [[[float(c.real), float(c.imag)] for c in row] for row in P.coeffs]


def load_grid(path) -> BivarPoly:
    with open(path) as fh:
        return grid_from_json(json.load(fh))
