"""Parameter sweeps over the sharpness family r = A/(z(z^(n-1) + nK)) + C."""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np

from .antidyn import fixed_points, sharpness_family
from .errors import InvalidDegree, InvalidParameter, ParseError, ValenceError
from .settings import Settings, get_settings, use_settings

CSV_HEADER = ["A", "C", "attracting_count", "total_zeros", "hits_bh_bound", "status"]


@dataclass(frozen=True)
class SweepSpec:
    n: int
    A_values: tuple[float, ...]
    C_values: tuple[float, ...]
    max_iter: int = 2000

    def __post_init__(self):
        if self.n < 2:
            raise InvalidDegree(f"n must be >= 2, got {self.n}")
        if not self.A_values or not self.C_values:
            raise InvalidParameter("A and C grids must be nonempty")
        if any(not a > 0 for a in self.A_values):
            raise InvalidParameter("A values must be positive")
        if any(not c >= 0 for c in self.C_values):
            raise InvalidParameter("C values must be nonnegative")

    def cells(self) -> list[tuple[float, float]]:
        return [(a, c) for a in self.A_values for c in self.C_values]


@dataclass(frozen=True)
class SweepRow:
    A: float
    C: float
    attracting_count: Optional[int]
    total_zeros: Optional[int]
    hits_bh_bound: bool
    status: str = "ok"

    def to_dict(self) -> dict:
        return asdict(self)


def parse_range(text: str) -> tuple[float, ...]:
    """``start:stop:step`` (stop included within half a step), a comma list, or one value."""
    try:
        if ":" in text:
            parts = [float(t) for t in text.split(":")]
            if len(parts) != 3:
                raise ValueError
            start, stop, step = parts
            if step <= 0 or stop < start:
                raise ValueError
            count = int(np.floor((stop - start) / step + 0.5)) + 1
            return tuple(round(start + k * step, 12) for k in range(count))
        return tuple(float(t) for t in text.split(","))
    except ValueError:
        raise ParseError(f"malformed range {text!r}; expected start:stop:step", text) from None


def sweep_cell(n: int, A: float, C: float, max_iter: int = 2000) -> SweepRow:
    """Attracting fixed points and total zero count of conj(r(z)) - z for one (A, C)."""
    try:
        with use_settings(max_iter=max_iter):
            r = sharpness_family(n, A, C)
            fps = fixed_points(r)
        finite = [f for f in fps if not f.location.is_infinity]
        attracting = sum(f.is_attracting for f in fps)
        total = len(finite)
        return SweepRow(A, C, attracting, total, total == 3 * n - 1)
    except ValenceError as exc:
        return SweepRow(A, C, None, None, False, f"{type(exc).__name__}: {exc}")


def _cell_job(args):
    settings, n, A, C, max_iter = args
    with use_settings(settings):
        return sweep_cell(n, A, C, max_iter)


def run_sweep(spec: SweepSpec, jobs: int = 1) -> list[SweepRow]:
    """One row per (A, C) in grid order; failures are recorded per row."""
    settings: Settings = get_settings()
    args = [(settings, spec.n, a, c, spec.max_iter) for a, c in spec.cells()]
    if jobs <= 1 or len(args) == 1:
        return [_cell_job(a) for a in args]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map preserves submission order
        return list(pool.map(_cell_job, args))


def rows_to_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow([
            repr(r.A),
            repr(r.C),
            "" if r.attracting_count is None else r.attracting_count,
            "" if r.total_zeros is None else r.total_zeros,
            str(r.hits_bh_bound).lower(),
            r.status,
        ])
    return buf.getvalue()


def write_csv(rows: Sequence[SweepRow], path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(rows_to_csv(rows))


def write_json(rows: Sequence[SweepRow], path) -> None:
    with open(path, "w") as fh:
        json.dump([r.to_dict() for r in rows], fh, indent=2)
