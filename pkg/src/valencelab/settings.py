"""Numerical tolerances, overridable per call-site via a context manager.

All modules read tolerances through :func:`get_settings` so that the CLI
(config file, flags) and the verification battery can swap them without
threading arguments through every function.
"""
from __future__ import annotations

import contextlib
import contextvars
import dataclasses
import json
from dataclasses import dataclass


@dataclass(frozen=True)
class Settings:
    # cpoly
    tol_residual: float = 1e-9
    tol_vanish: float = 1e-8
    cluster_radius: float = 1e-6
    cluster_probe_radius: float = 1e-2
    root_max_sweeps: int = 200
    root_restarts: int = 5
    # resultant
    tol_zero: float = 1e-8
    bareiss_degree_cap: int = 400
    # zerocount
    tol_accept: float = 1e-7
    tol_nearby: float = 1e-6
    tol_jac: float = 1e-8
    dedupe_radius: float = 1e-6
    newton_steps: int = 60
    # antidyn
    chart_switch_radius: float = 2.0
    tol_orbit: float = 1e-10
    stabilization_window: int = 8
    max_iter: int = 2000
    max_period: int = 16
    cycle_separation: float = 1e-6
    tol_super: float = 1e-8
    tol_neutral: float = 1e-6
    capture_radius: float = 1e-4
    contraction_radius: float = 1e-2
    contraction_tol: float = 1e-3
    # argprin
    clearance: float = 1e-8
    max_samples: int = 2**20
    contour_samples: int = 256
    min_pole_radius: float = 1e-5

    def replace(self, **changes) -> "Settings":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


_current: contextvars.ContextVar[Settings] = contextvars.ContextVar(
    "valencelab_settings", default=Settings()
)


def get_settings() -> Settings:
    return _current.get()


@contextlib.contextmanager
def use_settings(settings: Settings | None = None, **changes):
    """Temporarily install ``settings`` (or the current ones with ``changes``)."""
    base = settings if settings is not None else get_settings()
    token = _current.set(base.replace(**changes) if changes else base)
    try:
        yield _current.get()
    finally:
        _current.reset(token)


def load_settings(path) -> Settings:
    """Read a JSON object of tolerance overrides; unknown keys are rejected."""
    with open(path) as fh:
        data = json.load(fh)
    known = {f.name for f in dataclasses.fields(Settings)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown settings keys: {sorted(unknown)}")
    return Settings().replace(**data)
