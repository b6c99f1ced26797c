"""Valence of logharmonic and polyanalytic polynomials.

Zeros of p(z) conj(q(z)) = w by resultant elimination, the dynamics of
anti-rational maps behind the 3n - 1 bound, and argument-principle ledgers.
"""
from .antidyn import (
    FixedPointRecord,
    Orbit,
    RationalMap,
    SpherePoint,
    attracting_fixed_points,
    chordal,
    critical_points,
    eval_sphere,
    extremal_family,
    fatou_check,
    fixed_points,
    inverse_poly_map,
    iterate_antirational,
    sharpness_family,
)
from .argprin import Contour, Ledger, ledger, pole_orders, winding_number
from .cpoly import BivarPoly, Root, RootSet, UnivarPoly, all_roots, eval_bivar, eval_univar, wirtinger
from .errors import *  # noqa: F401,F403
from .resultant import (
    compute_resultant,
    degree_bound,
    is_coprime,
    resultant_bareiss,
    resultant_interp,
    sylvester_matrix,
)
from .settings import Settings, get_settings, load_settings, use_settings
from .sweep import SweepRow, SweepSpec, run_sweep
from .zerocount import (
    ValenceReport,
    ZeroRecord,
    classify_zero,
    find_zeros_grid,
    solve_logharmonic,
    solve_polyanalytic,
)

__version__ = "0.1.0"
