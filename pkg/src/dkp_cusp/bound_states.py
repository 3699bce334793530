"""Bound states of the cusp well: energy equation, root search, spectrum tracing.

Even-parity states (``psi'(0) = 0``) of the regular solutions satisfy

    (1 + 2k - 2iaV0) M_{k,mu}(2iaV0) - (1 + 2k + 2mu) M_{k+1,mu}(2iaV0) = 0

with ``k = -iaE`` and ``mu = a sqrt(1 - E^2)``.  The left-hand side is complex
for real ``E``; roots require both parts to vanish.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from ._optimize import golden_section_min
from ._parallel import parallel_map
from .dkp_model import CuspPotential, PotentialKind, bound_params
from .errors import DkpError, DomainError, EmptyGrid, WrongKind
from .special_functions import WhittakerParams, accepted, whittaker_m

__all__ = [
    "EnergyEquationValue",
    "BoundState",
    "TurningPoint",
    "SpectrumTrace",
    "energy_equation",
    "find_bound_states",
    "trace_spectrum",
    "E_EDGE",
    "ROOT_RESIDUAL_TOL",
]

log = logging.getLogger(__name__)

E_EDGE = 1e-4  # search domain is (-1 + E_EDGE, 1 - E_EDGE)
ROOT_RESIDUAL_TOL = 1e-8
ROOT_PART_TOL = 1e-7
ROOT_XTOL = 1e-10
TURNING_VTOL = 1e-5
MERGE_WINDOW = 0.05
DEFAULT_N_GRID = 400


@dataclass(frozen=True)
class EnergyEquationValue:
    value: complex
    scale: float

    @property
    def relative(self) -> float:
        return abs(self.value) / self.scale


@dataclass(frozen=True)
class BoundState:
    v0: float
    e: float
    residual: float


@dataclass(frozen=True)
class TurningPoint:
    v0: float
    e: float
    low_confidence: bool = False


@dataclass(frozen=True)
class SpectrumTrace:
    """Lowest even bound-state curve in the (V0, E) plane, ordered by ``E``.

    ``root_counts`` holds the number of accepted roots at each grid ``V0``.
    """

    a: float
    points: list[BoundState]
    turning_point: TurningPoint | None = None
    root_counts: list[tuple[float, int]] = field(default_factory=list)


def _check_well(p: CuspPotential) -> None:
    if p.kind is not PotentialKind.WELL:
        raise WrongKind("bound states are computed for the cusp well")


def energy_equation(e: float, p: CuspPotential) -> EnergyEquationValue:
    """Left-hand side of the even-state energy equation at real energy ``e``."""
    _check_well(p)
    bp = bound_params(e, p)
    y0 = p.origin_argument
    m0 = accepted(whittaker_m(WhittakerParams(bp.kappa, bp.mu, y0)), "M_{k,mu}(2iaV0)")
    m1 = accepted(whittaker_m(WhittakerParams(bp.kappa + 1, bp.mu, y0)), "M_{k+1,mu}(2iaV0)")
    t1 = (1 + 2 * bp.kappa - y0) * m0
    t2 = (1 + 2 * bp.kappa + 2 * bp.mu) * m1
    scale = max(abs(t1), abs(t2))
    if scale == 0:
        raise DomainError("energy equation terms vanish identically")
    return EnergyEquationValue(t1 - t2, scale)


def _relative_or_inf(e: float, p: CuspPotential) -> float:
    try:
        return energy_equation(e, p).relative
    except DkpError:
        return math.inf


def _accept(e: float, p: CuspPotential) -> BoundState | None:
    try:
        val = energy_equation(e, p)
    except DkpError:
        return None
    tol = ROOT_PART_TOL * val.scale
    if val.relative <= ROOT_RESIDUAL_TOL and abs(val.value.real) <= tol and abs(val.value.imag) <= tol:
        return BoundState(p.v0, e, val.relative)
    return None


def find_bound_states(
    p: CuspPotential,
    n_grid: int = DEFAULT_N_GRID,
    e_lo: float | None = None,
    e_hi: float | None = None,
) -> list[BoundState]:
    """Roots of the energy equation in ``(-1 + E_EDGE, 1 - E_EDGE)``, sorted by energy.

    Local minima of ``|value|/scale`` on the grid are refined by golden-section
    search to ``ROOT_XTOL``; a minimum is a bound state only if the relative
    residual is below ``ROOT_RESIDUAL_TOL``.  ``e_lo``/``e_hi`` restrict the
    search window (same grid density over the smaller window).
    """
    _check_well(p)
    if n_grid < 100:
        raise EmptyGrid(f"n_grid must be >= 100, got {n_grid}")
    lo = -1.0 + E_EDGE if e_lo is None else max(e_lo, -1.0 + E_EDGE)
    hi = 1.0 - E_EDGE if e_hi is None else min(e_hi, 1.0 - E_EDGE)
    grid = np.linspace(lo, hi, n_grid)
    vals = [_relative_or_inf(float(e), p) for e in grid]
    found: list[BoundState] = []
    for i in range(len(grid)):
        left = vals[i - 1] if i > 0 else math.inf
        right = vals[i + 1] if i < len(grid) - 1 else math.inf
        if not (vals[i] <= left and vals[i] < right):
            continue
        a_ = float(grid[max(i - 1, 0)])
        b_ = float(grid[min(i + 1, len(grid) - 1)])
        e_star, _ = golden_section_min(lambda e: _relative_or_inf(e, p), a_, b_, xtol=ROOT_XTOL)
        state = _accept(e_star, p)
        if state is not None and not any(abs(state.e - s.e) < 1e-8 for s in found):
            found.append(state)
    found.sort(key=lambda s: s.e)
    return found


def _states_at(args: tuple[float, float, int]) -> list[BoundState]:
    a, v0, n_grid = args
    return find_bound_states(CuspPotential(a, v0, PotentialKind.WELL), n_grid)


def _link_curve(per_v: list[tuple[float, list[BoundState]]]) -> list[BoundState]:
    """Nearest-neighbour continuation of the branch starting near E = +1 at small V0,
    plus the returning branch that enters from E = -1 and meets it at the fold."""
    upper: list[BoundState] = []
    lower: list[BoundState] = []
    for _, states in per_v:
        if not states:
            continue
        remaining = list(states)
        if not upper:
            pick = max(remaining, key=lambda s: s.e)
        else:
            pick = min(remaining, key=lambda s: abs(s.e - upper[-1].e))
        # a state below the previous upper point by more than a grid jump belongs
        # to the returning branch; the upper branch then ends
        upper.append(pick)
        remaining.remove(pick)
        below = [s for s in remaining if s.e < pick.e]
        if below:
            lower.append(max(below, key=lambda s: s.e))
    points = upper + lower
    points.sort(key=lambda s: s.e)
    return points


def _quadratic_vertex(pts: list[BoundState]) -> tuple[float, float]:
    es = np.array([s.e for s in pts])
    vs = np.array([s.v0 for s in pts])
    c2, c1, c0 = np.polyfit(es, vs, 2)
    if c2 >= 0:
        i = int(np.argmax(vs))
        return float(es[i]), float(vs[i])
    e_v = -c1 / (2 * c2)
    return float(e_v), float(c0 + c1 * e_v + c2 * e_v * e_v)


def trace_spectrum(
    a: float,
    v_min: float,
    v_max: float,
    n: int,
    n_grid: int = DEFAULT_N_GRID,
    workers: int | None = None,
) -> SpectrumTrace:
    """Lowest even bound-state curve for well depths on ``[v_min, v_max]``.

    The curve is linked by nearest-neighbour continuation and ordered by ``E``.
    The turning point is bracketed by the grid depths where the root count drops
    to zero, seeded by a three-point quadratic fit of ``V0(E)`` around the largest
    ``V0`` on the curve, and refined by bisection in ``V0`` on the predicate
    "roots present in the merging window" down to ``TURNING_VTOL``.  ``E*`` is the
    midpoint of the merging pair at the bisection's lower end.
    """
    if n < 10:
        raise EmptyGrid(f"spectrum trace needs n >= 10, got {n}")
    if not (0 < v_min < v_max):
        raise EmptyGrid(f"invalid depth range [{v_min}, {v_max}]")
    vs = np.linspace(v_min, v_max, n)
    results = parallel_map(_states_at, [(a, float(v), n_grid) for v in vs], workers)
    per_v = list(zip(vs.tolist(), results))
    counts = [(v, len(st)) for v, st in per_v]
    points = _link_curve(per_v)
    turning = _find_turning_point(a, points, per_v, vs, n_grid)
    return SpectrumTrace(a=a, points=points, turning_point=turning, root_counts=counts)


def _window_roots(a: float, v0: float, n_grid: int, window: tuple[float, float]) -> list[BoundState]:
    p = CuspPotential(a, v0, PotentialKind.WELL)
    return find_bound_states(p, n_grid, e_lo=window[0], e_hi=window[1])


def _fold_energy(a: float, v0: float, n_grid: int, roots: list[BoundState]) -> float:
    """Fold energy just below the critical depth: midpoint of the merging pair."""
    if len(roots) >= 2:
        pair = sorted(roots, key=lambda s: s.e)[:2] if len(roots) == 2 else _closest_pair(roots)
        return 0.5 * (pair[0].e + pair[1].e)
    centre = roots[0].e
    fine = _window_roots(a, v0, n_grid, (centre - 0.01, centre + 0.01))
    if len(fine) >= 2:
        pair = _closest_pair(fine)
        return 0.5 * (pair[0].e + pair[1].e)
    return centre


def _closest_pair(roots: list[BoundState]) -> tuple[BoundState, BoundState]:
    srt = sorted(roots, key=lambda s: s.e)
    i = min(range(len(srt) - 1), key=lambda k: srt[k + 1].e - srt[k].e)
    return srt[i], srt[i + 1]


def _find_turning_point(
    a: float,
    points: list[BoundState],
    per_v: list[tuple[float, list[BoundState]]],
    vs: np.ndarray,
    n_grid: int,
) -> TurningPoint | None:
    # bracket: last grid depth with roots followed by one with none
    i_in = None
    for i in range(len(per_v) - 1):
        if per_v[i][1] and not per_v[i + 1][1]:
            i_in = i
    if i_in is None:
        return None
    v_in, roots_in = per_v[i_in]
    v_out = per_v[i_in + 1][0]
    step = float(vs[1] - vs[0])

    # initial estimate from a three-point quadratic fit around the largest V0 on the curve
    on_curve = [s for s in points if s.v0 <= v_in]
    if len(on_curve) >= 3:
        i_max = int(np.argmax([s.v0 for s in on_curve]))
        i_max = min(max(i_max, 1), len(on_curve) - 2)
        e_fit, v_fit = _quadratic_vertex(on_curve[i_max - 1 : i_max + 2])
    else:
        e_fit, v_fit = roots_in[0].e, v_in
    log.debug("turning-point fit estimate V0=%.6f E=%.6f", v_fit, e_fit)

    pair_resolved = len(roots_in) >= 2
    if pair_resolved:
        es = [s.e for s in roots_in]
        window = (min(es) - MERGE_WINDOW, max(es) + MERGE_WINDOW)
    else:
        window = (-1.0 + E_EDGE, 1.0 - E_EDGE)

    lo, hi, lo_roots = v_in, v_out, roots_in
    while hi - lo > TURNING_VTOL:
        mid = 0.5 * (lo + hi)
        roots = _window_roots(a, mid, n_grid, window)
        if roots:
            lo, lo_roots = mid, roots
        else:
            hi = mid
    e_star = _fold_energy(a, lo, n_grid, lo_roots)
    low_conf = step > 0.05 or not pair_resolved
    return TurningPoint(0.5 * (lo + hi), e_star, low_confidence=low_conf)
