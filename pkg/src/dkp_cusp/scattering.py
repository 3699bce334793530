"""Barrier matching at x = 0, reflection/transmission, and resonance scans."""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ._optimize import golden_section_min
from ._parallel import parallel_map
from .dkp_model import (
    CuspPotential,
    PotentialKind,
    scatter_params,
    spinor_incident,
    spinor_reflected,
    spinor_transmitted,
)
from .errors import DkpError, DomainError, EmptyGrid, NoPeaks, SingularMatching, UnitarityViolation, WrongKind

__all__ = [
    "MatchingSolution",
    "ScatteringResult",
    "SweepPoint",
    "ScanAxis",
    "ResonanceScan",
    "solve_matching",
    "reflection_transmission",
    "sweep_energy",
    "scan_resonances",
    "scan_resonances_vs_strength",
    "scan_resonances_vs_energy",
    "UNITARITY_TOL",
    "PEAK_THRESHOLD",
    "PEAK_XTOL",
]

log = logging.getLogger(__name__)

UNITARITY_TOL = 1e-8
MATCHING_RESIDUAL_TOL = 1e-9
COND_MAX = 1e12
PEAK_THRESHOLD = 1e-3  # T >= 1 - PEAK_THRESHOLD qualifies as a transmission resonance
PEAK_XTOL = 1e-4


@dataclass(frozen=True)
class MatchingSolution:
    """Amplitude ratios fixed by continuity at x = 0.

    ``residual`` is the largest relative defect of ``G_inc + G_ref - G_trans``
    over the three spinor components at the solution.
    """

    c2_over_c1: complex
    c3_over_c1: complex
    residual: float
    condition: float


@dataclass(frozen=True)
class ScatteringResult:
    e: float
    r: float
    t: float
    matching: MatchingSolution

    @property
    def unitarity_defect(self) -> float:
        return abs(self.r + self.t - 1.0)


@dataclass(frozen=True)
class SweepPoint:
    """One grid point of a sweep: either a result or the error that replaced it."""

    param: float
    result: ScatteringResult | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.result is not None


class ScanAxis(enum.Enum):
    ENERGY = "energy"
    STRENGTH = "strength"


@dataclass(frozen=True)
class ResonanceScan:
    """Sampled ``T`` along one parameter axis with refined resonance positions.

    ``peaks`` are positions where ``T`` reaches ``1 - PEAK_THRESHOLD`` after
    golden-section refinement; ``peak_heights`` are the refined ``T`` values.
    """

    axis: ScanAxis
    samples: list[tuple[float, float]]
    peaks: list[float]
    peak_heights: list[float] = field(default_factory=list)
    failed: list[tuple[float, str]] = field(default_factory=list)

    @property
    def spacings(self) -> list[float]:
        return [b - a for a, b in zip(self.peaks, self.peaks[1:])]

    @property
    def asymptotic_spacing(self) -> float:
        """Mean peak spacing once the first (pre-asymptotic) interval is dropped.

        With a single spacing available it is returned as is.
        """
        sp = self.spacings
        if not sp:
            raise NoPeaks(f"need at least two resonances, found {len(self.peaks)}")
        tail = sp[1:] if len(sp) >= 2 else sp
        return float(np.mean(tail))


def _check_barrier(p: CuspPotential) -> None:
    if p.kind is not PotentialKind.BARRIER:
        raise WrongKind("scattering is computed for the cusp barrier")


def solve_matching(e: float, p: CuspPotential) -> MatchingSolution:
    """Continuity of ``psi`` and ``phi`` at x = 0 as a 2x2 system for ``c2/c1``, ``c3/c1``.

    With ``c1 = 1``:  ``c2 G_ref(0) - c3 G_trans(0) = -G_inc(0)`` in the ``psi``
    and ``phi`` rows.  The ``theta`` row is ``-i(E - V0)`` times the ``psi`` row,
    so it is satisfied automatically; it still enters the residual.
    """
    _check_barrier(p)
    scatter_params(e, p)  # domain guards
    g_inc = spinor_incident(0.0, e, p)
    g_ref = spinor_reflected(0.0, e, p)
    g_tr = spinor_transmitted(0.0, e, p)
    mat = np.array([[g_ref.psi, -g_tr.psi], [g_ref.phi, -g_tr.phi]], dtype=complex)
    rhs = -np.array([g_inc.psi, g_inc.phi], dtype=complex)
    # row equilibration so the condition number reflects the problem, not units
    rscale = np.max(np.abs(np.column_stack([mat, rhs])), axis=1)
    mat_s = mat / rscale[:, None]
    rhs_s = rhs / rscale
    cond = float(np.linalg.cond(mat_s))
    if not math.isfinite(cond) or cond > COND_MAX:
        raise SingularMatching(f"matching system condition number {cond:.3g} > {COND_MAX:g} at E={e}")
    c2, c3 = np.linalg.solve(mat_s, rhs_s)
    c2, c3 = complex(c2), complex(c3)

    residual = 0.0
    for inc, ref, tr in zip(g_inc.as_tuple(), g_ref.as_tuple(), g_tr.as_tuple()):
        defect = abs(inc + c2 * ref - c3 * tr)
        size = max(abs(inc), abs(c2 * ref), abs(c3 * tr))
        residual = max(residual, defect / size if size > 0 else defect)
    if residual > MATCHING_RESIDUAL_TOL:
        raise SingularMatching(f"matching residual {residual:.3g} exceeds {MATCHING_RESIDUAL_TOL:g}")
    return MatchingSolution(c2, c3, residual, cond)


def reflection_transmission(e: float, p: CuspPotential) -> ScatteringResult:
    """``R = |c2 y0^-mu / (c1 y0^mu)|^2``, ``T = |c3 y0^-mu / (c1 y0^mu)|^2`` with ``y0 = 2iaV0``.

    Unitarity is checked afterwards, never imposed.
    """
    m = solve_matching(e, p)
    mu = scatter_params(e, p).mu
    y0 = p.origin_argument
    # |y0^{-mu} / y0^{mu}|^2 computed in log form: exp(-4 Re(mu log y0))
    norm = math.exp(-4.0 * (mu * complex(math.log(abs(y0)), math.atan2(y0.imag, y0.real))).real)
    r = abs(m.c2_over_c1) ** 2 * norm
    t = abs(m.c3_over_c1) ** 2 * norm
    res = ScatteringResult(e, r, t, m)
    if res.unitarity_defect > UNITARITY_TOL:
        raise UnitarityViolation(f"|R+T-1| = {res.unitarity_defect:.3g} at E={e}, a={p.a}, V0={p.v0}")
    return res


def _safe_point(args: tuple[float, float, float]) -> SweepPoint:
    e, a, v0 = args
    try:
        return SweepPoint(e, reflection_transmission(e, CuspPotential(a, v0)))
    except DkpError as exc:
        return SweepPoint(e, error=f"{type(exc).__name__}: {exc}")


def _grid(lo: float, hi: float, n: int) -> np.ndarray:
    if n < 2:
        raise EmptyGrid(f"grid needs n >= 2 points, got {n}")
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise EmptyGrid(f"empty grid range [{lo}, {hi}]")
    return np.linspace(lo, hi, n)


def sweep_energy(
    p: CuspPotential, e_min: float, e_max: float, n: int, workers: int | None = None
) -> list[SweepPoint]:
    """R and T on a uniform energy grid; a failing point is recorded, not fatal."""
    _check_barrier(p)
    grid = _grid(e_min, e_max, n)
    if e_min <= 1.0:
        raise DomainError(f"energy sweep requires 1 < e_min, got {e_min}")
    return parallel_map(_safe_point, [(float(e), p.a, p.v0) for e in grid], workers)


def _strength_point(args: tuple[float, float, float]) -> SweepPoint:
    v0, a, e = args
    try:
        return SweepPoint(v0, reflection_transmission(e, CuspPotential(a, v0)))
    except DkpError as exc:
        return SweepPoint(v0, error=f"{type(exc).__name__}: {exc}")


def _or_nan(f: Callable[[float], float], x: float) -> float:
    try:
        return f(x)
    except DkpError:
        return math.nan


def _refine_peaks(
    xs: Sequence[float], ts: Sequence[float], t_of: Callable[[float], float]
) -> tuple[list[float], list[float]]:
    peaks, heights = [], []
    for i in range(1, len(xs) - 1):
        if not (math.isfinite(ts[i - 1]) and math.isfinite(ts[i]) and math.isfinite(ts[i + 1])):
            continue
        if ts[i] >= ts[i - 1] and ts[i] > ts[i + 1]:
            x, negt = golden_section_min(lambda v: -_or_nan(t_of, v), xs[i - 1], xs[i + 1], xtol=PEAK_XTOL)
            if -negt >= 1.0 - PEAK_THRESHOLD:
                peaks.append(x)
                heights.append(-negt)
    return peaks, heights


def scan_resonances(
    axis: ScanAxis,
    points: list[SweepPoint],
    t_of: Callable[[float], float],
) -> ResonanceScan:
    xs = [pt.param for pt in points]
    ts = [pt.result.t if pt.ok else math.nan for pt in points]
    peaks, heights = _refine_peaks(xs, ts, t_of)
    if not peaks:
        log.info("no transmission resonances on %s axis in [%g, %g]", axis.value, xs[0], xs[-1])
    return ResonanceScan(
        axis=axis,
        samples=list(zip(xs, ts)),
        peaks=peaks,
        peak_heights=heights,
        failed=[(pt.param, pt.error) for pt in points if not pt.ok],
    )


def scan_resonances_vs_strength(
    a: float, e: float, v_min: float, v_max: float, n: int, workers: int | None = None
) -> ResonanceScan:
    """Sample ``T(V0)`` at fixed energy and locate transmission resonances.

    Local maxima of the samples are refined by golden-section search to
    ``PEAK_XTOL`` in ``V0`` and kept when the refined ``T >= 1 - PEAK_THRESHOLD``.
    """
    grid = _grid(v_min, v_max, n)
    if v_min <= 0:
        raise DomainError(f"strength scan requires v_min > 0, got {v_min}")
    scatter_params(e, CuspPotential(a, v_min))
    points = parallel_map(_strength_point, [(float(v), a, e) for v in grid], workers)
    return scan_resonances(
        ScanAxis.STRENGTH, points, lambda v: reflection_transmission(e, CuspPotential(a, v)).t
    )


def scan_resonances_vs_energy(
    p: CuspPotential, e_min: float, e_max: float, n: int, workers: int | None = None
) -> ResonanceScan:
    """Energy-axis counterpart of :func:`scan_resonances_vs_strength`."""
    points = sweep_energy(p, e_min, e_max, n, workers)
    return scan_resonances(ScanAxis.ENERGY, points, lambda e: reflection_transmission(e, p).t)
