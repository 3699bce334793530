"""Independent ODE-integration oracle for the cusp potential.

Integrates ``psi'' = -[(E - V(x))^2 - 1] psi`` directly with an adaptive
embedded Runge-Kutta pair (scipy's DOP853).  Nothing here touches the
special-function code, so agreement with the analytic modules is a genuine
cross-check.  Integration is split at the cusp ``x = 0`` where ``V'`` jumps.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .dkp_model import CuspPotential, PotentialKind, potential_at
from .errors import DomainError, StepUnderflow, WrongKind

__all__ = [
    "Direction",
    "Parity",
    "OdeProblem",
    "FluxDecomposition",
    "KgSolution",
    "OracleBoundState",
    "integrate_kg",
    "decompose_plane_waves",
    "oracle_rt",
    "oracle_bound_states",
    "oracle_bound_energies",
    "shooting_wronskian",
    "log_derivative_mismatch",
    "default_half_width",
    "DEFAULT_TOL",
]

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
TOL_RANGE = (1e-12, 1e-6)
MIN_BOX = 12.0  # |x_left|, x_right >= MIN_BOX * a
BOX_DECAY = 24.0  # default edge has V(edge) <= exp(-BOX_DECAY)
E_EDGE = 1e-4
BISECT_ETOL = 1e-9
DEFAULT_N_SCAN = 400


class Direction(enum.Enum):
    LEFTWARD = "leftward"  # from x_right toward x_left
    RIGHTWARD = "rightward"  # from x_left toward x_right


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"


def default_half_width(p: CuspPotential) -> float:
    """Box half-width ``a * max(24, 24 + ln V0)``, so that ``|V(edge)| <= e^-24``."""
    return p.a * max(BOX_DECAY, BOX_DECAY + math.log(p.v0))


@dataclass(frozen=True)
class OdeProblem:
    """Cusp potential, energy and integration box ``[x_left, x_right]``."""

    potential: CuspPotential
    e: float
    x_left: float
    x_right: float
    tol: float = DEFAULT_TOL

    def __post_init__(self) -> None:
        if not (self.x_left < 0 < self.x_right):
            raise DomainError(f"box must straddle the origin, got [{self.x_left}, {self.x_right}]")
        edge = MIN_BOX * self.potential.a
        if -self.x_left < edge * (1 - 1e-12) or self.x_right < edge * (1 - 1e-12):
            raise DomainError(f"box edges must be at least {MIN_BOX:g}a = {edge:g} from the origin")
        if not (TOL_RANGE[0] <= self.tol <= TOL_RANGE[1]):
            raise DomainError(f"tol must lie in [{TOL_RANGE[0]:g}, {TOL_RANGE[1]:g}], got {self.tol}")

    @classmethod
    def default(cls, p: CuspPotential, e: float, tol: float = DEFAULT_TOL) -> "OdeProblem":
        half = default_half_width(p)
        return cls(p, e, -half, half, tol)

    def scaled_box(self, factor: float) -> "OdeProblem":
        return OdeProblem(self.potential, self.e, self.x_left * factor, self.x_right * factor, self.tol)


@dataclass(frozen=True)
class FluxDecomposition:
    """``psi = A e^{ikx} + B e^{-ikx}`` at one point; ``A`` right-moving, ``B`` left-moving."""

    amp_right_moving: complex
    amp_left_moving: complex


@dataclass(frozen=True)
class KgSolution:
    """Sampled solution; ``error_estimate`` bounds the global error at the far edge."""

    x: np.ndarray
    psi: np.ndarray
    dpsi: np.ndarray
    error_estimate: float


@dataclass(frozen=True)
class OracleBoundState:
    e: float
    parity: Parity


def _rhs_complex(p: CuspPotential, e: float):
    def f(x: float, y: np.ndarray) -> np.ndarray:
        q = (e - potential_at(p, x)) ** 2 - 1.0
        return np.array([y[2], y[3], -q * y[0], -q * y[1]])

    return f


def _rhs_real_batch(p: CuspPotential, energies: np.ndarray):
    n = energies.size

    def f(x: float, y: np.ndarray) -> np.ndarray:
        q = (energies - potential_at(p, x)) ** 2 - 1.0
        return np.concatenate([y[n:], -q * y[:n]])

    return f


def _solve(f, x0: float, x1: float, y0: np.ndarray, tol: float, t_eval=None):
    if x0 == x1:
        return np.array([x0]), y0[:, None]
    sol = solve_ivp(f, (x0, x1), y0, method="DOP853", rtol=tol, atol=tol * 1e-2, t_eval=t_eval)
    if sol.status != 0:
        raise StepUnderflow(f"integration from {x0} to {x1} failed: {sol.message}")
    return sol.t, sol.y


def _segments(x0: float, x1: float) -> list[tuple[float, float]]:
    """Split ``[x0, x1]`` at the cusp so no step straddles the kink of V."""
    if min(x0, x1) < 0 < max(x0, x1):
        return [(x0, 0.0), (0.0, x1)]
    return [(x0, x1)]


def _propagate(f, x0: float, x1: float, y0: np.ndarray, tol: float, samples=None):
    xs, ys = [], []
    y = np.asarray(y0, dtype=float)
    for s0, s1 in _segments(x0, x1):
        t_eval = None
        if samples is not None:
            lo, hi = min(s0, s1), max(s0, s1)
            inside = samples[(samples >= lo) & (samples <= hi)]
            t_eval = np.sort(inside)[:: 1 if s1 > s0 else -1]
            if t_eval.size == 0:
                t_eval = np.array([s1])
            if t_eval[-1] != s1:
                t_eval = np.append(t_eval, s1)
        t, yy = _solve(f, s0, s1, y, tol, t_eval)
        xs.append(t)
        ys.append(yy)
        y = yy[:, -1]
    return np.concatenate(xs), np.concatenate(ys, axis=1)


def integrate_kg(
    prob: OdeProblem,
    init_psi: complex,
    init_dpsi: complex,
    direction: Direction,
    samples: np.ndarray | None = None,
    x_stop: float | None = None,
) -> KgSolution:
    """Integrate from one box edge across the box (or to ``x_stop``).

    ``init_psi``/``init_dpsi`` are given at the starting edge.  With ``samples``
    the solution is reported there (plus the end point); otherwise at the
    integrator's own steps.  The global error is estimated by repeating the run
    at ``10 * tol``.
    """
    start = prob.x_right if direction is Direction.LEFTWARD else prob.x_left
    end = (prob.x_left if direction is Direction.LEFTWARD else prob.x_right) if x_stop is None else x_stop
    if not (min(prob.x_left, prob.x_right) <= end <= max(prob.x_left, prob.x_right)):
        raise DomainError(f"x_stop={end} outside the box")
    f = _rhs_complex(prob.potential, prob.e)
    y0 = np.array([init_psi.real, init_psi.imag, init_dpsi.real, init_dpsi.imag], dtype=float)
    samp = None if samples is None else np.asarray(samples, dtype=float)
    xs, ys = _propagate(f, start, end, y0, prob.tol, samp)
    coarse_tol = min(prob.tol * 10, TOL_RANGE[1])
    _, yc = _propagate(f, start, end, y0, coarse_tol)
    err = float(np.max(np.abs(yc[:, -1] - ys[:, -1])))
    return KgSolution(x=xs, psi=ys[0] + 1j * ys[1], dpsi=ys[2] + 1j * ys[3], error_estimate=err)


def decompose_plane_waves(x: float, psi: complex, dpsi: complex, k: float) -> FluxDecomposition:
    """Exact 2x2 split of ``(psi, psi')`` at ``x`` into ``A e^{ikx} + B e^{-ikx}``."""
    a = (dpsi + 1j * k * psi) / (2j * k) * complex(math.cos(k * x), -math.sin(k * x))
    b = (1j * k * psi - dpsi) / (2j * k) * complex(math.cos(k * x), math.sin(k * x))
    return FluxDecomposition(a, b)


def _check_barrier(p: CuspPotential) -> None:
    if p.kind is not PotentialKind.BARRIER:
        raise WrongKind("oracle_rt expects a barrier")


def oracle_rt(prob: OdeProblem) -> tuple[float, float]:
    """``(R, T)`` from a pure outgoing wave ``e^{ikx}`` at ``x_right`` integrated leftward.

    At ``x_left`` the solution is split as ``A e^{ikx} + B e^{-ikx}``;
    ``R = |B/A|^2`` and ``T = 1/|A|^2``.
    """
    _check_barrier(prob.potential)
    e = prob.e
    if e * e <= 1.0:
        raise DomainError(f"oracle_rt requires E^2 > 1, got E = {e}")
    k = math.sqrt(e * e - 1.0)
    xr = prob.x_right
    psi0 = complex(math.cos(k * xr), math.sin(k * xr))
    f = _rhs_complex(prob.potential, e)
    y0 = np.array([psi0.real, psi0.imag, -k * psi0.imag, k * psi0.real])
    _, ys = _propagate(f, xr, prob.x_left, y0, prob.tol)
    y = ys[:, -1]
    fd = decompose_plane_waves(prob.x_left, complex(y[0], y[1]), complex(y[2], y[3]), k)
    r = abs(fd.amp_left_moving / fd.amp_right_moving) ** 2
    t = 1.0 / abs(fd.amp_right_moving) ** 2
    return r, t


def _check_well(p: CuspPotential) -> None:
    if p.kind is not PotentialKind.WELL:
        raise WrongKind("bound-state shooting expects a well")


def _shoot(p: CuspPotential, energies: np.ndarray, half: float, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Left and right decaying solutions at x = 0, each ``(psi, psi')`` with shape (2, n)."""
    q = np.sqrt(1.0 - energies**2)
    n = energies.size
    f = _rhs_real_batch(p, energies)
    left = _solve(f, -half, 0.0, np.concatenate([np.ones(n), q]), tol)[1][:, -1]
    right = _solve(f, half, 0.0, np.concatenate([np.ones(n), -q]), tol)[1][:, -1]
    return left.reshape(2, n), right.reshape(2, n)


def _wronskian(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    w = left[0] * right[1] - left[1] * right[0]
    return w / (np.hypot(left[0], left[1]) * np.hypot(right[0], right[1]))


def shooting_wronskian(p: CuspPotential, e: float, half_width: float | None = None, tol: float = DEFAULT_TOL) -> float:
    """Normalised Wronskian ``(psi_L psi_R' - psi_L' psi_R) / (|.| |.|)`` at x = 0."""
    _check_well(p)
    half = default_half_width(p) if half_width is None else half_width
    left, right = _shoot(p, np.array([e]), half, tol)
    return float(_wronskian(left, right)[0])


def log_derivative_mismatch(p: CuspPotential, e: float, half_width: float | None = None, tol: float = DEFAULT_TOL) -> float:
    """``|psi_L'/psi_L - psi_R'/psi_R|`` at x = 0 for the decaying shooting solutions."""
    _check_well(p)
    half = default_half_width(p) if half_width is None else half_width
    left, right = _shoot(p, np.array([e]), half, tol)
    return float(abs(left[1, 0] / left[0, 0] - right[1, 0] / right[0, 0]))


def _parity(p: CuspPotential, e: float, half: float, tol: float) -> Parity:
    left, _ = _shoot(p, np.array([e]), half, tol)
    psi, dpsi = left[0, 0], left[1, 0]
    # compare psi' with psi times the local wavenumber scale at the origin
    scale = math.sqrt(abs((e - potential_at(p, 0.0)) ** 2 - 1.0)) + 1.0
    return Parity.EVEN if abs(dpsi) < abs(psi) * scale else Parity.ODD


def oracle_bound_states(
    p: CuspPotential,
    half_width: float | None = None,
    tol: float = DEFAULT_TOL,
    n_scan: int = DEFAULT_N_SCAN,
) -> list[OracleBoundState]:
    """Energies where the shooting Wronskian changes sign, refined by bisection.

    The scan over ``(-1 + 1e-4, 1 - 1e-4)`` integrates all grid energies as one
    batched system; each bracket is then bisected to ``dE <= 1e-9``.
    """
    _check_well(p)
    half = default_half_width(p) if half_width is None else half_width
    if half < MIN_BOX * p.a:
        raise DomainError(f"half width must be >= {MIN_BOX:g}a")
    grid = np.linspace(-1.0 + E_EDGE, 1.0 - E_EDGE, n_scan)
    w = _wronskian(*_shoot(p, grid, half, tol))
    states = []
    for i in np.nonzero(np.sign(w[:-1]) * np.sign(w[1:]) < 0)[0]:
        lo, hi, w_lo = float(grid[i]), float(grid[i + 1]), float(w[i])
        while hi - lo > BISECT_ETOL:
            mid = 0.5 * (lo + hi)
            w_mid = float(_wronskian(*_shoot(p, np.array([mid]), half, tol))[0])
            if w_mid == 0.0:
                lo = hi = mid
                break
            if (w_mid > 0) == (w_lo > 0):
                lo, w_lo = mid, w_mid
            else:
                hi = mid
        e = 0.5 * (lo + hi)
        states.append(OracleBoundState(e, _parity(p, e, half, tol)))
    log.debug("oracle found %d bound states at a=%g V0=%g", len(states), p.a, p.v0)
    return states


def oracle_bound_energies(
    p: CuspPotential,
    half_width: float | None = None,
    tol: float = DEFAULT_TOL,
    n_scan: int = DEFAULT_N_SCAN,
    parity: Parity | None = None,
) -> list[float]:
    """Shooting eigenvalues, optionally restricted to one parity, sorted ascending."""
    return [s.e for s in oracle_bound_states(p, half_width, tol, n_scan) if parity is None or s.parity is parity]
