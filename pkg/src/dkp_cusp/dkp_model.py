"""Cusp potential, parameter maps and three-component DKP spinor solutions.

Units: hbar = c = m = 1, energies in units of the rest energy.  Stationary
states carry the time factor ``exp(+iEt)``, so the spinor components satisfy

    psi'' + [(E - V)^2 - 1] psi = 0,    phi = -psi',    theta = -i (E - V) psi.

Each half-line solution is ``psi = c s^{-1/2} M_{kappa,mu}(s)`` with
``s = 2 i a V0 exp(-|x|/a)``; ``phi`` is built from the contiguous-relation
derivative of ``M`` and ``theta`` from ``psi`` directly.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .errors import DomainError, KleinBorder, MuDegenerate, WrongKind
from .special_functions import WhittakerParams, accepted, whittaker_m_with_derivative

__all__ = [
    "PotentialKind",
    "CuspPotential",
    "DkpSpinor",
    "ScatterParams",
    "BoundParams",
    "KLEIN_GUARD",
    "potential_at",
    "bound_support_integral",
    "scatter_params",
    "bound_params",
    "spinor_incident",
    "spinor_reflected",
    "spinor_transmitted",
    "spinor_bound_left",
    "spinor_bound_right",
    "plane_wave_asymptote",
]

KLEIN_GUARD = 1e-6  # |E^2 - 1| below this is rejected for scattering
BOUND_GUARD = 1e-6  # |E| above 1 - this is rejected for bound states


class PotentialKind(enum.Enum):
    BARRIER = "barrier"
    WELL = "well"

    @property
    def sign(self) -> float:
        return 1.0 if self is PotentialKind.BARRIER else -1.0


@dataclass(frozen=True)
class CuspPotential:
    """``V(x) = +-V0 exp(-|x|/a)``: barrier (+) or well (-)."""

    a: float
    v0: float
    kind: PotentialKind = PotentialKind.BARRIER

    def __post_init__(self) -> None:
        if not (math.isfinite(self.a) and self.a > 0):
            raise DomainError(f"shape parameter a must be > 0, got {self.a}")
        if not (math.isfinite(self.v0) and self.v0 > 0):
            raise DomainError(f"strength V0 must be > 0, got {self.v0}")
        if not isinstance(self.kind, PotentialKind):
            object.__setattr__(self, "kind", PotentialKind(self.kind))

    def __call__(self, x: float) -> float:
        return potential_at(self, x)

    @property
    def origin_argument(self) -> complex:
        """Whittaker argument at x = 0, ``2 i a V0``."""
        return 2j * self.a * self.v0

    def argument(self, x: float) -> complex:
        """Whittaker argument ``2 i a V0 exp(-|x|/a)`` at position ``x``."""
        return 2j * self.a * self.v0 * math.exp(-abs(x) / self.a)


def potential_at(p: CuspPotential, x: float) -> float:
    return p.kind.sign * p.v0 * math.exp(-abs(x) / p.a)


def bound_support_integral(p: CuspPotential) -> float:
    """Closed-form area ``int V dx = -2 a V0`` of a cusp well."""
    if p.kind is not PotentialKind.WELL:
        raise WrongKind("the bound-state support integral is defined for wells")
    return -2.0 * p.a * p.v0


@dataclass(frozen=True)
class DkpSpinor:
    psi: complex
    phi: complex
    theta: complex

    def as_tuple(self) -> tuple[complex, complex, complex]:
        return (self.psi, self.phi, self.theta)

    def __add__(self, other: "DkpSpinor") -> "DkpSpinor":
        return DkpSpinor(self.psi + other.psi, self.phi + other.phi, self.theta + other.theta)

    def scaled(self, c: complex) -> "DkpSpinor":
        return DkpSpinor(c * self.psi, c * self.phi, c * self.theta)


@dataclass(frozen=True)
class ScatterParams:
    kappa: complex
    mu: complex


@dataclass(frozen=True)
class BoundParams:
    kappa: complex
    mu: float


def scatter_params(e: float, p: CuspPotential) -> ScatterParams:
    """``kappa = i a E``, ``mu = i a sqrt(E^2 - 1)`` (positive root for either sign of E)."""
    if abs(e * e - 1.0) < KLEIN_GUARD:
        raise KleinBorder(f"|E^2 - 1| = {abs(e * e - 1.0):.3g} < {KLEIN_GUARD}")
    if e * e < 1.0:
        raise DomainError(f"scattering requires E^2 > 1, got E = {e}")
    return ScatterParams(kappa=1j * p.a * e, mu=1j * p.a * math.sqrt(e * e - 1.0))


def bound_params(e: float, p: CuspPotential) -> BoundParams:
    """``kappa = -i a E``, ``mu = a sqrt(1 - E^2)``."""
    if abs(e) >= 1.0 - BOUND_GUARD:
        raise MuDegenerate(f"|E| = {abs(e)} too close to 1 for bound states")
    return BoundParams(kappa=-1j * p.a * e, mu=p.a * math.sqrt(1.0 - e * e))


def _half_line_spinor(
    x: float, e: float, p: CuspPotential, kappa: complex, mu: complex, coef: complex, side: float
) -> DkpSpinor:
    """Spinor from ``psi = coef * s^{-1/2} M_{kappa,mu}(s)``, ``s = 2iaV0 exp(-|x|/a)``.

    ``side`` is -1 for the left region and +1 for the right one (it matters at
    x = 0, where each region's one-sided derivative is wanted):
    ``ds/dx = -side * s / a``, so ``phi = -psi' = side * (s/a) d/ds[s^{-1/2} M]``.
    """
    s = p.argument(x)
    wp = WhittakerParams(kappa, mu, s)
    m_rep, dm_rep = whittaker_m_with_derivative(wp)
    m = accepted(m_rep, "Whittaker M")
    dm = accepted(dm_rep, "Whittaker M derivative")
    root = cmath.sqrt(s)
    psi = coef * m / root
    dpsi_ds = coef * (dm - m / (2 * s)) / root
    phi = side * (s / p.a) * dpsi_ds
    theta = -1j * (e - potential_at(p, x)) * psi
    return DkpSpinor(psi, phi, theta)


def _require(p: CuspPotential, kind: PotentialKind) -> None:
    if p.kind is not kind:
        raise WrongKind(f"expected a {kind.value}, got a {p.kind.value}")


def _require_side(x: float, left: bool) -> None:
    if left and x > 0:
        raise DomainError(f"left-region solution evaluated at x = {x} > 0")
    if not left and x < 0:
        raise DomainError(f"right-region solution evaluated at x = {x} < 0")


def spinor_incident(x: float, e: float, p: CuspPotential, c1: complex = 1.0) -> DkpSpinor:
    """Incident solution (x <= 0), regular branch ``M_{kappa,mu}``; right-moving as x -> -inf."""
    _require(p, PotentialKind.BARRIER)
    _require_side(x, left=True)
    sp = scatter_params(e, p)
    return _half_line_spinor(x, e, p, sp.kappa, sp.mu, c1, -1.0)


def spinor_reflected(x: float, e: float, p: CuspPotential, c2: complex = 1.0) -> DkpSpinor:
    """Reflected solution (x <= 0), branch ``M_{kappa,-mu}``; left-moving as x -> -inf."""
    _require(p, PotentialKind.BARRIER)
    _require_side(x, left=True)
    sp = scatter_params(e, p)
    return _half_line_spinor(x, e, p, sp.kappa, -sp.mu, c2, -1.0)


def spinor_transmitted(x: float, e: float, p: CuspPotential, c3: complex = 1.0) -> DkpSpinor:
    """Transmitted solution (x >= 0), branch ``M_{kappa,-mu}`` of ``2iaV0 exp(-x/a)``."""
    _require(p, PotentialKind.BARRIER)
    _require_side(x, left=False)
    sp = scatter_params(e, p)
    return _half_line_spinor(x, e, p, sp.kappa, -sp.mu, c3, 1.0)


def spinor_bound_left(x: float, e: float, p: CuspPotential, c: complex = 1.0) -> DkpSpinor:
    """Regular well solution for x <= 0; decays like ``exp(sqrt(1-E^2) x)``."""
    _require(p, PotentialKind.WELL)
    _require_side(x, left=True)
    bp = bound_params(e, p)
    return _half_line_spinor(x, e, p, bp.kappa, bp.mu, c, -1.0)


def spinor_bound_right(x: float, e: float, p: CuspPotential, c: complex = 1.0) -> DkpSpinor:
    """Regular well solution for x >= 0; mirror image of :func:`spinor_bound_left`."""
    _require(p, PotentialKind.WELL)
    _require_side(x, left=False)
    bp = bound_params(e, p)
    return _half_line_spinor(x, e, p, bp.kappa, bp.mu, c, 1.0)


def plane_wave_asymptote(
    branch: str, x: float, e: float, p: CuspPotential, coef: complex = 1.0
) -> DkpSpinor:
    """Free-wave limit of the incident, reflected or transmitted spinor far from the barrier.

    ``incident``: ``c (2iaV0)^mu e^{ikx} (1, -mu/a, -iE)``;
    ``reflected``: ``c (2iaV0)^-mu e^{-ikx} (1, mu/a, -iE)``;
    ``transmitted``: ``c (2iaV0)^-mu e^{ikx} (1, -mu/a, -iE)``.
    """
    sp = scatter_params(e, p)
    k = math.sqrt(e * e - 1.0)
    y0 = p.origin_argument
    if branch == "incident":
        amp, wave, dphi = y0**sp.mu, cmath.exp(1j * k * x), -sp.mu / p.a
    elif branch == "reflected":
        amp, wave, dphi = y0 ** (-sp.mu), cmath.exp(-1j * k * x), sp.mu / p.a
    elif branch == "transmitted":
        amp, wave, dphi = y0 ** (-sp.mu), cmath.exp(1j * k * x), -sp.mu / p.a
    else:
        raise ValueError(f"unknown branch {branch!r}")
    base = coef * amp * wave
    return DkpSpinor(base, base * dphi, base * (-1j * e))
