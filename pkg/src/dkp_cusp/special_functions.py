"""Kummer and Whittaker functions for complex parameters and argument.

All evaluations go through the Kummer series ``M(a, b, z) = sum (a)_n/(b)_n z^n/n!``.
The series is summed directly whenever its own error estimate is clean.
Otherwise (typically ``|z|`` beyond a few units along the imaginary axis, where
every scattering argument ``2iaV0`` lives) the direct sum cancels badly, so the
series is re-expanded about points on the ray from the origin to ``z`` and
the Kummer ODE carries value and derivative outward step by step.  Each step is
again a convergent Taylor series, only with a small radius.

Every public evaluation returns an :class:`EvalReport` carrying a relative
error estimate; consumers must reject reports whose ``est_error`` exceeds
:data:`TOL_ACCEPT` (see :func:`accepted`).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import (
    BranchAmbiguity,
    DomainError,
    DomainTooLarge,
    InaccurateEvaluation,
    LogarithmicCase,
    MuDegenerate,
    NoConvergence,
    PoleParameter,
)

__all__ = [
    "EPS",
    "TOL_SERIES",
    "TOL_ACCEPT",
    "N_MAX",
    "Z_MAX",
    "R_DIRECT",
    "EvalReport",
    "WhittakerParams",
    "kummer_m",
    "whittaker_m",
    "whittaker_m_derivative",
    "whittaker_m_with_derivative",
    "whittaker_m_leading",
    "whittaker_w",
    "gamma",
    "rgamma",
    "accepted",
]

EPS = 2.220446049250313e-16
TOL_SERIES = 1e-14
TOL_ACCEPT = 1e-9
N_MAX = 500
Z_MAX = 30.0
R_DIRECT = 4.0
H_MAX = 1.5
MU_MIN = 1e-6  # |2 mu| below this is rejected
_DIRECT_OK = 1e-14  # a direct sum is trusted only if its estimate is this clean
_START_RADII = (R_DIRECT, 2.0, 1.0, 0.5)
_STEP_FRACTION = 0.5

_INT_TOL = 1e-12


@dataclass(frozen=True)
class EvalReport:
    """Value of a special-function evaluation with its error budget.

    Attributes
    ----------
    value : complex
        The computed function value.
    est_error : float
        Estimated relative error (truncation plus rounding/cancellation).
    terms_used : int
        Number of series terms summed, across all continuation steps.
    """

    value: complex
    est_error: float
    terms_used: int

    def __post_init__(self) -> None:
        if not (self.est_error >= 0.0):
            raise ValueError(f"est_error must be >= 0, got {self.est_error}")
        if self.terms_used < 1:
            raise ValueError(f"terms_used must be >= 1, got {self.terms_used}")
        if not cmath.isfinite(self.value):
            raise NoConvergence(f"non-finite value {self.value}")


def _is_nonpositive_int(x: complex) -> bool:
    x = complex(x)
    r = round(x.real)
    return abs(x.imag) < _INT_TOL and r <= 0 and abs(x.real - r) < _INT_TOL


def _is_int(x: complex) -> bool:
    x = complex(x)
    return abs(x.imag) < _INT_TOL and abs(x.real - round(x.real)) < _INT_TOL


@dataclass(frozen=True)
class WhittakerParams:
    """Parameter triple ``(kappa, mu, argument)`` of a Whittaker function."""

    kappa: complex
    mu: complex
    argument: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "kappa", complex(self.kappa))
        object.__setattr__(self, "mu", complex(self.mu))
        object.__setattr__(self, "argument", complex(self.argument))
        if not all(cmath.isfinite(v) for v in (self.kappa, self.mu, self.argument)):
            raise DomainError("Whittaker parameters must be finite")
        if _is_nonpositive_int(1 + 2 * self.mu):
            raise PoleParameter(f"1 + 2*mu = {1 + 2 * self.mu} is a non-positive integer")
        if abs(2 * self.mu) < MU_MIN:
            raise MuDegenerate(f"|2*mu| = {abs(2 * self.mu):.3g} < {MU_MIN}")
        if abs(self.argument) > Z_MAX:
            raise DomainTooLarge(f"|z| = {abs(self.argument):.6g} > Z_MAX = {Z_MAX}")

    def shifted(self, dkappa: complex = 0, mu: complex | None = None) -> "WhittakerParams":
        return WhittakerParams(self.kappa + dkappa, self.mu if mu is None else mu, self.argument)


class _Neumaier:
    """Compensated accumulator for complex terms (real and imaginary parts separately)."""

    __slots__ = ("re", "im", "cre", "cim")

    def __init__(self, start: complex = 0j) -> None:
        self.re = start.real
        self.im = start.imag
        self.cre = 0.0
        self.cim = 0.0

    def add(self, x: complex) -> None:
        xr, xi = x.real, x.imag
        t = self.re + xr
        if abs(self.re) >= abs(xr):
            self.cre += (self.re - t) + xr
        else:
            self.cre += (xr - t) + self.re
        self.re = t
        t = self.im + xi
        if abs(self.im) >= abs(xi):
            self.cim += (self.im - t) + xi
        else:
            self.cim += (xi - t) + self.im
        self.im = t

    @property
    def value(self) -> complex:
        return complex(self.re + self.cre, self.im + self.cim)


def _series_at_origin(a: complex, b: complex, z: complex) -> tuple[complex, complex, float, int]:
    """Direct Kummer series; returns (M, dM/dz, relative error estimate, terms)."""
    s = _Neumaier(1 + 0j)
    ds = _Neumaier(a / b + 0j)  # dM/dz = sum n t_n / z, started at n = 1 term
    t = 1 + 0j
    absum = 1.0
    n = 0
    trunc = 0.0
    while True:
        t *= (a + n) / (b + n) * z / (n + 1)
        n += 1
        s.add(t)
        if n >= 2:
            # n * t_n / z written through the previous term to avoid z = 0
            ds.add(t * n / z)
        absum += abs(t)
        if t == 0:
            trunc = 0.0
            break
        ratio = abs((a + n) / (b + n) * z / (n + 1))
        if n > abs(z) and ratio < 1.0:
            tail = abs(t) * ratio / (1.0 - ratio)
            if tail <= TOL_SERIES * abs(s.value) * 1e-2:
                trunc = tail
                break
        if n >= N_MAX:
            raise NoConvergence(f"Kummer series not converged after {N_MAX} terms (z={z})")
    val = s.value
    if val == 0:
        raise NoConvergence("Kummer series summed to exactly zero; relative error undefined")
    rel = (EPS * absum * (1.0 + math.sqrt(n)) + trunc) / abs(val)
    return val, ds.value, rel, n


def _continuation_step(
    a: complex, b: complex, z0: complex, w: complex, dw: complex, h: complex
) -> tuple[complex, complex, float, int]:
    """Advance (M, M') from z0 to z0 + h with the local Taylor series of the Kummer ODE.

    Coefficients follow from ``z w'' + (b - z) w' - a w = 0`` expanded about ``z0``;
    ``d_n = c_n h**n`` are the scaled coefficients.
    """
    s = _Neumaier(w)
    s.add(dw * h)
    ds = _Neumaier(dw)
    d0, d1 = w, dw * h
    absum = abs(d0) + abs(d1)
    n = 0
    while True:
        d2 = ((n + a) * d0 * h * h - (n + 1) * (n + b - z0) * d1 * h) / (z0 * (n + 1) * (n + 2))
        s.add(d2)
        ds.add((n + 2) * d2 / h)
        absum += abs(d2)
        n += 1
        scale = abs(s.value)
        if n >= 3 and abs(d2) + abs(d1) <= TOL_SERIES * 1e-2 * scale:
            trunc = 2.0 * (abs(d2) + abs(d1))
            break
        if n >= N_MAX:
            raise NoConvergence(f"continuation step not converged after {N_MAX} terms")
        d0, d1 = d1, d2
    val = s.value
    if val == 0:
        raise NoConvergence("continuation produced an exact zero")
    rel = (EPS * absum * (1.0 + math.sqrt(n)) + trunc) / abs(val)
    return val, ds.value, rel, n + 2


def _kummer_with_derivative(a: complex, b: complex, z: complex) -> tuple[complex, complex, float, int]:
    r = abs(z)
    try:
        direct = _series_at_origin(a, b, z)
    except NoConvergence:
        direct = None
    if direct is not None and (r <= _START_RADII[-1] or direct[2] <= _DIRECT_OK):
        return direct
    u = z / r
    # largest starting radius whose direct sum is itself clean
    for rho in _START_RADII:
        if rho >= r:
            continue
        z0 = u * rho
        start = _series_at_origin(a, b, z0)
        if start[2] <= _DIRECT_OK:
            break
    w, dw, err, terms = start
    abs_err = err * abs(w)
    while rho < r:
        step = min(H_MAX, _STEP_FRACTION * rho, r - rho)
        # land exactly on z at the last step
        h = z - z0 if rho + step >= r else u * step
        w, dw, e, k = _continuation_step(a, b, z0, w, dw, h)
        # absolute accumulation: a value shrinking along the path inherits earlier errors
        abs_err += e * abs(w)
        terms += k
        z0 = z0 + h
        rho += step
    return w, dw, abs_err / abs(w), terms


def kummer_m(a: complex, b: complex, z: complex) -> EvalReport:
    """Kummer's confluent hypergeometric function ``M(a, b, z) = 1F1(a; b; z)``.

    Raises
    ------
    PoleParameter
        ``b`` is a non-positive integer.
    DomainTooLarge
        ``|z| > Z_MAX``.
    NoConvergence
        The series exceeded ``N_MAX`` terms.
    """
    a, b, z = complex(a), complex(b), complex(z)
    if _is_nonpositive_int(b):
        raise PoleParameter(f"b = {b} is a non-positive integer")
    if abs(z) > Z_MAX:
        raise DomainTooLarge(f"|z| = {abs(z):.6g} > Z_MAX = {Z_MAX}")
    if not all(cmath.isfinite(v) for v in (a, b, z)):
        raise DomainError("Kummer parameters must be finite")
    if z == 0:
        return EvalReport(1 + 0j, 0.0, 1)
    val, _, err, terms = _kummer_with_derivative(a, b, z)
    return EvalReport(val, err, terms)


def _prefactor(p: WhittakerParams) -> complex:
    z = p.argument
    if z.imag == 0.0 and z.real < 0.0:
        raise BranchAmbiguity(f"z = {z} lies on the branch cut of z**(1/2 + mu)")
    return cmath.exp(-z / 2) * z ** (0.5 + p.mu)


def whittaker_m_leading(p: WhittakerParams) -> complex:
    """Small-argument form ``exp(-z/2) z**(1/2 + mu)`` of ``M_{kappa,mu}(z)``."""
    return _prefactor(p)


def whittaker_m(p: WhittakerParams) -> EvalReport:
    """Whittaker ``M_{kappa,mu}(z) = e^{-z/2} z^{1/2+mu} M(1/2+mu-kappa, 1+2mu, z)``.

    Principal branch for ``z**(1/2 + mu)``; arguments on the negative real axis
    raise :class:`BranchAmbiguity`.
    """
    z = p.argument
    if z == 0:
        if (0.5 + p.mu).real > 0:
            return EvalReport(0j, 0.0, 1)
        raise DomainError("M_{kappa,mu}(0) diverges for Re(mu) <= -1/2")
    pref = _prefactor(p)
    k = kummer_m(0.5 + p.mu - p.kappa, 1 + 2 * p.mu, z)
    return EvalReport(pref * k.value, k.est_error + 4 * EPS, k.terms_used)


def whittaker_m_with_derivative(p: WhittakerParams) -> tuple[EvalReport, EvalReport]:
    """``(M_{kappa,mu}(z), d/dz M_{kappa,mu}(z))`` sharing the ``M_{kappa,mu}`` evaluation.

    The derivative comes from the contiguous pair ``M_{kappa,mu}``, ``M_{kappa+1,mu}``:
    ``z M'_{k,m} = (z/2 - k) M_{k,m} + (1/2 + m + k) M_{k+1,m}``.
    """
    z = p.argument
    if z == 0:
        raise DomainError("derivative of M_{kappa,mu} is not evaluated at z = 0")
    m0 = whittaker_m(p)
    m1 = whittaker_m(p.shifted(dkappa=1))
    c0 = z / 2 - p.kappa
    c1 = 0.5 + p.mu + p.kappa
    t0, t1 = c0 * m0.value, c1 * m1.value
    val = (t0 + t1) / z
    if val == 0:
        raise NoConvergence("derivative cancelled to exactly zero")
    abs_err = abs(t0) * (m0.est_error + EPS) + abs(t1) * (m1.est_error + EPS)
    return m0, EvalReport(val, abs_err / abs(z * val), m0.terms_used + m1.terms_used)


def whittaker_m_derivative(p: WhittakerParams) -> EvalReport:
    """``d/dz M_{kappa,mu}(z)`` via the contiguous relation (see :func:`whittaker_m_with_derivative`)."""
    return whittaker_m_with_derivative(p)[1]


def whittaker_w(p: WhittakerParams) -> EvalReport:
    """Whittaker ``W_{kappa,mu}(z)`` from the ``M_{kappa,+-mu}`` pair.

    ``W = G(-2m)/G(1/2-m-k) M_{k,m} + G(2m)/G(1/2+m-k) M_{k,-m}``; undefined
    (logarithmic case) when ``2 mu`` is an integer.
    """
    if _is_int(2 * p.mu):
        raise LogarithmicCase(f"2*mu = {2 * p.mu} is an integer")
    mp_ = whittaker_m(p)
    mm_ = whittaker_m(p.shifted(mu=-p.mu))
    k, m = p.kappa, p.mu
    cp = gamma(-2 * m) * rgamma(0.5 - m - k)
    cm = gamma(2 * m) * rgamma(0.5 + m - k)
    tp, tm = cp * mp_.value, cm * mm_.value
    val = tp + tm
    abs_err = abs(tp) * (mp_.est_error + _GAMMA_REL) + abs(tm) * (mm_.est_error + _GAMMA_REL)
    if val == 0:
        raise NoConvergence("W combination cancelled to exactly zero")
    return EvalReport(val, abs_err / abs(val), mp_.terms_used + mm_.terms_used)


# Lanczos approximation, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_GAMMA_REL = 5e-14
_SQRT_2PI = math.sqrt(2 * math.pi)


def gamma(z: complex) -> complex:
    """Complex Gamma function (Lanczos, reflection for Re z < 1/2)."""
    z = complex(z)
    if _is_nonpositive_int(z):
        raise PoleParameter(f"Gamma has a pole at {z}")
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * gamma(1 - z))
    z -= 1
    x = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        x += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _SQRT_2PI * cmath.exp((z + 0.5) * cmath.log(t) - t) * x


def rgamma(z: complex) -> complex:
    """``1/Gamma(z)``, entire: exactly zero at the poles of Gamma."""
    z = complex(z)
    if _is_nonpositive_int(z):
        return 0j
    return 1 / gamma(z)


def accepted(report: EvalReport, what: str = "evaluation") -> complex:
    """Return ``report.value`` or raise if its error estimate exceeds ``TOL_ACCEPT``."""
    if report.est_error > TOL_ACCEPT:
        raise InaccurateEvaluation(
            f"{what}: estimated relative error {report.est_error:.3g} > {TOL_ACCEPT:g}"
        )
    return report.value
