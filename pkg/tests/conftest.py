"""Shared fixtures: high-precision reference values and the acceptance report."""
from __future__ import annotations

import os

import mpmath as mp
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# criterion number -> (title, passed, detail)
ACCEPTANCE_RESULTS: dict[int, tuple[str, bool, str]] = {}


def record_criterion(number: int, title: str, passed: bool, detail: str) -> None:
    ACCEPTANCE_RESULTS[number] = (title, passed, detail)
    print(f"ACCEPTANCE {number} [{'PASS' if passed else 'FAIL'}] {title}: {detail}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        title, passed, detail = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {number}. {title}: {detail}")


# ---------------------------------------------------------------------------
# independent references, evaluated with mpmath at high precision


def mp_kummer_series(a: complex, b: complex, z: complex, dps: int = 200) -> complex:
    """Direct Taylor sum of M(a, b, z) at ``dps`` digits."""
    with mp.workdps(dps):
        a_, b_, z_ = mp.mpc(a), mp.mpc(b), mp.mpc(z)
        term = mp.mpc(1)
        total = mp.mpc(1)
        n = 0
        eps = mp.mpf(10) ** (-dps + 5)
        while True:
            term *= (a_ + n) / (b_ + n) * z_ / (n + 1)
            total += term
            n += 1
            if abs(term) < eps * abs(total) and n > abs(z_) + 10:
                break
        return complex(total)


def mp_whitm(kappa: complex, mu: complex, z: complex, dps: int = 50) -> complex:
    with mp.workdps(dps):
        return complex(mp.whitm(mp.mpc(kappa), mp.mpc(mu), mp.mpc(z)))


def mp_whitw(kappa: complex, mu: complex, z: complex, dps: int = 50) -> complex:
    with mp.workdps(dps):
        return complex(mp.whitw(mp.mpc(kappa), mp.mpc(mu), mp.mpc(z)))


def mp_half_line_spinor(x: float, e: float, a: float, v0: float, sign: float, kappa, mu, left: bool):
    """Reference ``(psi, phi, theta)`` with ``psi = y^{-1/2} M_{kappa,mu}(y)``, ``y = 2iaV0 e^{-|x|/a}``.

    ``phi = -dpsi/dx`` is taken by mpmath numerical differentiation of the
    half-line formula (one-sided at the origin by analytic continuation of that
    side's expression).  ``sign`` is +1 for the barrier, -1 for the well.
    """
    with mp.workdps(40):
        a_, v_ = mp.mpf(a), mp.mpf(v0)
        k_, m_ = mp.mpc(kappa), mp.mpc(mu)

        def psi(xx):
            y = 2j * a_ * v_ * (mp.exp(xx / a_) if left else mp.exp(-xx / a_))
            return mp.whitm(k_, m_, y) / mp.sqrt(y)

        x_ = mp.mpf(x)
        p = psi(x_)
        dp = mp.diff(psi, x_)
        v = sign * v_ * mp.exp(-abs(x_) / a_)
        return complex(p), complex(-dp), complex(-1j * (mp.mpf(e) - v) * p)


@pytest.fixture(scope="session")
def scatter_case():
    """a = 0.6, V0 = 4, E = 2 barrier used throughout."""
    return {"a": 0.6, "v0": 4.0, "e": 2.0}
