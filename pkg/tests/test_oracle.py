import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dkp_cusp.bound_states import find_bound_states
from dkp_cusp.dkp_model import CuspPotential, PotentialKind
from dkp_cusp.errors import DomainError, WrongKind
from dkp_cusp.oracle import (
    Direction,
    OdeProblem,
    Parity,
    decompose_plane_waves,
    default_half_width,
    integrate_kg,
    oracle_bound_energies,
    oracle_bound_states,
    oracle_rt,
    shooting_wronskian,
)
from dkp_cusp.scattering import reflection_transmission

WELL = PotentialKind.WELL
P = CuspPotential(0.6, 4.0)


# ---------------------------------------------------------------- problem and integrator


def test_problem_invariants():
    with pytest.raises(DomainError):
        OdeProblem(P, 2.0, -5.0, 10.0)  # left edge closer than 12a
    with pytest.raises(DomainError):
        OdeProblem(P, 2.0, 1.0, 10.0)
    with pytest.raises(DomainError):
        OdeProblem(P, 2.0, -10.0, 10.0, tol=1e-15)
    prob = OdeProblem.default(P, 2.0)
    assert prob.x_right == default_half_width(P) >= 12 * P.a
    assert P(prob.x_right) <= math.exp(-24) * 1.0001


def test_free_plane_wave_propagates_exactly():
    p = CuspPotential(1.0, 1e-300)
    e = 1.7
    k = math.sqrt(e * e - 1)
    prob = OdeProblem(p, e, -12.0, 12.0, tol=1e-12)
    xs = np.linspace(-12, 12, 41)
    sol = integrate_kg(prob, cmath.exp(1j * k * 12), 1j * k * cmath.exp(1j * k * 12), Direction.LEFTWARD, xs)
    expected = np.exp(1j * k * sol.x)
    assert np.max(np.abs(sol.psi - expected)) <= 1e-9
    assert np.max(np.abs(sol.dpsi - 1j * k * expected)) <= 1e-9
    assert sol.error_estimate < 1e-8


def test_rightward_integration_and_stop():
    prob = OdeProblem.default(P, 2.0)
    sol = integrate_kg(prob, 1.0, 0.0, Direction.RIGHTWARD, x_stop=0.0)
    assert sol.x[0] == prob.x_left and sol.x[-1] == 0.0
    with pytest.raises(DomainError):
        integrate_kg(prob, 1.0, 0.0, Direction.RIGHTWARD, x_stop=1e3)


def test_wronskian_is_conserved():
    prob = OdeProblem.default(P, 2.0, tol=1e-12)
    xs = np.linspace(prob.x_left, prob.x_right, 61)
    s1 = integrate_kg(prob, 1.0, 0.0, Direction.LEFTWARD, xs)
    s2 = integrate_kg(prob, 0.0, 1.0, Direction.LEFTWARD, xs)
    w = s1.psi * s2.dpsi - s1.dpsi * s2.psi
    assert np.max(np.abs(w - w[0])) <= 1e-9


def test_plane_wave_split_reconstructs():
    k, x = 1.3, -4.2
    psi, dpsi = 0.3 - 1.1j, 2.0 + 0.4j
    fd = decompose_plane_waves(x, psi, dpsi, k)
    a, b = fd.amp_right_moving, fd.amp_left_moving
    assert a * cmath.exp(1j * k * x) + b * cmath.exp(-1j * k * x) == pytest.approx(psi, abs=1e-14)
    assert 1j * k * (a * cmath.exp(1j * k * x) - b * cmath.exp(-1j * k * x)) == pytest.approx(dpsi, abs=1e-14)


# ---------------------------------------------------------------- R and T


def test_rt_matches_analytic_at_reference_point():
    r, t = oracle_rt(OdeProblem.default(P, 2.0))
    ref = reflection_transmission(2.0, P)
    assert abs(r - ref.r) <= 1e-6 and abs(t - ref.t) <= 1e-6


def test_rt_vanishing_barrier():
    r, t = oracle_rt(OdeProblem.default(CuspPotential(0.6, 1e-9), 2.0))
    assert r <= 1e-9
    assert t == pytest.approx(1.0, abs=1e-9)


def test_rt_resonance_near_one_and_a_half():
    es = np.linspace(1.3, 1.7, 41)
    ts = [oracle_rt(OdeProblem.default(P, float(e)))[1] for e in es]
    i = int(np.argmax(ts))
    assert 0 < i < len(es) - 1
    assert ts[i] >= 0.99


@settings(max_examples=25)
@given(a=st.floats(0.2, 1.0), v0=st.floats(0.5, 10.0), e=st.floats(1.05, 8.0), sign=st.sampled_from([-1, 1]))
def test_rt_flux_conservation(a, v0, e, sign):
    prob = OdeProblem.default(CuspPotential(a, v0), sign * e)
    r, t = oracle_rt(prob)
    assert abs(r + t - 1) <= 10 * prob.tol


@pytest.mark.parametrize("e", [1.1, 2.0, 6.0])
def test_rt_box_convergence(e):
    prob = OdeProblem.default(P, e)
    r1, t1 = oracle_rt(prob)
    r2, t2 = oracle_rt(prob.scaled_box(2.0))
    assert abs(r1 - r2) <= 1e-7 and abs(t1 - t2) <= 1e-7


@pytest.mark.parametrize("e", [1.1, 2.0, 6.0])
def test_rt_tolerance_convergence(e):
    tol = 1e-9
    a = oracle_rt(OdeProblem.default(P, e, tol))
    b = oracle_rt(OdeProblem.default(P, e, tol / 10))
    assert max(abs(a[0] - b[0]), abs(a[1] - b[1])) <= 10 * tol


def test_rt_wrong_kind_and_energy():
    with pytest.raises(WrongKind):
        oracle_rt(OdeProblem.default(CuspPotential(0.6, 4.0, WELL), 2.0))
    with pytest.raises(DomainError):
        oracle_rt(OdeProblem.default(P, 0.5))


# ---------------------------------------------------------------- bound states


def test_bound_single_root_matches_analytic():
    p = CuspPotential(0.5, 1.0, WELL)
    oracle = oracle_bound_energies(p)
    analytic = find_bound_states(p)
    assert len(oracle) == 1 and len(analytic) == 1
    assert abs(oracle[0] - analytic[0].e) <= 1e-6


def test_bound_reference_critical_depth():
    energies = oracle_bound_energies(CuspPotential(0.5, 3.60534, WELL))
    assert any(abs(e + 0.98347) <= 1e-3 for e in energies)


def test_bound_just_below_fold():
    energies = oracle_bound_energies(CuspPotential(0.5, 3.6053, WELL), n_scan=4000)
    assert any(abs(e + 0.98347) <= 1e-3 for e in energies)


def test_ground_state_is_even():
    p = CuspPotential(0.5, 2.0, WELL)
    states = oracle_bound_states(p)
    ground = min(states, key=lambda s: -s.e) if states else None
    assert ground is not None and ground.parity is Parity.EVEN
    assert abs(shooting_wronskian(p, ground.e)) <= 1e-7


def test_odd_states_found_and_classified():
    states = oracle_bound_states(CuspPotential(0.5, 3.0, WELL))
    parities = {s.parity for s in states}
    assert parities == {Parity.EVEN, Parity.ODD}
    # odd states are invisible to the even-state energy equation
    analytic = [s.e for s in find_bound_states(CuspPotential(0.5, 3.0, WELL))]
    for s in states:
        near = any(abs(s.e - e) <= 1e-6 for e in analytic)
        assert near == (s.parity is Parity.EVEN)


@pytest.mark.parametrize("v0", [0.5, 2.0, 3.5])
def test_bound_box_convergence(v0):
    p = CuspPotential(0.5, v0, WELL)
    h = default_half_width(p)
    e1 = oracle_bound_energies(p, half_width=h)
    e2 = oracle_bound_energies(p, half_width=2 * h)
    assert len(e1) == len(e2)
    assert all(abs(x - y) <= 1e-8 for x, y in zip(e1, e2))


def test_bound_wrong_kind():
    with pytest.raises(WrongKind):
        oracle_bound_energies(P)
