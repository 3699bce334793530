import math

import numpy as np
import pytest

from dkp_cusp.bound_states import (
    ROOT_RESIDUAL_TOL,
    energy_equation,
    find_bound_states,
    trace_spectrum,
)
from dkp_cusp.dkp_model import CuspPotential, PotentialKind
from dkp_cusp.errors import EmptyGrid, MuDegenerate, WrongKind
from dkp_cusp.oracle import Parity, log_derivative_mismatch, oracle_bound_energies, oracle_bound_states

WELL = PotentialKind.WELL


def well(a, v0):
    return CuspPotential(a, v0, WELL)


@pytest.fixture(scope="module")
def trace_a05():
    return trace_spectrum(0.5, 0.1, 3.7, 200)


# ---------------------------------------------------------------- energy equation


def test_energy_equation_near_reference_critical_point():
    val = energy_equation(-0.98347, well(0.5, 3.60534))
    assert val.scale > 0
    assert val.relative <= 1e-3


def test_energy_equation_shallow_well_has_no_interior_root():
    p = well(0.5, 0.01)
    rel = [energy_equation(float(e), p).relative for e in np.linspace(-0.9, 0.9, 181)]
    assert min(rel) > 1e-3


def test_energy_equation_continuous_in_energy():
    p = well(0.5, 2.0)
    es = np.linspace(-0.99, 0.99, 2001)
    vals = np.array([energy_equation(float(e), p).value for e in es])
    steps = np.abs(np.diff(vals))
    # adjacent differences shrink linearly when the grid is refined
    es2 = np.linspace(-0.99, 0.99, 4001)
    vals2 = np.array([energy_equation(float(e), p).value for e in es2])
    steps2 = np.abs(np.diff(vals2))
    assert steps2.max() == pytest.approx(steps.max() / 2, rel=0.05)


def test_energy_equation_guards():
    with pytest.raises(WrongKind):
        energy_equation(0.0, CuspPotential(0.5, 1.0))
    with pytest.raises(MuDegenerate):
        energy_equation(1 - 1e-7, well(0.5, 1.0))


def test_value_over_m_is_real_at_real_energy():
    # value / M_{k,mu}(2iaV0) equals -2a psi'(0)/psi(0) of a real solution
    from dkp_cusp.dkp_model import bound_params
    from dkp_cusp.special_functions import WhittakerParams, whittaker_m

    p = well(0.5, 2.7)
    for e in (-0.7, 0.1, 0.6):
        bp = bound_params(e, p)
        m0 = whittaker_m(WhittakerParams(bp.kappa, bp.mu, p.origin_argument)).value
        ratio = energy_equation(e, p).value / m0
        assert abs(ratio.imag) <= 1e-10 * abs(ratio)


# ---------------------------------------------------------------- find_bound_states


def test_reference_critical_depth_contains_state():
    states = find_bound_states(well(0.5, 3.60534))
    assert any(abs(s.e + 0.98347) <= 1e-3 for s in states)


def test_state_just_below_fold_near_reference_energy():
    states = find_bound_states(well(0.5, 3.6053))
    assert any(abs(s.e + 0.98347) <= 1e-3 for s in states)


def test_very_shallow_well():
    p = well(0.5, 1e-3)
    states = find_bound_states(p)
    assert len(states) <= 1
    assert all(s.e > 0.99 for s in states)
    assert len(oracle_bound_energies(p, parity=Parity.EVEN)) == len(states)


@pytest.mark.parametrize("v0", [0.3, 1.0, 2.5, 3.5])
def test_roots_stable_under_grid_doubling(v0):
    p = well(0.5, v0)
    a = find_bound_states(p, 400)
    b = find_bound_states(p, 800)
    assert len(a) == len(b)
    for s, t in zip(a, b):
        assert abs(s.e - t.e) <= 1e-8


@pytest.mark.parametrize("v0", [0.5, 1.5, 3.0, 3.6])
def test_roots_satisfy_both_parts(v0):
    p = well(0.5, v0)
    for s in find_bound_states(p):
        val = energy_equation(s.e, p)
        assert s.residual <= ROOT_RESIDUAL_TOL
        assert abs(val.value.real) <= 1e-7 * val.scale
        assert abs(val.value.imag) <= 1e-7 * val.scale
        assert abs(s.e) < 1


@pytest.mark.parametrize("v0", [0.2, 1.0, 2.2, 3.3, 3.6])
def test_states_are_matched_shooting_solutions(v0):
    p = well(0.5, v0)
    for s in find_bound_states(p):
        assert log_derivative_mismatch(p, s.e) <= 1e-6


def test_thin_well_matches_contact_limit():
    # for a -> 0, psi = exp(-q|x|) with the derivative jump fixed by the areas
    # int V = -2aV0 and int V^2 = aV0^2:  q = 2aV0 E + aV0^2 / 2
    a, v0 = 0.01, 5.0
    states = find_bound_states(well(a, v0))
    assert len(states) == 2
    for s in states:
        q = math.sqrt(1 - s.e**2)
        assert q == pytest.approx(2 * a * v0 * s.e + a * v0 * v0 / 2, rel=2e-2)


def test_find_bound_states_guards():
    with pytest.raises(EmptyGrid):
        find_bound_states(well(0.5, 1.0), 50)
    with pytest.raises(WrongKind):
        find_bound_states(CuspPotential(0.5, 1.0), 200)


# ---------------------------------------------------------------- trace_spectrum


def test_turning_point(trace_a05):
    tp = trace_a05.turning_point
    assert tp is not None
    assert tp.v0 == pytest.approx(3.60534, abs=1e-3)
    assert tp.e == pytest.approx(-0.98347, abs=1e-3)
    assert not tp.low_confidence


def test_curve_shape(trace_a05):
    pts = trace_a05.points
    assert [p.e for p in pts] == sorted(p.e for p in pts)
    first = min(pts, key=lambda s: s.v0)
    assert first.e > 0.99
    deepest = max(pts, key=lambda s: s.v0)
    assert deepest.e < -0.9


def test_turning_point_is_maximum_of_depth(trace_a05):
    tp = trace_a05.turning_point
    assert all(s.v0 <= tp.v0 for s in trace_a05.points)


def test_curve_monotone_on_each_branch(trace_a05):
    tp = trace_a05.turning_point
    upper = sorted((s for s in trace_a05.points if s.e >= tp.e), key=lambda s: s.v0)
    lower = sorted((s for s in trace_a05.points if s.e < tp.e), key=lambda s: s.v0)
    assert all(b.e < a.e for a, b in zip(upper, upper[1:]))
    assert all(b.e > a.e for a, b in zip(lower, lower[1:]))


def test_root_count_drops_by_two_across_fold(trace_a05):
    tp = trace_a05.turning_point
    window = (tp.e - 0.05, tp.e + 0.05)
    below = find_bound_states(well(0.5, tp.v0 - 2e-5), 400, *window)
    above = find_bound_states(well(0.5, tp.v0 + 2e-5), 400, *window)
    assert len(below) == 2
    assert len(above) == 0


def test_grid_beyond_fold_has_no_roots():
    tr = trace_spectrum(0.5, 3.62, 4.0, 10)
    assert tr.points == []
    assert tr.turning_point is None
    for v in (3.62, 3.8, 4.0):
        assert oracle_bound_energies(well(0.5, v), parity=Parity.EVEN) == []


def test_coarse_grid_flags_low_confidence():
    tr = trace_spectrum(0.5, 0.1, 3.7, 10)
    assert tr.turning_point is not None
    assert tr.turning_point.low_confidence


def test_trace_guards():
    with pytest.raises(EmptyGrid):
        trace_spectrum(0.5, 0.1, 3.7, 5)
    with pytest.raises(EmptyGrid):
        trace_spectrum(0.5, 3.0, 1.0, 20)


def test_oracle_finds_same_even_states_along_curve():
    for v0 in (0.8, 2.4, 3.55):
        p = well(0.5, v0)
        analytic = [s.e for s in find_bound_states(p)]
        oracle = [s.e for s in oracle_bound_states(p) if s.parity is Parity.EVEN]
        assert len(analytic) == len(oracle)
        for x, y in zip(analytic, oracle):
            assert abs(x - y) <= 1e-6
