"""Solver for the (1+1)-dimensional DKP equation with a cusp potential.

Analytic scattering and bound states built on Whittaker functions, plus an
independent ODE-integration oracle that checks them.
"""
from __future__ import annotations

import logging

__version__ = "0.1.0"

from .bound_states import (  # noqa: E402
    BoundState,
    EnergyEquationValue,
    SpectrumTrace,
    TurningPoint,
    energy_equation,
    find_bound_states,
    trace_spectrum,
)
from .dkp_model import CuspPotential, DkpSpinor, PotentialKind  # noqa: E402
from .errors import DkpError, DomainError  # noqa: E402
from .oracle import OdeProblem, oracle_bound_energies, oracle_rt  # noqa: E402
from .scattering import (  # noqa: E402
    ResonanceScan,
    ScatteringResult,
    reflection_transmission,
    scan_resonances_vs_energy,
    scan_resonances_vs_strength,
    sweep_energy,
)

logging.getLogger(__name__).addHandler(logging.NullHandler())

__all__ = [
    "__version__",
    "BoundState",
    "CuspPotential",
    "DkpError",
    "DkpSpinor",
    "DomainError",
    "EnergyEquationValue",
    "OdeProblem",
    "PotentialKind",
    "ResonanceScan",
    "ScatteringResult",
    "SpectrumTrace",
    "TurningPoint",
    "energy_equation",
    "find_bound_states",
    "oracle_bound_energies",
    "oracle_rt",
    "reflection_transmission",
    "scan_resonances_vs_energy",
    "scan_resonances_vs_strength",
    "sweep_energy",
    "trace_spectrum",
]
