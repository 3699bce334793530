"""Command-line front end: sweeps, resonance scans, bound spectra and oracle validation.

All inputs are dimensionless natural units (hbar = c = m = 1).  Output is
CSV or JSON, deterministic for a given configuration.

Exit codes: 0 success, 2 configuration error, 3 partial numerical failure,
4 validation failure.
"""
from __future__ import annotations

import argparse
import enum
import io
import json
import logging
import math
import sys
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from . import __version__
from ._parallel import parallel_map
from .bound_states import find_bound_states, trace_spectrum
from .dkp_model import CuspPotential, PotentialKind
from .errors import DkpError
from .oracle import DEFAULT_TOL, OdeProblem, Parity, oracle_bound_energies, oracle_rt
from .scattering import reflection_transmission, scan_resonances_vs_strength, sweep_energy

__all__ = ["Command", "OutputFormat", "RunConfig", "ConfigError", "build_config", "run", "main"]

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARTIAL = 3
EXIT_VALIDATION = 4
VALIDATE_MAX_DIFF = 1e-5
UNMATCHED_GAP = 1e-3  # an oracle root farther than this from every analytic root is unmatched


class Command(enum.Enum):
    SCATTER = "scatter"
    RESONANCE_SCAN = "resonance-scan"
    BOUND_SPECTRUM = "bound-spectrum"
    VALIDATE = "validate"


class OutputFormat(enum.Enum):
    CSV = "csv"
    JSON = "json"


class ConfigError(ValueError):
    """Invalid command-line configuration."""


@dataclass(frozen=True)
class RunConfig:
    command: Command
    potential: CuspPotential
    grid: tuple[float, float, int]
    format: OutputFormat = OutputFormat.CSV
    output: str | None = None
    fixed_e: float | None = None
    tol: float = DEFAULT_TOL
    max_diff: float = VALIDATE_MAX_DIFF
    workers: int | None = None

    def __post_init__(self) -> None:
        lo, hi, n = self.grid
        if n < 2:
            raise ConfigError(f"--n must be >= 2, got {n}")
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ConfigError(f"grid minimum must be below maximum, got [{lo}, {hi}]")


def _fmt(x: float) -> str:
    return f"{x:.15g}"


def _round15(x: float) -> float:
    return float(_fmt(x)) if math.isfinite(x) else x


class _Table:
    """Rows plus comment lines, emitted as CSV or JSON."""

    def __init__(self, columns: Sequence[str]) -> None:
        self.columns = list(columns)
        self.rows: list[list[Any]] = []
        self.notes: list[str] = []
        self.meta: dict[str, Any] = {}

    def add(self, *values: Any) -> None:
        self.rows.append(list(values))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(self.columns) + "\n")
        for row in self.rows:
            buf.write(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row) + "\n")
        for note in self.notes:
            buf.write(f"# {note}\n")
        return buf.getvalue()

    def to_json(self) -> str:
        def clean(v: Any) -> Any:
            if isinstance(v, float):
                return _round15(v)
            if isinstance(v, dict):
                return {k: clean(x) for k, x in v.items()}
            if isinstance(v, list):
                return [clean(x) for x in v]
            return v

        doc = {
            "columns": self.columns,
            "rows": [[clean(v) for v in r] for r in self.rows],
            "notes": self.notes,
            "meta": clean(self.meta),
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"

    def render(self, fmt: OutputFormat) -> str:
        return self.to_csv() if fmt is OutputFormat.CSV else self.to_json()


def run_scatter(cfg: RunConfig) -> tuple[int, _Table]:
    lo, hi, n = cfg.grid
    points = sweep_energy(cfg.potential, lo, hi, n, cfg.workers)
    table = _Table(["E", "R", "T", "unitarity_defect", "status"])
    worst = 0.0
    for pt in points:
        if pt.ok:
            res = pt.result
            worst = max(worst, res.unitarity_defect)
            table.add(pt.param, res.r, res.t, res.unitarity_defect, "ok")
        else:
            table.add(pt.param, math.nan, math.nan, math.nan, _status(pt.error))
    failed = sum(not pt.ok for pt in points)
    table.notes.append(f"max_unitarity_defect {_fmt(worst)}")
    table.meta = {"max_unitarity_defect": worst, "failed_points": failed}
    return (EXIT_PARTIAL if failed else EXIT_OK), table


def _status(error: str | None) -> str:
    return "error:" + (error or "unknown").split(":")[0]


def run_resonance_scan(cfg: RunConfig) -> tuple[int, _Table]:
    if cfg.fixed_e is None:
        raise ConfigError("resonance-scan needs --e")
    lo, hi, n = cfg.grid
    scan = scan_resonances_vs_strength(cfg.potential.a, cfg.fixed_e, lo, hi, n, cfg.workers)
    table = _Table(["V0", "T", "status"])
    failed = dict(scan.failed)
    for v, t in scan.samples:
        table.add(v, t, _status(failed[v]) if v in failed else "ok")
    if scan.peaks:
        for v, t in zip(scan.peaks, scan.peak_heights):
            table.notes.append(f"peak V0={_fmt(v)} T={_fmt(t)}")
        for s in scan.spacings:
            table.notes.append(f"spacing {_fmt(s)}")
        if scan.spacings:
            table.notes.append(f"asymptotic_spacing {_fmt(scan.asymptotic_spacing)}")
    else:
        table.notes.append("no peaks")
    table.meta = {
        "peaks": scan.peaks,
        "peak_heights": scan.peak_heights,
        "spacings": scan.spacings,
        "asymptotic_spacing": scan.asymptotic_spacing if scan.spacings else None,
        "failed_points": len(scan.failed),
    }
    return (EXIT_PARTIAL if scan.failed else EXIT_OK), table


def run_bound_spectrum(cfg: RunConfig) -> tuple[int, _Table]:
    if cfg.potential.kind is not PotentialKind.WELL:
        raise ConfigError("bound-spectrum needs --kind well")
    lo, hi, n = cfg.grid
    if n < 10:
        raise ConfigError("bound-spectrum needs --n >= 10")
    trace = trace_spectrum(cfg.potential.a, lo, hi, n, workers=cfg.workers)
    table = _Table(["V0", "E", "residual"])
    for s in trace.points:
        table.add(s.v0, s.e, s.residual)
    tp = trace.turning_point
    if tp is None:
        table.notes.append("no turning point in range")
        table.meta = {"turning_point": None}
    else:
        conf = "low confidence" if tp.low_confidence else "refined"
        table.notes.append(f"turning_point V0={_fmt(tp.v0)} E={_fmt(tp.e)} ({conf})")
        table.meta = {"turning_point": {"v0": tp.v0, "e": tp.e, "low_confidence": tp.low_confidence}}
    return EXIT_OK, table


def _validate_scatter_point(args: tuple[float, float, float, float]) -> tuple[float, float, float, float, float]:
    e, a, v0, tol = args
    p = CuspPotential(a, v0)
    res = reflection_transmission(e, p)
    r_o, t_o = oracle_rt(OdeProblem.default(p, e, tol))
    return e, res.r, r_o, res.t, t_o


def _validate_bound_point(args: tuple[float, float, float]) -> list[tuple[float, float, float]]:
    v0, a, tol = args
    p = CuspPotential(a, v0, PotentialKind.WELL)
    analytic = [s.e for s in find_bound_states(p)]
    oracle = oracle_bound_energies(p, tol=tol, parity=Parity.EVEN)
    rows = []
    for e in analytic:
        o = min(oracle, key=lambda x: abs(x - e)) if oracle else math.nan
        rows.append((v0, e, o))
    # even oracle states with no analytic partner count as failures
    for o in oracle:
        if not analytic or min(abs(o - e) for e in analytic) > UNMATCHED_GAP:
            rows.append((v0, math.nan, o))
    return rows


def run_validate(cfg: RunConfig) -> tuple[int, _Table]:
    lo, hi, n = cfg.grid
    p = cfg.potential
    table = _Table(["param", "analytic", "oracle", "abs_diff"])
    diffs: list[float] = []

    def add(param: float, an: float, orc: float) -> None:
        d = abs(an - orc) if math.isfinite(an) and math.isfinite(orc) else math.inf
        diffs.append(d)
        table.add(param, an, orc, d)

    grid = np.linspace(lo, hi, n).tolist()
    if p.kind is PotentialKind.BARRIER:
        res = parallel_map(_validate_scatter_point, [(e, p.a, p.v0, cfg.tol) for e in grid], cfg.workers)
        table.notes.append("rows 1..n compare R, rows n+1..2n compare T")
        for e, r_a, r_o, _, _ in res:
            add(e, r_a, r_o)
        for e, _, _, t_a, t_o in res:
            add(e, t_a, t_o)
        quantity = "R,T"
    else:
        res = parallel_map(_validate_bound_point, [(v, p.a, cfg.tol) for v in grid], cfg.workers)
        for rows in res:
            for v, an, orc in rows:
                add(v, an, orc)
        quantity = "E"
    worst = max(diffs) if diffs else 0.0
    ok = bool(diffs) and worst <= cfg.max_diff
    table.notes.append(f"max_abs_diff {_fmt(worst)} threshold {_fmt(cfg.max_diff)} {'pass' if ok else 'FAIL'}")
    table.meta = {"quantity": quantity, "max_abs_diff": worst, "threshold": cfg.max_diff, "pass": ok}
    return (EXIT_OK if ok else EXIT_VALIDATION), table


_RUNNERS = {
    Command.SCATTER: run_scatter,
    Command.RESONANCE_SCAN: run_resonance_scan,
    Command.BOUND_SPECTRUM: run_bound_spectrum,
    Command.VALIDATE: run_validate,
}

_DEFAULT_KIND = {
    Command.SCATTER: "barrier",
    Command.RESONANCE_SCAN: "barrier",
    Command.BOUND_SPECTRUM: "well",
    Command.VALIDATE: "barrier",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise ConfigError(message)


def _parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="dkp-cusp",
        description="Scattering and bound states of the DKP equation with a cusp potential "
        "V(x) = +-V0 exp(-|x|/a). Natural units: hbar = c = m = 1.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        Command.SCATTER: "R and T on an energy grid [--e-min, --e-max]",
        Command.RESONANCE_SCAN: "T versus V0 at fixed --e, with refined peak positions",
        Command.BOUND_SPECTRUM: "lowest even bound-state curve over [--v-min, --v-max] and its turning point",
        Command.VALIDATE: "compare analytic results with direct ODE integration",
    }
    for cmd in Command:
        sp = sub.add_parser(cmd.value, help=helps[cmd])
        sp.add_argument("--a", type=float, required=True, help="shape parameter a > 0")
        sp.add_argument("--v0", type=float, help="potential strength V0 > 0")
        sp.add_argument("--kind", choices=["barrier", "well"], default=_DEFAULT_KIND[cmd])
        sp.add_argument("--e", type=float, help="fixed energy (resonance-scan)")
        sp.add_argument("--e-min", type=float)
        sp.add_argument("--e-max", type=float)
        sp.add_argument("--v-min", type=float)
        sp.add_argument("--v-max", type=float)
        sp.add_argument("--n", type=int, required=True, help="grid points")
        sp.add_argument("--format", choices=[f.value for f in OutputFormat], default="csv")
        sp.add_argument("--output", help="write to this file instead of stdout")
        sp.add_argument("--tol", type=float, default=DEFAULT_TOL, help="oracle integration tolerance")
        sp.add_argument(
            "--max-diff", type=float, default=VALIDATE_MAX_DIFF, help="validate: largest accepted |analytic - oracle|"
        )
        sp.add_argument("--workers", type=int, help="parallel processes (default: DKP_THREADS or 1)")
        sp.add_argument("-v", "--verbose", action="store_true")
    return parser


def _need(value: float | None, flag: str) -> float:
    if value is None:
        raise ConfigError(f"{flag} is required for this command")
    return value


def build_config(argv: Sequence[str]) -> RunConfig:
    """Parse ``argv`` into a :class:`RunConfig`; raises :class:`ConfigError`."""
    ns = _parser().parse_args(list(argv))
    cmd = Command(ns.command)
    kind = PotentialKind(ns.kind)
    if cmd in (Command.SCATTER, Command.RESONANCE_SCAN) and kind is not PotentialKind.BARRIER:
        raise ConfigError(f"{cmd.value} needs --kind barrier")
    if cmd is Command.BOUND_SPECTRUM and kind is not PotentialKind.WELL:
        raise ConfigError("bound-spectrum needs --kind well")

    scans_depth = cmd in (Command.RESONANCE_SCAN, Command.BOUND_SPECTRUM) or (
        cmd is Command.VALIDATE and kind is PotentialKind.WELL
    )
    if scans_depth:
        lo, hi = _need(ns.v_min, "--v-min"), _need(ns.v_max, "--v-max")
        if lo <= 0:
            raise ConfigError("--v-min must be > 0")
        v0 = ns.v0 if ns.v0 is not None else lo
    else:
        lo, hi = _need(ns.e_min, "--e-min"), _need(ns.e_max, "--e-max")
        if lo <= 1.0:
            raise ConfigError(f"scattering requires E > 1, got --e-min {lo}")
        v0 = _need(ns.v0, "--v0")
    if cmd is Command.RESONANCE_SCAN:
        e = _need(ns.e, "--e")
        if e * e <= 1.0:
            raise ConfigError(f"scattering requires E^2 > 1, got --e {e}")
    if not (1e-12 <= ns.tol <= 1e-6):
        raise ConfigError(f"--tol must lie in [1e-12, 1e-6], got {ns.tol}")
    if ns.verbose:
        logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    try:
        potential = CuspPotential(ns.a, v0, kind)
    except DkpError as exc:
        raise ConfigError(str(exc)) from exc
    return RunConfig(
        command=cmd,
        potential=potential,
        grid=(lo, hi, ns.n),
        format=OutputFormat(ns.format),
        output=ns.output,
        fixed_e=ns.e,
        tol=ns.tol,
        max_diff=ns.max_diff,
        workers=ns.workers,
    )


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute a configuration; returns ``(exit_code, rendered_output)``."""
    code, table = _RUNNERS[cfg.command](cfg)
    return code, table.render(cfg.format)


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = build_config(argv)
        code, text = run(cfg)
    except ConfigError as exc:
        print(f"dkp-cusp: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DkpError as exc:
        # domain errors surfacing from the solvers are configuration problems
        if isinstance(exc, ValueError):
            print(f"dkp-cusp: configuration error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        print(f"dkp-cusp: numerical failure: {exc}", file=sys.stderr)
        return EXIT_PARTIAL
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
