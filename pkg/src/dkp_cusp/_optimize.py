"""Golden-section minimisation on a bracket."""
from __future__ import annotations

import math
from typing import Callable

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_min(
    f: Callable[[float], float], lo: float, hi: float, xtol: float, max_iter: int = 200
) -> tuple[float, float]:
    """Minimise ``f`` on ``[lo, hi]`` until the bracket is narrower than ``xtol``.

    Returns ``(x, f(x))`` for the best point seen.  A unimodal ``f`` is assumed;
    for anything else the result is a local minimum inside the bracket.
    """
    if hi < lo:
        lo, hi = hi, lo
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc, fd = f(c), f(d)
    best = (c, fc) if fc <= fd else (d, fd)
    for _ in range(max_iter):
        if hi - lo <= xtol:
            break
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = f(c)
            if fc < best[1]:
                best = (c, fc)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_PHI * (hi - lo)
            fd = f(d)
            if fd < best[1]:
                best = (d, fd)
    return best
