"""Derivative-free maximizers: golden-section line search and cyclic coordinate ascent."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

INV_PHI = (math.sqrt(5) - 1) / 2


@dataclass
class OptimResult:
    x: np.ndarray | float
    value: float
    iterations: int
    converged: bool


def golden_section_max(f: Callable[[float], float], lo: float, hi: float,
                       tol: float = 1e-10, max_iter: int = 200) -> OptimResult:
    """Maximize a unimodal ``f`` on ``[lo, hi]``.

    The endpoints are compared with the interior optimum at the end, so a
    monotone objective still returns its best boundary value.
    """
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    it = 0
    while b - a > tol and it < max_iter:
        it += 1
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    best_x, best_f = (c, fc) if fc >= fd else (d, fd)
    for x in (lo, hi):
        fx = f(x)
        if fx > best_f:
            best_x, best_f = x, fx
    return OptimResult(best_x, best_f, it, b - a <= tol)


def coordinate_ascent(f: Callable[[np.ndarray], float], x0: Sequence[float],
                      bounds: Sequence[tuple[float, float]], sweeps: int = 200,
                      tol: float = 1e-12, line_tol: float = 1e-9) -> OptimResult:
    """Cyclic coordinate ascent with a golden-section search per coordinate.

    Stops when a full sweep improves the objective by less than ``tol``.
    """
    x = np.array(x0, dtype=float)
    best = f(x)
    for sweep in range(1, sweeps + 1):
        start = best
        for i, (lo, hi) in enumerate(bounds):
            def line(t, i=i):
                y = x.copy()
                y[i] = t
                return f(y)
            res = golden_section_max(line, lo, hi, tol=line_tol)
            if res.value > best:
                x[i] = res.x
                best = res.value
        if best - start < tol:
            return OptimResult(x, best, sweep, True)
    return OptimResult(x, best, sweeps, False)
