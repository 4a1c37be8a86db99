"""Bounded 1-D maximization: uniform grid scan, then golden-section refinement."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, EvaluationError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI_SQ = (3.0 - math.sqrt(5.0)) / 2.0

DEFAULT_GRID_POINTS = 2048
DEFAULT_REFINE_TOL = 1e-10


@dataclass(frozen=True)
class SearchWindow:
    lo: float
    hi: float
    grid_points: int = DEFAULT_GRID_POINTS
    refine_tol: float = DEFAULT_REFINE_TOL

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or not self.lo < self.hi:
            raise DomainError(f"window needs finite lo < hi, got [{self.lo}, {self.hi}]")
        if self.grid_points < 2:
            raise DomainError("a window needs at least 2 grid points")
        if not 1e-14 <= self.refine_tol <= 1e-3:
            raise DomainError(f"refine_tol must lie in [1e-14, 1e-3], got {self.refine_tol!r}")

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.grid_points)

    def with_points(self, grid_points: int) -> "SearchWindow":
        return SearchWindow(self.lo, self.hi, grid_points, self.refine_tol)


@dataclass(frozen=True)
class OptimumReport:
    x_star: float
    f_star: float
    window: SearchWindow
    evaluations: int


def _checked(f, x):
    y = f(x)
    if not np.isfinite(y):
        raise EvaluationError(x, y)
    return float(y)


def scan(f: Callable, window: SearchWindow, vectorized: bool = False):
    """Sample ``f`` on the window's uniform grid, endpoints included.

    Returns ``(xs, ys)``. With ``vectorized=True``, ``f`` is called once on the
    whole grid.
    """
    xs = window.grid
    if vectorized:
        ys = np.asarray(f(xs), dtype=float)
        bad = ~np.isfinite(ys)
        if bad.any():
            i = int(np.argmax(bad))
            raise EvaluationError(xs[i], ys[i])
        return xs, ys
    return xs, np.array([_checked(f, x) for x in xs])


def golden_section_max(f: Callable, a: float, b: float, tol: float):
    """Golden-section search for a maximum of ``f`` inside ``[a, b]``.

    Returns ``(x, f(x), evaluations)`` for the better interior point once the
    bracket is narrower than ``tol``.
    """
    h = b - a
    c = a + INV_PHI_SQ * h
    d = a + INV_PHI * h
    yc, yd = _checked(f, c), _checked(f, d)
    evals = 2
    while h > tol:
        # ties keep the left sub-bracket
        if yc >= yd:
            b, d, yd = d, c, yc
            h = INV_PHI * h
            c = a + INV_PHI_SQ * h
            yc = _checked(f, c)
        else:
            a, c, yc = c, d, yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = _checked(f, d)
        evals += 1
    if yc >= yd:
        return c, yc, evals
    return d, yd, evals


def maximize_scalar(f: Callable, window: SearchWindow, vectorized: bool = False) -> OptimumReport:
    """Maximize ``f`` over ``[lo, hi]``.

    The best grid point (first one on ties, i.e. smallest ``x``) seeds a
    golden-section search over its two neighbouring grid cells. The refined
    point replaces the grid point only if it is strictly better, so
    ``f_star`` never falls below the best grid value and a flat objective
    returns the window's lower edge.
    """
    xs, ys = scan(f, window, vectorized)
    i = int(np.argmax(ys))
    x_best, y_best = float(xs[i]), float(ys[i])
    lo = float(xs[max(i - 1, 0)])
    hi = float(xs[min(i + 1, xs.size - 1)])
    xr, yr, evals = golden_section_max(f, lo, hi, window.refine_tol)
    evals += xs.size
    if yr > y_best:
        x_best, y_best = min(max(xr, lo), hi), yr
    return OptimumReport(x_best, y_best, window, evals)


def best_over_windows(f: Callable, windows, vectorized: bool = False) -> OptimumReport:
    """Best :func:`maximize_scalar` result across windows; earlier windows win ties."""
    best = None
    for w in windows:
        rep = maximize_scalar(f, w, vectorized)
        if best is None or rep.f_star > best.f_star:
            best = rep
    if best is None:
        raise DomainError("at least one search window is required")
    return best
