"""Small scalar numerics: golden-section search, adaptive Simpson, Gauss-Legendre."""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import roots_legendre

from .errors import ConvergenceError, RangeError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0


def golden_section(f: Callable[[float], float], a: float, b: float, tol: float = 1e-12,
                   max_iter: int = 500) -> tuple[float, float]:
    """Minimize a unimodal ``f`` on ``[a, b]``; returns ``(x_min, f(x_min))``."""
    a, b = min(a, b), max(a, b)
    h = b - a
    c = a + INV_PHI2 * h
    d = a + INV_PHI * h
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if h <= tol * max(1.0, abs(a) + abs(b)):
            break
        if fc < fd:
            b, d, fd = d, c, fc
            h = INV_PHI * h
            c = a + INV_PHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = INV_PHI * h
            d = a + INV_PHI * h
            fd = f(d)
    if fc < fd:
        return c, fc
    return d, fd


def minimize_on_log_grid(f: Callable[[float], float], lo: float, hi: float, points: int = 121,
                         tol: float = 1e-12, require_interior: bool = True) -> tuple[float, float]:
    """Scan ``f`` on a log grid over ``[lo, hi]``, then refine the best cell by golden section.

    The refinement happens in ``log x``.  With ``require_interior`` a minimum on
    the first or last grid point raises :class:`RangeError`.
    """
    xs = np.geomspace(lo, hi, points)
    vals = np.array([f(x) for x in xs])
    if not np.any(np.isfinite(vals)):
        raise RangeError("objective is not finite anywhere on the scan grid")
    vals = np.where(np.isfinite(vals), vals, np.inf)
    k = int(np.argmin(vals))
    if require_interior and (k == 0 or k == points - 1):
        raise RangeError(f"minimum sits on the scan boundary x={xs[k]:.6g}")
    k = min(max(k, 1), points - 2)
    g = lambda y: f(math.exp(y))
    y, fy = golden_section(g, math.log(xs[k - 1]), math.log(xs[k + 1]), tol=tol)
    if fy > vals[k]:
        return float(xs[k]), float(vals[k])
    return math.exp(y), fy


def adaptive_simpson(f: Callable[[float], float], a: float, b: float, tol: float = 1e-12,
                     max_depth: int = 60) -> float:
    """Adaptive Simpson quadrature with Richardson correction."""
    if a == b:
        return 0.0
    if a > b:
        return -adaptive_simpson(f, b, a, tol, max_depth)

    def simpson(fa, fm, fb, h):
        return h / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = simpson(fa, flm, fm, m - a)
        right = simpson(fm, frm, fb, b - m)
        delta = left + right - whole
        if depth <= 0:
            raise ConvergenceError("adaptive Simpson exceeded its recursion depth")
        if abs(delta) <= 15.0 * tol or (b - a) < 1e-15 * max(1.0, abs(a)):
            return left + right + delta / 15.0
        return (recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1))

    fa, fb = f(a), f(b)
    fm = f(0.5 * (a + b))
    return recurse(a, b, fa, fm, fb, simpson(fa, fm, fb, b - a), tol, max_depth)


def integrate_from_origin(f: Callable[[float], float], r: float, tol: float = 1e-12) -> float:
    """``∫_0^r f(t) dt`` for integrands with an integrable power singularity at 0.

    Uses the substitution ``t = r y**4``; the transformed integrand is taken to
    vanish at ``y = 0``, which holds whenever ``t**0.75 f(t) -> 0``.
    """
    if r <= 0:
        return 0.0

    def g(y):
        if y == 0.0:
            return 0.0
        t = r * y ** 4
        return f(t) * 4.0 * r * y ** 3

    return adaptive_simpson(g, 0.0, 1.0, tol)


@lru_cache(maxsize=8)
def _gl_nodes(order: int):
    x, w = roots_legendre(order)
    return x, w


def gauss_legendre(f: Callable[[np.ndarray], np.ndarray], a: float, b: float, order: int = 96) -> float:
    """Fixed-order Gauss-Legendre rule for smooth vectorized integrands."""
    x, w = _gl_nodes(order)
    half = 0.5 * (b - a)
    t = half * x + 0.5 * (a + b)
    return float(half * np.dot(w, f(t)))


def composite_gauss_nodes(a: float, b: float, panels: int = 24, order: int = 32) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of Gauss-Legendre on equal panels of ``[a, b]``.

    Resolves integrands concentrated in part of the interval, and lets several
    integrals share one evaluation of an expensive factor.
    """
    x, w = _gl_nodes(order)
    half = 0.5 * (b - a) / panels
    mids = a + half * (2.0 * np.arange(panels) + 1.0)
    nodes = (mids[:, None] + half * x[None, :]).ravel()
    weights = np.tile(half * w, panels)
    return nodes, weights


def composite_gauss_legendre(f: Callable[[np.ndarray], np.ndarray], a: float, b: float, panels: int = 24,
                             order: int = 32) -> float:
    nodes, weights = composite_gauss_nodes(a, b, panels, order)
    return float(np.dot(weights, f(nodes)))
