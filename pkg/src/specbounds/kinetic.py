"""Kinetic potentials and the sum-approximation lower bound.

A kinetic potential ``f̄(s)`` is tied to the energy trajectory ``F(v)`` of
``-Δ + v f(r)`` by the Legendre pair

    s = F(v) - v F'(v),      f̄(s) = F'(v),      F(v) = min_s { s + v f̄(s) }.

For the bottom of each angular-momentum subspace ``F`` is concave and ``f̄``
convex.  Lower bounds for ``-Δ + Σ c_i h_i`` follow from minimizing
``s + Σ c_i h̄_i(s)``.
"""

from __future__ import annotations

import csv
import math
from typing import Sequence

import numpy as np
from scipy.interpolate import CubicHermiteSpline, PchipInterpolator

from .errors import DataError, DomainError, PreconditionError, RangeError, UnsupportedExponentError
from .numerics import golden_section, minimize_on_log_grid
from .potential import QuantumNumbers, reduced_dimension
from .power_law import pure_power_energy
from .solver import SolverConfig

__all__ = [
    "KineticPotential",
    "power_kinetic_potential",
    "legendre_from_trajectory",
    "energy_from_kinetic_potential",
    "sum_lower_bound",
    "is_convex",
]


class KineticPotential:
    """Either the closed form ``A s**(-q/2)`` of a pure power, or a sampled convex curve."""

    def __init__(self, form: str, qn: QuantumNumbers | None = None, *, q: float | None = None,
                 amplitude: float | None = None, s: Sequence[float] | None = None,
                 fbar: Sequence[float] | None = None, slopes: Sequence[float] | None = None):
        if form == "power":
            if q is None or amplitude is None:
                raise DomainError("power form needs q and amplitude")
            self.q = float(q)
            self.amplitude = float(amplitude)
            self.s = self.fbar = None
            self._interp = None
        elif form == "sampled":
            s = np.asarray(s, dtype=float)
            fbar = np.asarray(fbar, dtype=float)
            if s.ndim != 1 or s.shape != fbar.shape or s.size < 2:
                raise DataError("sampled kinetic potential needs matching 1-D s and fbar arrays")
            if np.any(np.diff(s) <= 0):
                raise DataError("sampled s values must be strictly ascending")
            self.q = self.amplitude = None
            self.s, self.fbar = s, fbar
            if slopes is not None:
                self._interp = CubicHermiteSpline(s, fbar, np.asarray(slopes, dtype=float), extrapolate=False)
            else:
                self._interp = PchipInterpolator(s, fbar, extrapolate=False)
        else:
            raise DomainError(f"unknown kinetic potential form {form!r}")
        self.form = form
        self.qn = qn

    def __call__(self, s):
        s_arr = np.asarray(s, dtype=float)
        if self.form == "power":
            out = self.amplitude * s_arr ** (-self.q / 2.0)
        else:
            out = self._interp(s_arr)
        return out if out.ndim else float(out)

    @property
    def domain(self) -> tuple[float, float]:
        if self.form == "power":
            return 0.0, math.inf
        return float(self.s[0]), float(self.s[-1])

    def scaled(self, c: float) -> "KineticPotential":
        """Kinetic potential of ``c V``, which is ``c f̄``."""
        if not c > 0:
            raise DomainError("scale factor must be positive")
        if self.form == "power":
            return KineticPotential("power", self.qn, q=self.q, amplitude=c * self.amplitude)
        slopes = self._interp.derivative()(self.s) if isinstance(self._interp, CubicHermiteSpline) else None
        return KineticPotential("sampled", self.qn, s=self.s, fbar=c * self.fbar,
                                slopes=None if slopes is None else c * slopes)

    def to_csv(self, path) -> None:
        if self.form != "sampled":
            raise DomainError("only sampled kinetic potentials serialize to CSV")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["s", "fbar"])
            for s, f in zip(self.s, self.fbar):
                writer.writerow([repr(float(s)), repr(float(f))])

    def __repr__(self) -> str:
        if self.form == "power":
            return f"KineticPotential(power, q={self.q}, amplitude={self.amplitude:.10g}, qn={self.qn})"
        return f"KineticPotential(sampled, {self.s.size} points on [{self.s[0]:.4g}, {self.s[-1]:.4g}])"


def power_kinetic_potential(q: float, qn: QuantumNumbers, cfg: SolverConfig | None = None) -> KineticPotential:
    """``h̄(s) = (2/q) |q E/(2+q)|**((q+2)/2) s**(-q/2)`` with E the unit-coupling eigenvalue."""
    if q == 0 or q <= -2:
        raise UnsupportedExponentError(f"exponent q must satisfy q > -2 and q != 0, got {q!r}")
    E = pure_power_energy(q, qn, cfg)
    amplitude = (2.0 / q) * abs(q * E / (2.0 + q)) ** ((q + 2.0) / 2.0)
    return KineticPotential("power", qn, q=q, amplitude=amplitude)


def _second_differences(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    slopes = np.diff(y) / np.diff(x)
    return 2.0 * np.diff(slopes) / (x[2:] - x[:-2])


def legendre_from_trajectory(samples: Sequence[tuple[float, float]], qn: QuantumNumbers | None = None,
                             rel_tol: float = 1e-9) -> KineticPotential:
    """Build a sampled kinetic potential from ``(v, F(v))`` pairs.

    ``F'`` comes from second-order finite differences (centred inside, one-sided
    at the ends).  The slope of ``f̄`` at each sample is exactly ``-1/v``, which
    the Hermite interpolant uses.
    """
    data = np.asarray(samples, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2 or data.shape[0] < 3:
        raise DataError("need at least three (v, F) samples")
    v, F = data[:, 0], data[:, 1]
    if np.any(v <= 0) or np.any(np.diff(v) <= 0):
        raise DataError("couplings must be positive and strictly ascending")
    scale = max(np.max(np.abs(F)), 1e-300) / max(v[-1] - v[0], 1e-300) ** 2
    if np.any(_second_differences(v, F) > rel_tol * scale):
        raise DataError("trajectory is not concave on the grid")
    dF = np.gradient(F, v, edge_order=2)
    s = F - v * dF
    if np.any(np.diff(s) <= 0):
        raise DataError("induced kinetic energies are not ascending (trajectory too flat or noisy)")
    return KineticPotential("sampled", qn, s=s, fbar=dF, slopes=-1.0 / v)


def is_convex(kp: KineticPotential, s_grid: Sequence[float] | None = None, rel_tol: float = 1e-9) -> bool:
    """Discrete convexity check on the samples (or on ``s_grid`` for closed forms)."""
    if s_grid is None:
        if kp.form != "sampled":
            raise DomainError("closed-form kinetic potentials need an explicit s grid")
        s, f = kp.s, kp.fbar
    else:
        s = np.asarray(s_grid, dtype=float)
        f = np.asarray(kp(s), dtype=float)
    if s.size < 3:
        return True
    scale = max(np.max(np.abs(f)), 1e-300) / max(s[-1] - s[0], 1e-300) ** 2
    return bool(np.all(_second_differences(s, f) >= -rel_tol * scale))


def _power_minimizer(q: float, amplitude: float) -> float:
    # d/ds [s + A s^(-q/2)] = 0
    return (q * amplitude / 2.0) ** (2.0 / (q + 2.0))


def energy_from_kinetic_potential(kp: KineticPotential, v: float) -> float:
    """``min_{s>0} { s + v f̄(s) }``."""
    if not v > 0:
        raise DomainError("coupling must be positive")
    if kp.form == "power":
        s_star = _power_minimizer(kp.q, v * kp.amplitude)
        return s_star + v * kp.amplitude * s_star ** (-kp.q / 2.0)
    lo, hi = kp.domain
    objective = lambda s: s + v * kp(s)
    s_star, value = golden_section(objective, lo, hi, tol=1e-13)
    span = hi - lo
    if s_star - lo < 1e-9 * span or hi - s_star < 1e-9 * span:
        raise RangeError(f"minimum of s + {v}·f̄(s) not attained inside the sampled range")
    return float(value)


def sum_lower_bound(components: Sequence[tuple[float, KineticPotential]]) -> float:
    """Lower bound ``min_s { s + Σ c_i f̄_i(s) }`` for the bottom of ``-Δ + Σ c_i h_i``.

    Valid only for ground states (n = 1) of a common angular-momentum subspace.
    """
    if not components:
        raise DomainError("need at least one component")
    dims = set()
    for c, kp in components:
        if not c > 0:
            raise DomainError("component couplings must be positive")
        if kp.qn is None:
            raise PreconditionError("kinetic potentials must carry quantum numbers")
        if kp.qn.n != 1:
            raise PreconditionError("the sum approximation bounds only n = 1 levels")
        dims.add(reduced_dimension(kp.qn))
    if len(dims) != 1:
        raise PreconditionError("all components must belong to the same subspace (same N + 2l)")

    objective = lambda s: s + sum(c * float(kp(s)) for c, kp in components)
    lo = max(kp.domain[0] for _, kp in components)
    hi = min(kp.domain[1] for _, kp in components)
    if math.isinf(hi):
        guesses = [_power_minimizer(kp.q, c * kp.amplitude) for c, kp in components if kp.form == "power"]
        if lo > 0:
            guesses.append(lo)
        lo_s = max(lo, min(guesses) * 1e-6)
        hi_s = max(guesses) * 1e6
        s_star, value = minimize_on_log_grid(objective, lo_s, hi_s, points=241)
        return float(value)
    if hi <= lo:
        raise RangeError("sampled components have disjoint s ranges")
    s_star, value = golden_section(objective, lo, hi, tol=1e-13)
    span = hi - lo
    if s_star - lo < 1e-9 * span or hi - s_star < 1e-9 * span:
        raise RangeError("sum-approximation minimum not attained inside the sampled range")
    return float(value)
