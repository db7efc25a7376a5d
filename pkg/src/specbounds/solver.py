"""Shooting solver for the reduced radial Schrödinger equation.

The radial problem

    -u'' + [((N-1)(N-3)/4 + l(l+N-2)) / r**2 + V(r)] u = E u

is integrated with Numerov's method on a mesh that is uniform in
``x = ln r``.  With ``u = r**0.5 w`` the equation becomes

    w''(x) = [(M-2)**2/4 + r**2 (V(r) - E)] w(x),     M = N + 2l,

which has no singular coefficient, so a Coulomb term costs no accuracy.
Eigenvalues are located by bisection on the Sturm node count of the outward
solution and then polished with Brent's method on its (scaled) end value,
i.e. the Dirichlet condition ``u(r_max) = 0``.  The wavefunction itself is
assembled from an outward and an inward sweep matched at the outer turning
point.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numba import njit
from scipy.integrate import simpson
from scipy.optimize import brentq

from .errors import ConvergenceError, DomainError, PreconditionError, SpecBoundsError, SpectrumError
from .potential import PotentialSum, QuantumNumbers, reduced_dimension

__all__ = [
    "SolverConfig",
    "RadialSolution",
    "solve_eigenvalue",
    "energy_trajectory",
    "ground_state_monotonicity_check",
]

# inner cutoff relative to r_max when r_min is automatic
INNER_RATIO = 1e-8
# required WKB decay exponent between the outer turning point and r_max
TAIL_ACTION = 25.0
MAX_DOMAIN_RADIUS = 1e9


@dataclass(frozen=True)
class SolverConfig:
    """Numerical settings.  ``r_min = 0`` and ``r_max = 0`` select automatic values."""

    r_min: float = 0.0
    r_max: float = 0.0
    mesh_points: int = 20000
    energy_tol: float = 1e-8
    max_iter: int = 200

    def __post_init__(self) -> None:
        if self.mesh_points < 1000:
            raise DomainError("mesh_points must be at least 1000")
        if not self.energy_tol > 0:
            raise DomainError("energy_tol must be positive")
        if self.r_min < 0 or self.r_max < 0:
            raise DomainError("r_min and r_max must be nonnegative (0 = automatic)")
        if self.r_max > 0 and self.r_min >= self.r_max:
            raise DomainError("r_min must be smaller than r_max")
        if self.max_iter < 10:
            raise DomainError("max_iter must be at least 10")


@dataclass(frozen=True)
class RadialSolution:
    energy: float
    mesh: np.ndarray = field(repr=False)
    u_values: np.ndarray = field(repr=False)
    node_count: int
    qn: QuantumNumbers | None = None

    @property
    def dimension(self) -> int:
        return reduced_dimension(self.qn) if self.qn is not None else 3

    def psi_values(self) -> np.ndarray:
        """Radial wavefunction ``psi = u * r**(-(M-1)/2)``."""
        return self.u_values * self.mesh ** (-(self.dimension - 1) / 2.0)

    def norm(self) -> float:
        x = np.log(self.mesh)
        return float(simpson(self.u_values ** 2 * self.mesh, x=x))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["r", "u"])
            for r, u in zip(self.mesh, self.u_values):
                writer.writerow([f"{r:.12e}", f"{u:.12e}"])


# --------------------------------------------------------------------------
# Numerov kernels


@njit(cache=True)
def _shoot(g, h12, w0, w1):
    """Outward sweep; returns (sign changes, w_end / max|w|)."""
    n = g.size
    f_prev = 1.0 - h12 * g[0]
    f_cur = 1.0 - h12 * g[1]
    wp = w0
    wc = w1
    big = max(abs(w0), abs(w1))
    nodes = 0
    last_sign = 1.0 if w1 > 0 else (-1.0 if w1 < 0 else (1.0 if w0 >= 0 else -1.0))
    for i in range(1, n - 1):
        f_next = 1.0 - h12 * g[i + 1]
        wn = ((12.0 - 10.0 * f_cur) * wc - f_prev * wp) / f_next
        if wn != 0.0:
            s = 1.0 if wn > 0 else -1.0
            if s != last_sign:
                nodes += 1
                last_sign = s
        a = abs(wn)
        if a > big:
            big = a
        if big > 1e150:
            wn *= 1e-150
            wc *= 1e-150
            big *= 1e-150
        wp = wc
        wc = wn
        f_prev = f_cur
        f_cur = f_next
    return nodes, wc / big


@njit(cache=True)
def _sweep(g, h12, w0, w1, stop):
    """Sweep from index 0 through ``stop`` storing the profile (rescaled in place)."""
    w = np.zeros(stop + 1)
    w[0] = w0
    w[1] = w1
    for i in range(1, stop):
        w[i + 1] = ((12.0 - 10.0 * (1.0 - h12 * g[i])) * w[i]
                    - (1.0 - h12 * g[i - 1]) * w[i - 1]) / (1.0 - h12 * g[i + 1])
        if abs(w[i + 1]) > 1e150:
            for j in range(i + 2):
                w[j] *= 1e-150
    return w


# --------------------------------------------------------------------------
# domain selection


def _effective(potential: PotentialSum, centrifugal: float, r):
    return centrifugal / (r * r) + potential(r)


def _semiclassical_energy(potential: PotentialSum, P: float) -> tuple[float, float]:
    """``min_r (P/r)**2 + V(r)`` on a coarse log grid; returns (energy, radius)."""
    rs = np.geomspace(1e-6, 1e6, 1201)
    with np.errstate(over="ignore", invalid="ignore"):
        vals = (P / rs) ** 2 + potential(rs)
    vals = np.where(np.isfinite(vals), vals, np.inf)
    k = int(np.argmin(vals))
    return float(vals[k]), float(rs[k])


def _outer_turning_point(potential, centrifugal, E, r_start):
    r = r_start
    prev = r
    for _ in range(2000):
        v = _effective(potential, centrifugal, r)
        v_next = _effective(potential, centrifugal, r * 1.01)
        if v > E and v_next >= v:
            break
        prev = r
        r *= 1.1
        if r > MAX_DOMAIN_RADIUS:
            raise SpectrumError(f"no classical turning point below r={MAX_DOMAIN_RADIUS:g} for E={E:.6g}")
    else:  # pragma: no cover
        raise SpectrumError("turning point search did not terminate")
    if prev == r:
        # started in the forbidden region: walk inward until allowed
        while _effective(potential, centrifugal, prev) > E and prev > 1e-12:
            prev /= 1.1
        if prev <= 1e-12:
            return r
    return brentq(lambda x: _effective(potential, centrifugal, x) - E, prev, r, xtol=1e-12 * r)


def _wkb_action(potential, centrifugal, E, r_t, R):
    rs = np.geomspace(r_t, R, 600)
    kappa = np.sqrt(np.maximum(_effective(potential, centrifugal, rs) - E, 0.0))
    return float(np.trapezoid(kappa, rs))


def _domain_for(potential, centrifugal, E, r_start):
    r_t = _outer_turning_point(potential, centrifugal, E, r_start)
    R = 3.0 * r_t
    while _wkb_action(potential, centrifugal, E, r_t, R) < TAIL_ACTION:
        R *= 2.0
        if R > MAX_DOMAIN_RADIUS:
            raise SpectrumError(f"eigenfunction tail does not decay inside r<{MAX_DOMAIN_RADIUS:g} (E={E:.6g})")
    return R


# --------------------------------------------------------------------------


class _Problem:
    """A fixed mesh plus the potential, ready for repeated shooting."""

    def __init__(self, potential: PotentialSum, ell: int, dim: int, r_min: float, r_max: float, points: int):
        self.potential = potential
        self.M = dim + 2 * ell
        # centrifugal term written in the unreduced (ell, N) form
        self.centrifugal = (dim - 1) * (dim - 3) / 4.0 + ell * (ell + dim - 2)
        self.s = ell + (dim - 1) / 2.0
        self.x = np.linspace(math.log(r_min), math.log(r_max), points)
        self.h = self.x[1] - self.x[0]
        self.h12 = self.h * self.h / 12.0
        self.r = np.exp(self.x)
        self.r2 = self.r * self.r
        self.base = self.centrifugal + 0.25 + self.r2 * potential(self.r)

    def g(self, E: float) -> np.ndarray:
        return self.base - E * self.r2

    def _start(self, E: float) -> tuple[float, float]:
        # u = r**s (1 + sum c_j r**p_j) near the origin, one correction per term
        r0, r1 = self.r[0], self.r[1]
        terms = [(t.signed_coupling, t.exponent + 2.0) for t in self.potential.terms]
        terms.append((-E, 2.0))
        corr0 = corr1 = 1.0
        for v, p in terms:
            c = v / (p * (2.0 * self.s + p - 1.0))
            corr0 += c * r0 ** p
            corr1 += c * r1 ** p
        return corr0, math.exp((self.s - 0.5) * self.h) * corr1

    def shoot(self, E: float) -> tuple[int, float]:
        w0, w1 = self._start(E)
        return _shoot(self.g(E), self.h12, w0, w1)

    def eigenfunction(self, E: float) -> np.ndarray:
        g = self.g(E)
        n = g.size
        negative = np.nonzero(g < 0)[0]
        m = int(negative[-1]) if negative.size else n // 2
        m = min(max(m, n // 20), n - n // 20)
        w0, w1 = self._start(E)
        w_out = _sweep(g, self.h12, w0, w1, m + 1)
        w_in = _sweep(g[::-1].copy(), self.h12, 0.0, 1e-30, n - m)[::-1]
        # w_in[k] sits at mesh index m - 1 + k
        if w_in[1] == 0.0:
            raise ConvergenceError("inward solution vanished at the matching point")
        w = np.empty(n)
        w[: m + 1] = w_out[: m + 1]
        w[m + 1:] = (w_out[m] / w_in[1]) * w_in[2:]
        u = w * np.sqrt(self.r)
        norm = math.sqrt(simpson(u * u * self.r, x=self.x))
        u /= norm
        if u[np.argmax(np.abs(u) > 1e-8 * np.max(np.abs(u)))] < 0:
            u = -u
        return u


def _count_nodes(u: np.ndarray) -> int:
    significant = u[np.abs(u) > 1e-12 * np.max(np.abs(u))]
    signs = np.sign(significant)
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def _locate(problem: _Problem, n: int, lo: float, hi: float, width: float, cfg: SolverConfig) -> float:
    budget = cfg.max_iter
    nodes_lo = problem.shoot(lo)[0]
    while nodes_lo >= n:
        hi, lo = lo, lo - width
        width *= 2.0
        nodes_lo = problem.shoot(lo)[0]
        budget -= 1
        if budget <= 0:
            raise ConvergenceError("could not bracket the eigenvalue from below")
    nodes_hi = problem.shoot(hi)[0]
    while nodes_hi < n:
        lo, hi = hi, hi + width
        width *= 2.0
        nodes_hi = problem.shoot(hi)[0]
        budget -= 1
        if budget <= 0:
            raise SpectrumError(f"node count {n - 1} unreachable (highest count {nodes_hi})")
    while nodes_lo != n - 1 or nodes_hi != n:
        mid = 0.5 * (lo + hi)
        k = problem.shoot(mid)[0]
        if k >= n:
            hi, nodes_hi = mid, k
        else:
            lo, nodes_lo = mid, k
        budget -= 1
        if budget <= 0 or hi - lo < 1e-15 * max(1.0, abs(hi)):
            raise ConvergenceError(f"could not isolate eigenvalue n={n} between {lo!r} and {hi!r}")
    f = lambda E: problem.shoot(E)[1]
    xtol = max(1e-3 * cfg.energy_tol, 1e-14)
    E, info = brentq(f, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=max(budget, 10),
                     full_output=True, disp=False)
    if not info.converged:
        raise ConvergenceError(f"Brent iteration did not converge after {info.iterations} steps")
    return float(E)


def solve_eigenvalue(potential: PotentialSum, qn: QuantumNumbers, cfg: SolverConfig | None = None) -> RadialSolution:
    """Return the ``n``-th eigenvalue of ``-Δ + V`` in the angular-momentum subspace ``ell``."""
    cfg = cfg or SolverConfig()
    M = reduced_dimension(qn)
    centrifugal = (M - 1) * (M - 3) / 4.0
    n = qn.n

    E_lo, r_lo = _semiclassical_energy(potential, n + (M - 3) / 2.0)
    E_hi, r_hi = _semiclassical_energy(potential, 2 * n + M / 2.0 - 2.0)
    gap = abs(E_hi - E_lo) + 1e-3 * (abs(E_lo) + abs(E_hi)) + 1e-12
    guess = E_hi + 0.5 * gap if potential.is_confining else E_hi

    fixed = cfg.r_max > 0
    if fixed:
        R = cfg.r_max
    else:
        R = _domain_for(potential, centrifugal, guess, min(r_lo, r_hi))
    E = None
    for _ in range(8):
        r_min = cfg.r_min if cfg.r_min > 0 else R * INNER_RATIO
        problem = _Problem(potential, qn.ell, qn.dim, r_min, R, cfg.mesh_points)
        lo, hi = (E_lo - gap, E_hi + gap) if E is None else (E - gap, E + gap)
        E = _locate(problem, n, lo, hi, gap, cfg)
        if fixed:
            break
        if not potential.is_confining and E >= 0:
            raise SpectrumError(f"no bound state with {n - 1} nodes (box state at E={E:.6g})")
        need = _domain_for(potential, centrifugal, E, min(r_lo, r_hi))
        if need <= R * (1 + 1e-9):
            break
        R = need
    else:  # pragma: no cover
        raise ConvergenceError("automatic domain selection did not settle")

    u = problem.eigenfunction(E)
    nodes = _count_nodes(u)
    if nodes != n - 1:
        raise SpectrumError(f"eigenfunction has {nodes} nodes, expected {n - 1}")
    return RadialSolution(energy=E, mesh=problem.r.copy(), u_values=u, node_count=nodes, qn=qn)


def energy_trajectory(shape: PotentialSum, coupling_grid: Sequence[float], qn: QuantumNumbers,
                      cfg: SolverConfig | None = None) -> list[tuple[float, float]]:
    """Sample ``F(v)``, the eigenvalue of ``-Δ + v f(r)``, on ``coupling_grid``."""
    grid = [float(v) for v in coupling_grid]
    if any(v <= 0 for v in grid):
        raise DomainError("couplings must be positive")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("coupling grid must be strictly ascending")
    out = []
    for v in grid:
        try:
            out.append((v, solve_eigenvalue(shape.scaled(v), qn, cfg).energy))
        except SpecBoundsError as exc:
            raise type(exc)(f"at coupling v={v!r}: {exc}") from exc
    return out


def ground_state_monotonicity_check(sol: RadialSolution, qn: QuantumNumbers, rel_tol: float = 1e-6) -> bool:
    """True when ``psi = u r**(-(M-1)/2)`` is nonincreasing on the mesh.

    Forward differences up to ``rel_tol * max|psi|`` are tolerated.
    """
    if qn.n != 1:
        raise PreconditionError("monotonicity holds only for the nodeless (n=1) state")
    M = reduced_dimension(qn)
    psi = sol.u_values * sol.mesh ** (-(M - 1) / 2.0)
    return bool(np.all(np.diff(psi) <= rel_tol * np.max(np.abs(psi))))
