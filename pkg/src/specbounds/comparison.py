"""Comparison theorems with crossing potentials, and chord bounds.

If ``k(r) = ∫_0^r (V1 - V2) ψ t^(M-1) dt <= 0`` for every ``r`` (``ψ`` the
ground state of either operator, or ``ψ ≡ 1`` when the potentials cross
twice), the ground energies are ordered ``E1 <= E2``.  Chords are solvable
comparison potentials that cross ``V = -a/r + b r`` and are chosen so the
signed area condition holds:

* hydrogenic chords ``-α/r + β`` give lower bounds,
* shifted-linear chords ``-α + β r`` give upper bounds.

Everything works in the reduced dimension ``M = N + 2ℓ``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import CubicSpline
from scipy.special import gamma, gammainc

from .envelope import BoundResult
from .errors import ConvergenceError, DomainError, InfeasibleError, PreconditionError
from .numerics import composite_gauss_nodes, integrate_from_origin, minimize_on_log_grid
from .potential import PotentialSum, QuantumNumbers, check_monotone, reduced_dimension
from .power_law import pure_power_energy
from .solver import RadialSolution, SolverConfig, solve_eigenvalue

__all__ = [
    "ChordPotential",
    "OffsetPotential",
    "CrossingReport",
    "crossing_integral",
    "crossing_profile",
    "verify_comparison",
    "solve_potential",
    "chord_upper",
    "chord_lower",
    "chord_lower_psi_weighted",
    "chord_upper_psi_weighted",
]

FAMILIES = ("shifted-linear", "hydrogenic")
THETA = 0.5
FIXED_POINT_TOL = 1e-8
FIXED_POINT_MAX_ITER = 100
SEARCH_DECADES = 3.0

Weight = Callable[[float, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ChordPotential:
    alpha: float
    beta: float
    family: str

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise DomainError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if not self.alpha > 0:
            raise DomainError("alpha must be positive")
        if self.family == "shifted-linear" and not self.beta > 0:
            raise DomainError("shifted-linear chords need beta > 0")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if self.family == "shifted-linear":
            out = -self.alpha + self.beta * r
        else:
            out = -self.alpha / r + self.beta
        return out if out.ndim else float(out)

    def split(self) -> tuple[PotentialSum, float]:
        """``(shape, offset)`` with ``V = shape + offset``."""
        if self.family == "shifted-linear":
            return PotentialSum([(self.beta, 1.0)]), -self.alpha
        return PotentialSum([(self.alpha, -1.0)]), self.beta

    def ground_energy(self, M: int, cfg: SolverConfig | None = None) -> float:
        if self.family == "hydrogenic":
            return self.beta - (self.alpha / (M - 1)) ** 2
        return -self.alpha + self.beta ** (2.0 / 3.0) * pure_power_energy(1.0, QuantumNumbers(1, 0, M), cfg)


@dataclass(frozen=True)
class OffsetPotential:
    """``shape(r) + offset``: a PotentialSum shifted by a constant."""

    shape: PotentialSum
    offset: float = 0.0

    def __call__(self, r):
        return self.shape(r) + self.offset

    def split(self) -> tuple[PotentialSum, float]:
        return self.shape, self.offset


@dataclass
class CrossingReport:
    crossings: list[float]
    mesh: np.ndarray = field(repr=False)
    k_values: np.ndarray = field(repr=False)
    condition_met: bool
    theorem_used: str | None
    e1: float | None = None
    e2: float | None = None
    ordering_holds: bool | None = None


def solve_potential(V, qn: QuantumNumbers, cfg: SolverConfig | None = None) -> RadialSolution:
    """Solve for a PotentialSum, ChordPotential or OffsetPotential (offset added back to the energy)."""
    if isinstance(V, (ChordPotential, OffsetPotential)):
        shape, offset = V.split()
        sol = solve_eigenvalue(shape, qn, cfg)
        return RadialSolution(sol.energy + offset, sol.mesh, sol.u_values, sol.node_count, sol.qn)
    return solve_eigenvalue(V, qn, cfg)


def _weight_function(psi, M: int):
    if psi is None:
        return lambda t: 1.0
    if isinstance(psi, RadialSolution):
        x = np.log(psi.mesh)
        spline = CubicSpline(x, psi.u_values * psi.mesh ** (-(M - 1) / 2.0))
        x0, x1 = x[0], x[-1]

        def weight(t):
            y = math.log(t) if t > 0 else x0
            if y >= x1:
                return 0.0
            return float(spline(max(y, x0)))
        return weight
    return psi


def crossing_integral(V1, V2, psi, M: int, r: float, tol: float = 1e-11) -> float:
    """``k(r) = ∫_0^r (V1 - V2)(t) ψ(t) t^(M-1) dt``.

    ``psi`` is ``None`` (unweighted), a :class:`RadialSolution`, or a callable.
    """
    if M < 2:
        raise DomainError("dimension must be at least 2")
    if r < 0:
        raise DomainError("radius must be nonnegative")
    weight = _weight_function(psi, M)
    integrand = lambda t: (float(V1(t)) - float(V2(t))) * weight(t) * t ** (M - 1)
    return integrate_from_origin(integrand, r, tol)


def crossing_profile(V1, V2, sol: RadialSolution) -> tuple[np.ndarray, np.ndarray]:
    """``k`` on the solver mesh, weighted by ``sol``'s wavefunction.

    With ``ψ t^(M-1) dt = u r^((M-1)/2) r dx`` on the log mesh.
    """
    r = sol.mesh
    M = sol.dimension
    integrand = (np.asarray(V1(r)) - np.asarray(V2(r))) * sol.u_values * r ** ((M + 1) / 2.0)
    k = cumulative_simpson(integrand, x=np.log(r), initial=0.0)
    return r, k


def _sign_changes(diff: np.ndarray, r: np.ndarray, rel_tol: float = 1e-12) -> list[float]:
    scale = np.max(np.abs(diff)) if diff.size else 1.0
    sig = np.where(np.abs(diff) <= rel_tol * scale, 0, np.sign(diff))
    idx = np.nonzero(sig)[0]
    out = []
    for i, j in zip(idx[:-1], idx[1:]):
        if sig[i] != sig[j]:
            # linear interpolation between the two bracketing samples
            ri, rj, di, dj = r[i], r[j], diff[i], diff[j]
            out.append(float(ri - di * (rj - ri) / (dj - di)))
    return out


def verify_comparison(V1, V2, qn: QuantumNumbers, cfg: SolverConfig | None = None, *,
                      weighted: bool = True, psi: RadialSolution | None = None,
                      rel_tol: float = 1e-9) -> CrossingReport:
    """Check the crossing condition ``k(r) <= 0`` and, if it holds, the ordering ``E1 <= E2``.

    ``k`` is weighted by the ground state of ``V1`` (or ``psi`` when supplied);
    with ``weighted=False`` the weight is 1.  Potentials must be solvable:
    PotentialSum, ChordPotential or OffsetPotential.
    """
    if qn.n != 1:
        raise PreconditionError("comparison theorems here apply to the ground state (n = 1)")
    cfg = cfg or SolverConfig()
    sol1 = psi if psi is not None else solve_potential(V1, qn, cfg)
    r = sol1.mesh
    for V in (V1, V2):
        if not check_monotone(V, r):
            raise PreconditionError("both potentials must be increasing")
    if weighted:
        _, k = crossing_profile(V1, V2, sol1)
        weight = np.abs(sol1.u_values) * r ** ((sol1.dimension + 1) / 2.0)
        scale = float(np.trapezoid(np.abs(np.asarray(V1(r)) - np.asarray(V2(r))) * weight, np.log(r)))
    else:
        M = reduced_dimension(qn)
        integrand = (np.asarray(V1(r)) - np.asarray(V2(r))) * r ** M
        k = cumulative_simpson(integrand, x=np.log(r), initial=0.0)
        scale = float(np.trapezoid(np.abs(integrand), np.log(r)))
    diff = np.asarray(V1(r)) - np.asarray(V2(r))
    crossings = _sign_changes(diff, r)
    met = bool(np.max(k) <= rel_tol * max(scale, 1e-300))
    if len(crossings) == 0:
        theorem = "T4-direct"
    elif len(crossings) == 1:
        theorem = "T5"
    else:
        theorem = "T6" if weighted else "T7"
    report = CrossingReport(crossings, r, k, met, theorem if met else None)
    if met:
        e1 = sol1.energy if psi is None else solve_potential(V1, qn, cfg).energy
        e2 = solve_potential(V2, qn, cfg).energy
        report.e1, report.e2 = e1, e2
        report.ordering_holds = bool(e1 <= e2 + 2.0 * cfg.energy_tol)
    return report


def _reduced_dim(ell: int, N: int) -> int:
    M = QuantumNumbers(1, ell, N).reduced.dim
    if M < 3:
        raise PreconditionError("chord bounds need M = N + 2l >= 3; M = 2 is not supported")
    return M


def _check_ab(a: float, b: float) -> None:
    if not (a > 0 and b > 0):
        raise DomainError("a and b must be positive")


def _search_range(a: float, b: float) -> tuple[float, float, int]:
    """Log-grid bounds for the crossing radius, ``SEARCH_DECADES`` beyond the natural lengths.

    ``sqrt(a/b)`` balances the two terms; ``1/a`` and ``b**(-1/3)`` are the
    Coulomb and linear lengths, which take over when one coupling is tiny.
    """
    scales = (math.sqrt(a / b), 1.0 / a, b ** (-1.0 / 3.0))
    lo = min(scales) * 10 ** -SEARCH_DECADES
    hi = max(scales) * 10 ** SEARCH_DECADES
    points = int(20 * math.log10(hi / lo)) + 1
    return lo, hi, points


# ---- upper chords: -α + β r --------------------------------------------------

def _upper_chord_params(a: float, b: float, M: int, r: float) -> tuple[float, float]:
    alpha = 2.0 * a * M / ((M - 1) * r)
    beta = b + a * (M + 1) / ((M - 1) * r * r)
    return alpha, beta


def chord_upper(a: float, b: float, ell: int = 0, N: int = 3, cfg: SolverConfig | None = None) -> BoundResult:
    """Best shifted-linear chord upper bound, minimized over the outer crossing ``r``."""
    _check_ab(a, b)
    M = _reduced_dim(ell, N)
    e_lin = pure_power_energy(1.0, QuantumNumbers(1, 0, M), cfg)

    def energy(r):
        alpha, beta = _upper_chord_params(a, b, M, r)
        return -alpha + beta ** (2.0 / 3.0) * e_lin

    r, E = minimize_on_log_grid(energy, *_search_range(a, b))
    alpha, beta = _upper_chord_params(a, b, M, r)
    r1 = a / (r * (beta - b))
    return BoundResult(E, "upper", "chord", {"alpha": alpha, "beta": beta, "r1": r1, "r2": r, "M": M})


@lru_cache(maxsize=32)
def _linear_ground_state(M: int, cfg: SolverConfig | None):
    """Spline of the ground state of ``-Δ + r`` in ``M`` dimensions, normalized to ψ(0⁺)."""
    sol = solve_eigenvalue(PotentialSum([(1.0, 1.0)]), QuantumNumbers(1, 0, M), cfg)
    psi = sol.u_values * sol.mesh ** (-(M - 1) / 2.0)
    psi = psi / psi[0]
    return CubicSpline(sol.mesh, psi), float(sol.mesh[0]), float(sol.mesh[-1])


def _linear_weight(M: int, cfg: SolverConfig | None) -> Weight:
    spline, lo, hi = _linear_ground_state(M, cfg)

    def weight(beta, t):
        x = np.clip(beta ** (1.0 / 3.0) * np.asarray(t), lo, None)
        return np.where(x < hi, spline(np.minimum(x, hi)), 0.0)
    # beyond this radius the solver's wavefunction is below its tail threshold
    weight.support = lambda beta: hi / beta ** (1.0 / 3.0)
    return weight


def _support(weight, param: float, r: float) -> float:
    cut = getattr(weight, "support", None)
    return min(r, cut(param)) if cut is not None else r


def _upper_weighted_beta(a, b, M, r, weight: Weight, beta0: float):
    def solve(beta):
        t, w = composite_gauss_nodes(0.0, _support(weight, beta, r))
        w = w * (t - r) * t ** (M - 2) * weight(beta, t)
        num, den = float(np.sum(w)), float(np.dot(w, t))
        return b + (a / r) * num / den if den != 0 else math.nan

    beta = beta0
    for it in range(1, FIXED_POINT_MAX_ITER + 1):
        with np.errstate(invalid="ignore", divide="ignore"):
            new = (1.0 - THETA) * beta + THETA * solve(beta)
        if not math.isfinite(new):
            break
        if abs(new - beta) <= FIXED_POINT_TOL * max(1.0, abs(beta)):
            return new, it
        beta = new
    raise ConvergenceError(f"weighted upper chord fixed point did not settle at r={r:.6g}")


def chord_upper_psi_weighted(a: float, b: float, ell: int = 0, N: int = 3, cfg: SolverConfig | None = None,
                             weight: Weight | None = None) -> BoundResult:
    """Shifted-linear chord with areas weighted by the chord's own ground state.

    The ground state of ``-Δ - α + β r`` is ``φ(β^(1/3) t)`` with ``φ`` that of
    ``-Δ + r``, so only ``β`` enters the weight.  ``weight(beta, t)`` overrides it.
    """
    _check_ab(a, b)
    M = _reduced_dim(ell, N)
    e_lin = pure_power_energy(1.0, QuantumNumbers(1, 0, M), cfg)
    weight = weight or _linear_weight(M, cfg)

    def energy(r):
        _, beta0 = _upper_chord_params(a, b, M, r)
        beta, its = _upper_weighted_beta(a, b, M, r, weight, beta0)
        alpha = (beta - b) * r + a / r
        return -alpha + beta ** (2.0 / 3.0) * e_lin

    r, E = minimize_on_log_grid(_skip_failures(energy), *_search_range(a, b))
    _, beta0 = _upper_chord_params(a, b, M, r)
    beta, its = _upper_weighted_beta(a, b, M, r, weight, beta0)
    alpha = (beta - b) * r + a / r
    return BoundResult(E, "upper", "chord-psi-weighted",
                       {"alpha": alpha, "beta": beta, "r1": a / (r * (beta - b)), "r2": r, "M": M,
                        "iterations": its})


# ---- lower chords: -α/r + β --------------------------------------------------

def _lower_chord_params(a: float, b: float, M: int, t: float) -> tuple[float, float]:
    d = b * t * t * (M - 1) / (M + 1)
    return a + d, b * t + d / t


def _skip_failures(energy):
    # candidates whose matching fails (weights underflow far from the optimum) are dropped
    def wrapped(x):
        try:
            return energy(x)
        except ConvergenceError:
            return math.nan
    return wrapped


def _maximize_over_t(energy, a, b):
    energy = _skip_failures(energy)
    t, neg = minimize_on_log_grid(lambda t: -energy(t), *_search_range(a, b))
    if not math.isfinite(neg):
        raise InfeasibleError("no admissible crossing radius")
    return t, -neg


def chord_lower(a: float, b: float, ell: int = 0, N: int = 3, cfg: SolverConfig | None = None) -> BoundResult:
    """Best hydrogenic chord lower bound with unweighted area matching.

    Every crossing radius ``t`` gives a valid bound ``β - (α/(M-1))²``; the
    largest is returned.
    """
    _check_ab(a, b)
    M = _reduced_dim(ell, N)

    def energy(t):
        alpha, beta = _lower_chord_params(a, b, M, t)
        return beta - (alpha / (M - 1)) ** 2

    t, E = _maximize_over_t(energy, a, b)
    alpha, beta = _lower_chord_params(a, b, M, t)
    r1 = (alpha - a) / (b * t)
    return BoundResult(E, "lower", "chord", {"alpha": alpha, "beta": beta, "r1": r1, "r2": t, "M": M})


def _hydrogenic_ratio(M: int, c: float, t: float) -> float:
    """``∫(t-s)s^(M-1)e^(-cs) / ∫(t-s)s^(M-2)e^(-cs)`` over ``[0, t]`` via incomplete gamma functions."""
    x = c * t
    low = lambda k: gammainc(k, x) * gamma(k)  # ∫_0^x y^(k-1) e^(-y) dy
    return (x * low(M) - low(M + 1)) / (c * (x * low(M - 1) - low(M)))


def _lower_weighted_alpha(a, b, M, t, weight: Weight | None, alpha0: float):
    def solve(alpha):
        if weight is None:
            return a + b * t * float(_hydrogenic_ratio(M, alpha / (M - 1), t))
        s, w = composite_gauss_nodes(0.0, t)
        w = w * (t - s) * s ** (M - 2) * weight(alpha, s)
        num, den = float(np.dot(w, s)), float(np.sum(w))
        return a + b * t * num / den if den != 0 else math.nan

    alpha = alpha0
    for it in range(1, FIXED_POINT_MAX_ITER + 1):
        with np.errstate(invalid="ignore", divide="ignore"):
            new = (1.0 - THETA) * alpha + THETA * solve(alpha)
        if not math.isfinite(new):
            break
        if abs(new - alpha) <= FIXED_POINT_TOL * max(1.0, abs(alpha)):
            return new, it
        alpha = new
    raise ConvergenceError(f"weighted lower chord fixed point did not settle at t={t:.6g}")


def chord_lower_psi_weighted(a: float, b: float, ell: int = 0, N: int = 3, cfg: SolverConfig | None = None,
                             weight: Weight | None = None) -> BoundResult:
    """Hydrogenic chord with areas weighted by ``ψ = exp(-α r/(M-1))``.

    ``α`` appears in its own weight, so it is found by damped fixed-point
    iteration started from the unweighted chord.  ``weight(alpha, s)``
    overrides the weight, which is then integrated by quadrature instead of in closed form.
    """
    _check_ab(a, b)
    M = _reduced_dim(ell, N)

    def params(t):
        alpha0, _ = _lower_chord_params(a, b, M, t)
        alpha, its = _lower_weighted_alpha(a, b, M, t, weight, alpha0)
        return alpha, b * t + (alpha - a) / t, its

    def energy(t):
        alpha, beta, _ = params(t)
        return beta - (alpha / (M - 1)) ** 2

    t, E = _maximize_over_t(energy, a, b)
    alpha, beta, its = params(t)
    r1 = (alpha - a) / (b * t)
    return BoundResult(E, "lower", "chord-psi-weighted",
                       {"alpha": alpha, "beta": beta, "r1": r1, "r2": t, "M": M, "iterations": its})
