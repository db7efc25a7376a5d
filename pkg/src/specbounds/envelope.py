"""Envelope bounds for the Coulomb-plus-linear Hamiltonian ``-Δ - 1/r + λ r``.

Every bound here comes from the parametric system

    E = -1/(2 ν t) + 3 λ μ t / 2,        1 = t/(2 ν) + λ μ t**3 / 2,

where ``ν`` carries the Coulomb term and ``μ`` the linear term.  With
``ν = μ = P`` this is ``min_r {(P/r)**2 - 1/r + λ r}``; tangent bounds use a
single P-number, the sum approximation mixes the hydrogenic and linear ones.
General couplings reduce to ``λ`` through the scaling law

    E(ω, α, β) = α**2/ω · E(1, 1, β ω**2 / α**3)

for ``-ωΔ - α/r + β r``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .errors import DomainError, PreconditionError
from .potential import QuantumNumbers
from .power_law import p_number
from .solver import SolverConfig

__all__ = [
    "ParametricParams",
    "BoundResult",
    "parametric_bound",
    "lambda_of_energy",
    "lambda_of_energy_closed",
    "sum_estimate",
    "envelope_bound",
    "sum_bound",
    "scale_energy",
    "reduce_couplings",
]

DIRECTIONS = ("lower", "upper", "estimate", "exact")
METHODS = ("envelope-tangent", "sum-approximation", "chord", "chord-psi-weighted", "oracle")

# clamp window below the hydrogenic endpoint E = -1/(4ν²)
ENDPOINT_SLACK = 1e-12


@dataclass(frozen=True)
class ParametricParams:
    nu: float
    mu: float
    lam: float

    def __post_init__(self) -> None:
        for name in ("nu", "mu", "lam"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"{name} must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class BoundResult:
    value: float
    direction: str
    method: str
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if self.direction not in DIRECTIONS:
            raise DomainError(f"unknown direction {self.direction!r}")
        if self.method not in METHODS:
            raise DomainError(f"unknown method {self.method!r}")

    def scaled(self, factor: float, **extra) -> "BoundResult":
        params = dict(self.params, **extra)
        return BoundResult(self.value * factor, self.direction, self.method, params)


def _positive_cubic_root(p: float, q: float) -> float:
    """Unique positive root of ``t**3 + p t + q`` for ``p > 0, q < 0``."""
    # depressed cubic with one real root; the sinh form never cancels
    k = 2.0 * math.sqrt(p / 3.0)
    arg = (3.0 * -q / (2.0 * p)) * math.sqrt(3.0 / p)
    t = k * math.sinh(math.asinh(arg) / 3.0)
    # one Newton step removes the last few ulps of asinh/sinh round-off
    t -= (t ** 3 + p * t + q) / (3.0 * t * t + p)
    return t


def parametric_bound(params: ParametricParams) -> tuple[float, float]:
    """Solve ``λμt³/2 + t/(2ν) = 1`` for ``t > 0`` and return ``(E, t)``."""
    nu, mu, lam = params.nu, params.mu, params.lam
    t = _positive_cubic_root(1.0 / (lam * mu * nu), -2.0 / (lam * mu))
    E = -1.0 / (2.0 * nu * t) + 1.5 * lam * mu * t
    return E, t


def lambda_of_energy(nu: float, mu: float, E: float) -> float:
    """Invert the parametric system: the ``λ >= 0`` whose bound energy is ``E``.

    Eliminating ``λ`` gives ``E t² + 2t/ν - 3 = 0``; the admissible root is
    written as ``t = 3ν / (1 + sqrt(1 + 3ν²E))`` so nothing cancels at
    ``E = 0``.  Then ``λ = (2 - t/ν) / (μ t³)``.
    """
    if not (nu > 0 and mu > 0):
        raise DomainError("nu and mu must be positive")
    floor = -1.0 / (4.0 * nu * nu)
    if E < floor:
        if floor - E <= ENDPOINT_SLACK * max(1.0, abs(floor)):
            E = floor
        else:
            raise DomainError(f"E={E!r} lies below the hydrogenic endpoint {floor!r}")
    root = math.sqrt(max(1.0 + 3.0 * nu * nu * E, 0.25))
    t = 3.0 * nu / (1.0 + root)
    return max(2.0 - t / nu, 0.0) / (mu * t ** 3)


def lambda_of_energy_closed(nu: float, mu: float, E: float) -> float:
    """The same inverse written with ``S = sqrt(1 + 3ν²E)`` as in the textbook form.

    Loses precision near ``E = 0`` where numerator and denominator both vanish;
    kept as an independent route for cross-checks.
    """
    S = math.sqrt(1.0 + 3.0 * nu * nu * E)
    return (2.0 * (nu * E) ** 3 - nu * E * E * (S - 1.0)) / (mu * (S - 1.0) ** 3)


def envelope_bound(lam: float, qn: QuantumNumbers, basis_q: float, cfg: SolverConfig | None = None) -> BoundResult:
    """Tangent bound ``min_r {(P(q)/r)² - 1/r + λ r}`` for any level ``qn``.

    ``basis_q = -1`` gives the lower bound, ``1`` (linear) and ``2`` (oscillator)
    give upper bounds.
    """
    if basis_q not in (-1, 1, 2):
        raise DomainError(f"basis_q must be -1, 1 or 2, got {basis_q!r}")
    P = p_number(basis_q, qn, cfg).value
    E, t = parametric_bound(ParametricParams(P, P, lam))
    direction = "lower" if basis_q == -1 else "upper"
    return BoundResult(E, direction, "envelope-tangent",
                       {"basis_q": basis_q, "P": P, "t": t, "lambda": lam})


def sum_bound(lam: float, ell: int = 0, N: int = 3, cfg: SolverConfig | None = None) -> BoundResult:
    """Sum-approximation lower bound for the bottom of subspace ``ell``.

    Uses ``ν = P(-1)`` on the Coulomb term and ``μ = P(1)`` on the linear term;
    this is exactly ``min_s {s + f̄_hyd(s) + λ f̄_lin(s)}``.
    """
    qn = QuantumNumbers(1, ell, N)
    nu = p_number(-1, qn, cfg).value
    mu = p_number(1, qn, cfg).value
    E, t = parametric_bound(ParametricParams(nu, mu, lam))
    return BoundResult(E, "lower", "sum-approximation", {"nu": nu, "mu": mu, "t": t, "lambda": lam})


def sum_estimate(lam: float, qn: QuantumNumbers, cfg: SolverConfig | None = None) -> BoundResult:
    """Same formula for excited levels.  Accurate, but not a bound for ``n > 1``."""
    if qn.n == 1:
        raise PreconditionError("use sum_bound for n = 1")
    nu = p_number(-1, qn, cfg).value
    mu = p_number(1, qn, cfg).value
    E, t = parametric_bound(ParametricParams(nu, mu, lam))
    return BoundResult(E, "estimate", "sum-approximation", {"nu": nu, "mu": mu, "t": t, "lambda": lam})


def reduce_couplings(omega: float, alpha: float, beta: float) -> tuple[float, float]:
    """Return ``(λ, factor)`` with ``E(ω, α, β) = factor · E(1, 1, λ)``."""
    for name, value in (("omega", omega), ("alpha", alpha), ("beta", beta)):
        if not value > 0:
            raise DomainError(f"{name} must be positive, got {value!r}")
    return beta * omega ** 2 / alpha ** 3, alpha ** 2 / omega


def scale_energy(omega: float, alpha: float, beta: float, reduced_solver: Callable[[float], float]) -> float:
    lam, factor = reduce_couplings(omega, alpha, beta)
    return factor * reduced_solver(lam)
