"""P-numbers for pure power potentials ``-Δ + sgn(q) r**q``.

The eigenvalues of a pure power are written as

    E = min_{r>0} { (P/r)**2 + sgn(q) r**q }

and ``P`` is what gets tabulated.  ``P`` depends on ``ell`` and ``N`` only
through ``M = N + 2*ell``.
"""

from __future__ import annotations

import csv
import io
import math
import threading
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DomainError, UnsupportedExponentError
from .potential import PotentialSum, PowerTerm, QuantumNumbers, reduced_dimension
from .solver import SolverConfig, solve_eigenvalue

__all__ = [
    "PNumber",
    "p_number_closed_form",
    "p_number_from_energy",
    "p_number",
    "energy_from_p",
    "pure_power_energy",
    "table1",
    "table1_csv",
    "PNumberCache",
    "CACHE",
]

TABLE1_DIMS = tuple(range(2, 13))
TABLE1_LEVELS = (1, 2, 3, 4)


@dataclass(frozen=True)
class PNumber:
    value: float
    q: float
    qn: QuantumNumbers
    provenance: str  # "closed-form" | "solver-derived"

    def __post_init__(self) -> None:
        if not self.value > 0:
            raise DomainError(f"P-number must be positive, got {self.value!r}")

    def __float__(self) -> float:
        return self.value


def _check_exponent(q: float) -> None:
    if q == 0 or q <= -2 or not math.isfinite(q):
        raise UnsupportedExponentError(f"exponent q must satisfy q > -2 and q != 0, got {q!r}")


def p_number_closed_form(q: float, qn: QuantumNumbers) -> PNumber:
    """Exact P-numbers for the hydrogen (q = -1) and oscillator (q = 2) potentials."""
    n, ell, N = qn.n, qn.ell, qn.dim
    if q == -1:
        value = n + ell + N / 2 - 1.5
    elif q == 2:
        value = 2 * n + ell + N / 2 - 2
    else:
        raise UnsupportedExponentError(f"no closed form for q={q!r}; only -1 and 2")
    return PNumber(float(value), float(q), qn, "closed-form")


def p_number_from_energy(q: float, qn: QuantumNumbers, E: float, provenance: str = "solver-derived") -> PNumber:
    """Invert ``E`` (eigenvalue of ``-Δ + sgn(q) r**q``) into its P-number."""
    _check_exponent(q)
    value = abs(E) ** ((2 + q) / (2 * q)) * (2 / (2 + q)) ** (1 / q) * abs(q / (2 + q)) ** 0.5
    return PNumber(value, float(q), qn, provenance)


def energy_from_p(p: PNumber, coupling: float = 1.0) -> float:
    """Closed-form ``min_r {(P/r)**2 + sgn(q) r**q}``, scaled to coupling ``v``.

    Stationarity gives ``r*^(q+2) = 2 P**2 / |q|``; substituting back,
    ``E(1) = sgn(q) (1 + q/2) r*^q``.  Coupling enters as ``v**(2/(2+q))``.
    """
    if not coupling > 0:
        raise DomainError("coupling must be positive")
    q = p.q
    _check_exponent(q)
    r_star = (2.0 * p.value ** 2 / abs(q)) ** (1.0 / (q + 2.0))
    e1 = math.copysign(1.0, q) * (1.0 + q / 2.0) * r_star ** q
    return e1 * coupling ** (2.0 / (2.0 + q))


class PNumberCache:
    """Thread-safe memo of solver-derived P-numbers keyed by ``(q, n, M)``."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._data: dict[tuple[float, int, int], float] = {}

    def get(self, q: float, n: int, M: int) -> float | None:
        with self._lock:
            return self._data.get((float(q), int(n), int(M)))

    def put(self, q: float, n: int, M: int, value: float) -> None:
        with self._lock:
            self._data[(float(q), int(n), int(M))] = float(value)

    def clear(self) -> None:
        with self._lock:
            self._data.clear()

    def __len__(self) -> int:
        with self._lock:
            return len(self._data)

    def export_csv(self, fh) -> None:
        with self._lock:
            items = sorted(self._data.items())
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["q", "n", "M", "P"])
        for (q, n, M), value in items:
            writer.writerow([repr(q), n, M, repr(value)])

    def import_csv(self, fh) -> int:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["q", "n", "M", "P"]:
            raise DomainError(f"P-number cache header must be q,n,M,P; got {reader.fieldnames}")
        count = 0
        for row in reader:
            self.put(float(row["q"]), int(row["n"]), int(row["M"]), float(row["P"]))
            count += 1
        return count


CACHE = PNumberCache()


def pure_power_energy(q: float, qn: QuantumNumbers, cfg: SolverConfig | None = None) -> float:
    """Eigenvalue of ``-Δ + sgn(q) r**q`` (unit coupling) for ``qn``."""
    return energy_from_p(p_number(q, qn, cfg))


def p_number(q: float, qn: QuantumNumbers, cfg: SolverConfig | None = None) -> PNumber:
    """Closed form for q in {-1, 2}; otherwise solve the reduced problem (memoized)."""
    _check_exponent(q)
    if q in (-1, 2):
        return p_number_closed_form(q, qn)
    M = reduced_dimension(qn)
    cached = CACHE.get(q, qn.n, M)
    if cached is not None:
        return PNumber(cached, float(q), qn, "solver-derived")
    shape = PotentialSum([PowerTerm(1.0, q)])
    E = solve_eigenvalue(shape, QuantumNumbers(qn.n, 0, M), cfg).energy
    p = p_number_from_energy(q, qn, E)
    CACHE.put(q, qn.n, M, p.value)
    return p


def table1(cfg: SolverConfig | None = None) -> np.ndarray:
    """11×4 array of ``P^N_{n0}(1)`` for N = 2..12 (rows) and n = 1..4 (columns)."""
    return np.array([[p_number(1.0, QuantumNumbers(n, 0, N), cfg).value for n in TABLE1_LEVELS]
                     for N in TABLE1_DIMS])


def table1_csv(values: Iterable[Iterable[float]] | None = None, cfg: SolverConfig | None = None) -> str:
    """Render the P(1) table as CSV: header ``N,n1,n2,n3,n4`` and values to 4 decimals."""
    if values is None:
        values = table1(cfg)
    buf = io.StringIO()
    buf.write("N,n1,n2,n3,n4\n")
    for N, row in zip(TABLE1_DIMS, values):
        buf.write(",".join([str(N)] + [f"{v:.4f}" for v in row]) + "\n")
    return buf.getvalue()
