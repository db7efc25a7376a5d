"""Power-law potentials, quantum numbers and the dimension-reduction map.

All potentials here are finite sums of terms ``c * sgn(q) * r**q`` with
``c > 0``.  With this sign convention every term is increasing in ``r``, so
any sum is monotone increasing on ``r > 0``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError

__all__ = [
    "PowerTerm",
    "PotentialSum",
    "QuantumNumbers",
    "evaluate",
    "coulomb_linear",
    "reduced_dimension",
    "parse_potential",
    "format_potential",
]


@dataclass(frozen=True)
class PowerTerm:
    """One term ``coupling * sgn(exponent) * r**exponent``."""

    coupling: float
    exponent: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.coupling) and self.coupling > 0):
            raise DomainError(f"coupling must be positive, got {self.coupling!r}")
        if not math.isfinite(self.exponent) or self.exponent <= -2:
            raise DomainError(f"exponent must exceed -2, got {self.exponent!r}")
        if self.exponent == 0:
            raise DomainError("exponent 0 (logarithmic potential) is not supported")

    @property
    def sign(self) -> float:
        return 1.0 if self.exponent > 0 else -1.0

    @property
    def signed_coupling(self) -> float:
        return self.sign * self.coupling

    def __call__(self, r):
        return self.signed_coupling * np.power(r, self.exponent)


class PotentialSum:
    """Immutable, nonempty sum of :class:`PowerTerm` objects.

    Terms are kept sorted by exponent so that serialization is deterministic.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[PowerTerm | tuple[float, float]]):
        parsed = []
        for t in terms:
            if not isinstance(t, PowerTerm):
                coupling, exponent = t
                t = PowerTerm(float(coupling), float(exponent))
            parsed.append(t)
        if not parsed:
            raise DomainError("a potential needs at least one term")
        object.__setattr__(self, "_terms", tuple(sorted(parsed, key=lambda t: (t.exponent, t.coupling))))

    def __setattr__(self, name, value):
        raise AttributeError("PotentialSum is immutable")

    @property
    def terms(self) -> tuple[PowerTerm, ...]:
        return self._terms

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        for t in self._terms:
            out = out + t(r)
        return out if out.ndim else float(out)

    def scaled(self, factor: float) -> "PotentialSum":
        """Return the potential with every coupling multiplied by ``factor``."""
        if factor <= 0:
            raise DomainError("scale factor must be positive")
        return PotentialSum(PowerTerm(t.coupling * factor, t.exponent) for t in self._terms)

    @property
    def is_confining(self) -> bool:
        return any(t.exponent > 0 for t in self._terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, PotentialSum) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __repr__(self) -> str:
        return f"PotentialSum({format_potential(self)!r})"


@dataclass(frozen=True)
class QuantumNumbers:
    """Radial quantum number ``n`` (nodes + 1), angular momentum ``ell`` and dimension ``dim``."""

    n: int = 1
    ell: int = 0
    dim: int = 3

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be an integer >= 1, got {self.n!r}")
        if int(self.ell) != self.ell or self.ell < 0:
            raise DomainError(f"ell must be an integer >= 0, got {self.ell!r}")
        if int(self.dim) != self.dim or self.dim < 2:
            raise DomainError(f"dim must be an integer >= 2, got {self.dim!r}")

    @property
    def reduced(self) -> "QuantumNumbers":
        """The equivalent s-wave labels ``(n, 0, dim + 2*ell)``."""
        return QuantumNumbers(self.n, 0, reduced_dimension(self))


def evaluate(potential: PotentialSum, r: float) -> float:
    if not r > 0:
        raise DomainError(f"potential is defined for r > 0, got {r!r}")
    return float(potential(r))


def coulomb_linear(a: float, b: float) -> PotentialSum:
    """``V(r) = -a/r + b r``."""
    if not (a > 0 and b > 0):
        raise DomainError(f"Coulomb-plus-linear couplings must be positive, got a={a!r}, b={b!r}")
    return PotentialSum([PowerTerm(a, -1.0), PowerTerm(b, 1.0)])


def reduced_dimension(qn: QuantumNumbers) -> int:
    return qn.dim + 2 * qn.ell


def _fmt(x: float) -> str:
    return repr(float(x)) if x != int(x) else str(int(x))


def format_potential(potential: PotentialSum) -> str:
    """Serialize as comma-separated ``coupling*r^exponent`` terms, e.g. ``1*r^-1,1*r^1``."""
    return ",".join(f"{_fmt(t.coupling)}*r^{_fmt(t.exponent)}" for t in potential.terms)


_TERM_RE = re.compile(r"^\s*([0-9.eE+\-]+)\s*\*\s*r\s*\^\s*\(?\s*([0-9.eE+\-]+)\s*\)?\s*$")


def parse_potential(text: str) -> PotentialSum:
    """Inverse of :func:`format_potential`."""
    terms: list[PowerTerm] = []
    for chunk in text.split(","):
        m = _TERM_RE.match(chunk)
        if m is None:
            raise DomainError(f"cannot parse potential term {chunk!r}; expected 'c*r^q'")
        try:
            terms.append(PowerTerm(float(m.group(1)), float(m.group(2))))
        except ValueError as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"bad number in term {chunk!r}") from exc
    return PotentialSum(terms)


def check_monotone(potential, mesh: Sequence[float]) -> bool:
    """True when ``potential`` is strictly increasing across ``mesh``."""
    values = np.asarray(potential(np.asarray(mesh, dtype=float)))
    return bool(np.all(np.diff(values) > 0))
