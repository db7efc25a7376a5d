"""Spectral bounds for central potentials.

Radial eigenvalues, P-numbers of pure powers, kinetic potentials, envelope
bounds and crossing-comparison chord bounds for ``-Δ - a/r + b r``.
"""

from .errors import (ConvergenceError, DataError, DomainError, InfeasibleError, PreconditionError, RangeError,
                     SpecBoundsError, SpectrumError, UnsupportedExponentError)
from .potential import PotentialSum, PowerTerm, QuantumNumbers, coulomb_linear, parse_potential, reduced_dimension
from .solver import RadialSolution, SolverConfig, solve_eigenvalue, energy_trajectory
from .power_law import PNumber, p_number, energy_from_p, table1
from .kinetic import KineticPotential, power_kinetic_potential, legendre_from_trajectory, sum_lower_bound
from .envelope import BoundResult, ParametricParams, parametric_bound, lambda_of_energy, envelope_bound, sum_bound
from .comparison import (ChordPotential, crossing_integral, verify_comparison, chord_lower, chord_upper,
                         chord_lower_psi_weighted, chord_upper_psi_weighted)

__version__ = "0.1.0"
