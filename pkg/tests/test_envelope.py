import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from specbounds.envelope import (BoundResult, ParametricParams, envelope_bound, lambda_of_energy,
                                 lambda_of_energy_closed, parametric_bound, scale_energy, sum_bound, sum_estimate)
from specbounds.errors import DomainError, PreconditionError
from specbounds.kinetic import power_kinetic_potential, sum_lower_bound
from specbounds.potential import QuantumNumbers, coulomb_linear
from specbounds.solver import solve_eigenvalue

# independent brentq solutions of the cubic, frozen
PARAMETRIC_ORACLE = {
    (1.3761, 1.0, 1.0): (1.2642872462520565, 1.069374241247952),
    (1.3761, 1.3761, 1.0): (1.648282907003636, 0.9784350967561405),
    (1.0, 1.3761, 1.0): (1.3605197945015828, 0.9218766567884362),
}
EX_11 = 1.3978756  # solver, confirmed by finite differences


def test_unit_parameters():
    E, t = parametric_bound(ParametricParams(1.0, 1.0, 1.0))
    assert t == pytest.approx(1.0, abs=1e-15) and E == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("key", sorted(PARAMETRIC_ORACLE))
def test_parametric_against_oracle(key):
    E, t = parametric_bound(ParametricParams(*key))
    assert (E, t) == pytest.approx(PARAMETRIC_ORACLE[key], rel=1e-13)


@pytest.mark.parametrize("field", ["nu", "mu", "lam"])
def test_parametric_params_validation(field):
    kwargs = dict(nu=1.0, mu=1.0, lam=1.0)
    kwargs[field] = 0.0
    with pytest.raises(DomainError):
        ParametricParams(**kwargs)


def test_cubic_is_satisfied_over_many_decades():
    for lam in np.geomspace(1e-8, 1e8, 33):
        p = ParametricParams(1.3, 0.7, float(lam))
        _, t = parametric_bound(p)
        assert t / (2 * p.nu) + p.lam * p.mu * t ** 3 / 2 == pytest.approx(1.0, rel=1e-13)


def test_lambda_of_energy_examples():
    assert lambda_of_energy(1, 1, 1) == pytest.approx(1.0, rel=1e-14)
    assert lambda_of_energy(1, 1, -0.25) == 0.0
    E = PARAMETRIC_ORACLE[(1.3761, 1.0, 1.0)][0]
    assert lambda_of_energy(1.3761, 1.0, E) == pytest.approx(1.0, rel=1e-12)


def test_lambda_of_energy_domain():
    with pytest.raises(DomainError):
        lambda_of_energy(1, 1, -0.2500001)
    # round-off below the endpoint is clamped to it
    assert lambda_of_energy(1, 1, -0.25 - 1e-14) == 0.0


def test_lambda_of_energy_is_smooth_through_zero():
    values = [lambda_of_energy(1.3761, 1.0, E) for E in (-1e-9, 0.0, 1e-9)]
    assert all(math.isfinite(v) for v in values)
    assert values[0] < values[1] < values[2]
    # no 0/0 noise: the two one-sided slopes agree
    left, right = values[1] - values[0], values[2] - values[1]
    assert right == pytest.approx(left, rel=1e-5)


def test_rationalized_and_textbook_inverse_agree_for_unequal_parameters():
    for nu, mu in [(1.3761, 1.0), (1.0, 1.3761), (2.5, 0.4)]:
        for E in (-0.05, 0.3, 1.0, 7.0):
            if E < -1 / (4 * nu * nu):
                continue
            assert lambda_of_energy(nu, mu, E) == pytest.approx(lambda_of_energy_closed(nu, mu, E), rel=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=0.2, max_value=5.0), st.floats(min_value=0.2, max_value=5.0),
       st.floats(min_value=1e-3, max_value=1e3))
def test_inverse_pair_property(nu, mu, lam):
    E, _ = parametric_bound(ParametricParams(nu, mu, lam))
    assert lambda_of_energy(nu, mu, E) == pytest.approx(lam, rel=1e-9)


def test_envelope_examples(ground3):
    assert envelope_bound(1.0, ground3, -1).value == pytest.approx(1.0, abs=1e-14)
    upper = envelope_bound(1.0, ground3, 1)
    assert upper.direction == "upper" and upper.value == pytest.approx(1.648258, abs=1e-6)
    assert envelope_bound(1.0, ground3, 2).value == pytest.approx(1.830499, abs=1e-6)
    assert envelope_bound(1e-10, ground3, -1).value == pytest.approx(-0.25, abs=1e-8)
    with pytest.raises(DomainError):
        envelope_bound(1.0, ground3, 3)


def test_sum_examples(ground3):
    res = sum_bound(1.0, 0, 3)
    assert res.direction == "lower" and res.method == "sum-approximation"
    assert res.value == pytest.approx(1.360505, abs=1e-6)
    assert sum_bound(1.0, 1, 3).value == sum_bound(1.0, 0, 5).value
    assert sum_bound(1e-10, 0, 3).value == pytest.approx(-0.25, abs=1e-8)


@pytest.mark.parametrize("lam", [0.05, 0.3, 1.0, 4.0, 20.0])
@pytest.mark.parametrize("ell", [0, 2])
def test_sum_bound_equals_kinetic_minimization(lam, ell):
    qn = QuantumNumbers(1, ell, 3)
    direct = sum_lower_bound([(1.0, power_kinetic_potential(-1, qn)), (lam, power_kinetic_potential(1, qn))])
    assert sum_bound(lam, ell, 3).value == pytest.approx(direct, abs=1e-8)


def test_sum_estimate_is_tagged():
    res = sum_estimate(1.0, QuantumNumbers(2, 0, 3))
    assert res.direction == "estimate"
    with pytest.raises(PreconditionError):
        sum_estimate(1.0, QuantumNumbers(1, 0, 3))


def test_scale_energy_examples():
    reduced = lambda lam: solve_eigenvalue(coulomb_linear(1.0, lam), QuantumNumbers(1, 0, 3)).energy
    assert scale_energy(1, 1, 1, reduced) == pytest.approx(EX_11, abs=1e-7)
    direct = solve_eigenvalue(coulomb_linear(2.0, 8.0), QuantumNumbers(1, 0, 3)).energy
    assert scale_energy(1, 2, 8, reduced) == pytest.approx(direct, rel=1e-7)
    # -4Δ - 1/r + r/16 = 4(-Δ - (1/4)/r + (1/64) r)
    quarter = 4 * solve_eigenvalue(coulomb_linear(0.25, 1 / 64), QuantumNumbers(1, 0, 3)).energy
    assert scale_energy(4, 1, 1 / 16, reduced) == pytest.approx(quarter, rel=1e-7)
    with pytest.raises(DomainError):
        scale_energy(0, 1, 1, reduced)


LAMBDAS = [0.05, 0.2, 1.0, 5.0, 20.0]


@pytest.mark.parametrize("ell", [0, 1, 2, 3])
def test_bracketing(ell):
    qn = QuantumNumbers(1, ell, 3)
    for lam in LAMBDAS:
        exact = solve_eigenvalue(coulomb_linear(1.0, lam), qn).energy
        chain = [envelope_bound(lam, qn, -1).value, sum_bound(lam, ell, 3).value, exact,
                 envelope_bound(lam, qn, 1).value, envelope_bound(lam, qn, 2).value]
        assert all(x <= y + 1e-8 for x, y in zip(chain, chain[1:])), (lam, chain)


@pytest.mark.parametrize("lam", [0.2, 1.0, 5.0])
def test_gap_shrinks_with_angular_momentum(lam):
    gaps = []
    for ell in range(4):
        qn = QuantumNumbers(1, ell, 3)
        exact = solve_eigenvalue(coulomb_linear(1.0, lam), qn).energy
        gaps.append((envelope_bound(lam, qn, 1).value - sum_bound(lam, ell, 3).value) / abs(exact))
    assert all(b <= a for a, b in zip(gaps, gaps[1:])), gaps


@pytest.mark.parametrize("n", [1, 2, 3])
def test_envelope_brackets_excited_levels(n):
    qn = QuantumNumbers(n, 0, 3)
    exact = solve_eigenvalue(coulomb_linear(1.0, 1.0), qn).energy
    assert envelope_bound(1.0, qn, -1).value <= exact <= envelope_bound(1.0, qn, 1).value


def test_bound_result_validation():
    with pytest.raises(DomainError):
        BoundResult(1.0, "sideways", "chord")
    with pytest.raises(DomainError):
        BoundResult(1.0, "lower", "guess")
    scaled = BoundResult(1.0, "lower", "chord", {"t": 1.0}).scaled(4.0, omega=2.0)
    assert scaled.value == 4.0 and scaled.params == {"t": 1.0, "omega": 2.0}
