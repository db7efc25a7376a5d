import numpy as np
import pytest
from hypothesis import given, strategies as st

from specbounds.errors import DomainError
from specbounds.potential import (PotentialSum, PowerTerm, QuantumNumbers, check_monotone, coulomb_linear,
                                  evaluate, format_potential, parse_potential, reduced_dimension)


def test_power_term_sign_and_value():
    t = PowerTerm(2.0, -1.0)
    assert t.sign == -1.0
    assert t.signed_coupling == -2.0
    assert t(4.0) == pytest.approx(-0.5)


@pytest.mark.parametrize("coupling, exponent", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0), (1.0, -2.0), (1.0, -3.0)])
def test_power_term_rejects_bad_input(coupling, exponent):
    with pytest.raises(DomainError):
        PowerTerm(coupling, exponent)


def test_coulomb_linear_evaluates():
    V = coulomb_linear(1.0, 1.0)
    assert evaluate(V, 2.0) == pytest.approx(-0.5 + 2.0)
    assert V.is_confining


def test_sum_is_canonical_and_hashable():
    a = PotentialSum([(1.0, 1.0), (2.0, -1.0)])
    b = PotentialSum([PowerTerm(2.0, -1.0), PowerTerm(1.0, 1.0)])
    assert a == b and hash(a) == hash(b)
    with pytest.raises(AttributeError):
        a.terms = ()


def test_pure_coulomb_is_not_confining():
    assert not PotentialSum([(1.0, -1.0)]).is_confining


def test_empty_sum_rejected():
    with pytest.raises(DomainError):
        PotentialSum([])


def test_scaled_multiplies_couplings():
    V = coulomb_linear(1.0, 2.0).scaled(3.0)
    assert evaluate(V, 1.0) == pytest.approx(3.0 * (-1.0 + 2.0))


def test_reduced_dimension():
    assert reduced_dimension(QuantumNumbers(1, 2, 3)) == 7
    assert QuantumNumbers(2, 1, 3).reduced == QuantumNumbers(2, 0, 5)


@pytest.mark.parametrize("n, ell, dim", [(0, 0, 3), (1, -1, 3), (1, 0, 1)])
def test_quantum_numbers_validation(n, ell, dim):
    with pytest.raises(DomainError):
        QuantumNumbers(n, ell, dim)


def test_parse_format_examples():
    V = parse_potential("1*r^-1,1*r^1")
    assert V == coulomb_linear(1.0, 1.0)
    assert format_potential(V) == "1*r^-1,1*r^1"
    assert parse_potential(" 2.5 * r ^ (0.5) ") == PotentialSum([(2.5, 0.5)])


@pytest.mark.parametrize("text", ["", "junk", "1*r^0", "-1*r^1", "1*x^2", "1*r^-2"])
def test_parse_rejects(text):
    with pytest.raises(DomainError):
        parse_potential(text)


couplings = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False)
exponents = st.floats(min_value=-1.9, max_value=4.0, allow_nan=False).filter(lambda q: abs(q) > 1e-3)


@given(st.lists(st.tuples(couplings, exponents), min_size=1, max_size=4))
def test_format_parse_round_trip(terms):
    V = PotentialSum(terms)
    assert parse_potential(format_potential(V)) == V


def test_check_monotone():
    mesh = np.geomspace(1e-3, 10, 200)
    assert check_monotone(coulomb_linear(1.0, 1.0), mesh)
    assert not check_monotone(lambda r: -np.asarray(r), mesh)
