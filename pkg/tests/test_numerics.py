import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from specbounds.errors import RangeError
from specbounds.numerics import (adaptive_simpson, composite_gauss_legendre, gauss_legendre, golden_section,
                                 integrate_from_origin, minimize_on_log_grid)


@given(st.floats(min_value=-5, max_value=5))
def test_golden_section_finds_parabola_vertex(c):
    x, fx = golden_section(lambda x: (x - c) ** 2 + 1.0, -10, 10, tol=1e-12)
    assert x == pytest.approx(c, abs=1e-6) and fx == pytest.approx(1.0, abs=1e-12)


def test_log_grid_minimum_and_boundary():
    x, fx = minimize_on_log_grid(lambda r: 1 / r ** 2 - 1 / r, 1e-3, 1e3)
    assert x == pytest.approx(2.0, rel=1e-6) and fx == pytest.approx(-0.25, abs=1e-12)
    with pytest.raises(RangeError):
        minimize_on_log_grid(lambda r: r, 1e-3, 1e3)
    x, _ = minimize_on_log_grid(lambda r: r, 1e-3, 1e3, require_interior=False)
    assert x == pytest.approx(1e-3, rel=1e-2)


def test_adaptive_simpson():
    assert adaptive_simpson(math.sin, 0, math.pi) == pytest.approx(2.0, abs=1e-11)
    assert adaptive_simpson(math.exp, 1, 0) == pytest.approx(1 - math.e, abs=1e-11)


@pytest.mark.parametrize("power", [-0.5, 0.0, 1.0, 2.5])
def test_integrate_from_origin_with_power_singularity(power):
    assert integrate_from_origin(lambda t: t ** power, 2.0) == pytest.approx(2.0 ** (power + 1) / (power + 1),
                                                                            rel=1e-9)


def test_gauss_rules():
    f = lambda t: np.exp(-t) * t ** 2
    exact = 2 - 26 * math.exp(-4)
    assert gauss_legendre(f, 0, 4) == pytest.approx(exact, rel=1e-13)
    assert composite_gauss_legendre(f, 0, 4) == pytest.approx(exact, rel=1e-13)
    # a peak far narrower than the interval
    peak = lambda t: np.exp(-((t - 1) / 0.01) ** 2)
    assert composite_gauss_legendre(peak, 0, 100, panels=400) == pytest.approx(0.01 * math.sqrt(math.pi), rel=1e-8)
