import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vortexpair.errors import NumericalError
from vortexpair.quadrature import adaptive_gk15, composite_gauss_legendre, gauss_legendre


@pytest.mark.parametrize("n", [2, 5, 8, 16])
def test_gauss_legendre_exact_for_polynomials(n):
    x, w = gauss_legendre(n, 0.5, 2.0)
    for deg in range(2 * n):
        assert np.sum(w * x**deg) == pytest.approx((2.0 ** (deg + 1) - 0.5 ** (deg + 1)) / (deg + 1),
                                                   rel=1e-12)


def test_composite_rule():
    x, w = composite_gauss_legendre(np.linspace(0, np.pi, 9), 6)
    assert np.sum(w * np.sin(x)) == pytest.approx(2.0, rel=1e-13)


@given(st.floats(0.1, 30), st.floats(0.1, 5))
def test_adaptive_oscillatory(freq, top):
    val, err, trace = adaptive_gk15(lambda x: np.cos(freq * x), 0.0, top, rtol=1e-11, atol=1e-14)
    assert val == pytest.approx(np.sin(freq * top) / freq, rel=1e-9, abs=1e-12)
    assert trace[-1][1] <= 1.0


def test_adaptive_batch():
    a = np.array([1.0, 2.0, 3.0])

    def f(x):
        return np.exp(-a[:, None] * x[None, :])

    val, err, _ = adaptive_gk15(f, 0.0, 5.0, rtol=1e-12)
    np.testing.assert_allclose(val, (1 - np.exp(-5 * a)) / a, rtol=1e-12)
    assert val.shape == (3,)


def test_adaptive_breakpoints_handle_kink():
    val, _, _ = adaptive_gk15(lambda x: np.abs(x - 0.3), 0.0, 1.0, rtol=1e-13, breakpoints=[0.3])
    assert val == pytest.approx(0.5 * 0.09 + 0.5 * 0.49, rel=1e-13)


def test_adaptive_reports_failure_with_trace():
    with pytest.raises(NumericalError) as info:
        adaptive_gk15(lambda x: 1 / np.sqrt(np.abs(x - 0.5) + 1e-300), 0.0, 1.0, rtol=1e-14,
                      max_intervals=30)
    assert info.value.trace
