import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from abkit.errors import InvalidInputError, QuadratureError
from abkit.quadrature import CumulativeIntegral, adaptive_quad, panel_quad, quad, richardson_extrapolate


@given(st.lists(st.floats(-10, 10), min_size=1, max_size=20), st.floats(-3, 3), st.floats(0.1, 4))
def test_polynomials_integrate_exactly(coeffs, a, width):
    b = a + width
    poly = np.polynomial.Polynomial(coeffs)
    exact = poly.integ()(b) - poly.integ()(a)
    # the error estimate never drops below ~50 eps * integral of |f|, so ask for less than that
    res = adaptive_quad(poly, a, b, 1e-10, tol_abs=1e-10)
    assert res.value == pytest.approx(exact, rel=1e-11, abs=1e-9)


@pytest.mark.parametrize("k", range(30))
def test_monomials_exact_on_one_panel(k):
    res = adaptive_quad(lambda x: x**k, 0.0, 1.0, 1.0, tol_abs=1.0)
    assert res.intervals == 1
    assert res.value == pytest.approx(1.0 / (k + 1), rel=1e-14)


def test_zero_integrand():
    assert adaptive_quad(lambda x: 0.0 * x, 0.0, 1.0).value == 0.0


@pytest.mark.parametrize("r", [0.05, 0.1, 0.3, 0.7, 0.95])
def test_log_kernel_against_mpmath(r):
    # integral over a full turn of cos(theta) * log(1 + r^2 - 2 r cos theta) is -2 pi r
    f = lambda th: np.cos(th) * np.log(1 + r * r - 2 * r * np.cos(th))
    ours = quad(f, 0.0, 2 * math.pi, 1e-12)
    mp = mpmath.quad(lambda th: mpmath.cos(th) * mpmath.log(1 + r * r - 2 * r * mpmath.cos(th)), [0, mpmath.pi, 2 * mpmath.pi])
    assert ours == pytest.approx(float(mp), rel=1e-10)
    assert ours == pytest.approx(-2 * math.pi * r, rel=1e-10)


def test_infinite_ranges():
    assert quad(lambda x: np.exp(-x * x), -math.inf, math.inf, 1e-12) == pytest.approx(math.sqrt(math.pi), rel=1e-11)
    assert quad(lambda x: 1.0 / (1.0 + x * x), 0.0, math.inf, 1e-12) == pytest.approx(math.pi / 2, rel=1e-11)
    assert quad(lambda x: np.exp(x), -math.inf, 0.0, 1e-12) == pytest.approx(1.0, rel=1e-11)


def test_reversed_limits_flip_sign():
    f = lambda x: np.sin(x) + 2.0
    assert quad(f, 2.0, 0.5) == pytest.approx(-quad(f, 0.5, 2.0), rel=1e-14)
    assert adaptive_quad(f, 1.0, 1.0).value == 0.0


def test_error_estimate_is_honest():
    res = adaptive_quad(lambda x: np.sqrt(x), 0.0, 1.0, 1e-10)
    assert abs(res.value - 2.0 / 3.0) <= max(res.error_estimate, 1e-15) * 10
    assert res.error_estimate <= 1e-10


def test_subdivision_limit_reports_best_estimate():
    with pytest.raises(QuadratureError) as info:
        adaptive_quad(lambda x: np.sin(1.0 / x), 1e-6, 1.0, 1e-14, limit=20)
    assert info.value.best_estimate is not None


def test_non_finite_integrand_raises():
    with pytest.raises(QuadratureError):
        adaptive_quad(lambda x: np.full_like(x, np.nan), 0.0, 1.0)


def test_tolerance_from_environment(monkeypatch):
    monkeypatch.setenv("ABKIT_TOL", "1e-4")
    loose = adaptive_quad(lambda x: np.exp(np.sin(5 * x)), 0.0, 10.0)
    monkeypatch.setenv("ABKIT_TOL", "nonsense")
    with pytest.raises(InvalidInputError):
        adaptive_quad(lambda x: x, 0.0, 1.0)
    monkeypatch.delenv("ABKIT_TOL")
    tight = adaptive_quad(lambda x: np.exp(np.sin(5 * x)), 0.0, 10.0)
    assert loose.evaluations <= tight.evaluations


def test_panel_quad_batches():
    freqs = np.array([1.0, 3.0, 7.0])
    values, errors = panel_quad(lambda t: np.cos(freqs[:, None] * t[None, :]), 0.0, 1.0, 1e-12)
    assert values == pytest.approx(np.sin(freqs) / freqs, rel=1e-12)
    assert np.all(errors <= 1e-11)


def test_richardson_removes_even_powers():
    steps = [0.1, 0.05, 0.025, 0.0125]
    values = [2.0 + 3 * h**2 - 5 * h**4 + h**6 for h in steps]
    limit, err = richardson_extrapolate(steps, values, order=2)
    assert limit == pytest.approx(2.0, abs=1e-12)
    with pytest.raises(InvalidInputError):
        richardson_extrapolate([0.1], [1.0])


@settings(max_examples=25)
@given(st.floats(0.01, 0.99))
def test_cumulative_integral_matches_antiderivative(frac):
    F = CumulativeIntegral(lambda t: np.cos(3 * t) * t, 0.0, 2.0, 1e-12)
    t = 2.0 * frac
    exact = (np.cos(3 * t) + 3 * t * np.sin(3 * t) - 1.0) / 9.0
    assert F(t) == pytest.approx(exact, abs=1e-12)
    assert F.total == pytest.approx((np.cos(6.0) + 6 * np.sin(6.0) - 1.0) / 9.0, abs=1e-12)


def test_cumulative_integral_bounds():
    F = CumulativeIntegral(lambda t: 1.0 + 0 * t, 0.0, 1.0)
    assert F(np.array([0.0, 0.5, 1.0])) == pytest.approx([0.0, 0.5, 1.0])
    with pytest.raises(InvalidInputError):
        F(1.5)
    with pytest.raises(InvalidInputError):
        CumulativeIntegral(lambda t: t, 1.0, 1.0)
