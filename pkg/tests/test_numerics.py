import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ductscatter.numerics import (
    RealGrid,
    RealSamples,
    _trapezoid_weights,
    cpv_hilbert,
    even_extend,
    extrapolation_closure_row,
    fredholm_solve,
    graded_kgrid,
    outer_from_magnitude,
    positive_half,
    schwarz_extend,
    tail_limit,
)


def wide_grid(n=24001, K=60.0):
    return RealGrid(np.linspace(-K, K, n))


def test_cpv_hilbert_rational_pair():
    # 1/(1+t^2) and k/(1+k^2) are a Schwarz (real, imaginary) boundary pair
    g = RealSamples(wide_grid(), 1.0 / (1.0 + wide_grid().points**2))
    h = cpv_hilbert(g, tail_parity="even")
    k = wide_grid().points
    mid = np.abs(k) < 10
    assert np.max(np.abs(h.values[mid] - k[mid] / (1 + k[mid] ** 2))) < 1e-6


def test_cpv_hilbert_warns_without_tail_model():
    t = np.linspace(-5, 5, 501)
    g = RealSamples(RealGrid(t), 1.0 / (1.0 + t**2))  # far from decayed at |t|=5
    with pytest.warns(UserWarning, match="does not decay"):
        cpv_hilbert(g)


def test_schwarz_extend_rejects_wrong_parity():
    t = np.linspace(-10, 10, 201)
    with pytest.raises(ValueError, match="symmetry"):
        schwarz_extend(RealSamples(RealGrid(t), t / (1 + t**2)), symmetry="even")


def test_outer_from_magnitude_rational():
    k = wide_grid().points
    mag = RealSamples(wide_grid(), np.sqrt((k**2 + 1) / (k**2 + 4)))
    F = outer_from_magnitude(mag)
    exact = (k + 1j) / (k + 2j)
    mid = np.abs(k) < 10
    assert np.max(np.abs(F.values[mid] - exact[mid])) < 1e-7


def test_outer_linear_factor_exact_family():
    k = wide_grid().points
    mag = RealSamples(wide_grid(), np.sqrt(k**2 + 1.0))
    F = outer_from_magnitude(mag, normalization="linear_factor_k")
    assert np.max(np.abs(F.values - (k + 1j))) < 1e-10


def test_tail_limit():
    k = np.linspace(1.0, 40.0, 400)
    fit = tail_limit(RealSamples(RealGrid(k), 3.0 + 2.0 / k**2 - 5.0 / k**4), powers=(2, 4))
    assert abs(fit.limit - 3.0) < 1e-9


def test_fredholm_zero_kernel_identity():
    xs = np.linspace(0.0, 1.0, 51)
    rhs = np.sin(xs)
    sol = fredholm_solve(np.zeros((51, 51)), RealSamples(RealGrid(xs), rhs))
    assert np.max(np.abs(sol.values + rhs)) < 1e-12


def test_fredholm_closure_row():
    row = extrapolation_closure_row(10, "last")
    # annihilates cubics: closure enforces 4th-difference extrapolation
    for p in range(4):
        assert abs(row @ np.arange(10.0) ** p) < 1e-9


def test_graded_kgrid():
    k = graded_kgrid().points
    assert np.all(np.diff(k) > 0)
    assert k[0] == 0.0 and abs(k[-1] - 40.0) < 1e-12
    assert np.min(np.diff(k)) < 0.005  # fine near the origin


@settings(deadline=None, max_examples=25)
@given(st.integers(min_value=2, max_value=50))
def test_trapezoid_weights_integrate_constants(n):
    t = np.sort(np.random.default_rng(n).uniform(0, 1, n))
    if len(np.unique(t)) < 2:
        return
    w = _trapezoid_weights(t)
    assert abs(np.sum(w) - (t[-1] - t[0])) < 1e-12


@settings(deadline=None, max_examples=25)
@given(st.integers(min_value=2, max_value=40))
def test_even_extend_round_trip(n):
    k = np.linspace(0.1, 5.0, n)
    v = np.random.default_rng(n).normal(size=n)
    s = RealSamples(RealGrid(k), v)
    back = positive_half(even_extend(s))
    assert np.allclose(back.grid.points, k)
    assert np.allclose(back.values, v)
