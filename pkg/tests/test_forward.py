import numpy as np
import pytest

from ductscatter import reference_example as ref
from ductscatter.forward import (
    OBSERVABLE_KINDS,
    AreaFunction,
    BoundaryParameter,
    Potential,
    SpectralData,
    area_to_potential,
    jost_function,
    jost_solve,
    scattering_coefficients,
    synthesize_all,
)
from ductscatter.numerics import RealGrid


def exp_duct(A0=5.0, gamma=0.3, length=10.0, n=2001):
    xs = np.linspace(0.0, length, n)
    vals = A0 * np.exp(2 * gamma * xs)
    return AreaFunction(RealGrid(xs), vals, dA0=2 * gamma * A0, dAl=2 * gamma * vals[-1])


def test_area_to_potential_exponential_horn():
    gamma = 0.3
    q, bp = area_to_potential(exp_duct(gamma=gamma))
    assert abs(bp.cot_alpha - (-gamma)) < 1e-12
    assert np.max(np.abs(q.values - gamma**2)) < 1e-4
    assert np.max(np.abs(q.values[1:-1] - gamma**2)) < 1e-6


def test_jost_terminal_conditions():
    q, _ = ref.potential_samples()
    kg = RealGrid(np.array([0.5, 1.0, 5.0, 20.0]))
    fld = jost_solve(q, kg)
    k = kg.points
    el = np.exp(1j * k * q.length)
    assert np.max(np.abs(fld.f[:, -1] - el)) < 1e-10
    assert np.max(np.abs(fld.df[:, -1] - 1j * k * el)) < 1e-9


def test_jost_matches_closed_form_at_origin():
    q, bp = ref.potential_samples()
    kg = RealGrid(np.array([0.5, 2.0, 10.0]))
    fld = jost_solve(q, kg)
    f0, df0 = fld.at_x0()
    assert np.max(np.abs(f0 - ref.jost_f(kg.points, 0.0))) < 1e-7
    F = jost_function(fld, bp)
    exact = ref.jost_function_exact(kg.points)
    assert np.max(np.abs(F.values - exact) / np.abs(exact)) < 1e-7


def test_scattering_matches_closed_form():
    q, _ = ref.potential_samples()
    k = np.array([0.5, 1.0, 3.0, 8.0])
    trip = scattering_coefficients(jost_solve(q, RealGrid(k)))
    assert np.max(np.abs(trip.T - ref.tau_coefficient(k))) < 1e-8
    assert np.max(np.abs(trip.L - ref.ell_coefficient(k))) < 1e-8
    assert np.max(np.abs(trip.R - ref.rho_coefficient(k))) < 1e-8
    assert trip.unitarity_error() < 1e-10


def test_synthesize_all_covers_every_kind():
    area = exp_duct(n=801)
    kg = RealGrid(np.linspace(0.1, 10.0, 40))
    datasets, inter = synthesize_all(area, ref.CONSTANTS, kg)
    assert set(datasets) == set(OBSERVABLE_KINDS)
    for kind, d in datasets.items():
        assert d.kind == kind
        assert len(d.values) == len(kg)
        assert np.all(np.isfinite(d.values))


def test_spectral_data_validation():
    kg = RealGrid(np.array([1.0, 2.0]))
    with pytest.raises(ValueError, match="unknown observable"):
        SpectralData("bogus", kg, np.array([1.0, 2.0]))
    with pytest.raises(ValueError, match="nonnegative"):
        SpectralData("green_mag", kg, np.array([1.0, -2.0]))
    with pytest.raises(ValueError, match="microphone distance"):
        SpectralData("mic_pressure_mag", kg, np.array([1.0, 2.0]))


def test_boundary_parameter_and_potential_guards():
    with pytest.raises(ValueError):
        Potential(RealGrid(np.array([0.0, 1.0])), np.array([np.nan, 0.0]))
