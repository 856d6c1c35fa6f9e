import numpy as np
import pytest

from ductscatter import reference_example as ref
from ductscatter.numerics import RealGrid, graded_kgrid
from ductscatter.phase_retrieval import (
    analytic_completion,
    data_to_jost_magnitude,
    even_mag,
    ratio_from_input_impedance,
    reflectance_completion,
)


def kpos():
    k = graded_kgrid().points
    return RealGrid(k[k > 0])


def test_analytic_completion_exact_family():
    k = kpos().points
    for cot in (-0.5, -1.0, -2.0):
        Fs, bv, trip, lam = analytic_completion(even_mag(kpos(), np.sqrt(k**2 + cot**2)))
        ke = Fs.kgrid.points
        exact = ke - 1j * cot
        assert np.max(np.abs(Fs.values - exact) / np.abs(exact)) < 1e-10
        assert abs(bv.cot_alpha - cot) < 1e-4
        # free potential: T = 1, L = 0 (small-k nodes feel the cot tail fit)
        band = np.abs(trip.kgrid.points) >= 0.5
        assert np.max(np.abs(trip.T[band] - 1.0)) < 1e-4
        assert np.max(np.abs(trip.L[band])) < 1e-4


def test_analytic_completion_reference():
    k = kpos().points
    Fs, bv, _, _ = analytic_completion(even_mag(kpos(), np.abs(ref.jost_function_exact(k))))
    ke = Fs.kgrid.points
    band = (ke >= 0.5) & (ke <= 20.0)
    exact = ref.jost_function_exact(ke[band])
    assert np.max(np.abs(Fs.values[band] - exact) / np.abs(exact)) < 1e-2
    assert abs(bv.cot_alpha - ref.COT_ALPHA) < 1e-3


def test_green_scale_recovery():
    data = ref.golden_dataset("green_mag", kpos())
    mag, info = data_to_jost_magnitude(data, {}, ref.CONSTANTS)
    assert mag is not None
    assert abs(info.A0 - ref.A0) / ref.A0 < 1e-3
    k = mag.grid.points
    band = (k >= 0.5) & (k <= 20.0)
    exact = np.abs(ref.jost_function_exact(k[band]))
    assert np.max(np.abs(mag.values[band] - exact) / exact) < 1e-3


def test_transfer_without_side_info_yields_family():
    data = ref.golden_dataset("transfer_mag", kpos())
    mag, info = data_to_jost_magnitude(data, {}, ref.CONSTANTS)
    assert mag is None
    assert info.family is not None
    assert info.family.names == ("A_l", "absdA_l")


def test_transfer_with_ratio_only_leaves_scale_open():
    Al, dAl = ref.terminal_constants()
    data = ref.golden_dataset("transfer_mag", kpos())
    mag, info = data_to_jost_magnitude(data, {"ratio": abs(dAl) / Al}, ref.CONSTANTS)
    assert mag is not None
    assert info.A0 is None


def test_input_impedance_route():
    data = ref.golden_dataset("input_impedance_mag", kpos())
    _, mag, A0 = ratio_from_input_impedance(data, ref.CONSTANTS)
    assert abs(A0 - ref.A0) / ref.A0 < 1e-3
    k = mag.grid.points
    band = (k >= 0.5) & (k <= 20.0)
    exact = np.abs(ref.jost_function_exact(k[band]))
    assert np.max(np.abs(mag.values[band] - exact) / exact) < 1e-3


def test_reflectance_completion_matches_closed_form():
    data = ref.golden_dataset("reflectance_re", kpos())
    trip = reflectance_completion(data)
    k = trip.kgrid.points
    band = (k >= 0.2) & (k <= 20.0)
    assert np.max(np.abs(trip.L[band] - ref.ell_coefficient(k[band]))) < 5e-3
    assert np.max(np.abs(trip.T[band] - ref.tau_coefficient(k[band]))) < 5e-3
    assert trip.unitarity_error() < 1e-3


def test_reflectance_completion_rejects_superunitary_data():
    from ductscatter.forward import SpectralData

    k = kpos().points
    bad = SpectralData("reflectance_re", kpos(), 1.5 * np.ones_like(k))
    with pytest.raises(ValueError):
        reflectance_completion(bad)
