import numpy as np
import pytest

from ductscatter import reference_example as ref
from ductscatter.numerics import RealGrid, graded_kgrid


def kpos(stride=1):
    k = graded_kgrid().points
    k = k[k > 0]
    return RealGrid(k[::stride])


def test_potential_origin_value():
    # 80 beta / (beta - 2)^2 with (beta-2)^2 = 10 beta
    assert abs(ref.q_potential(0.0) - 8.0) < 1e-12


def test_reflection_origin_value():
    assert abs(ref.ell_coefficient(0.0) - (-1.0)) < 1e-14


def test_unitarity_identities():
    k = np.linspace(0.05, 30.0, 700)
    tau = ref.tau_coefficient(k)
    ell = ref.ell_coefficient(k)
    rho = ref.rho_coefficient(k)
    assert np.max(np.abs(np.abs(tau) ** 2 + np.abs(ell) ** 2 - 1.0)) < 1e-13
    assert np.max(np.abs(np.abs(rho) - np.abs(ell))) < 1e-13


def test_pole_guard():
    with pytest.raises(ValueError, match="pole"):
        ref.tau_coefficient(-1j)


def test_g_left_solves_schroedinger():
    h = 1e-4
    for k in (0.5, 2.0, 7.0):
        for x in (0.3, 1.0, 4.0):
            d2 = (ref.g_left(k, x + h) - 2 * ref.g_left(k, x) + ref.g_left(k, x - h)) / h**2
            resid = d2 - (ref.q_potential(x) - k**2) * ref.g_left(k, x)
            assert abs(resid) < 1e-5


def test_g_left_branches_match_at_origin():
    for k in (0.5, 2.0, 7.0):
        assert abs(ref.g_left(k, 0.0) - ref.g_left_negative(k, 0.0)) < 1e-12


def test_jost_f_terminal_conditions():
    k = np.array([0.5, 1.0, 5.0, 20.0])
    f = ref.jost_f(k, ref.LENGTH)
    df = ref.jost_f(k, ref.LENGTH, deriv=True)
    assert np.max(np.abs(f - np.exp(1j * k * ref.LENGTH))) < 1e-10
    assert np.max(np.abs(df - 1j * k * np.exp(1j * k * ref.LENGTH))) < 1e-9


def test_terminal_constants_match_quoted_rounding():
    Al, dAl = ref.terminal_constants()
    assert abs(Al - ref.AL_NOMINAL) < 5e-4
    assert abs(dAl - ref.DAL_NOMINAL) < 5e-4


def test_eta_normalization():
    xs, y = ref.eta()
    assert abs(y[0] - 1.0) < 1e-12
    assert np.all(y > 0)


def test_numeric_dataset_matches_golden():
    kg = kpos(stride=5)
    from ductscatter.forward import OBSERVABLE_KINDS

    for kind in OBSERVABLE_KINDS:
        g = ref.golden_dataset(kind, kg)
        n = ref.numeric_dataset(kind, kg)
        dev = np.max(np.abs(n.values - g.values)) / np.max(np.abs(g.values))
        assert dev < 1e-6, f"{kind}: {dev:.3g}"


def test_golden_dataset_rejects_nonpositive_k():
    with pytest.raises(ValueError, match="k > 0"):
        ref.golden_dataset("green_mag", RealGrid(np.array([0.0, 1.0])))
