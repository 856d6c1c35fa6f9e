import numpy as np
import pytest

from ductscatter import reference_example as ref
from ductscatter.area_reconstruction import (
    InconsistentDataError,
    UnphysicalResultError,
    endpoint_constants,
    family_members,
    reconstruct,
    relative_area,
)
from ductscatter.forward import BoundaryParameter, Potential
from ductscatter.numerics import RealGrid, graded_kgrid


def kpos():
    k = graded_kgrid().points
    return RealGrid(k[k > 0])


def free_potential(length=17.5, n=801):
    xs = np.linspace(0.0, length, n)
    return Potential(RealGrid(xs), np.zeros(n))


def test_relative_area_free_potential():
    rel = relative_area(free_potential(), BoundaryParameter(-0.5))
    # y'' = 0, y(0) = 1, y'(0) = 0.5 -> y = 1 + x/2
    xs = rel.grid.points
    assert np.max(np.abs(rel.eta - (1 + xs / 2))) < 1e-8
    assert rel.cross_check_dev is not None and rel.cross_check_dev < 5e-3


def test_relative_area_vanishing_is_unphysical():
    with pytest.raises(UnphysicalResultError):
        relative_area(free_potential(), BoundaryParameter(2.0), cross_check=False)


def test_relative_area_reference_terminal_value():
    q, bp = ref.potential_samples()
    rel = relative_area(q, bp)
    Al, _ = ref.terminal_constants()
    assert abs(ref.A0 * rel.eta_l**2 - Al) / Al < 1e-3


def test_endpoint_constants_roundtrip():
    kg = RealGrid(np.linspace(0.5, 2.5, 101))
    z = ref.golden_dataset("output_impedance", kg)
    c = endpoint_constants(z, 1.0, 2.0, ref.CONSTANTS)
    assert abs(c.A_l - ref.AL_NOMINAL) < 1e-8
    assert abs(c.dA_l - ref.DAL_NOMINAL) < 1e-8
    assert c.sign_known
    zm = ref.golden_dataset("output_impedance_mag", kg)
    cm = endpoint_constants(zm, 1.0, 2.0, ref.CONSTANTS)
    assert abs(cm.A_l - ref.AL_NOMINAL) < 1e-8
    assert abs(cm.dA_l - abs(ref.DAL_NOMINAL)) < 1e-8
    assert not cm.sign_known


def test_reconstruct_rejects_bad_inputs():
    data = ref.golden_dataset("green_mag", kpos())
    with pytest.raises(ValueError, match="unknown scenario"):
        reconstruct("bogus", data, {}, ref.CONSTANTS)
    with pytest.raises(ValueError, match="expects data kind"):
        reconstruct("lip_pressure", data, {}, ref.CONSTANTS)


def test_reconstruct_green_unique():
    from ductscatter.acceptance import _scenario

    res = _scenario("green")
    assert res.unique
    assert abs(res.area.A0 - ref.A0) / ref.A0 < 1e-2
    assert abs(res.cot_alpha - ref.COT_ALPHA) < 1e-2
    assert res.certificate_dev is not None and res.certificate_dev < 0.02
    xs = res.area.grid.points
    dev = np.max(np.abs(res.area.values - ref.area_exact(xs)) / ref.area_exact(xs))
    assert dev < 0.03
    with pytest.raises(ValueError, match="unique"):
        family_members(res, {"A_l": 1.0})


def test_transfer_inconsistent_side_info_rejected():
    # changing |A'(l)|/A(l) alone contradicts the transfer magnitude's
    # zero-frequency limit; the resynthesis certificate must catch it
    Al, dAl = ref.terminal_constants()
    data = ref.golden_dataset("transfer_mag", kpos())
    with pytest.raises(InconsistentDataError):
        reconstruct(
            "transfer", data, {"A_l": Al, "absdA_l": 5.0 * abs(dAl)}, ref.CONSTANTS,
            certificate_tol=0.01,
        )


def test_transfer_family_scale_direction():
    data = ref.golden_dataset("transfer_mag", kpos())
    res = reconstruct("transfer", data, {}, ref.CONSTANTS)
    assert not res.unique
    assert res.family.names == ("A_l", "absdA_l")
    Al, dAl = ref.terminal_constants()
    member = family_members(
        res, {"A_l": 1.5 * Al, "absdA_l": 1.5 * abs(dAl)}, certificate_tol=0.01
    )
    assert abs(member.Al - 1.5 * Al) / (1.5 * Al) < 0.02
    with pytest.raises(ValueError, match="missing family parameter"):
        family_members(res, {"A_l": Al})
