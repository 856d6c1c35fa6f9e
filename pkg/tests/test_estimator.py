import pytest

from ductscatter import reference_example as ref
from ductscatter.estimator import AreaReconstructor
from ductscatter.numerics import RealGrid, graded_kgrid


def kpos():
    k = graded_kgrid().points
    return RealGrid(k[k > 0])


def test_params_round_trip():
    est = AreaReconstructor(scenario="transfer", certificate_tol=0.01)
    params = est.get_params()
    assert params["scenario"] == "transfer"
    est2 = AreaReconstructor().set_params(**params)
    assert est2.get_params() == params


def test_set_params_rejects_unknown():
    with pytest.raises(ValueError, match="unknown parameter"):
        AreaReconstructor().set_params(bogus=1)


def test_requires_fit_first():
    with pytest.raises(RuntimeError, match="fit"):
        AreaReconstructor().score_certificate()


def test_fit_family_path():
    est = AreaReconstructor(scenario="transfer", constants=ref.CONSTANTS)
    est.fit(ref.golden_dataset("transfer_mag", kpos()))
    assert not est.unique_
    assert est.family_.names == ("A_l", "absdA_l")
    assert est.area_ is None


def test_fit_unknown_scenario():
    with pytest.raises(ValueError, match="unknown scenario"):
        AreaReconstructor(scenario="bogus").fit(
            ref.golden_dataset("green_mag", kpos())
        )
