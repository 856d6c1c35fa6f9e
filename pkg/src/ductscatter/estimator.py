"""Estimator-style wrapper around the scenario pipelines.

`AreaReconstructor` follows the familiar fit/get_params/set_params
convention so it slots into generic tooling: constructor arguments are
hyperparameters, `fit` consumes one spectral data set (plus optional side
information) and exposes the outcome through trailing-underscore
attributes.  Only the estimator protocol is adopted; there is no
transform/predict pair because the "prediction" of this model is the
resynthesized observable, available via `score_certificate`.
"""

from __future__ import annotations

from .area_reconstruction import (
    DEFAULT_LENGTH,
    SCENARIOS,
    ReconstructionResult,
    family_members,
    reconstruct,
)
from .forward import PhysicalConstants, SpectralData


class AreaReconstructor:
    """Reconstruct a duct's area profile from one measured observable.

    Parameters
    ----------
    scenario : one of the keys of `SCENARIOS`.
    length : duct length in cm.
    certificate_tol : maximum allowed relative deviation when the
        reconstructed duct's observable is resynthesized and compared
        against the input data.
    certify : set False to skip the resynthesis certificate.
    constants : `PhysicalConstants` (sound speed, density).
    """

    def __init__(
        self,
        scenario: str = "green",
        length: float = DEFAULT_LENGTH,
        certificate_tol: float = 0.02,
        certify: bool = True,
        constants: PhysicalConstants | None = None,
    ):
        self.scenario = scenario
        self.length = length
        self.certificate_tol = certificate_tol
        self.certify = certify
        self.constants = constants

    _param_names = ("scenario", "length", "certificate_tol", "certify", "constants")

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in self._param_names}

    def set_params(self, **params) -> "AreaReconstructor":
        for name, value in params.items():
            if name not in self._param_names:
                raise ValueError(f"unknown parameter {name!r}")
            setattr(self, name, value)
        return self

    def fit(self, data: SpectralData, side_info: dict | None = None) -> "AreaReconstructor":
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}")
        consts = self.constants or PhysicalConstants()
        self.result_: ReconstructionResult = reconstruct(
            self.scenario,
            data,
            dict(side_info or {}),
            consts,
            length=self.length,
            certificate_tol=self.certificate_tol,
            certify=self.certify,
        )
        self.potential_ = self.result_.potential
        self.cot_alpha_ = self.result_.cot_alpha
        self.eta_ = self.result_.eta
        self.area_ = self.result_.area
        self.family_ = self.result_.family
        self.unique_ = self.result_.unique
        return self

    def _check_fitted(self) -> None:
        if not hasattr(self, "result_"):
            raise RuntimeError("call fit() first")

    def score_certificate(self) -> float | None:
        """Max relative deviation of the resynthesized observable."""
        self._check_fitted()
        return self.result_.certificate_dev

    def family_members(self, params: dict, certify: bool = True):
        """Materialize one member of the nonunique family (see
        `area_reconstruction.family_members`)."""
        self._check_fitted()
        return family_members(
            self.result_, params, certificate_tol=self.certificate_tol, certify=certify
        )
