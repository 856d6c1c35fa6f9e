"""Forward/inverse frequency-domain scattering for variable-area ducts.

Forward: sample an area profile A(x), map it to the Schrödinger pair
(Q, cot α), integrate the Jost solution, and synthesize seven measurable
spectra.  Inverse: starting from any one of those spectra, recover the
Jost-function magnitude, solve a Gel'fand–Levitan or Marchenko equation
for Q, integrate the relative area η², and fix the absolute scale — or
report the exact nonuniqueness family when the data cannot fix it.
"""

from .area_reconstruction import (
    DEFAULT_LENGTH,
    SCENARIOS,
    EndpointConstants,
    InconsistentDataError,
    ReconstructionResult,
    RelativeArea,
    UnphysicalResultError,
    endpoint_constants,
    family_members,
    reconstruct,
    relative_area,
)
from .estimator import AreaReconstructor
from .forward import (
    OBSERVABLE_KINDS,
    AreaFunction,
    BoundaryParameter,
    PhysicalConstants,
    Potential,
    SpectralData,
    area_to_potential,
    jost_function,
    jost_solve,
    observable,
    scattering_coefficients,
    synthesize_all,
)
from .kernel_solvers import (
    glm_reconstruct,
    marchenko_left,
    marchenko_right,
)
from .numerics import RealGrid, graded_kgrid
from .phase_retrieval import (
    FamilyDescriptor,
    analytic_completion,
    data_to_jost_magnitude,
    reflectance_completion,
)

__version__ = "0.1.0"

__all__ = [
    "AreaFunction",
    "AreaReconstructor",
    "BoundaryParameter",
    "DEFAULT_LENGTH",
    "EndpointConstants",
    "FamilyDescriptor",
    "InconsistentDataError",
    "OBSERVABLE_KINDS",
    "PhysicalConstants",
    "Potential",
    "RealGrid",
    "ReconstructionResult",
    "RelativeArea",
    "SCENARIOS",
    "SpectralData",
    "UnphysicalResultError",
    "analytic_completion",
    "area_to_potential",
    "data_to_jost_magnitude",
    "endpoint_constants",
    "family_members",
    "glm_reconstruct",
    "graded_kgrid",
    "jost_function",
    "jost_solve",
    "marchenko_left",
    "marchenko_right",
    "observable",
    "reconstruct",
    "reflectance_completion",
    "relative_area",
    "scattering_coefficients",
    "synthesize_all",
]
