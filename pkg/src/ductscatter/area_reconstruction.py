"""Zero-energy step and scenario pipelines.

From (Q, cot(alpha)) to the relative area eta^2 and the absolute area A,
endpoint-constant recovery from the output impedance, and the seven
measurement scenarios with their uniqueness/family semantics.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

from .forward import (
    AreaFunction,
    BoundaryParameter,
    PhysicalConstants,
    Potential,
    SpectralData,
    jost_function,
    jost_solve,
    observable,
    scattering_coefficients,
)
from .kernel_solvers import glm_reconstruct, marchenko_right
from .numerics import ComplexSamples, RealGrid
from .phase_retrieval import (
    FamilyDescriptor,
    ScaleInfo,
    data_to_jost_magnitude,
    ratio_from_input_impedance,
    reflectance_completion,
)

SCENARIOS = {
    "microphone": "mic_pressure_mag",
    "lip_pressure": "lip_pressure_mag",
    "transfer": "transfer_mag",
    "green": "green_mag",
    "input_impedance": "input_impedance_mag",
    "reflectance": ("reflectance_re", "reflectance_im"),
}

DEFAULT_LENGTH = 17.5


class InconsistentDataError(ValueError):
    """Data and side information contradict each other (certificate failed)."""


class UnphysicalResultError(ValueError):
    """The reconstructed relative area vanishes inside the duct."""


@dataclass(frozen=True)
class RelativeArea:
    """eta(x) with eta(0) = 1 and eta'(0) = -cot(alpha); A = A(0) eta^2."""

    grid: RealGrid
    eta: np.ndarray
    deta: np.ndarray
    cot_alpha: float
    cross_check_dev: float | None = None  # ODE vs determinant path

    def __post_init__(self) -> None:
        if abs(self.eta[0] - 1.0) > 1e-12:
            raise ValueError("eta(0) must be 1")
        if abs(self.deta[0] + self.cot_alpha) > 1e-12:
            raise ValueError("eta'(0) must equal -cot(alpha)")
        if np.any(self.eta <= 0):
            raise UnphysicalResultError("relative area vanishes on the duct")

    @property
    def eta_l(self) -> float:
        return float(self.eta[-1])

    def to_area(self, A0: float) -> AreaFunction:
        if A0 <= 0:
            raise ValueError("A(0) must be positive")
        vals = A0 * self.eta**2
        dA0 = -2.0 * A0 * self.cot_alpha
        dAl = 2.0 * A0 * self.eta[-1] * self.deta[-1]
        return AreaFunction(self.grid, vals, dA0=dA0, dAl=dAl)


@dataclass(frozen=True)
class EndpointConstants:
    """Terminal constants recovered from the output impedance."""

    A_l: float
    dA_l: float  # signed when sign_known, else the absolute value
    sign_known: bool
    A0: float | None = None

    def __post_init__(self) -> None:
        if self.A_l <= 0:
            raise ValueError("A(l) must be positive")


@dataclass(frozen=True)
class ReconstructionResult:
    """Outcome of one scenario pipeline.

    Exactly one of `area` (uniqueness granted) and `family` (nonunique)
    is populated.  For the reflectance scenario the potential is unique,
    the relative area carries the one-parameter boundary family, and the
    absolute area additionally needs the scale: `area_family` names that
    larger family.  Inputs are retained so family members can be
    materialized and certified later."""

    scenario: str
    potential: Potential | None
    cot_alpha: float | None
    eta: RelativeArea | None
    area: AreaFunction | None
    family: FamilyDescriptor | None
    scale_provenance: str = ""
    certificate_dev: float | None = None
    area_family: FamilyDescriptor | None = None
    data: SpectralData | None = None
    side_info: dict = field(default_factory=dict)
    consts: PhysicalConstants = field(default_factory=PhysicalConstants)
    length: float = DEFAULT_LENGTH

    def __post_init__(self) -> None:
        if (self.area is None) == (self.family is None):
            raise ValueError("exactly one of area/family must be populated")

    @property
    def unique(self) -> bool:
        return self.area is not None


def relative_area(
    q: Potential,
    bp: BoundaryParameter,
    cross_check: bool = True,
    cross_tol: float = 5e-3,
    kderiv: float = 2e-3,
) -> RelativeArea:
    """Solve y'' = Q y, y(0) = 1, y'(0) = -cot(alpha); eta = y.

    The ODE solution is cross-checked against an independent path built
    from the zero-energy Jost solution and the k-derivatives of the
    scattering coefficients at the origin (generic case), or against the
    explicit two-solution formula when the transmission coefficient does
    not vanish at k = 0 (exceptional case)."""
    xs = q.grid.points
    spl = q.interpolant()

    def rhs(x, y):
        return [y[1], spl(x) * y[0]]

    sol = solve_ivp(
        rhs,
        (xs[0], xs[-1]),
        [1.0, -bp.cot_alpha],
        t_eval=xs,
        rtol=1e-10,
        atol=1e-12,
        method="DOP853",
    )
    if not sol.success:
        raise RuntimeError(f"relative-area integration failed: {sol.message}")
    eta, deta = sol.y[0], sol.y[1]
    eta = eta.copy()
    eta[0] = 1.0
    deta = deta.copy()
    deta[0] = -bp.cot_alpha
    dev = None
    if cross_check:
        dev = _zero_energy_cross_check(q, bp, eta, kderiv)
        if dev > cross_tol:
            raise RuntimeError(
                f"zero-energy cross-check deviation {dev:.2e} exceeds {cross_tol:.1e}"
            )
    if np.any(eta <= 0):
        raise UnphysicalResultError("relative area vanishes on the duct")
    return RelativeArea(q.grid, eta, deta, bp.cot_alpha, cross_check_dev=dev)


def _zero_energy_cross_check(q, bp, eta_ode, d):
    """Max relative deviation between the ODE eta and the spectral-side eta.

    Generic case: eta(x) = (i/2) Tdot(0) f(0,x) cot(alpha)
    + [i fdot(0,x) - (i/2) Rdot(0) f(0,x)] (f'(0,0) + cot(alpha) f(0,0)),
    with the k-derivatives at 0 taken from the conjugate symmetry
    (gdot(0) = i Im g(d)/d).  Exceptional case (T(0) != 0): the second
    solution is f(0,x) * integral dz/f(0,z)^2."""
    cot = bp.cot_alpha
    fld = jost_solve(q, RealGrid(np.array([d, 2 * d])))
    f_d = fld.f[0]
    phi = f_d.real  # f(0, x)
    f00 = phi[0]
    df00 = fld.df[0, 0].real
    trip = scattering_coefficients(fld)
    T_d = complex(trip.T[0])
    xs = fld.xgrid.points
    if abs(T_d) < 0.05:
        # generic: T(0) = 0
        Tdot = 1j * T_d.imag / d
        Rdot = 1j * complex(trip.R[0]).imag / d
        fdot = 1j * f_d.imag / d
        eta_sp = (
            0.5j * Tdot * phi * cot
            + (1j * fdot - 0.5j * Rdot * phi) * (df00 + cot * f00)
        ).real
    else:
        # exceptional: second solution by reduction of order
        inv2 = 1.0 / phi**2
        integ = np.concatenate(
            [[0.0], np.cumsum(0.5 * (inv2[1:] + inv2[:-1]) * np.diff(xs))]
        )
        a = 1.0 / f00
        b = -cot * f00 - df00 / f00
        eta_sp = a * phi + b * phi * integ
    spl = CubicSpline(xs, eta_sp)
    eta_cmp = spl(np.linspace(xs[0], xs[-1], 200))
    spl_ode = CubicSpline(q.grid.points, eta_ode)
    ode_cmp = spl_ode(np.linspace(xs[0], xs[-1], 200))
    return float(np.max(np.abs(eta_cmp - ode_cmp) / np.max(np.abs(ode_cmp))))


def endpoint_constants(
    z: SpectralData,
    k1: float,
    k2: float,
    consts: PhysicalConstants = PhysicalConstants(),
) -> EndpointConstants:
    """Recover A(l), A'(l) from the output impedance at two wavenumbers.

    Complex data: Z(k, l) = 2ick mu / (2ik A(l) + A'(l)); two samples give
    a linear system with a signed A'(l).  Magnitude-only data determines
    A(l) and A'(l)^2, so only |A'(l)| with the sign flagged unknown."""
    if z.kind not in ("output_impedance", "output_impedance_mag"):
        raise ValueError("endpoint recovery needs output-impedance data")
    if k1 <= 0 or k2 <= 0 or k1 == k2:
        raise ValueError("need two distinct positive wavenumbers")
    c, mu = consts.c, consts.mu
    k = z.kgrid.points
    spl_re = CubicSpline(k, np.real(z.values))
    Z1r, Z2r = spl_re(k1), spl_re(k2)
    if z.kind == "output_impedance":
        spl_im = CubicSpline(k, np.imag(z.values))
        Z1 = Z1r + 1j * spl_im(k1)
        Z2 = Z2r + 1j * spl_im(k2)
        A_l = c * mu * (k1 / Z1 - k2 / Z2) / (k1 - k2)
        dA_l = 2j * c * mu * k1 * k2 * (1.0 / Z2 - 1.0 / Z1) / (k1 - k2)
        if abs(A_l.imag) > 1e-6 * abs(A_l.real) + 1e-12:
            raise InconsistentDataError("complex residual in A(l): bad impedance data")
        return EndpointConstants(float(A_l.real), float(dA_l.real), sign_known=True)
    # magnitude-only: 4k^2 A^2 + A'^2 = (2 c k mu / |Z|)^2 at both k
    if k1**2 == k2**2:
        raise ValueError("magnitude-only recovery needs k1^2 != k2^2")
    w1 = (2 * c * k1 * mu / Z1r) ** 2
    w2 = (2 * c * k2 * mu / Z2r) ** 2
    A2 = (w1 - w2) / (4 * (k1**2 - k2**2))
    if A2 <= 0:
        raise InconsistentDataError("nonpositive area from impedance magnitudes")
    dA2 = w1 - 4 * k1**2 * A2
    if dA2 < -1e-9 * w1:
        raise InconsistentDataError("negative A'(l)^2 from impedance magnitudes")
    return EndpointConstants(
        float(np.sqrt(A2)), float(np.sqrt(max(dA2, 0.0))), sign_known=False
    )


def reconstruct(
    scenario: str,
    data: SpectralData,
    side_info: dict | None = None,
    consts: PhysicalConstants = PhysicalConstants(),
    length: float = DEFAULT_LENGTH,
    certificate_tol: float = 0.02,
    certify: bool = True,
) -> ReconstructionResult:
    """Run one measurement scenario end to end.

    Side info keys (all optional, scenario-dependent): A_l, absdA_l,
    ratio (= |A'(l)|/A(l)), r (microphone distance).  When the scenario's
    theorem leaves parameters undetermined the result carries the exact
    family instead of an area, never a silent default."""
    side_info = dict(side_info or {})
    if scenario not in SCENARIOS:
        raise ValueError(f"unknown scenario {scenario!r}")
    kinds = SCENARIOS[scenario]
    if isinstance(kinds, str):
        kinds = (kinds,)
    if data.kind not in kinds:
        raise ValueError(f"scenario {scenario!r} expects data kind in {kinds}")

    if scenario == "reflectance":
        return _reconstruct_reflectance(
            data, side_info, consts, length, certificate_tol, certify
        )

    if scenario == "input_impedance":
        _, mag, A0 = ratio_from_input_impedance(data, consts)
        info = ScaleInfo(A0=A0, limit_used="input_impedance_tail")
    else:
        mag, info = data_to_jost_magnitude(
            data, side_info, consts, r=side_info.get("r")
        )
        if mag is None:
            return ReconstructionResult(
                scenario=scenario,
                potential=None,
                cot_alpha=None,
                eta=None,
                area=None,
                family=info.family,
                data=data,
                side_info=side_info,
                consts=consts,
                length=length,
            )

    q, bp, _ = glm_reconstruct(mag, length)
    rel = relative_area(q, bp)

    if scenario == "lip_pressure":
        A0 = info.sqrt_A0Al / rel.eta_l
    elif scenario in ("green", "input_impedance"):
        A0 = info.A0
    else:  # microphone / transfer with full side info
        A0 = info.A0
    if A0 is None:
        # ratio known but A(l) not: geometry unique, scale free
        fam = FamilyDescriptor(
            "one_param", ("A_l",), {"A_l": np.geomspace(0.5, 20.0, 15)}
        )
        return ReconstructionResult(
            scenario=scenario,
            potential=q,
            cot_alpha=bp.cot_alpha,
            eta=rel,
            area=None,
            family=fam,
            scale_provenance=info.limit_used,
            data=data,
            side_info=side_info,
            consts=consts,
            length=length,
        )
    area = rel.to_area(A0)
    dev = None
    if certify:
        dev = certify_result(scenario, data, q, bp, rel, A0, consts, side_info)
        if dev > certificate_tol:
            raise InconsistentDataError(
                f"resynthesized {data.kind} deviates {dev:.2%} from the input "
                f"(tolerance {certificate_tol:.0%}); side information is "
                "inconsistent with the data"
            )
    return ReconstructionResult(
        scenario=scenario,
        potential=q,
        cot_alpha=bp.cot_alpha,
        eta=rel,
        area=area,
        family=None,
        scale_provenance=info.limit_used,
        certificate_dev=dev,
        data=data,
        side_info=side_info,
        consts=consts,
        length=length,
    )


def _reconstruct_reflectance(data, side_info, consts, length, tol, certify):
    triple = reflectance_completion(data)
    k = triple.kgrid.points
    pos = k > 0
    L = ComplexSamples(RealGrid(k[pos]), triple.L[pos])
    _, q = marchenko_right(L, length)
    fam = FamilyDescriptor(
        "one_param", ("cot_alpha",), {"cot_alpha": np.linspace(-2.0, 2.0, 9)}
    )
    area_fam = FamilyDescriptor("two_param", ("cot_alpha", "A0"))
    dev = None
    if certify:
        dev = _certify_reflectance(data, q, consts)
        if dev > tol:
            raise InconsistentDataError(
                f"resynthesized reflectance deviates {dev:.2%} from the input"
            )
    return ReconstructionResult(
        scenario="reflectance",
        potential=q,
        cot_alpha=None,
        eta=None,
        area=None,
        family=fam,
        area_family=area_fam,
        certificate_dev=dev,
        data=data,
        side_info=side_info,
        consts=consts,
        length=length,
    )


def _certificate_kgrid(data: SpectralData, nmax: int = 150) -> RealGrid:
    k = data.kgrid.points
    stride = max(1, len(k) // nmax)
    kk = k[::stride]
    if kk[0] <= 0:
        kk = kk[kk > 0]
    return RealGrid(kk)


def certify_result(scenario, data, q, bp, rel, A0, consts, side_info) -> float:
    """Max relative deviation between the input observable and its
    resynthesis from the reconstructed (Q, cot(alpha), eta, A(0))."""
    kg = _certificate_kgrid(data)
    fld = jost_solve(q, kg)
    F = jost_function(fld, bp)
    area = rel.to_area(A0)
    r = data.r if data.r is not None else side_info.get("r")
    syn = observable(data.kind, area, fld, F, consts, r=r)
    spl = CubicSpline(data.kgrid.points, data.values)
    ref = spl(kg.points)
    scale = np.max(np.abs(ref))
    return float(np.max(np.abs(syn.values - ref)) / scale)


def _certify_reflectance(data, q, consts) -> float:
    kg = _certificate_kgrid(data)
    fld = jost_solve(q, kg)
    trip = scattering_coefficients(fld)
    # data samples the reflectance L(-k) = L(k)^*
    syn = trip.L.conj()
    vals = syn.real if data.kind == "reflectance_re" else syn.imag
    spl = CubicSpline(data.kgrid.points, data.values)
    ref = spl(kg.points)
    return float(np.max(np.abs(vals - ref)) / max(np.max(np.abs(ref)), 1e-30))


def family_members(
    result: ReconstructionResult,
    params: dict,
    certificate_tol: float = 0.02,
    certify: bool = True,
) -> AreaFunction | RelativeArea:
    """Materialize one member of a nonunique family and certify it.

    Microphone/transfer families: params from {A_l, absdA_l} or {ratio}
    (merged with the side info already present).  Reflectance family:
    params {cot_alpha} gives the relative area; add {A0} for an absolute
    area.  Scale-only families: params {A_l}."""
    if result.family is None:
        raise ValueError("result is unique; no family to materialize")
    params = dict(params)
    for name in result.family.names:
        if name not in params and not (
            result.scenario == "reflectance" and name == "A0"
        ):
            raise ValueError(f"missing family parameter {name!r}")

    if result.scenario == "reflectance":
        cot = float(params["cot_alpha"])
        rel = relative_area(result.potential, BoundaryParameter(cot))
        A0 = params.get("A0")
        if A0 is None:
            return rel
        if A0 <= 0:
            raise ValueError("A(0) must be positive")
        return rel.to_area(float(A0))

    if result.potential is not None and set(params) == {"A_l"}:
        # scale-only family: geometry already reconstructed
        Al = float(params["A_l"])
        if Al <= 0:
            raise ValueError("A(l) must be positive")
        A0 = Al / result.eta.eta_l**2
        return result.eta.to_area(A0)

    side = dict(result.side_info)
    side.update(params)
    if "A_l" in side and side["A_l"] <= 0:
        raise ValueError("A(l) must be positive")
    sub = reconstruct(
        result.scenario,
        result.data,
        side,
        result.consts,
        result.length,
        certificate_tol=certificate_tol,
        certify=certify,
    )
    if sub.area is None:
        raise ValueError(
            f"parameters {sorted(params)} do not close the family "
            f"{result.family.names}"
        )
    return sub.area
