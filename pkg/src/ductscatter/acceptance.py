"""Acceptance suite: the toolkit's verifiable claims, one function each.

Every criterion checks a concrete numerical statement about the bundled
reference duct (or simple closed-form ducts) at a fixed tolerance and
returns a `CriterionResult`.  Two criteria fail by design because the
model's quoted constant block is internally inconsistent; the details
strings say exactly what was computed and why it cannot match the quoted
value (see the repository notes for the full analysis).
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline

from . import reference_example as ref
from .area_reconstruction import family_members, reconstruct, relative_area
from .forward import (
    BoundaryParameter,
    Potential,
    jost_function,
    jost_solve,
)
from .kernel_solvers import glm_reconstruct, marchenko_left, marchenko_right
from .numerics import ComplexSamples, RealGrid, graded_kgrid
from .phase_retrieval import analytic_completion, even_mag


@dataclass(frozen=True)
class CriterionResult:
    name: str
    passed: bool
    details: str
    duration: float  # seconds


def _rel_l2(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))


@lru_cache(maxsize=1)
def _kpos() -> RealGrid:
    k = graded_kgrid().points
    return RealGrid(k[k > 0])


@lru_cache(maxsize=16)
def _golden(kind: str):
    return ref.golden_dataset(kind, _kpos())


@lru_cache(maxsize=1)
def _ref_field():
    q, bp = ref.potential_samples()
    fld = jost_solve(q, _kpos())
    return q, bp, fld


@lru_cache(maxsize=1)
def _glm13():
    magF = np.abs(ref.jost_function_exact(_kpos().points))
    mag = even_mag(_kpos(), magF)
    return glm_reconstruct(mag, ref.LENGTH)


@lru_cache(maxsize=8)
def _scenario(name: str):
    kind = {"lip_pressure": "lip_pressure_mag", "green": "green_mag",
            "input_impedance": "input_impedance_mag"}[name]
    return reconstruct(name, _golden(kind), {}, ref.CONSTANTS, length=ref.LENGTH)


def criterion_01_boundary_constants() -> tuple[bool, str]:
    """Quoted boundary parameter versus its defining formula."""
    computed = -ref.DA0_NOMINAL / (2.0 * ref.A0)
    quoted = ref.COT_ALPHA_NOMINAL
    err = abs(computed - quoted)
    ok = err <= 1e-12
    return ok, (
        f"cot(alpha) from A(0)=5, A'(0)=-0.52 is {computed:+.6f}; the quoted "
        f"value is {quoted:+.6f} (|diff|={err:.3g}, tol 1e-12).  The quoted "
        "sign contradicts cot(alpha) = -A'(0)/(2A(0)); the toolkit uses the "
        "self-consistent boundary data (cot(alpha)=1.3) everywhere else."
    )


def criterion_02_forward_fidelity() -> tuple[bool, str]:
    q, bp, fld = _ref_field()
    k = _kpos().points
    band = (k >= 0.1) & (k <= 20.0)
    f_exact = ref.jost_f(k[band], 0.0)
    F_exact = ref.jost_function_exact(k[band])
    F = jost_function(fld, bp).values[band]
    dev_f = float(np.max(np.abs(fld.f[band, 0] - f_exact) / np.abs(f_exact)))
    dev_F = float(np.max(np.abs(F - F_exact) / np.abs(F_exact)))
    ok = dev_f <= 1e-6 and dev_F <= 1e-6
    return ok, f"max rel dev on [0.1,20]: f(k,0) {dev_f:.3g}, F_alpha {dev_F:.3g} (tol 1e-6)"


def criterion_03_endpoint_recovery() -> tuple[bool, str]:
    from .area_reconstruction import endpoint_constants

    kg = RealGrid(np.linspace(0.5, 2.5, 201))
    z = ref.golden_dataset("output_impedance", kg)
    c = endpoint_constants(z, 1.0, 2.0, ref.CONSTANTS)
    dA = abs(c.A_l - ref.AL_NOMINAL) / ref.AL_NOMINAL
    dD = abs(c.dA_l - ref.DAL_NOMINAL) / ref.DAL_NOMINAL
    zm = ref.golden_dataset("output_impedance_mag", kg)
    cm = endpoint_constants(zm, 1.0, 2.0, ref.CONSTANTS)
    dAm = abs(cm.A_l - ref.AL_NOMINAL) / ref.AL_NOMINAL
    dDm = abs(cm.dA_l - abs(ref.DAL_NOMINAL)) / abs(ref.DAL_NOMINAL)
    ok = max(dA, dD, dAm, dDm) <= 1e-9
    return ok, (
        f"complex: A(l) rel {dA:.3g}, A'(l) rel {dD:.3g}; "
        f"magnitude-only: {dAm:.3g}, {dDm:.3g} (tol 1e-9)"
    )


def criterion_04_relative_area() -> tuple[bool, str]:
    q, bp = ref.potential_samples()
    rel = relative_area(q, bp)
    eta2 = rel.eta_l**2
    dev = abs(eta2 - 2.3192) / 2.3192
    cross = rel.cross_check_dev
    ok = dev <= 1e-3 and cross is not None and cross <= 5e-3
    return ok, (
        f"eta(l)^2 = {eta2:.6f} vs 2.3192 (rel {dev:.3g}, tol 1e-3); "
        f"ODE vs determinant path dev {cross:.3g} (tol 5e-3).  Computed with "
        "the self-consistent cot(alpha)=1.3."
    )


def _symmetry_checks(q: Potential):
    k = _kpos().points[::10]
    kg = RealGrid(np.concatenate([-k[::-1], k]))
    fld = jost_solve(q, kg)
    from .forward import scattering_coefficients

    n = len(k)
    f = fld.f[:, 0]
    dev_f = float(np.max(np.abs(f[:n][::-1] - np.conj(f[n:])) / np.abs(f[n:])))
    trip = scattering_coefficients(fld)
    dev_T = float(np.max(np.abs(trip.T[:n][::-1] - np.conj(trip.T[n:]))))
    dev_L = float(np.max(np.abs(trip.L[:n][::-1] - np.conj(trip.L[n:]))))
    F = jost_function(fld, BoundaryParameter(1.3)).values
    dev_F = float(np.max(np.abs(F[:n][::-1] + np.conj(F[n:])) / np.abs(F[n:])))
    uni = float(np.max(np.abs(np.abs(trip.T) ** 2 + np.abs(trip.L) ** 2 - 1.0)))
    return dev_f, dev_T, dev_L, dev_F, uni


def criterion_05_symmetry_unitarity() -> tuple[bool, str]:
    xs = np.linspace(0.0, ref.LENGTH, 801)
    cases = {
        "Q=0": Potential(RealGrid(xs), np.zeros_like(xs)),
        "Q=0.5": Potential(RealGrid(xs), np.full_like(xs, 0.5)),
        "reference": ref.potential_samples()[0],
    }
    parts = []
    ok = True
    for label, q in cases.items():
        dev_f, dev_T, dev_L, dev_F, uni = _symmetry_checks(q)
        sym = max(dev_f, dev_T, dev_L, dev_F)
        ok = ok and sym <= 1e-12 and uni <= 1e-8
        parts.append(f"{label}: mirror sym {sym:.2g}, |T|^2+|L|^2-1 {uni:.2g}")
    return ok, "; ".join(parts) + " (tols 1e-12 / 1e-8)"


def criterion_06_phase_retrieval() -> tuple[bool, str]:
    k = _kpos().points
    # closed-form family |F|^2 = k^2 + cot^2 -> F = k - i cot
    worst_exact = 0.0
    for cot in (-0.5, -1.0, -2.0):
        mag = even_mag(_kpos(), np.sqrt(k**2 + cot**2))
        Fs, bv, _, _ = analytic_completion(mag)
        ke = Fs.kgrid.points
        F_exact = ke - 1j * cot
        dev = float(np.max(np.abs(Fs.values - F_exact) / np.abs(F_exact)))
        worst_exact = max(worst_exact, dev)
    # reference duct
    mag = even_mag(_kpos(), np.abs(ref.jost_function_exact(k)))
    Fs, bv, _, _ = analytic_completion(mag)
    ke = Fs.kgrid.points
    band = (ke >= 0.5) & (ke <= 20.0)
    F_exact = ref.jost_function_exact(ke[band])
    dev_ref = float(np.max(np.abs(Fs.values[band] - F_exact) / np.abs(F_exact)))
    ok = worst_exact <= 1e-10 and dev_ref <= 1e-2
    return ok, (
        f"closed-form family max rel dev {worst_exact:.3g} (tol 1e-10); "
        f"reference duct {dev_ref:.3g} on [0.5,20] (tol 1e-2); "
        f"cot(alpha) recovered {bv.cot_alpha:.6f}"
    )


def criterion_07_glm_round_trip() -> tuple[bool, str]:
    q, bp, _ = _glm13()
    xs = np.linspace(0.0, ref.LENGTH - 0.5, 800)
    relq = _rel_l2(q.interpolant()(xs), ref.q_potential(xs))
    dcot = abs(bp.cot_alpha - ref.COT_ALPHA)
    # exact-kernel case Q=0, cot(alpha) = -1 -> |F| = sqrt(k^2+1)
    k = _kpos().points
    mag = even_mag(_kpos(), np.sqrt(k**2 + 1.0))
    q0, bp0, _ = glm_reconstruct(mag, ref.LENGTH)
    maxq0 = float(np.max(np.abs(q0.values)))
    dcot0 = abs(bp0.cot_alpha - (-1.0))
    ok = relq <= 0.02 and dcot <= 1e-3 and maxq0 <= 1e-3 and dcot0 <= 1e-4
    return ok, (
        f"reference: Q rel L2 {relq:.3g} (tol 2e-2), cot err {dcot:.3g} (tol 1e-3); "
        f"free case: max|Q| {maxq0:.3g} (tol 1e-3), cot err {dcot0:.3g} (tol 1e-4)"
    )


def criterion_08_scenario_uniqueness() -> tuple[bool, str]:
    parts = []
    ok = True
    for name in ("lip_pressure", "green", "input_impedance"):
        res = _scenario(name)
        xs = res.area.grid.points
        dev = float(np.max(np.abs(res.area.values - ref.area_exact(xs)) / ref.area_exact(xs)))
        dA0 = abs(res.area.A0 - ref.A0) / ref.A0
        ok = ok and dev <= 0.03 and dA0 <= 5e-3
        parts.append(f"{name}: area {dev:.3g}, A(0) {dA0:.3g}")
    return ok, "; ".join(parts) + " (tols 3e-2 / 5e-3)"


def criterion_09_scenario_equivalence() -> tuple[bool, str]:
    t = _golden("transfer_mag")
    p = _golden("mic_pressure_mag")
    k = _kpos().points
    c, mu = ref.CONSTANTS.c, ref.CONSTANTS.mu
    lhs = t.values
    rhs = 4.0 * np.pi * p.r / (c * k * mu) * p.values
    dev = float(np.max(np.abs(lhs - rhs) / np.abs(lhs)))
    ok = dev <= 1e-10
    return ok, f"|T| vs (4 pi r / c k mu)|P| max rel dev {dev:.3g} (tol 1e-10)"


def criterion_10a_transfer_family() -> tuple[bool, str]:
    res = reconstruct("transfer", _golden("transfer_mag"), {}, ref.CONSTANTS)
    if res.unique or res.family.names != ("A_l", "absdA_l"):
        return False, "expected a two-parameter (A_l, |A'(l)|) family"
    Al, dAl = ref.terminal_constants()
    m1 = family_members(res, {"A_l": Al, "absdA_l": abs(dAl)}, certificate_tol=0.01)
    m2 = family_members(
        res, {"A_l": 1.5 * Al, "absdA_l": 1.5 * abs(dAl)}, certificate_tol=0.01
    )
    spl = CubicSpline(m2.grid.points, m2.values)
    diff = float(np.max(np.abs(spl(m1.grid.points) - m1.values) / m1.values))
    ok = diff > 0.10
    return ok, (
        "two members certified within 1% resynthesis; "
        f"max area difference {diff:.1%} (must exceed 10%)"
    )


def criterion_10b_reflectance_family() -> tuple[bool, str]:
    res = reconstruct("reflectance", _golden("reflectance_re"), {}, ref.CONSTANTS)
    xs = np.linspace(0.0, ref.LENGTH - 0.5, 800)
    relq = _rel_l2(res.potential.interpolant()(xs), ref.q_potential(xs))
    q_ok = relq <= 0.02
    xs_eta, eta_ref = ref.eta()

    def eta_dev(cot: float) -> float:
        rel = family_members(res, {"cot_alpha": cot}, certify=False)
        spl = CubicSpline(rel.grid.points, rel.eta)
        return float(np.max(np.abs(spl(xs_eta) - eta_ref) / np.abs(eta_ref)))

    dev_nominal = eta_dev(ref.COT_ALPHA_NOMINAL)
    dev_consistent = eta_dev(ref.COT_ALPHA)
    ok = q_ok and dev_nominal <= 0.02
    return ok, (
        f"Q rel L2 {relq:.3g} (tol 2e-2); eta family member at the quoted "
        f"cot(alpha)={ref.COT_ALPHA_NOMINAL} deviates {dev_nominal:.3g} from the "
        f"reference eta (tol 2e-2) -- the quoted boundary value is inconsistent "
        f"with the duct; the self-consistent member cot(alpha)={ref.COT_ALPHA} "
        f"matches within {dev_consistent:.3g}."
    )


def criterion_11_marchenko_agreement() -> tuple[bool, str]:
    k = _kpos().points
    R = ComplexSamples(_kpos(), ref.rho_coefficient(k))
    L = ComplexSamples(_kpos(), ref.ell_coefficient(k))
    _, qL = marchenko_left(R, ref.LENGTH)
    _, qR = marchenko_right(L, ref.LENGTH)
    qG, _, _ = _glm13()
    xs = np.linspace(0.0, ref.LENGTH - 0.5, 800)
    vL, vR, vG = (q.interpolant()(xs) for q in (qL, qR, qG))
    dLR = _rel_l2(vL, vR)
    dLG = _rel_l2(vL, vG)
    dRG = _rel_l2(vR, vG)
    ok = max(dLR, dLG, dRG) <= 0.02
    return ok, (
        f"rel L2: left vs right {dLR:.3g}, left vs GLM {dLG:.3g}, "
        f"right vs GLM {dRG:.3g} (tol 2e-2)"
    )


CRITERIA = (
    ("01-boundary-constants", criterion_01_boundary_constants),
    ("02-forward-fidelity", criterion_02_forward_fidelity),
    ("03-endpoint-recovery", criterion_03_endpoint_recovery),
    ("04-relative-area", criterion_04_relative_area),
    ("05-symmetry-unitarity", criterion_05_symmetry_unitarity),
    ("06-phase-retrieval", criterion_06_phase_retrieval),
    ("07-glm-round-trip", criterion_07_glm_round_trip),
    ("08-scenario-uniqueness", criterion_08_scenario_uniqueness),
    ("09-scenario-equivalence", criterion_09_scenario_equivalence),
    ("10a-transfer-family", criterion_10a_transfer_family),
    ("10b-reflectance-family", criterion_10b_reflectance_family),
    ("11-marchenko-agreement", criterion_11_marchenko_agreement),
)

# Criteria that fail because the reference model's quoted constants are
# internally inconsistent; the failures are reported, not papered over.
EXPECTED_FAILURES = ("01-boundary-constants", "10b-reflectance-family")


def run_one(name: str) -> CriterionResult:
    fn = dict(CRITERIA)[name]
    t0 = time.perf_counter()
    try:
        passed, details = fn()
    except Exception as exc:
        passed, details = False, f"raised {type(exc).__name__}: {exc}"
    return CriterionResult(name, passed, details, time.perf_counter() - t0)


def run_all(scenario: str | None = None) -> list:
    names = [n for n, _ in CRITERIA]
    if scenario:
        names = [n for n in names if scenario in n] or names
    return [run_one(n) for n in names]
