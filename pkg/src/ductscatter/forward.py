"""Forward synthesis: from an area profile to the potential, boundary
parameter, Jost quantities, scattering coefficients, acoustic field, and
the seven measurable data sets.

Units are cgs throughout (cm, s, gm, dyn); wavenumber k in 1/cm.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .numerics import (
    ComplexSamples,
    RealGrid,
    RealSamples,
    ode_integrate_complex,
    symmetric_points,
)

OBSERVABLE_KINDS = (
    "lip_pressure_mag",
    "mic_pressure_mag",
    "output_impedance",
    "output_impedance_mag",
    "input_impedance_mag",
    "transfer_mag",
    "green_mag",
    "reflectance_re",
    "reflectance_im",
)

OBSERVABLE_UNITS = {
    "lip_pressure_mag": "dyn/cm^2",
    "mic_pressure_mag": "dyn/cm^2",
    "output_impedance": "dyn.s/cm^5",
    "output_impedance_mag": "dyn.s/cm^5",
    "input_impedance_mag": "dyn.s/cm^5",
    "transfer_mag": "dimensionless",
    "green_mag": "dyn.s/cm^5",
    "reflectance_re": "dimensionless",
    "reflectance_im": "dimensionless",
}


@dataclass(frozen=True)
class PhysicalConstants:
    """Sound speed (cm/s) and air density (gm/cm^3)."""

    c: float = 3.43e4
    mu: float = 1.2e-3

    def __post_init__(self) -> None:
        if self.c <= 0 or self.mu <= 0:
            raise ValueError("constants must be strictly positive")


@dataclass(frozen=True)
class AreaFunction:
    """Sampled positive cross-sectional area A(x) on [0, l] with endpoint
    derivatives."""

    grid: RealGrid
    values: np.ndarray
    dA0: float
    dAl: float

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.shape != self.grid.points.shape:
            raise ValueError("area values and grid length mismatch")
        if np.any(vals <= 0):
            raise ValueError("area must be positive on [0, l]")
        if self.grid.points[0] != 0.0:
            raise ValueError("area grid must start at x = 0")

    @property
    def length(self) -> float:
        return float(self.grid.points[-1])

    @property
    def A0(self) -> float:
        return float(self.values[0])

    @property
    def Al(self) -> float:
        return float(self.values[-1])

    def interpolant(self) -> CubicSpline:
        return CubicSpline(self.grid.points, self.values)


@dataclass(frozen=True)
class Potential:
    """Relative concavity Q(x) = (sqrt A)'' / sqrt A on [0, l] (1/cm^2)."""

    grid: RealGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.shape != self.grid.points.shape:
            raise ValueError("potential values and grid length mismatch")
        if not np.all(np.isfinite(vals)):
            raise ValueError("potential must be finite")

    @property
    def length(self) -> float:
        return float(self.grid.points[-1])

    def interpolant(self) -> CubicSpline:
        return CubicSpline(self.grid.points, self.values)


@dataclass(frozen=True)
class BoundaryParameter:
    """cot(alpha) = -A'(0) / (2 A(0)), 1/cm."""

    cot_alpha: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.cot_alpha):
            raise ValueError("cot_alpha must be finite")


@dataclass(frozen=True)
class JostField:
    """f(k, x) and its x-derivative on a k-grid x x-grid, normalized to the
    outgoing exponential at x = l."""

    kgrid: RealGrid
    xgrid: RealGrid
    f: np.ndarray
    df: np.ndarray

    def at_x0(self) -> tuple:
        return self.f[:, 0], self.df[:, 0]

    def wronskian_error(self) -> float:
        """Max deviation of f(-k,x) f'(k,x) - f'(-k,x) f(k,x) from 2ik.

        Requires a symmetric k-grid; mirrored values are obtained by
        conjugation (valid for real potentials and real k)."""
        k = self.kgrid.points[:, None]
        w = np.conj(self.f) * self.df - np.conj(self.df) * self.f
        return float(np.max(np.abs(w - 2j * k)))


@dataclass(frozen=True)
class JostFunctionSamples:
    """F_alpha(k) = -i [f'(k,0) + cot(alpha) f(k,0)] on an even-extended grid."""

    kgrid: RealGrid
    values: np.ndarray
    cot_alpha: float = 0.0

    def magnitude(self) -> RealSamples:
        return RealSamples(self.kgrid, np.abs(self.values), kind="jost_magnitude")


@dataclass(frozen=True)
class ScatteringTriple:
    """Transmission and reflection coefficients of the potential viewed on
    the full line (zero outside [0, l])."""

    kgrid: RealGrid
    T: np.ndarray
    L: np.ndarray
    R: np.ndarray

    def unitarity_error(self) -> float:
        return float(np.max(np.abs(np.abs(self.T) ** 2 + np.abs(self.L) ** 2 - 1.0)))


@dataclass(frozen=True)
class SpectralData:
    """Kind-tagged samples of one measurable data set."""

    kind: str
    kgrid: RealGrid
    values: np.ndarray
    units: str = ""
    r: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in OBSERVABLE_KINDS:
            raise ValueError(f"unknown observable kind {self.kind!r}")
        vals = np.asarray(self.values)
        if self.kind == "output_impedance":
            vals = vals.astype(complex)
        else:
            vals = vals.astype(float)
            if self.kind.endswith("_mag") and np.any(vals < 0):
                raise ValueError("magnitudes must be nonnegative")
        object.__setattr__(self, "values", vals)
        if self.kind == "mic_pressure_mag" and self.r is None:
            raise ValueError("mic_pressure_mag requires the microphone distance r")
        if not self.units:
            object.__setattr__(self, "units", OBSERVABLE_UNITS[self.kind])


@dataclass(frozen=True)
class AcousticField:
    """Pressure amplitude P(k, x) and volume-velocity amplitude V(k, x) for
    the unit glottal drive v(0, t) = e^{ikct}."""

    kgrid: RealGrid
    xgrid: RealGrid
    P: np.ndarray
    V: np.ndarray


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def area_to_potential(area: AreaFunction) -> tuple[Potential, BoundaryParameter]:
    """Q = (sqrt A)'' / sqrt A on the area grid; cot(alpha) = -A'(0)/(2 A(0)).

    Second derivative by centered differences; the endpoint values use the
    supplied endpoint slopes A'(0), A'(l) so no one-sided stencil noise
    enters the boundary quantities.
    """
    x = area.grid.points
    s = np.sqrt(area.values)
    n = len(x)
    d2 = np.empty(n)
    # interior: centered 2nd derivative on a possibly graded grid
    h1 = x[1:-1] - x[:-2]
    h2 = x[2:] - x[1:-1]
    d2[1:-1] = 2 * (h1 * s[2:] - (h1 + h2) * s[1:-1] + h2 * s[:-2]) / (h1 * h2 * (h1 + h2))
    # endpoints: match the quadratic through the end value, the supplied
    # endpoint slope of sqrt(A), and the first interior node
    ds0 = area.dA0 / (2 * s[0])
    dsl = area.dAl / (2 * s[-1])
    d2[0] = 2 * (s[1] - s[0] - (x[1] - x[0]) * ds0) / (x[1] - x[0]) ** 2
    d2[-1] = 2 * (s[-2] - s[-1] + (x[-1] - x[-2]) * dsl) / (x[-1] - x[-2]) ** 2
    q = Potential(area.grid, d2 / s)
    bp = BoundaryParameter(cot_alpha=-area.dA0 / (2 * area.values[0]))
    return q, bp


def default_xgrid(length: float, n: int = 2001) -> RealGrid:
    return RealGrid(np.linspace(0.0, length, n))


def jost_solve(
    q: Potential | object,
    kgrid: RealGrid,
    xgrid: RealGrid | None = None,
    length: float | None = None,
    substeps: int = 2,
) -> JostField:
    """Integrate f'' = (Q - k^2) f backward from x = l with f(k,l) = e^{ikl},
    f'(k,l) = ik e^{ikl}, for every k on the grid at once.

    `q` may be a Potential (interpolated with a cubic spline) or any
    callable Q(x)."""
    if isinstance(q, Potential):
        coeff = q.interpolant()
        if length is None:
            length = q.length
    else:
        coeff = q
        if length is None:
            raise ValueError("length required when q is a bare callable")
    if xgrid is None:
        xgrid = default_xgrid(length)
    ell = xgrid.points[-1]
    k = kgrid.points
    ksafe = np.where(np.abs(k) < 1e-12, 1e-12, k)
    term = (np.exp(1j * ksafe * ell), 1j * ksafe * np.exp(1j * ksafe * ell))
    f, df = ode_integrate_complex(coeff, ksafe, term, xgrid, "backward", substeps=substeps)
    return JostField(kgrid, xgrid, f, df)


def jost_function(fld: JostField, bp: BoundaryParameter) -> JostFunctionSamples:
    """F_alpha(k) = -i [f'(k,0) + cot(alpha) f(k,0)]."""
    f0, df0 = fld.at_x0()
    F = -1j * (df0 + bp.cot_alpha * f0)
    k = fld.kgrid.points
    off_origin = np.abs(k) > 1e-6
    if np.any(np.abs(F[off_origin]) < 1e-12):
        raise ValueError("zero of the Jost function off k = 0: bound-state violation")
    return JostFunctionSamples(fld.kgrid, F, cot_alpha=bp.cot_alpha)


def tlr_from_boundary(kgrid: RealGrid, f0: np.ndarray, df0: np.ndarray) -> ScatteringTriple:
    """T, L, R from the boundary values of the Jost solution (real k).

    T = 2ik / (ik f0 + df0); L = (ik f0 - df0) / (ik f0 + df0);
    R = (-ik f(-k,0) - f'(-k,0)) / (ik f0 + df0), with the mirrored values
    obtained by conjugation on the real axis."""
    k = kgrid.points
    den = 1j * k * f0 + df0
    if np.any(np.abs(den) < 1e-12):
        bad = k[np.abs(den) < 1e-12]
        raise ValueError(f"vanishing scattering denominator at k = {bad[:3]}")
    T = 2j * k / den
    L = (1j * k * f0 - df0) / den
    R = (-1j * k * np.conj(f0) - np.conj(df0)) / den
    return ScatteringTriple(kgrid, T, L, R)


def scattering_coefficients(fld: JostField) -> ScatteringTriple:
    """T, L, R of the truncated potential on the full line."""
    f0, df0 = fld.at_x0()
    return tlr_from_boundary(fld.kgrid, f0, df0)


def reflectance(triple: ScatteringTriple, part: str) -> SpectralData:
    """Reflectance at the driven end: L(-k) = L(k)* sampled for k > 0."""
    k = triple.kgrid.points
    pos = k > 0
    vals = np.conj(triple.L[pos])
    grid = RealGrid(k[pos])
    if part == "re":
        return SpectralData("reflectance_re", grid, vals.real)
    if part == "im":
        return SpectralData("reflectance_im", grid, vals.imag)
    raise ValueError("part must be 're' or 'im'")


def acoustic_field(
    area: AreaFunction,
    fld: JostField,
    F: JostFunctionSamples,
    consts: PhysicalConstants,
) -> AcousticField:
    """P(k,x) = -c mu k f(-k,x) / (sqrt(A(x)) sqrt(A(0)) F_alpha(-k)) and the
    matching volume-velocity amplitude, for the unit glottal drive."""
    k = fld.kgrid.points[:, None]
    x = fld.xgrid.points
    Aspl = area.interpolant()
    Ax = Aspl(x)[None, :]
    dAx = Aspl(x, 1)
    dAx[0] = area.dA0
    dAx[-1] = area.dAl
    dAx = dAx[None, :]
    fm = np.conj(fld.f)  # f(-k, x) for real k
    dfm = np.conj(fld.df)
    Fm = np.conj(F.values)[:, None]  # F_alpha(-k)
    if np.any(np.abs(Fm) < 1e-12):
        raise ValueError("F_alpha(-k) vanishes on the working grid")
    c, mu = consts.c, consts.mu
    P = -c * mu * k * fm / (np.sqrt(Ax) * np.sqrt(area.A0) * Fm)
    V = -1j * np.sqrt(Ax) / (np.sqrt(area.A0) * Fm) * (dfm - dAx / (2 * Ax) * fm)
    return AcousticField(fld.kgrid, fld.xgrid, P, V)


def mic_pressure_complex(
    area: AreaFunction,
    F: JostFunctionSamples,
    consts: PhysicalConstants,
    r: float,
) -> ComplexSamples:
    """Complex microphone pressure amplitude P(k, l+r) for the far-field
    monopole radiation model."""
    k = F.kgrid.points
    Fm = np.conj(F.values)
    c, mu = consts.c, consts.mu
    ell = area.length
    vals = (
        -c * k * mu * np.sqrt(area.Al) * np.exp(-1j * k * (r + ell))
        / (4 * np.pi * r * np.sqrt(area.A0) * Fm)
        * (1j * k + area.dAl / (2 * area.Al))
    )
    return ComplexSamples(F.kgrid, vals, kind="mic_pressure")


def observable(
    kind: str,
    area: AreaFunction,
    fld: JostField | None,
    F: JostFunctionSamples | None,
    consts: PhysicalConstants,
    r: float | None = None,
) -> SpectralData:
    """Synthesize one measurable data set on the k-grid of `F` (or of the
    field for the reflectance kinds)."""
    c, mu = consts.c, consts.mu
    A0, Al, dAl = area.A0, area.Al, area.dAl
    if kind in ("reflectance_re", "reflectance_im"):
        if fld is None:
            raise ValueError("reflectance kinds need the Jost field")
        return reflectance(scattering_coefficients(fld), kind.split("_")[1])
    if kind in ("output_impedance", "output_impedance_mag"):
        if F is None:
            raise ValueError("impedance kinds need a k-grid via F")
        k = F.kgrid.points
        Z = 2j * c * k * mu / (2j * k * Al + dAl)
        if kind == "output_impedance":
            return SpectralData(kind, F.kgrid, Z)
        return SpectralData(kind, F.kgrid, np.abs(Z))
    if F is None:
        raise ValueError(f"kind {kind!r} needs Jost-function samples")
    k = F.kgrid.points
    magF = np.abs(F.values)
    if kind == "lip_pressure_mag":
        vals = c * mu * np.abs(k) / (np.sqrt(Al * A0) * magF)
    elif kind == "green_mag":
        vals = c * np.abs(k) * mu / (np.sqrt(A0) * magF)
    elif kind == "input_impedance_mag":
        if fld is None:
            raise ValueError("input_impedance_mag needs the Jost field")
        f0, _ = fld.at_x0()
        vals = c * np.abs(k) * mu * np.abs(f0) / (A0 * magF)
    elif kind == "transfer_mag":
        vals = np.sqrt(Al / A0 * (k**2 + dAl**2 / (4 * Al**2))) / magF
    elif kind == "mic_pressure_mag":
        # |P(k,l+r)|^2 = (c k mu / 4 pi r)^2 A(l)/(A(0)|F|^2) [k^2 + A'(l)^2/(4 A(l)^2)]
        if r is None:
            raise ValueError("mic_pressure_mag requires r")
        vals = (
            c * np.abs(k) * mu / (4 * np.pi * r)
            / magF
            * np.sqrt(Al / A0 * (k**2 + dAl**2 / (4 * Al**2)))
        )
        return SpectralData(kind, F.kgrid, vals, r=r)
    else:
        raise ValueError(f"unknown observable kind {kind!r}")
    return SpectralData(kind, F.kgrid, vals, r=r)


def synthesize_all(
    area: AreaFunction,
    consts: PhysicalConstants,
    kpos: RealGrid,
    r: float = 20.0,
    substeps: int = 2,
):
    """Convenience driver: area -> potential -> Jost field on the symmetric
    extension of `kpos` -> every observable kind.  Returns (dict of
    SpectralData, intermediate objects)."""
    q, bp = area_to_potential(area)
    ksym = RealGrid(symmetric_points(kpos.points))
    fld = jost_solve(q, ksym, substeps=substeps)
    F = jost_function(fld, bp)
    pos = ksym.points > 0
    Fpos = JostFunctionSamples(RealGrid(ksym.points[pos]), F.values[pos], F.cot_alpha)
    fld_pos = JostField(
        RealGrid(ksym.points[pos]), fld.xgrid, fld.f[pos], fld.df[pos]
    )
    out = {}
    for kind in OBSERVABLE_KINDS:
        rr = r if kind == "mic_pressure_mag" else None
        out[kind] = observable(kind, area, fld_pos, Fpos, consts, r=rr)
    inter = {"potential": q, "boundary": bp, "field": fld, "jost_function": F}
    return out, inter
