"""Magnitude-only data to spectral quantities.

Each measurable data set is converted into the quantities the kernel
solvers need: the boundary spectral function Lambda, the Jost function
F_alpha from its modulus (outer-function construction), the boundary
values f(k,0), f'(k,0), the boundary parameter cot(alpha), scattering
coefficients, and completion of the reflectance from its real or
imaginary part.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .forward import PhysicalConstants, ScatteringTriple, SpectralData, tlr_from_boundary
from .numerics import (
    ComplexSamples,
    RealGrid,
    RealSamples,
    graded_kgrid,
    outer_from_magnitude,
    schwarz_extend,
    symmetric_points,
    tail_limit,
)


@dataclass(frozen=True)
class LambdaSamples:
    """Lambda(k) = -1 + k f(k,0)/F_alpha(k) on an even-extended grid, plus
    the estimated limit of k Lambda(k)."""

    kgrid: RealGrid
    values: np.ndarray
    limit_kLambda: complex


@dataclass(frozen=True)
class BoundaryValues:
    """Boundary data of the Jost solution recovered from magnitudes."""

    kgrid: RealGrid
    f0: np.ndarray
    df0: np.ndarray
    cot_alpha: float


@dataclass(frozen=True)
class FamilyDescriptor:
    """Names the nonuniqueness parameters left open by the data."""

    arity: str  # "one_param" | "two_param"
    names: tuple
    default_grids: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ScaleInfo:
    """Scale constants recovered from the high-k limits, or the family left
    open when the data cannot fix them."""

    A0: float | None = None
    sqrt_A0Al: float | None = None
    Al: float | None = None
    absdAl: float | None = None
    ratio: float | None = None
    family: FamilyDescriptor | None = None
    limit_used: str = ""


def resample_even(
    samples: RealSamples, target_pos: RealGrid | None = None, parity: str = "even"
) -> RealSamples:
    """Resample positive-k samples onto the symmetric extension of a target
    positive grid, using the declared parity to continue through k = 0."""
    if target_pos is None:
        target_pos = graded_kgrid()
    k = samples.grid.points
    v = samples.values
    if k[0] < 0:
        pos = k > 0
        k, v = k[pos], v[pos]
    sign = 1.0 if parity == "even" else -1.0
    if k[0] == 0.0:
        ksrc = np.concatenate([-k[::-1][:-1], k])
        vsrc = np.concatenate([sign * v[::-1][:-1], v])
    else:
        ksrc = np.concatenate([-k[::-1], k])
        vsrc = np.concatenate([sign * v[::-1], v])
    spl = CubicSpline(ksrc, vsrc)
    tgt = symmetric_points(target_pos.points)
    if tgt[-1] > ksrc[-1] + 1e-9:
        raise ValueError("target grid extends beyond the data range")
    return RealSamples(RealGrid(tgt), spl(tgt), samples.kind)


def _patch_origin(k: np.ndarray, vals: np.ndarray) -> np.ndarray:
    """Replace the k = 0 node by conjugate-symmetric interpolation."""
    out = vals.copy()
    zero = np.abs(k) < 1e-12
    if not np.any(zero):
        return out
    i0 = int(np.nonzero(zero)[0][0])
    neigh = [i for i in (i0 - 2, i0 - 1, i0 + 1, i0 + 2) if 0 <= i < len(k)]
    # real part is even, imaginary part odd: the origin value is real
    coef = np.polyfit(k[neigh] ** 2, vals[neigh].real, 1)
    out[i0] = np.polyval(coef, 0.0)
    return out


def analytic_completion(mag: RealSamples) -> tuple:
    """From |F_alpha| on a symmetric grid to (F_alpha samples, boundary
    values, scattering coefficients).

    Lambda from the Schwarz extension of -1 + k^2/|F_alpha|^2;
    cot(alpha) = lim k Im Lambda (tail fit); F_alpha as the outer function
    of its modulus; f(k,0) = (F/k)(1 + Lambda); f'(k,0) from the
    dispersion identity with lim k Lambda = i cot(alpha); T, L, R from the
    boundary values."""
    k = mag.grid.points
    m = mag.values
    nz = np.abs(k) > 1e-12
    if np.any(m[nz] <= 0):
        raise ValueError("bound-state signature: |F_alpha| vanishes off k = 0")
    g = np.empty_like(m)
    g[nz] = -1.0 + k[nz] ** 2 / m[nz] ** 2
    g[~nz] = -1.0
    lam = schwarz_extend(RealSamples(mag.grid, g))
    pos = k > 0
    kim = RealSamples(RealGrid(k[pos]), k[pos] * lam.values[pos].imag)
    fit = tail_limit(kim, powers=(2, 4))
    cot = fit.limit
    F = outer_from_magnitude(mag, normalization="linear_factor_k")
    with np.errstate(divide="ignore", invalid="ignore"):
        f0 = np.where(nz, F.values / np.where(nz, k, 1.0) * (1.0 + lam.values), 0.0)
    f0 = _patch_origin(k, f0)
    # f'(k,0) = i F [1 + ((1+Lambda)/k) lim kLambda] with lim kLambda = i cot;
    # since (1+Lambda)/k = f0/F this collapses to the equivalent,
    # origin-regular form f'(k,0) = i F - cot(alpha) f0.
    df0 = 1j * F.values - cot * f0
    from .forward import JostFunctionSamples

    Fs = JostFunctionSamples(mag.grid, F.values, cot_alpha=cot)
    bv = BoundaryValues(mag.grid, f0, df0, cot)
    mask = nz
    triple = tlr_from_boundary(RealGrid(k[mask]), f0[mask], df0[mask])
    lam_s = LambdaSamples(mag.grid, lam.values, limit_kLambda=1j * cot)
    return Fs, bv, triple, lam_s


def data_to_jost_magnitude(
    data: SpectralData,
    side_info: dict | None = None,
    consts: PhysicalConstants = PhysicalConstants(),
    r: float | None = None,
) -> tuple[RealSamples | None, ScaleInfo]:
    """Convert a magnitude data set into |F_alpha| on the even-extended data
    grid, recovering the scale constants the respective uniqueness theorem
    grants.

    Side info (for the microphone/transfer kinds): either
    {'ratio': |A'(l)|/A(l)} or {'A_l': ..., 'absdA_l': ...}; with neither,
    the result is a structured nonunique family, never a silent guess.
    """
    side_info = dict(side_info or {})
    c, mu = consts.c, consts.mu
    k = data.kgrid.points
    v = data.values
    kind = data.kind
    if kind not in ("mic_pressure_mag", "lip_pressure_mag", "transfer_mag", "green_mag"):
        raise ValueError(f"kind {kind!r} is not a Jost-magnitude route")
    if np.any(v <= 0):
        raise ValueError("magnitude data must be positive")

    if kind == "lip_pressure_mag":
        inv = RealSamples(data.kgrid, 1.0 / v)
        fit = tail_limit(inv, powers=(2, 4))
        sqrt_A0Al = c * mu * fit.limit
        magF = np.abs(k) / v / fit.limit
        info = ScaleInfo(sqrt_A0Al=sqrt_A0Al, limit_used="lip_pressure_inverse")
        return even_mag(data.kgrid, magF), info

    if kind == "green_mag":
        fit = tail_limit(RealSamples(data.kgrid, v), powers=(2, 4))
        A0 = (c * mu / fit.limit) ** 2
        magF = np.abs(k) * fit.limit / v
        info = ScaleInfo(A0=A0, limit_used="green_tail")
        return even_mag(data.kgrid, magF), info

    Al = side_info.get("A_l")
    absdAl = side_info.get("absdA_l")
    ratio = side_info.get("ratio")
    if ratio is None and Al is not None and absdAl is not None:
        ratio = absdAl / Al
    if ratio is None:
        if Al is not None:
            fam = FamilyDescriptor(
                "one_param", ("ratio",), {"ratio": np.linspace(0.0, 2.0, 11)}
            )
        else:
            fam = FamilyDescriptor(
                "two_param",
                ("A_l", "absdA_l"),
                {
                    "A_l": np.geomspace(0.5, 20.0, 15),
                    "absdA_l": np.linspace(0.0, 2.0, 11),
                },
            )
        return None, ScaleInfo(Al=Al, family=fam)

    if kind == "transfer_mag":
        fit = tail_limit(RealSamples(data.kgrid, v**2), powers=(2, 4))
        magF = np.sqrt(fit.limit * (k**2 + ratio**2 / 4)) / v
        A0 = None if Al is None else Al / fit.limit
        info = ScaleInfo(A0=A0, Al=Al, absdAl=absdAl, ratio=ratio, limit_used="transfer_tail")
        return even_mag(data.kgrid, magF), info

    # mic_pressure_mag
    rr = data.r if data.r is not None else r
    if rr is None:
        raise ValueError("microphone distance r is required")
    fit = tail_limit(RealSamples(data.kgrid, (k / v) ** 2), powers=(2, 4))
    # |P|^2 = (c k mu / 4 pi r)^2 (A_l / (A0 |F|^2)) (k^2 + ratio^2/4) and
    # A0 = (c mu / 4 pi r)^2 A_l lim(k/|P|)^2, so the geometric prefactors
    # cancel out of the magnitude
    magF = np.abs(k) * np.sqrt((k**2 + ratio**2 / 4) / fit.limit) / v
    A0 = None
    if Al is not None:
        A0 = (c * mu * np.sqrt(Al) / (4 * np.pi * rr)) ** 2 * fit.limit
    info = ScaleInfo(A0=A0, Al=Al, absdAl=absdAl, ratio=ratio, limit_used="mic_tail")
    return even_mag(data.kgrid, magF), info


def even_mag(kgrid: RealGrid, magF: np.ndarray) -> RealSamples:
    """Even extension of positive-k magnitude samples."""
    k = kgrid.points
    pts = np.concatenate([-k[::-1], k]) if k[0] > 0 else symmetric_points(k)
    if k[0] > 0:
        vals = np.concatenate([magF[::-1], magF])
    else:
        vals = np.concatenate([magF[::-1][:-1], magF]) if k[0] == 0 else magF
    return RealSamples(RealGrid(pts), vals, kind="jost_magnitude")


def ratio_from_input_impedance(
    data: SpectralData,
    consts: PhysicalConstants = PhysicalConstants(),
    c0: float = 1.0,
) -> tuple[LambdaSamples, RealSamples, float]:
    """Input-impedance-magnitude route.

    A(0) = c mu / lim |Z|; w(k) = k f(k,0)/F_alpha(k) is reconstructed as
    the outer function of |Z|/lim|Z| (it is zero-free in the upper half
    plane up to a simple zero at the origin, which is split off as
    k/(k + i c0)); Lambda = w - 1; |F_alpha|^2 = k^2 / Re w.
    """
    if data.kind != "input_impedance_mag":
        raise ValueError("expected input_impedance_mag data")
    k = data.kgrid.points
    v = data.values
    if np.any(v <= 0):
        raise ValueError("impedance magnitude must be positive")
    c, mu = consts.c, consts.mu
    fit = tail_limit(RealSamples(data.kgrid, v), powers=(2, 4))
    if fit.limit <= 0:
        raise ValueError("nonpositive impedance tail limit")
    A0 = c * mu / fit.limit
    wmag = v / fit.limit
    # log of the zero-free part; finite at the origin since |w| ~ |k|
    u = np.log(wmag * np.sqrt(k**2 + c0**2) / np.abs(k))
    u_sym = resample_even(RealSamples(data.kgrid, u), parity="even")
    ks = u_sym.grid.points
    w_outer = schwarz_extend(u_sym)
    with np.errstate(divide="ignore", invalid="ignore"):
        w = ks / (ks + 1j * c0) * np.exp(w_outer.values)
    lam_vals = w - 1.0
    rew = w.real
    nz = np.abs(ks) > 1e-12
    if np.any(rew[nz] <= 0):
        raise ValueError("Re[k f/F] nonpositive: inconsistent impedance data")
    magF2 = np.empty_like(rew)
    magF2[nz] = ks[nz] ** 2 / rew[nz]
    magF2 = _patch_origin(ks, magF2.astype(complex)).real
    magF = RealSamples(u_sym.grid, np.sqrt(np.abs(magF2)), kind="jost_magnitude")
    pos = ks > 0
    kim = RealSamples(RealGrid(ks[pos]), ks[pos] * lam_vals[pos].imag)
    cot_fit = tail_limit(kim, powers=(2, 4))
    lam = LambdaSamples(u_sym.grid, lam_vals, limit_kLambda=1j * cot_fit.limit)
    return lam, magF, A0


def reflectance_completion(
    part: SpectralData, c0: float = 1.0, unitarity_tol: float = 1e-4
) -> ScatteringTriple:
    """Complete the reflectance from its real or imaginary part.

    L from the Schwarz formula (conjugate form for the imaginary part);
    T as the outer function with |T|^2 = 1 - |L|^2, carrying the generic
    simple zero of the transmission coefficient at the origin;
    R = -L(-k) T(k)/T(-k)."""
    if part.kind not in ("reflectance_re", "reflectance_im"):
        raise ValueError("expected reflectance_re or reflectance_im data")
    target = graded_kgrid()
    if part.kind == "reflectance_re":
        # data samples Re L(-k) = Re L(k): even continuation
        re_sym = resample_even(RealSamples(part.kgrid, part.values), target, parity="even")
        L = schwarz_extend(re_sym, symmetry="even").values
    else:
        # data samples Im L(-k) = -Im L(k): Im L itself is odd
        im_sym = resample_even(RealSamples(part.kgrid, -part.values), target, parity="odd")
        M = schwarz_extend(im_sym, symmetry="odd").values
        L = 1j * M
    ks = symmetric_points(target.points)
    kgrid_sym = RealGrid(ks)
    absL = np.abs(L)
    nz = np.abs(ks) > 1e-12
    if np.any(absL[nz] >= 1.0 + unitarity_tol):
        raise ValueError("|L| >= 1 off k = 0: unitarity violation")
    absL = np.minimum(absL, 1.0 - 1e-14)
    # outer construction of T with the origin zero split off
    with np.errstate(divide="ignore", invalid="ignore"):
        uE = 0.5 * np.log(1.0 - absL**2) + 0.5 * np.log(ks**2 + c0**2) - np.log(np.abs(ks))
    # |L| -> 1 like 1 - O(k^2) at the origin (generic case), so near k = 0
    # the completed |L| sits within quadrature error of 1 and the log is
    # unreliable; uE itself is smooth and even there, so extrapolate it
    # from the first trustworthy band
    kc = 0.05
    band = (np.abs(ks) > kc) & (np.abs(ks) < 4 * kc)
    core = np.abs(ks) <= kc
    coef = np.polyfit(ks[band] ** 2, uE[band], 1)
    uE[core] = np.polyval(coef, ks[core] ** 2)
    E = schwarz_extend(RealSamples(kgrid_sym, uE))
    T = ks / (ks + 1j * c0) * np.exp(E.values)
    # R = -L(-k) T(k)/T(-k); on the real axis L(-k) = L(k)*, T(-k) = T(k)*
    with np.errstate(divide="ignore", invalid="ignore"):
        R = np.where(nz, -np.conj(L) * T / np.conj(np.where(nz, T, 1.0)), 0.0)
    if np.any(~nz):
        # T has a simple zero at the origin; take the phase ratio by
        # continuity from the neighbouring nodes
        i0 = int(np.nonzero(~nz)[0][0])
        R[i0] = 0.5 * (R[i0 - 1] + R[i0 + 1])
    return ScatteringTriple(kgrid_sym, T, L, R)
