"""Command-line front end.

Subcommands: `forward` (synthesize observables from an area spec),
`invert` (run a measurement scenario on a data CSV), `example` (write the
bundled closed-form model's golden datasets), `verify` (run the
acceptance suite).  Exit codes: 0 success (unique result), 3 success with
a nonunique family, 1 hard error.
"""

from __future__ import annotations

import argparse
import sys
import traceback
from pathlib import Path

import numpy as np

from . import _io, reference_example as ref
from .area_reconstruction import DEFAULT_LENGTH, reconstruct
from .forward import (
    OBSERVABLE_KINDS,
    AreaFunction,
    PhysicalConstants,
    synthesize_all,
)
from .numerics import RealGrid, graded_kgrid

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NONUNIQUE = 3


def build_area(spec: dict, n: int = 2001) -> AreaFunction:
    """Materialize an area profile from its config spec."""
    kind = spec.get("type")
    if kind == "builtin":
        return ref.area_function(n)
    length = float(spec.get("length", DEFAULT_LENGTH))
    xs = np.linspace(0.0, length, n)
    if kind == "const":
        A0 = float(spec["A0"])
        return AreaFunction(RealGrid(xs), np.full(n, A0), dA0=0.0, dAl=0.0)
    if kind == "exp":
        A0 = float(spec["A0"])
        g = float(spec["gamma"])
        vals = A0 * np.exp(2 * g * xs)
        return AreaFunction(RealGrid(xs), vals, dA0=2 * g * A0, dAl=2 * g * vals[-1])
    if kind == "quadratic":
        A0 = float(spec["A0"])
        p = float(spec.get("p", 0.0))
        q = float(spec.get("q", 0.0))
        vals = A0 * (1.0 + p * xs + q * xs**2)
        return AreaFunction(
            RealGrid(xs), vals, dA0=A0 * p, dAl=A0 * (p + 2 * q * length)
        )
    if kind == "table":
        name, x, v = _io.read_profile(spec["path"])
        dx = np.gradient(v, x)
        return AreaFunction(RealGrid(x), v, dA0=float(dx[0]), dAl=float(dx[-1]))
    raise ValueError(f"unknown area type {kind!r}")


def build_kgrid(spec: dict | None) -> RealGrid:
    if spec is None:
        k = graded_kgrid().points
        return RealGrid(k[k > 0])
    kmin = float(spec.get("kmin", 0.002))
    kmax = float(spec.get("kmax", 40.0))
    n = int(spec.get("n", 4001))
    if not (0 < kmin < kmax) or n < 2:
        raise ValueError("invalid k-grid spec")
    return RealGrid(np.linspace(kmin, kmax, n))


def build_constants(spec: dict | None) -> PhysicalConstants:
    spec = spec or {}
    return PhysicalConstants(
        c=float(spec.get("c", 3.43e4)), mu=float(spec.get("mu", 1.2e-3))
    )


def _select_kinds(args, cfg) -> list:
    if args.kind:
        return [args.kind]
    kinds = cfg.get("kinds")
    if kinds:
        for k in kinds:
            if k not in OBSERVABLE_KINDS:
                raise ValueError(f"unknown observable kind {k!r}")
        return list(kinds)
    return list(OBSERVABLE_KINDS)


def run_forward(args) -> int:
    cfg = _io.load_config(args.config) if args.config else {"schema": 1}
    out = Path(args.out or cfg.get("out") or ".")
    out.mkdir(parents=True, exist_ok=True)
    consts = build_constants(cfg.get("constants"))
    kgrid = build_kgrid(cfg.get("kgrid"))
    r = float(cfg.get("r_cm", 20.0))
    kinds = _select_kinds(args, cfg)
    area_spec = cfg.get("area", {"type": "builtin"})
    files = {}
    if area_spec.get("type") == "builtin":
        # the bundled model: observables from the exact potential so the
        # numeric chain can be compared against the closed forms
        for kind in kinds:
            data = ref.numeric_dataset(kind, kgrid, r=r)
            path = out / f"{kind}.csv"
            _io.write_spectral(path, data)
            files[path.name] = _io.sha256_file(path)
        area = ref.area_function()
    else:
        area = build_area(area_spec)
        datasets, _ = synthesize_all(area, consts, kgrid, r=r)
        for kind in kinds:
            path = out / f"{kind}.csv"
            _io.write_spectral(path, datasets[kind])
            files[path.name] = _io.sha256_file(path)
    manifest = {
        "schema": 1,
        "mode": "forward",
        "constants": {"c": consts.c, "mu": consts.mu},
        "kgrid": {
            "kmin": float(kgrid.points[0]),
            "kmax": float(kgrid.points[-1]),
            "n": len(kgrid),
        },
        "r_cm": r,
        "area_sha256": _io.sha256_array(area.grid.points, area.values),
        "files": files,
    }
    _io.write_manifest(out / "manifest.json", manifest)
    return EXIT_OK


def run_invert(args) -> int:
    cfg = _io.load_config(args.config) if args.config else {"schema": 1}
    scenario = args.scenario or cfg.get("scenario")
    if not scenario:
        raise ValueError("invert needs --scenario or a scenario config entry")
    data_path = cfg.get("data")
    if not data_path:
        raise ValueError("invert needs a 'data' CSV path in the config")
    out = Path(args.out or cfg.get("out") or ".")
    out.mkdir(parents=True, exist_ok=True)
    consts = build_constants(cfg.get("constants"))
    data = _io.read_spectral(data_path)
    side = dict(cfg.get("side_info") or {})
    tol = float((cfg.get("tolerances") or {}).get("certificate", 0.02))
    res = reconstruct(
        scenario,
        data,
        side,
        consts,
        length=float(cfg.get("length", DEFAULT_LENGTH)),
        certificate_tol=tol,
    )
    report = {
        "schema": 1,
        "mode": "invert",
        "scenario": scenario,
        "data": str(data_path),
        "data_sha256": _io.sha256_file(data_path),
        "unique": res.unique,
        "cot_alpha": res.cot_alpha,
        "scale_provenance": res.scale_provenance,
        "certificate_max_relative_deviation": res.certificate_dev,
    }
    if res.potential is not None:
        _io.write_profile(
            out / "potential.csv", "potential",
            res.potential.grid.points, res.potential.values,
        )
    if res.eta is not None:
        _io.write_profile(out / "eta2.csv", "eta2", res.eta.grid.points, res.eta.eta**2)
    if res.unique:
        _io.write_profile(out / "area.csv", "area", res.area.grid.points, res.area.values)
        report["A0_cm2"] = res.area.A0
        _io.write_manifest(out / "report.json", report)
        return EXIT_OK
    family = {
        "schema": 1,
        "arity": res.family.arity,
        "parameters": list(res.family.names),
        "default_grids": {
            k: list(map(float, v)) for k, v in res.family.default_grids.items()
        },
    }
    if res.area_family is not None:
        family["area_parameters"] = list(res.area_family.names)
    _io.write_manifest(out / "family.json", family)
    _io.write_manifest(out / "report.json", report)
    return EXIT_NONUNIQUE


def run_example(args) -> int:
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    kgrid = build_kgrid(None)
    kinds = [args.kind] if args.kind else list(OBSERVABLE_KINDS)
    files = {}
    for kind in kinds:
        data = ref.golden_dataset(kind, kgrid, r=20.0)
        path = out / f"{kind}.csv"
        _io.write_spectral(path, data)
        files[path.name] = _io.sha256_file(path)
    xs, A = ref.area_exact()
    _io.write_profile(out / "area.csv", "area", xs, A)
    _io.write_manifest(
        out / "manifest.json",
        {"schema": 1, "mode": "example", "files": files},
    )
    return EXIT_OK


def run_verify(args) -> int:
    from .acceptance import run_all

    results = run_all(scenario=args.scenario)
    width = max(len(r.name) for r in results)
    ok = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        ok = ok and r.passed
        print(f"{r.name:<{width}}  {status}  {r.details}")
    return EXIT_OK if ok else EXIT_ERROR


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ductscatter",
        description="Forward/inverse frequency-domain scattering for a "
        "variable-area acoustic duct",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (
        ("forward", run_forward),
        ("invert", run_invert),
        ("example", run_example),
        ("verify", run_verify),
    ):
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--out", help="output directory")
        p.add_argument("--kind", help="single observable kind")
        p.add_argument("--scenario", help="inversion scenario name")
        p.set_defaults(fn=fn)
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except Exception as exc:  # hard failure -> exit 1 with a message
        print(f"error: {exc}", file=sys.stderr)
        if "--debug" in (argv or sys.argv):
            traceback.print_exc()
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
