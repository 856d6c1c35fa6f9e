"""Bit-stable CSV/JSON I/O for all sample types.

CSV format: UTF-8, `#`-prefixed header lines `# kind=<kind>`,
`# units=<units>`, `# r_cm=<r>` when applicable; column header `k,re,im`
(complex) or `k,value` (real); numbers with 17 significant digits so a
write/read cycle is the identity on doubles.  Area/potential profiles use
the same layout with an `x` abscissa.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .forward import OBSERVABLE_UNITS, SpectralData
from .numerics import RealGrid

FMT = "%.17g"

PROFILE_UNITS = {
    "area": "cm^2",
    "potential": "1/cm^2",
    "eta2": "dimensionless",
    "eta": "dimensionless",
}


def _fmt(x: float) -> str:
    return FMT % x


def write_spectral(path, data: SpectralData) -> None:
    lines = [f"# kind={data.kind}"]
    units = data.units or OBSERVABLE_UNITS.get(data.kind, "")
    lines.append(f"# units={units}")
    if data.r is not None:
        lines.append(f"# r_cm={_fmt(data.r)}")
    if np.iscomplexobj(data.values):
        lines.append("k,re,im")
        for k, v in zip(data.kgrid.points, data.values):
            lines.append(f"{_fmt(k)},{_fmt(v.real)},{_fmt(v.imag)}")
    else:
        lines.append("k,value")
        for k, v in zip(data.kgrid.points, data.values):
            lines.append(f"{_fmt(k)},{_fmt(v)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_spectral(path) -> SpectralData:
    kind = None
    units = ""
    r = None
    rows = []
    columns = None
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" not in body:
                raise ValueError(f"malformed header line {line!r}")
            key, _, val = body.partition("=")
            key = key.strip()
            if key == "kind":
                kind = val.strip()
            elif key == "units":
                units = val.strip()
            elif key == "r_cm":
                r = float(val)
            else:
                raise ValueError(f"unknown header key {key!r}")
            continue
        if columns is None:
            columns = [c.strip() for c in line.split(",")]
            if columns not in (["k", "re", "im"], ["k", "value"]):
                raise ValueError(f"unexpected column header {line!r}")
            continue
        parts = line.split(",")
        if len(parts) != len(columns):
            raise ValueError(f"row {line!r} does not match columns {columns}")
        rows.append([float(p) for p in parts])
    if kind is None or columns is None or not rows:
        raise ValueError(f"{path}: missing kind header or data rows")
    arr = np.array(rows)
    grid = RealGrid(arr[:, 0])
    if columns == ["k", "re", "im"]:
        values = arr[:, 1] + 1j * arr[:, 2]
    else:
        values = arr[:, 1]
    return SpectralData(kind, grid, values, units=units, r=r)


def write_profile(path, name: str, x: np.ndarray, values: np.ndarray) -> None:
    units = PROFILE_UNITS.get(name, "")
    lines = [f"# kind={name}", f"# units={units}", "x,value"]
    for xi, v in zip(x, values):
        lines.append(f"{_fmt(xi)},{_fmt(v)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_profile(path):
    name = None
    rows = []
    seen_cols = False
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            key, _, val = body.partition("=")
            if key.strip() == "kind":
                name = val.strip()
            continue
        if not seen_cols:
            if [c.strip() for c in line.split(",")] != ["x", "value"]:
                raise ValueError(f"unexpected column header {line!r}")
            seen_cols = True
            continue
        a, b = line.split(",")
        rows.append((float(a), float(b)))
    if not rows:
        raise ValueError(f"{path}: no data rows")
    arr = np.array(rows)
    return name, arr[:, 0], arr[:, 1]


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def sha256_array(*arrays) -> str:
    h = hashlib.sha256()
    for a in arrays:
        h.update(np.ascontiguousarray(a).tobytes())
    return h.hexdigest()


def write_manifest(path, payload: dict) -> None:
    Path(path).write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def load_config(path) -> dict:
    cfg = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(cfg, dict):
        raise ValueError("config must be a JSON object")
    if cfg.get("schema") != 1:
        raise ValueError("config must declare \"schema\": 1")
    allowed = {
        "schema",
        "constants",
        "kgrid",
        "area",
        "kinds",
        "r_cm",
        "scenario",
        "side_info",
        "data",
        "length",
        "tolerances",
        "out",
    }
    unknown = set(cfg) - allowed
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return cfg
