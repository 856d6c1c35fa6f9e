import json

import numpy as np
import pytest

from ductscatter import _io, cli
from ductscatter import reference_example as ref
from ductscatter.forward import SpectralData
from ductscatter.numerics import RealGrid


def test_spectral_round_trip_real(tmp_path):
    kg = RealGrid(np.array([0.1, 1.0, 2.5]))
    d = SpectralData("green_mag", kg, np.array([1.25, 0.5, 1e-17]))
    p = tmp_path / "d.csv"
    _io.write_spectral(p, d)
    back = _io.read_spectral(p)
    assert back.kind == d.kind
    assert np.array_equal(back.kgrid.points, kg.points)
    assert np.array_equal(back.values, d.values)
    # writing the read-back data is byte-identical
    p2 = tmp_path / "d2.csv"
    _io.write_spectral(p2, back)
    assert p.read_bytes() == p2.read_bytes()


def test_spectral_round_trip_complex(tmp_path):
    kg = RealGrid(np.array([1.0, 2.0]))
    d = SpectralData("output_impedance", kg, np.array([1 + 2j, -0.5 + 1e-16j]))
    p = tmp_path / "z.csv"
    _io.write_spectral(p, d)
    back = _io.read_spectral(p)
    assert np.array_equal(back.values, d.values)


def test_mic_distance_header_survives(tmp_path):
    kg = RealGrid(np.array([1.0, 2.0]))
    d = SpectralData("mic_pressure_mag", kg, np.array([0.1, 0.2]), r=20.0)
    p = tmp_path / "m.csv"
    _io.write_spectral(p, d)
    assert _io.read_spectral(p).r == 20.0


def test_read_spectral_rejects_unknown_header(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("# kind=green_mag\n# mystery=1\nk,value\n1,2\n")
    with pytest.raises(ValueError, match="unknown header key"):
        _io.read_spectral(p)


def test_profile_round_trip(tmp_path):
    p = tmp_path / "a.csv"
    x = np.linspace(0, 3, 7)
    v = 5.0 + x**2
    _io.write_profile(p, "area", x, v)
    name, xb, vb = _io.read_profile(p)
    assert name == "area"
    assert np.array_equal(xb, x) and np.array_equal(vb, v)


def test_config_validation(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"schema": 1, "nonsense": True}))
    with pytest.raises(ValueError, match="unknown config keys"):
        _io.load_config(p)
    p.write_text(json.dumps({"scenario": "green"}))
    with pytest.raises(ValueError, match="schema"):
        _io.load_config(p)


def test_cli_example_and_forward(tmp_path):
    out = tmp_path / "ex"
    assert cli.main(["example", "--out", str(out), "--kind", "output_impedance"]) == 0
    assert (out / "output_impedance.csv").exists()
    manifest = json.loads((out / "manifest.json").read_text())
    assert "output_impedance.csv" in manifest["files"]

    cfg = tmp_path / "fwd.json"
    cfg.write_text(json.dumps({
        "schema": 1,
        "area": {"type": "const", "A0": 5.0, "length": 10.0},
        "kgrid": {"kmin": 0.1, "kmax": 10.0, "n": 50},
        "kinds": ["green_mag", "output_impedance"],
    }))
    out2 = tmp_path / "fwd"
    assert cli.main(["forward", "--config", str(cfg), "--out", str(out2)]) == 0
    d = _io.read_spectral(out2 / "green_mag.csv")
    # uniform tube: |F| = sqrt(k^2 + 0) -> |G| = c mu / sqrt(A0)
    expected = ref.CONSTANTS.c * ref.CONSTANTS.mu / np.sqrt(5.0)
    assert np.max(np.abs(d.values - expected) / expected) < 1e-6


def test_cli_invert_exit_codes(tmp_path):
    # nonunique: transfer magnitude with no side info -> exit 3
    data = tmp_path / "transfer.csv"
    k = np.concatenate([np.arange(0.002, 1.0, 0.002), np.arange(1.0, 40.0, 0.02)])
    _io.write_spectral(data, ref.golden_dataset("transfer_mag", RealGrid(k)))
    cfg = tmp_path / "inv.json"
    cfg.write_text(json.dumps({"schema": 1, "scenario": "transfer", "data": str(data)}))
    out = tmp_path / "inv"
    assert cli.main(["invert", "--config", str(cfg), "--out", str(out)]) == 3
    fam = json.loads((out / "family.json").read_text())
    assert fam["parameters"] == ["A_l", "absdA_l"]
    report = json.loads((out / "report.json").read_text())
    assert report["unique"] is False

    # hard error: missing data entry -> exit 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"schema": 1, "scenario": "transfer"}))
    assert cli.main(["invert", "--config", str(bad)]) == 1


def test_cli_invert_unique_exit_code(tmp_path):
    data = tmp_path / "green.csv"
    k = np.concatenate([np.arange(0.002, 1.0, 0.002), np.arange(1.0, 40.0, 0.02)])
    _io.write_spectral(data, ref.golden_dataset("green_mag", RealGrid(k)))
    cfg = tmp_path / "inv.json"
    cfg.write_text(json.dumps({"schema": 1, "scenario": "green", "data": str(data)}))
    out = tmp_path / "inv"
    assert cli.main(["invert", "--config", str(cfg), "--out", str(out)]) == 0
    name, x, A = _io.read_profile(out / "area.csv")
    assert abs(A[0] - ref.A0) / ref.A0 < 1e-2
