import json
import subprocess
import sys

import numpy as np
import pytest

from cbwsim.cli import EXIT_NUMERIC, EXIT_OK, EXIT_PARSE, EXIT_USAGE, run_cli


def run(capsys, *argv):
    code = run_cli(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def records(text):
    rows = [line.split(",", 1) for line in text.strip().splitlines()[1:]]
    return dict(rows)


@pytest.fixture
def chain4(tmp_path):
    path = tmp_path / "chain.nl"
    path.write_text("source intensity=1.0\nblock phi=sweep psi=0 coupling=asym repeat=4\n")
    return str(path)


def test_pascal_row(capsys):
    assert run(capsys, "pascal", "--q", "7") == (EXIT_OK, "1,7,21,35,35,21,7,1\n", "")


def test_pascal_triangle_json(capsys):
    code, out, _ = run(capsys, "pascal", "--q", "3", "--triangle", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out) == [{"q": 1, "counts": [1, 1]}, {"q": 2, "counts": [1, 2, 1]}, {"q": 3, "counts": [1, 3, 3, 1]}]


def test_sweep_curve_csv(capsys):
    code, out, _ = run(capsys, "sweep", "--n", "2", "--points", "5")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "phi,value"
    assert len(lines) == 6
    x, y = map(float, lines[1].split(","))
    assert x == 0.0 and y == pytest.approx(1.0, abs=1e-12)


def test_sweep_netlist_fwhm(capsys, chain4):
    code, out, _ = run(capsys, "sweep", "--netlist", chain4, "--points", "2001", "--report", "fwhm")
    assert code == EXIT_OK
    r = records(out)
    assert r["n"] == "4" and r["q"] == "8"
    assert float(r["fwhm"]) == pytest.approx(np.pi / 8, abs=np.pi / 1000)


def test_sweep_fringes_and_visibility(capsys):
    _, out, _ = run(capsys, "sweep", "--n", "3", "--report", "fringes")
    assert records(out)["fringes"] == "6"
    _, out, _ = run(capsys, "sweep", "--n", "3", "--report", "visibility", "--format", "json")
    assert json.loads(out)["visibility"] == pytest.approx(1.0)


def test_sweep_flat_fwhm_is_numeric_error(capsys):
    code, out, err = run(capsys, "sweep", "--n", "2", "--psi", "3.141592653589793", "--report", "fwhm")
    assert code == EXIT_NUMERIC
    assert out == "" and "error" in err


def test_cavity_zeta(capsys):
    code, out, _ = run(capsys, "cavity", "--eta", "0.9", "--passes", "50", "--points", "100000", "--report", "zeta")
    assert code == EXIT_OK
    r = records(out)
    assert float(r["peak_phi"]) == pytest.approx(np.pi, abs=1e-4)
    assert 0.01 <= float(r["fwhm_over_pi"]) <= 0.05
    assert float(r["zeta"]) == pytest.approx(float(r["fwhm_over_pi"]))
    assert float(r["zeta_fsr"]) == pytest.approx(float(r["zeta"]) / 2)


def test_cavity_curve(capsys):
    code, out, _ = run(capsys, "cavity", "--eta", "1", "--passes", "3", "--points", "11")
    assert code == EXIT_OK
    assert len(out.splitlines()) == 12


def test_cavity_bad_eta(capsys):
    assert run(capsys, "cavity", "--eta", "1.5", "--passes", "3")[0] == EXIT_NUMERIC


def test_map_json(capsys):
    code, out, _ = run(capsys, "map", "--n", "2", "--points", "9", "--format", "json")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert len(payload["phis"]) == len(payload["psis"]) == 9
    assert len(payload["values_row_major"]) == 81
    assert payload["values_row_major"][0] == pytest.approx(1.0)


def test_map_ports_sum_to_source(capsys):
    _, c, _ = run(capsys, "map", "--n", "3", "--points", "7", "--port", "C", "--intensity", "2")
    _, d, _ = run(capsys, "map", "--n", "3", "--points", "7", "--port", "D", "--intensity", "2")
    vc = [float(line.split(",")[2]) for line in c.splitlines()[1:]]
    vd = [float(line.split(",")[2]) for line in d.splitlines()[1:]]
    np.testing.assert_allclose(np.add(vc, vd), 2.0, atol=1e-12)


def test_wavelength(capsys):
    code, out, _ = run(capsys, "wavelength", "--lambda0", "1.0", "--q", "50")
    assert code == EXIT_OK
    r = records(out)
    assert float(r["lambda_cbw"]) == 1.0 / 100
    assert float(r["lambda_pbw"]) == 1.0 / 200
    assert float(r["cbw_over_pbw"]) == 2.0


def test_wavelength_bad_length(capsys):
    assert run(capsys, "wavelength", "--lambda0", "-1", "--q", "2")[0] == EXIT_NUMERIC


def test_validate_passes(capsys, chain4):
    code, out, _ = run(capsys, "validate", "--netlist", chain4)
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "check,status,value"
    assert {line.split(",")[0] for line in lines[1:]} == {"block_unitarity", "energy_conservation", "closed_form"}
    assert all(line.split(",")[1] == "pass" for line in lines[1:])


def test_validate_identity_branch(capsys, tmp_path):
    path = tmp_path / "usckd.nl"
    path.write_text("block phi=sweep psi=pi repeat=3\n")
    code, out, _ = run(capsys, "validate", "--netlist", str(path), "--format", "json")
    assert code == EXIT_OK
    names = [c["check"] for c in json.loads(out)]
    assert "identity_branch" in names and "closed_form" not in names


@pytest.mark.parametrize(
    "argv",
    [[], ["bogus"], ["pascal"], ["pascal", "--q", "0"], ["sweep", "--points", "10"], ["cavity", "--eta", "x", "--passes", "2"]],
)
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as info:
        run_cli(argv)
    assert info.value.code == EXIT_USAGE


def test_missing_netlist_file(capsys, tmp_path):
    assert run(capsys, "sweep", "--netlist", str(tmp_path / "nope.nl"))[0] == EXIT_USAGE


def test_parse_error_exit(capsys, tmp_path):
    path = tmp_path / "bad.nl"
    path.write_text("block phi=sweep psi=0 coupling=asym repeat=0\n")
    code, out, err = run(capsys, "sweep", "--netlist", str(path))
    assert code == EXIT_PARSE
    assert "line 1" in err and "repeat must be >= 1" in err


def test_out_file(capsys, tmp_path):
    target = tmp_path / "row.csv"
    code, out, _ = run(capsys, "pascal", "--q", "4", "--out", str(target))
    assert code == EXIT_OK and out == ""
    assert target.read_bytes() == b"1,4,6,4,1\n"


def test_module_entry_point_is_deterministic(chain4):
    cmd = [sys.executable, "-m", "cbwsim", "sweep", "--netlist", chain4, "--points", "301"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second
    assert first.startswith(b"phi,value\n0,")
    assert len(first.splitlines()) == 302
