import json

import pytest

from vqechem.cli import main

from conftest import H2_TEXT

try:
    import jsonschema
    HAVE_JSONSCHEMA = True
except ImportError:
    HAVE_JSONSCHEMA = False


@pytest.fixture()
def h2_file(tmp_path):
    p = tmp_path / "h2.mol"
    p.write_text(H2_TEXT)
    return str(p)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_hf_subcommand(h2_file, capsys):
    code, out, err = run(["hf", "--molecule", h2_file], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["e_hf"] == pytest.approx(-1.117, abs=1e-3)
    assert "E_HF" in err


def test_energy_with_template(capsys):
    code, out, err = run(["energy", "--template", "diatomic:H,H",
                          "--params", "0.735"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["e_uccsd"] == pytest.approx(-1.137306, abs=1e-6)
    assert payload["n_qubits"] == 4
    assert "-1.137306" in err


def test_energy_registered_name(capsys):
    code, out, _ = run(["energy", "--template", "H2",
                        "--params", "0.735"], capsys)
    assert code == 0
    assert json.loads(out)["converged"] is True


def test_output_file_and_determinism(h2_file, tmp_path, capsys):
    f1, f2 = tmp_path / "a.json", tmp_path / "b.json"
    for f in (f1, f2):
        code, _, _ = run(["energy", "--molecule", h2_file,
                          "--output", str(f)], capsys)
        assert code == 0
    assert f1.read_bytes() == f2.read_bytes()  # bit-identical reruns


def test_scan_csv(capsys):
    code, out, _ = run(["scan", "--template", "diatomic:H,H",
                        "--range1", "0.6:0.9:4"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "param1,param2,e_hf,e_uccsd"
    assert len(lines) == 5
    # energies parse back as floats with full precision
    e = float(lines[1].split(",")[3])
    assert -1.2 < e < -1.0


def test_scan_json_schema(capsys):
    code, out, _ = run(["scan", "--template", "diatomic:H,H",
                        "--range1", "0.7:0.8:2", "--format", "json"], capsys)
    assert code == 0
    payload = json.loads(out)
    if HAVE_JSONSCHEMA:
        schema = {
            "type": "object",
            "required": ["command", "samples", "errors"],
            "properties": {
                "command": {"const": "scan"},
                "samples": {"type": "array", "items": {
                    "type": "object",
                    "required": ["parameters", "e_hf", "e_uccsd"],
                    "properties": {
                        "parameters": {"type": "array",
                                       "items": {"type": "number"}},
                        "e_hf": {"type": "number"},
                        "e_uccsd": {"type": "number"},
                    }}},
                "errors": {"type": "object"},
            },
        }
        jsonschema.validate(payload, schema)
    assert len(payload["samples"]) == 2


def test_sweep_subcommand(h2_file, capsys):
    code, out, _ = run(["sweep", "--molecule", h2_file,
                        "--excitation", "0,1->2,3",
                        "--theta-range=-0.5:0.5:21"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "theta,energy"
    assert len(lines) == 22
    energies = [float(l.split(",")[1]) for l in lines[1:]]
    k = energies.index(min(energies))
    assert 0 < k < 20  # interior minimum


def test_optimize_subcommand(capsys):
    code, out, err = run(["optimize", "--template", "H2"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["parameters"][0] == pytest.approx(0.735, abs=0.01)
    assert payload["e_uccsd"] == pytest.approx(-1.137306, abs=1e-4)
    assert "optimum" in err


def test_fcidump_roundtrip_via_cli(h2_file, tmp_path, capsys):
    dump = tmp_path / "H2.fcidump"
    code, _, err = run(["fcidump", "--molecule", h2_file,
                        "--output", str(dump)], capsys)
    assert code == 0
    assert dump.exists()
    code, out, _ = run(["fcidump", "--import-file", str(dump)], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["e_uccsd"] == pytest.approx(-1.137306, abs=1e-6)


def test_table1_subset(capsys):
    code, out, err = run(["table1", "--only", "H2,HeH+",
                          "--format", "json"], capsys)
    assert code == 0
    rows = {r["molecule"]: r for r in json.loads(out)["rows"]}
    assert rows["H2"]["energy"] == pytest.approx(-1.137306, abs=1e-4)
    assert rows["HeH+"]["energy"] == pytest.approx(-2.862695, abs=1e-4)


# ---------------------------------------------------------------------------
# error handling and exit codes

def test_missing_input_is_usage_error(capsys):
    code, _, err = run(["energy"], capsys)
    assert code == 1
    assert "error" in err


def test_both_inputs_is_usage_error(h2_file, capsys):
    code, _, _ = run(["energy", "--molecule", h2_file,
                      "--template", "H2", "--params", "0.7"], capsys)
    assert code == 1


def test_bad_molecule_file_is_usage_error(tmp_path, capsys):
    p = tmp_path / "bad.mol"
    p.write_text("charge 0\nH 0 0\n")
    code, _, err = run(["energy", "--molecule", str(p)], capsys)
    assert code == 1
    assert "line" in err


def test_unreadable_file_is_io_error(capsys):
    code, _, _ = run(["hf", "--molecule", "/nonexistent/path.mol"], capsys)
    assert code == 3


def test_zero_length_range_is_usage_error(capsys):
    code, _, _ = run(["scan", "--template", "diatomic:H,H",
                      "--range1", "0.7:0.9:0"], capsys)
    assert code == 1


def test_unknown_excitation_is_usage_error(h2_file, capsys):
    code, _, err = run(["sweep", "--molecule", h2_file,
                        "--excitation", "0->9"], capsys)
    assert code == 1


def test_degenerate_basis_is_numeric_error(tmp_path, capsys):
    p = tmp_path / "tight.mol"
    p.write_text("charge 0\nH 0 0 0\nH 0 0 1e-5\n")
    code, _, err = run(["hf", "--molecule", str(p)], capsys)
    assert code == 2


def test_unknown_template_is_usage_error(capsys):
    code, _, _ = run(["energy", "--template", "XYZ99",
                      "--params", "1.0"], capsys)
    assert code == 1
