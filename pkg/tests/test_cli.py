import json
import subprocess
import sys

import pytest

from semicross.algebra import Poly
from semicross.cli import EXIT_BRACKET, EXIT_INPUT, EXIT_OK, EXIT_VERIFY, SCHEMA, main
from semicross.dynsys import FiniteSystem

ONE = '{"n": 1, "phi": [0]}'
ONE_PLUS_Z = ('{"side": "left", "coeffs": [{"deg": 0, "values": [[1, 0]]},'
              ' {"deg": 1, "values": [[1, 0]]}]}')


def _machine(capsys, argv):
    code = main(argv + ["--format", "machine"])
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema"] == SCHEMA
    return code, doc


def test_norm_table(capsys):
    assert main(["norm", ONE, ONE_PLUS_Z]) == EXIT_OK
    out = capsys.readouterr().out
    assert abs(float(out.split()[1]) - 2.0) <= 1e-6
    assert "converged   yes" in out


def test_norm_machine_document(capsys):
    code, doc = _machine(capsys, ["norm", ONE, ONE_PLUS_Z])
    assert code == EXIT_OK and doc["command"] == "norm"
    res = doc["result"]
    assert abs(res["value"] - 2.0) <= 1e-6 and res["converged"]
    assert res["lower_bound"] <= res["value"] <= res["upper_bound"]
    assert res["route"] == "shift" and res["ell1"] == 2.0


def test_emitted_literals_reparse(capsys):
    system = '{"n": 3, "phi": [1, 2, 0]}'
    poly = ('{"side": "right", "coeffs": [{"deg": 2, "values": [[1, 0.5], [0, 0], [-2, 1]]}]}')
    code, doc = _machine(capsys, ["norm", system, poly, "--kind", "unitary"])
    assert code == EXIT_OK
    sys_ = FiniteSystem.from_literal(doc["result"]["system"])
    assert sys_ == FiniteSystem((1, 2, 0))
    back = Poly.from_literal(doc["result"]["poly"], sys_)
    assert back == Poly.from_literal(json.loads(poly), sys_)


def test_radical_poly_is_zero_in_unitary_envelope(capsys):
    code, doc = _machine(capsys, ["norm", '{"n": 2, "phi": [1, 1]}',
                                  '{"side": "left", "coeffs": [{"deg": 0, "values": [[1, 0], [0, 0]]}]}',
                                  "--kind", "unitary"])
    assert code == EXIT_OK and doc["result"]["value"] == 0.0


def test_matrix_literal(capsys):
    e = '{"side": "left", "coeffs": [{"deg": 0, "values": [[1, 0]]}]}'
    mat = '{"nu": 2, "entries": [' + ",".join([e] * 4) + "]}"
    code, doc = _machine(capsys, ["norm", ONE, mat])
    assert code == EXIT_OK and abs(doc["result"]["value"] - 2.0) <= 1e-6


def test_literal_from_file(tmp_path, capsys):
    (tmp_path / "sys.json").write_text(ONE)
    (tmp_path / "poly.json").write_text(ONE_PLUS_Z)
    assert main(["norm", str(tmp_path / "sys.json"), str(tmp_path / "poly.json")]) == EXIT_OK


@pytest.mark.parametrize("system, poly, field", [
    ('{"n": 2, "phi": [1, 1, 3]}', "{}", "system.phi"),
    ('{"n": 2, "phi": [1, 1]}', '{"side": "left", "coeffs": [{"deg": 0, "values": [[1, 0]]}]}',
     "poly.coeffs[0].values"),
    ('{"n": 2, "phi": [1, 1]', "{}", "system: invalid JSON"),
    ("missing.json", "{}", "system: no such file"),
    (ONE, '{"side": "up", "coeffs": []}', "poly.side"),
])
def test_input_errors_name_the_field(capsys, system, poly, field):
    assert main(["norm", system, poly]) == EXIT_INPUT
    assert field in capsys.readouterr().err


def test_side_flag_must_match_literal(capsys):
    assert main(["norm", ONE, ONE_PLUS_Z, "--side", "right"]) == EXIT_INPUT
    assert "side" in capsys.readouterr().err


def test_bad_config_is_an_input_error(capsys):
    assert main(["norm", ONE, ONE_PLUS_Z, "--tol", "-1"]) == EXIT_INPUT
    assert "config.tol" in capsys.readouterr().err


def test_unconverged_bracket_exit_code(capsys):
    poly = ('{"side": "left", "coeffs": [{"deg": 0, "values": [[1, 0]]},'
            ' {"deg": 3, "values": [[0.7, 0.2]]}]}')
    code = main(["norm", ONE, poly, "--tol", "1e-14", "--max-depth", "64"])
    assert code == EXIT_BRACKET
    assert "converged   no" in capsys.readouterr().out


def test_analyze_two_to_one(capsys):
    code, doc = _machine(capsys, ["analyze", '{"n": 2, "phi": [1, 1]}'])
    assert code == EXIT_OK
    rep = doc["result"]
    assert rep["radical_support"] == [0] and not rep["minimality"]["minimal"]
    shapes = [e["shape"] for e in rep["envelopes"]]
    assert len(shapes) == 8 and shapes.count("full_corner") == 4
    assert rep["simplicity"]["verdict"] == "non_simple" and rep["simplicity"]["validated"]


def test_analyze_three_cycle_and_point(capsys):
    _, doc = _machine(capsys, ["analyze", '{"n": 3, "phi": [1, 2, 0]}'])
    rep = doc["result"]
    assert rep["minimality"]["minimal"] and rep["simplicity"]["validated"]
    assert {e["shape"] for e in rep["envelopes"]} == {"crossed_product"}
    _, doc = _machine(capsys, ["analyze", ONE])
    assert {e["label"] for e in doc["result"]["envelopes"]} == {"C(T)"}


def test_verify_list_and_unknown(capsys):
    assert main(["verify", "--list"]) == EXIT_OK
    names = capsys.readouterr().out.split()
    assert names == sorted(names) and "ac10_gap_witness" in names
    assert main(["verify", "--only", "nope"]) == EXIT_INPUT


def test_verify_machine_output(capsys):
    code, doc = _machine(capsys, ["verify", "--only", "dynsys.eventual_image",
                                  "--only", "ac10_gap_witness"])
    assert code == EXIT_OK
    names = [c["name"] for c in doc["result"]["checks"]]
    assert names == ["ac10_gap_witness", "dynsys.eventual_image"]
    assert doc["result"]["summary"]["failed"] == 0


def test_verify_failure_exit_code(capsys):
    # the literal zero-residual Fejer criterion does not hold
    assert main(["verify", "--only", "ac06_fejer_residual"]) == EXIT_VERIFY
    assert capsys.readouterr().out.startswith("FAIL")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "semicross", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("semicross ")
