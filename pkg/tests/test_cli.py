from __future__ import annotations

import json
from pathlib import Path

import pytest

from qma.cli import UsageError, main, parse_position, spec_digest

SPECS = Path(__file__).resolve().parent.parent / "specs"


def run(capsys, *args):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_det_prints_the_determinant(capsys):
    code, out, _ = run(capsys, "det", SPECS / "n2_single.json")
    assert code == 0 and out.strip() == "x[1,1]*x[2,2] - q*x[1,2]*x[2,1]"


def test_normal_form(capsys):
    code, out, _ = run(capsys, "nf", SPECS / "n2_single.json", "x[2,2]*x[1,1]")
    assert code == 0 and out.strip() == "x[1,1]*x[2,2] - (q - q^-1)*x[1,2]*x[2,1]"
    code, out, _ = run(capsys, "nf", SPECS / "n2_single.json", "x[1,2]*x[1,1]", "--json")
    assert code == 0 and json.loads(out)["normal_form"]


def test_parse_errors_exit_2(capsys):
    code, _, err = run(capsys, "nf", SPECS / "n2_single.json", "x[1,")
    assert code == 2 and "position 4" in err
    code, _, err = run(capsys, "nf", SPECS / "missing.json", "x[1,1]")
    assert code == 2


def test_auto_verify_user_map(capsys):
    code, out, _ = run(capsys, "auto", "verify", SPECS / "n2_q_zeta3.json", SPECS / "phi_n2_m3.json")
    rep = json.loads(out)
    assert code == 0 and rep["verified"] is True


def test_auto_builtin_exit_codes(capsys):
    code, out, _ = run(capsys, "auto", "builtin", "phi")
    assert code == 0 and json.loads(out)["verified"] is True
    code, out, _ = run(capsys, "auto", "builtin", "b3_phi", "--n", "3")
    assert code == 1 and json.loads(out)["verified"] is False
    code, _, err = run(capsys, "auto", "builtin", "zzz")
    assert code == 2 and "unknown built-in" in err


def test_auto_word(capsys):
    code, out, _ = run(capsys, "auto", "word", 2, 3, "phi^2")
    assert code == 0
    assert out.splitlines() == ["w(x11) = x[1,1] + 2*x[2,2]^2", "differs from x11: true"]


def test_disc_affine(capsys):
    code, out, _ = run(capsys, "disc", "affine", 2, 3)
    rep = json.loads(out)
    assert code == 0 and rep["matches_claim"] and rep["claimed_y"] == "y1^6*y2^6"


def test_disc_check_is_deterministic(capsys):
    args = ("disc", "check", SPECS / "n2_disc_l3.json", "--claim", "(y12*y21*Omega)^54",
            "--points", 3, "--seed", 7)
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0 and out1 == out2
    assert json.loads(out1)["verdict"] == "pass"


def test_witness(capsys):
    code, out, _ = run(capsys, "witness", "n2")
    assert code == 0 and json.loads(out)["holds"]


def test_accept_report_is_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        code, out, _ = run(capsys, "accept", "--only", "1,2,6a", "--report", path)
        assert code == 0 and out.splitlines()[-1] == "3/3 criteria pass"
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert "seconds" not in json.dumps(rep)
    code, _, err = run(capsys, "accept", "--only", "99")
    assert code == 2 and "unknown criteria" in err


def test_helpers():
    assert parse_position("x11") == parse_position("x[1,1]") == parse_position("1,1") == (1, 1)
    assert spec_digest({"b": 1, "a": 2}) == spec_digest({"a": 2, "b": 1})
    with pytest.raises(UsageError):
        parse_position("y11")
