from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from qbailey.cli import dumps, main


def run(*argv: str) -> tuple[int, str]:
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def dump_coeffs(text: str) -> list[str]:
    return [line.split()[1] for line in text.strip().splitlines()]


def test_verify_text_match():
    code, text = run("verify", "pentagonal_multiple", "--n", "2", "--delta", "0", "--order", "12")
    assert code == 0
    assert "match to q^12" in text


def test_verify_json_report():
    code, text = run("verify", "rr_multiple", "--n", "1", "--delta", "0", "--order", "30", "--format", "json")
    assert code == 0
    rep = json.loads(text)
    assert list(rep) == sorted(rep)
    assert rep["status"] == "match"
    assert rep["first_mismatch"] is None
    assert rep["verified_order"] == "60/2"
    assert rep["terms"]["lhs"]["coeffs"][:10] == ["1/1", "1/1", "1/1", "1/1", "2/1", "2/1", "3/1", "3/1", "4/1", "5/1"]
    assert set(rep) >= {"name", "params", "status", "verified_order", "first_mismatch", "terms", "millis"}


def test_json_round_trip_is_byte_stable():
    _, text = run("verify", "watson_multiple", "--set", "form=printed", "--format", "json")
    line = text.strip()
    assert dumps(json.loads(line)) == line


def test_mismatch_exit_code():
    code, text = run("verify", "watson_multiple", "--set", "form=printed", "--format", "json")
    assert code == 1
    rep = json.loads(text)
    assert rep["status"] == "mismatch"
    assert set(rep["first_mismatch"]) == {"exp", "lhs", "rhs"}


def test_unknown_identity_exit_code(capsys):
    code, _ = run("verify", "nosuch")
    assert code == 2
    assert "nosuch" in capsys.readouterr().err


def test_bad_flag_for_identity(capsys):
    code, _ = run("verify", "jacobi_triple", "--n", "2")
    assert code == 2


def test_engine_error_exit_code(capsys):
    code, _ = run("verify", "weak_bl_nonterminating_1d", "--set", "b=q^-1")
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_usage_error_exit_code(capsys):
    assert run("verify")[0] == 2
    assert run("frobnicate")[0] == 2
    assert run("verify", "rr_multiple", "--order", "-1")[0] == 2


def test_order_zero():
    code, text = run("verify", "rr_multiple", "--n", "1", "--order", "0", "--format", "json")
    assert code == 0
    rep = json.loads(text)
    assert rep["terms"]["lhs"]["coeffs"] == ["1/1"]


def test_list_rows():
    code, text = run("list")
    assert code == 0
    names = [line.split()[0] for line in text.splitlines() if not line.startswith(" ")]
    assert len(names) >= 20
    assert {"jacobi_triple", "rr_multiple", "ag_det_bq"} <= set(names)


def test_list_json_and_filter():
    code, text = run("list", "--format", "json", "--filter", "ag")
    rows = json.loads(text)
    assert code == 0 and rows
    assert all(r["name"].startswith("ag_") for r in rows)
    assert {"name", "summary", "params", "defaults", "grid"} <= set(rows[0])


def test_dump_poch_inf():
    code, text = run("dump", "poch_inf", "--base", "q", "--order", "7")
    assert code == 0
    assert dump_coeffs(text) == ["1", "-1", "-1", "0", "0", "1", "0", "1"]


def test_dump_gordon():
    code, text = run("dump", "gordon_gf", "--k", "2", "--i", "2", "--order", "6")
    assert dump_coeffs(text) == ["1", "1", "1", "1", "2", "2", "3"]


def test_dump_side_second_rogers_ramanujan_product():
    code, text = run("dump", "side", "--identity", "rr_multiple", "--side", "rhs", "--n", "1", "--delta", "1",
                     "--order", "10")
    assert code == 0
    # parts congruent to 2 or 3 mod 5
    assert dump_coeffs(text) == ["1", "0", "1", "1", "1", "1", "2", "2", "3", "3", "4"]


def test_dump_unknown_expression():
    assert run("dump", "nothing")[0] == 2


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# pentagonal at n = 2\nn=2\ndelta=1\norder=6\nformat=json\n")
    code, text = run("verify", "pentagonal_multiple", "--config", str(cfg))
    assert code == 0
    rep = json.loads(text)
    assert rep["params"]["n"] == 2 and rep["params"]["delta"] == 1
    assert rep["verified_order"] == "12/2"


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n=2\norder=6\n")
    code, text = run("verify", "pentagonal_multiple", "--config", str(cfg), "--n", "1", "--format", "json")
    assert json.loads(text)["params"]["n"] == 1


def test_parallel_output_is_deterministic():
    args = ("verify", "rr_multiple", "pentagonal_multiple", "ag_classical", "--grid", "--format", "json")
    serial = run(*args)[1]
    parallel = run(*args, "--jobs", "3")[1]
    strip = lambda text: [{k: v for k, v in r.items() if k != "millis"} for r in json.loads(text)]
    assert strip(serial) == strip(parallel)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qbailey", "dump", "poch_inf", "--order", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.split() == ["0", "1", "1", "-1", "2", "-1"]
