import json

import pytest

from skyrmecert import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_tables_skyrmion(capsys):
    code, out, _ = run(capsys, "tables", "--which", "1")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 42 and lines[0] == "13039/72146"


def test_tables_reciprocal_p5(capsys):
    code, out, _ = run(capsys, "tables", "--which", "4")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 30 and lines[0] == "-437/24"


def test_tables_dump_is_byte_stable(capsys):
    first = run(capsys, "tables", "--which", "all", "--json")[1]
    second = run(capsys, "tables", "--which", "all", "--json")[1]
    assert first == second


def test_unknown_table(capsys):
    assert run(capsys, "tables", "--which", "9")[0] == cli.EXIT_USAGE


def test_ggmt_final_value(capsys, tmp_path):
    out_file = tmp_path / "ng.json"
    code, out, _ = run(capsys, "ggmt", "--p", "4", "--ell", "1", "--out", str(out_file))
    assert code == 0
    assert "criterion value = 2275/2592" in out and "margin = 317/2592" in out
    doc = json.loads(out_file.read_text())
    assert doc["status"] == "verified" and doc["data"]["value"] == "2275/2592"


def test_ggmt_from_integral_certificate(capsys, tmp_path):
    from skyrmecert.proof_pipeline import Certificate
    from skyrmecert.exact_arith import Rational

    path = tmp_path / "integral.json"
    path.write_text(Certificate("potential-integral", "int <= 130", "lem:intV", Rational(130),
                                "<=", "verified").dumps())
    code, out, _ = run(capsys, "ggmt", "--integral-cert", str(path))
    assert code == 0 and "2275/2592" in out
    path.write_text(Certificate("potential-integral", "int <= 130", "lem:intV", Rational(130),
                                "<=", "inconclusive").dumps())
    assert run(capsys, "ggmt", "--integral-cert", str(path))[0] == cli.EXIT_INCONCLUSIVE


def test_ggmt_failure_exit_code(capsys):
    assert run(capsys, "ggmt", "--p", "4", "--ell", "0")[0] == cli.EXIT_FAILED


def test_solve_usage_error(capsys):
    code, _, err = run(capsys, "solve", "skyrmion", "--n0", "2")
    assert code == cli.EXIT_USAGE and "n0" in err


def test_solve_writes_candidates(capsys, tmp_path):
    code, out, _ = run(capsys, "solve", "skyrmion", "--n0", "43", "--out", str(tmp_path))
    assert code == 0 and "42 coefficients" in out
    doc = json.loads((tmp_path / "skyrmion.json").read_text())
    assert doc["candidate"] is True and len(doc["coefficients"]) == 42
    code, out, _ = run(capsys, "solve", "fundamental", "--sign", "minus", "--n", "30", "--out", str(tmp_path))
    doc = json.loads((tmp_path / "fundamental-minus.json").read_text())
    assert code == 0 and len(doc["coefficients"]) == 29 and "c1_float" in doc["diagnostics"]


def test_report_on_empty_directory(capsys, tmp_path):
    code, _, err = run(capsys, "report", "--dir", str(tmp_path))
    assert code == cli.EXIT_USAGE and "no certificate index" in err


def test_verify_rejects_unknown_stage_and_param(capsys):
    assert run(capsys, "verify", "nonsense")[0] == cli.EXIT_USAGE
    assert run(capsys, "verify", "range", "--param", "bogus=1")[0] == cli.EXIT_USAGE
    assert run(capsys, "verify", "range", "--param", "gT_N")[0] == cli.EXIT_USAGE


def test_verify_residual_and_report(capsys, tmp_path):
    out_dir = tmp_path / "certs"
    code, out, _ = run(capsys, "verify", "residual", "--out", str(out_dir), "--workers", "1")
    assert code == 0
    assert out.splitlines()[-1] == "residual: verified (<= 1/500)"
    assert (out_dir / "run.log").exists()
    first = {p.name: p.read_bytes() for p in out_dir.glob("*.json")}
    run(capsys, "verify", "residual", "--out", str(out_dir), "--workers", "1")
    second = {p.name: p.read_bytes() for p in out_dir.glob("*.json")}
    assert first == second
    code, report, _ = run(capsys, "report", "--dir", str(out_dir))
    assert code == 0 and "| residual | verified | <= 1/500 | prop:Rem |" in report


def test_verify_shallow_hessian_is_inconclusive(capsys, tmp_path):
    code, out, err = run(capsys, "verify", "hessian", "--depth", "4", "--out", str(tmp_path), "--workers", "1")
    assert code == cli.EXIT_INCONCLUSIVE
    assert "hessian: inconclusive" in out and "inconclusive" in err


def test_verify_with_candidates(capsys, tmp_path):
    run(capsys, "solve", "skyrmion", "--out", str(tmp_path / "cand"))
    code, out, _ = run(capsys, "verify", "residual", "--use-candidates", str(tmp_path / "cand"),
                       "--out", str(tmp_path / "certs"), "--workers", "1")
    assert code == 0
    doc = json.loads((tmp_path / "certs" / "residual.json").read_text())
    assert doc["data"]["provenance"]["coefficients"] == "candidates:skyrmion"


def test_verify_candidates_missing(capsys, tmp_path):
    assert run(capsys, "verify", "range", "--use-candidates", str(tmp_path))[0] == cli.EXIT_USAGE


def test_help_exits_cleanly(capsys):
    assert run(capsys, "--help")[0] == 0
    assert run(capsys)[0] == cli.EXIT_USAGE
