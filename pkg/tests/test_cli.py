"""Command-line behavior: exit codes, determinism, and the JSON surfaces."""

import json

import pytest

from suparg.cli import run


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# prove
# ---------------------------------------------------------------------------

def test_prove_ivt_happy(capsys, tmp_path):
    out_file = tmp_path / "root.json"
    code, out, err = invoke(capsys, "prove", "ivt", "--fn", "x^2 - 2",
                            "--a", "0", "--b", "2", "--tol", "1e-9",
                            "--out", str(out_file))
    assert code == 0 and err == ""
    assert "f(c) = 0" in out
    doc = json.loads(out_file.read_text())
    assert doc["theorem"] == "ivt"
    assert doc["certificate"]["type"] == "root_bracket"


def test_prove_then_check_roundtrip(capsys, tmp_path):
    out_file = tmp_path / "dit.json"
    code, _, _ = invoke(capsys, "prove", "dit", "--fn", "x^2", "--a", "0",
                        "--b", "1", "--eps", "1e-3", "--out", str(out_file))
    assert code == 0
    code, out, err = invoke(capsys, "check", str(out_file))
    assert code == 0 and out.strip() == "Valid"


def test_check_flags_tampered_certificate(capsys, tmp_path):
    out_file = tmp_path / "dit.json"
    invoke(capsys, "prove", "dit", "--fn", "x^2", "--a", "0", "--b", "1",
           "--eps", "1e-3", "--out", str(out_file))
    doc = json.loads(out_file.read_text())
    doc["certificate"]["L"] = "0x1.8000000000000p-2"  # claim a tighter 0.375
    out_file.write_text(json.dumps(doc))
    code, out, _ = invoke(capsys, "check", str(out_file))
    assert code == 1
    assert "Invalid" in out


def test_prove_failure_exits_one_with_witness(capsys):
    code, out, err = invoke(capsys, "prove", "sift", "--fn", "x^3",
                            "--a", "-1", "--b", "1")
    assert code == 1
    record = json.loads(out)
    assert record["failure"] == "stalled"
    code, out, _ = invoke(capsys, "prove", "mvi", "--fn", "x^2", "--a", "0",
                          "--b", "1", "--M", "1.9")
    assert code == 1
    record = json.loads(out)
    assert record["failure"] == "hypothesis_fail"
    assert record["witness"] is not None


def test_prove_precondition_failure(capsys):
    code, out, _ = invoke(capsys, "prove", "ivt", "--fn", "x^2",
                          "--a", "-1", "--b", "1")
    assert code == 1
    assert json.loads(out)["failure"] == "precondition"


def test_domain_error_exit_two(capsys):
    code, out, err = invoke(capsys, "prove", "uct", "--fn", "log(x)",
                            "--a", "-1", "--b", "1", "--eps", "0.1")
    assert code == 2
    record = json.loads(err)
    assert record["error"] == "domain"
    assert "log" in record["detail"]
    assert record["subexpression"] == "log(x)"


def test_parse_error_exit_two(capsys):
    code, out, err = invoke(capsys, "prove", "bvt", "--fn", "2*+x",
                            "--a", "0", "--b", "1")
    assert code == 2
    record = json.loads(err)
    assert record["error"] == "parse"
    assert record["position"] == 2


def test_usage_errors(capsys):
    code, _, err = invoke(capsys, "prove", "dit", "--fn", "x", "--a", "0", "--b", "1")
    assert code == 2 and json.loads(err)["error"] == "usage"  # missing --eps
    code, _, err = invoke(capsys, "prove", "bvt", "--fn", "x", "--a", "0.1", "--b", "1")
    assert code == 2
    assert "not exactly representable" in json.loads(err)["detail"]
    code, _, err = invoke(capsys, "prove", "zvt", "--fn", "x", "--a", "0", "--b", "1")
    assert code == 2


def test_prove_determinism_bytes(capsys):
    args = ("prove", "dit", "--fn", "x^2", "--a", "0", "--b", "1",
            "--eps", "1e-3", "--format", "json")
    code1, out1, _ = invoke(capsys, *args)
    code2, out2, _ = invoke(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    assert json.loads(out1)["schema"] == "suparg-cert/1"


def test_prove_all_theorems_quick(capsys):
    cases = [
        ("bvt", []),
        ("evt", ["--eps", "0.01"]),
        ("uct", ["--eps", "0.5"]),
        ("dit", ["--eps", "0.05"]),
        ("sift", []),
        ("ift", []),
        ("mvi", ["--M", "8"]),
    ]
    for theorem, extra in cases:
        code, out, err = invoke(capsys, "prove", theorem, "--fn", "exp(x)",
                                "--a", "0", "--b", "2", *extra)
        assert code == 0, (theorem, out, err)
    code, _, _ = invoke(capsys, "prove", "cft", "--fn", "5", "--a", "0",
                        "--b", "2", "--eta", "0")
    assert code == 0


# ---------------------------------------------------------------------------
# cover / clopen
# ---------------------------------------------------------------------------

def test_cover_command(capsys, tmp_path):
    cov = tmp_path / "cover.txt"
    cov.write_text("(-1/10, 6/10)\n(4/10, 11/10)\n")
    code, out, _ = invoke(capsys, "cover", "--file", str(cov), "--a", "0", "--b", "1")
    assert code == 0
    assert "[0, 1]" in out

    cov.write_text("(-1/10, 1/2)\n(1/2, 11/10)\n")
    code, out, _ = invoke(capsys, "cover", "--file", str(cov), "--a", "0", "--b", "1")
    assert code == 1
    assert json.loads(out)["point"] == "1/2"


def test_cover_json_checks(capsys, tmp_path):
    cov = tmp_path / "cover.txt"
    cov.write_text("(-1/10, 6/10)\n(4/10, 11/10)\n")
    code, out, _ = invoke(capsys, "cover", "--file", str(cov), "--a", "0",
                          "--b", "1", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["certificate"]["type"] == "subcover"
    assert doc["certificate"]["indices"] == [0, 1]
    # the emitted document is itself checkable
    path = tmp_path / "subcover.json"
    path.write_text(out)
    code, out, _ = invoke(capsys, "check", str(path))
    assert code == 0


def test_clopen_command(capsys, tmp_path):
    sfile = tmp_path / "set.txt"
    sfile.write_text("[0, 1]\n")
    code, out, _ = invoke(capsys, "clopen", "--file", str(sfile), "--a", "0", "--b", "1")
    assert code == 0
    assert "covers_all" in out

    sfile.write_text("[0, 1/2)\n")
    code, out, _ = invoke(capsys, "clopen", "--file", str(sfile), "--a", "0", "--b", "1")
    assert code == 1
    assert "not_rel_closed" in out and "1/2" in out


def test_cover_rejects_closed_elements(capsys, tmp_path):
    cov = tmp_path / "cover.txt"
    cov.write_text("[0, 1]\n")
    code, _, err = invoke(capsys, "cover", "--file", str(cov), "--a", "0", "--b", "1")
    assert code == 2
    assert json.loads(err)["error"] == "usage"


def test_check_rejects_malformed_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = invoke(capsys, "check", str(bad))
    assert code == 2
    assert json.loads(err)["error"] == "usage"
