import json
import subprocess
import sys

import pytest

from qdeform.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_deform(capsys):
    code, out, _ = run(capsys, "deform", "--preset", "A1", "--degree", "4")
    assert code == 0 and "0 mismatches" in out


def test_hilbert_csv(capsys):
    code, out, _ = run(capsys, "hilbert", "--preset", "A2", "--degree", "6")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "degree,rank"
    assert [int(line.split(",")[1]) for line in lines[1:]] == [1, 2, 4, 6, 9, 12, 16]


def test_hilbert_oracle_json(capsys):
    code, out, _ = run(capsys, "hilbert", "--preset", "A1", "--algebra", "uq", "--degree", "3",
                       "--oracle", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["ranks"] == doc["oracle"] == [1, 2, 3, 4]


def test_nf(capsys):
    code, out, _ = run(capsys, "nf", "--expr", "x[1]x[-1]", "--preset", "A1")
    assert code == 0
    assert "x[-1]x[1]" in out and "K(2)" in out


def test_nf_parse_error(capsys):
    code, _, err = run(capsys, "nf", "--expr", "x[9]", "--preset", "A1")
    assert code == 2 and "unknown generator" in err


def test_datum_check(capsys):
    assert run(capsys, "datum-check", "--preset", "A2")[0] == 0
    code, out, _ = run(capsys, "datum-check", "--preset", "A1", "--q", "1")
    assert code == 1 and "C3" in out


def test_malformed_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    code, _, err = run(capsys, "datum-check", "--input", str(bad))
    assert code == 2 and "malformed JSON" in err


def test_usage_errors(capsys):
    assert run(capsys, "deform")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "deform", "--preset", "A1", "--degree", "0")[0] == 2
    assert run(capsys, "deform", "--preset", "A1", "--q", "abc")[0] == 2
    assert run(capsys, "deform", "--preset", "A1", "--format", "csv")[0] == 2


def test_datum_document_input(tmp_path, capsys):
    from qdeform.uq import UqInput, standard_lambda, uq_datum, uq_gcm
    u = UqInput.preset("A1")
    doc = uq_datum(u).to_json(uq_gcm(u), lam=standard_lambda(u))
    path = tmp_path / "datum.json"
    path.write_text(json.dumps(doc))
    assert run(capsys, "datum-check", "--input", str(path))[0] == 0
    code, out, _ = run(capsys, "hopf", "--input", str(path), "--degree", "3")
    assert code == 0 and "0 failures" in out
    code, out, _ = run(capsys, "nf", "--input", str(path), "--expr", "x[1]x[-1]")
    assert code == 0 and "K(2)" in out


def test_uq_input_document(tmp_path, capsys):
    path = tmp_path / "uq.json"
    path.write_text(json.dumps({"cartan_matrix": [[2, -1], [-1, 2]], "q": "formal"}))
    code, out, _ = run(capsys, "overlaps", "--input", str(path), "--degree", "3")
    assert code == 0 and "0 unresolved" in out


def test_classify_pairs_file(tmp_path, capsys):
    path = tmp_path / "pairs.json"
    path.write_text(json.dumps({"uq": "A1", "pairs": [
        {"mu": {"1,1": "1"}}, {"mu": {"1,1": "q^2"}}, {"mu": {"1,1": "q"}}, {"mu": {}}]}))
    code, out, _ = run(capsys, "classify", "--input", str(path), "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert [o["members"] for o in doc["orbits"]] == [[0, 1], [2], [3]]


def test_classify_rejects_bad_pairs(tmp_path, capsys):
    path = tmp_path / "pairs.json"
    # sl2 has a single simple root, so there is no u_12
    path.write_text(json.dumps({"uq": "A1", "pairs": [{"u": {"1,2": "q"}}]}))
    code, _, err = run(capsys, "classify", "--input", str(path))
    assert code == 1 and "skew entry" in err
    # mu at (1, 1) needs u_12 = 1 on sl3
    path.write_text(json.dumps({"uq": "A2", "pairs": [{"u": {"1,2": "q"}, "mu": {"1,1": "1"}}]}))
    code, _, err = run(capsys, "classify", "--input", str(path))
    assert code == 1 and "support" in err


def test_whitehead_and_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "whitehead", "--preset", "A2", "--samples", "3", "--seed", "7",
                       "--format", "json", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["reduced"] == 3


@pytest.mark.parametrize("argv", [
    ["whitehead", "--preset", "A1", "--samples", "5", "--seed", "3", "--format", "json"],
    ["classify", "--preset", "A1", "--format", "json"],
])
def test_byte_identical_runs(argv):
    cmd = [sys.executable, "-m", "qdeform.cli", *argv]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
