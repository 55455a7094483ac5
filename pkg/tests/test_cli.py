import json
import subprocess
import sys

import pytest

from uniqpoly.cli import main
from uniqpoly.corpus import EX4_1, EX4_7_P1
from uniqpoly.structure import report_from_json

# P' = (z^2 - 2)(z^2 - 2 - e) with e = 2^-40: irrational critical points 2^-41 apart
CLOSE_ROOTS = ("z^5/5 - (4 + 1/1099511627776) z^3/3 + 2 (2 + 1/1099511627776) z")

# (argv, expected exit code)
MATRIX = [
    (["analyze", EX4_1], 0),
    (["decide", EX4_7_P1], 0),
    (["decide", "z^6 + z^2 + 1", "--field", "padic", "--class", "entire"], 2),
    (["urs", EX4_7_P1], 0),
    (["urs", "z^5 + z^2"], 2),
    (["verify-pair", "z^2", "u", "--", "-u"], 0),
    (["verify-pair", "z^3", "u", "--", "-u"], 2),
    (["analyze", "1.5 z"], 3),
    (["decide"], 3),
    (["decide", EX4_1, "--field", "real"], 3),
    (["analyze", "--file", "/nonexistent/poly.txt"], 3),
    (["analyze", CLOSE_ROOTS, "--precision", "16", "--max-precision", "32"], 4),
]


@pytest.mark.parametrize("argv, code", MATRIX, ids=[" ".join(a)[:40] for a, _ in MATRIX])
def test_exit_code_matrix(argv, code, capsys):
    try:
        got = main(argv)
    except SystemExit as exc:
        got = exc.code
    assert got == code


def test_json_outputs_round_trip(capsys):
    assert main(["analyze", EX4_1, "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert report_from_json(doc).to_json() == doc
    assert main(["decide", EX4_7_P1, "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema"] == "verdict.v1" and doc["theorem"] == "Thm3_7"
    assert main(["urs", EX4_7_P1, "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema"] == "urs.v1" and doc["cardinality"] == 14


def test_file_input(tmp_path, capsys):
    f = tmp_path / "p.txt"
    f.write_text(EX4_1 + "\n")
    assert main(["decide", "--file", str(f), "--field", "padic"]) == 0
    assert "Thm3_3" in capsys.readouterr().out


def test_text_tables(capsys):
    assert main(["analyze", EX4_1]) == 0
    out = capsys.readouterr().out
    assert "241/53" in out and "-12041/159" in out


def test_corpus_filter_and_determinism(capsys):
    assert main(["corpus", "--filter", "ex4_7", "--format", "json"]) == 0
    first = capsys.readouterr().out
    assert main(["corpus", "--filter", "ex4_7", "--format", "json"]) == 0
    assert capsys.readouterr().out == first
    doc = json.loads(first)
    assert doc["total"] == 2 and doc["passed"] == 2
    assert main(["corpus", "--filter", "no-such-entry"]) == 1


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "uniqpoly", "decide", "z^5 + 2z^4 + z^3 + 1"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert "Refuted (Thm_tt8)" in res.stdout and "witness" in res.stdout
