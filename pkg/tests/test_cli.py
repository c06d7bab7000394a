import csv
import io
import json
import subprocess
import sys
from decimal import Decimal
from fractions import Fraction

import pytest

from rootsep.cli import main
from rootsep.polycore import IntegerPolynomial
from rootsep.rootfinder import exponent


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_sep_examples(capsys):
    code, out, _ = run(["sep", "-1,0,1"], capsys)
    data = json.loads(out)
    assert code == 0 and Fraction(Decimal(data["sep_lo"])) <= 2 <= Fraction(Decimal(data["sep_hi"]))
    code, out, _ = run(["sep", "2,-8,7,0,4,1"], capsys)
    assert code == 0 and json.loads(out)["height"] == "8"
    assert run(["sep", "1"], capsys)[0] == 3
    assert run(["sep", "1,x"], capsys)[0] == 2
    assert run(["exponent", "-1,0,1"], capsys)[0] == 3
    assert run(["sep", "-1,0,1", "--rel-width", "2"], capsys)[0] == 2
    assert run(["bogus"], capsys)[0] == 2


def test_roundtrip_and_determinism(capsys, tmp_path):
    args = ["exponent", "2,-8,7,0,4,1", "--rel-width", "1/1000000"]
    _, a, _ = run(args, capsys)
    _, b, _ = run(args, capsys)
    assert a == b
    data = json.loads(a)
    ref = exponent(IntegerPolynomial([2, -8, 7, 0, 4, 1]), Fraction(1, 10**6))
    assert Fraction(Decimal(data["sep_lo"])) == ref.sep_lo and Fraction(Decimal(data["e_hi"])) == ref.e_hi
    out = tmp_path / "r.csv"
    assert main(["--format", "csv", "--output", str(out)] + args) == 0
    text = out.read_bytes()
    assert b"\r" not in text and text.startswith(b"poly,height,")


def test_family_command(capsys):
    code, out, _ = run(["family", "p", "--n", "10:14"], capsys)
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0][-1] == "bound_ok" and all(r[-1] == "1" for r in rows[1:])
    assert len(rows) == 6
    code, out, _ = run(["family", "QR", "--d", "9", "--n", "2:10", "--format", "json"], capsys)
    data = json.loads(out)
    e = [float(r["e_lo"]) for r in data]
    assert code == 0 and abs(e[-1] - 31 / 7) < abs(e[0] - 31 / 7) and abs(e[-1] - 31 / 7) < 0.01
    code, out, _ = run(["family", "s", "--n", "2:6"], capsys)
    assert code == 0
    for r in list(csv.DictReader(io.StringIO(out))):
        n = int(r["n"])
        assert 0.2 < float(r["sep_hi"]) * 4 * n**7 < 1
    assert run(["family", "QR", "--d", "6", "--n", "3"], capsys)[0] == 2
    assert run(["family", "p", "--n", "1"], capsys)[0] == 2
    code, out, _ = run(["family", "QR", "--d", "7", "--n", "5,10,20,40", "--fit"], capsys)
    row = list(csv.DictReader(io.StringIO(out)))[0]
    assert code == 0 and abs(float(row["slope"]) + 3.4) < 0.05 and row["n_points"] == "4"


def test_search_command(capsys):
    code, out, _ = run(["search", "-1,10,0,1", "--threshold", "2.2"], capsys)
    hits = json.loads(out)
    assert code == 0 and any(h["quadratic"] == "-10,100,1" for h in hits)
    code, out, _ = run(["search", "-1,10,0,1", "--threshold", "10"], capsys)
    assert code == 0 and json.loads(out) == []
    assert run(["search", "1,2"], capsys)[0] == 2
    assert run(["search", "nonsense"], capsys)[0] == 2


def test_survey_command(capsys):
    code, out, _ = run(["survey", "--d", "5", "--shape", "2,3", "--bound", "4"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["shape", "hQ", "hR", "height", "e_lo", "e_hi", "polys"]
    assert any(r["polys"] == "-2,4,1 * -1,2,0,1" for r in rows)
    assert run(["survey", "--d", "5", "--shape", "2,2", "--bound", "4"], capsys)[0] == 2


def test_verify_command(capsys):
    code, out, _ = run(["verify", "gelfond"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[0]["samples"] == "10000" and rows[0]["violations"] == "0"
    code, out, _ = run(["verify", "all", "--samples", "100", "--seed", "7", "--format", "json"], capsys)
    data = json.loads(out)
    assert code == 0 and [d["suite"] for d in data] == ["gelfond", "mahler", "linear"]
    assert all(d["seed"] == "7" for d in data) and "fit" in data[2]
    _, again, _ = run(["verify", "all", "--samples", "100", "--seed", "7", "--format", "json"], capsys)
    assert again == out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "rootsep", "sep", "-1,0,1", "--format", "csv"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("poly,height")
