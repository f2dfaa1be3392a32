import json
import subprocess
import sys

import pytest

from doublebracket.cli import main
from doublebracket.diagram import Annulus, format_pd
from doublebracket.invariant import default_scheme
from doublebracket.polyring import LaurentPoly, invert_xy, parse_poly

from conftest import CORPUS, load

TREFOIL = str(CORPUS / "classical" / "trefoil_right.pd")
ONE_CROSSING = str(CORPUS / "torus" / "one_crossing.pd")
W_TREFOIL = parse_poly("(x^4 + x^2*y^2 + y^4)*(x^-10*y^-10 + x^-8*y^-8 + x^-4*y^-4)")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_trefoil(capsys):
    code, out, err = run(capsys, "compute", "--mode", "classical", "--set-z-1", "--json", TREFOIL)
    assert code == 0
    row = json.loads(out)
    assert LaurentPoly.from_json(row["value"]) == W_TREFOIL
    assert row["writhe"] == 3
    assert row["stateCount"] == [3, 8]
    assert " s" in err


def test_compute_left_trefoil_text(capsys):
    code, out, _ = run(capsys, "compute", "--set-z-1", "classical/trefoil_left.pd")
    assert code == 0
    assert parse_poly(out.splitlines()[0].split(": ", 1)[1]) == invert_xy(W_TREFOIL)
    assert "|T|=3 2^n=8" in out


def test_compute_one_crossing(capsys):
    code, out, _ = run(capsys, "compute", "--mode", "torus", "--set-z-1", "--json", ONE_CROSSING)
    assert code == 0
    row = json.loads(out)
    assert LaurentPoly.from_json(row["value"]) == parse_poly(
        "(x^2 + y^2 - 2*i*x*y*t)*|a+b| + (2 + i*x*y^-1*t + i*x^-1*y*t)*|a-b|")
    assert row["stateCount"] == [4, 2]


def test_missing_file(capsys):
    code, _, err = run(capsys, "compute", "missing.pd")
    assert code == 2
    assert "missing.pd" in err


def test_parse_error_has_location(tmp_path, capsys):
    bad = tmp_path / "bad.pd"
    bad.write_text("X1 u_in=1 o_out=2 u_out=3\n")
    code, _, err = run(capsys, "compute", str(bad))
    assert code == 2
    assert "bad.pd:1:" in err


def test_mode_mismatch(capsys):
    assert run(capsys, "compute", "--mode", "torus", TREFOIL)[0] == 2
    assert run(capsys, "compute", "--mode", "classical", ONE_CROSSING)[0] == 2


def test_crossing_guard(capsys):
    assert run(capsys, "compute", "--max-crossings", "2", TREFOIL)[0] == 2


def test_h_linearity_exit(tmp_path, capsys):
    d = load("classical", "trefoil_right")
    center = max(d.faces, key=len)
    outer = next(f for f in d.faces if len(f) == len(center) and f.id != center.id)
    p = tmp_path / "wound.pd"
    p.write_text(format_pd(d.with_ambient(Annulus(center.corners[0], outer.corners[0]))))
    assert run(capsys, "compute", "--mode", "annulus", str(p))[0] == 0
    code, _, err = run(capsys, "compute", "--mode", "annulus", "--h-mode", "forget", str(p))
    assert code == 3
    assert "h-degree" in err


def test_verify_ok(capsys):
    code, out, _ = run(capsys, "verify", "--moves", "200", "--seed", "1", TREFOIL)
    assert code == 0
    assert out.startswith("seed=1 moves=200")
    assert "invariant after 200 moves" in out


def test_verify_zero_moves(capsys):
    code, out, _ = run(capsys, "verify", "--moves", "0", "--json", ONE_CROSSING)
    assert code == 0
    assert json.loads(out)["moves"] == []


def test_verify_default_seed_printed(capsys):
    code, out, _ = run(capsys, "verify", "--moves", "3", TREFOIL)
    assert code == 0
    assert out.startswith("seed=1 ")


def test_verify_corrupted_weights(tmp_path, capsys):
    p = tmp_path / "weights.txt"
    p.write_text(default_scheme().perturbed("IN", "A", LaurentPoly.monomial(1, x=2)).to_text())
    code, out, _ = run(capsys, "verify", "--weights", str(p), "--moves", "40", TREFOIL)
    assert code == 1
    assert "violation" in out


def test_unreadable_weights(tmp_path, capsys):
    p = tmp_path / "weights.txt"
    p.write_text("cell IN A = x^2\n")
    assert run(capsys, "verify", "--weights", str(p), TREFOIL)[0] == 2


def test_conjecture_bundled(capsys):
    code, out, _ = run(capsys, "conjecture")
    assert code == 0
    assert out.splitlines()[-1] == "summary: 35 diagrams, 35 rank-1 factorizations, 35 Alexander matches"


def test_conjecture_trefoil(capsys):
    code, out, _ = run(capsys, "conjecture", "--json", TREFOIL)
    assert code == 0
    row = json.loads(out.splitlines()[0])
    assert parse_poly(row["H"]) == parse_poly("x^4 + x^2*y^2 + y^4")
    assert parse_poly(row["P"]) == parse_poly("x^-10*y^-10 + x^-8*y^-8 + x^-4*y^-4")
    assert row["alexander_match"] is True


def test_conjecture_empty_table(tmp_path, capsys):
    assert run(capsys, "conjecture", str(tmp_path))[0] == 2


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "classical", "split")
    assert code == 0
    assert out.splitlines()[-1] == "summary: 14/14 agree"


def test_fixture_dir_override(tmp_path, monkeypatch, capsys):
    (tmp_path / "knots").mkdir()
    (tmp_path / "knots" / "k.pd").write_text((CORPUS / "classical" / "trefoil_left.pd").read_text())
    monkeypatch.setenv("DOUBLEBRACKET_FIXTURES", str(tmp_path))
    code, out, _ = run(capsys, "conjecture")
    assert code == 0
    assert "summary: 1 diagrams" in out


def test_deterministic_and_parallel(capsys):
    args = ["compute", "--json", "knots"]
    a = run(capsys, *args)[1]
    b = run(capsys, *args, "--workers", "2")[1]
    assert a == b
    assert len(a.splitlines()) == 35


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "doublebracket", "compute", "--set-z-1", TREFOIL],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert "trefoil_right:" in res.stdout


@pytest.mark.parametrize("argv", [["compute", "--mode", "sphere", TREFOIL], ["frobnicate"]])
def test_bad_arguments(argv, capsys):
    with pytest.raises(SystemExit) as err:
        main(argv)
    assert err.value.code == 2
