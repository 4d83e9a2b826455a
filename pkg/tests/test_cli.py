import json
import subprocess
import sys

import pytest

from f2quartics.cli import RunConfig, count_rows, main
from f2quartics.quartic import from_hex

KLEIN_Q2 = "0 0 1 1 0 0 1 0 0 1 0 0 1 1 0".split()
DOUBLE_CONIC = "1 0 0 0 0 0 0 0 0 0 0 0 1 0 0".split()


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def test_count_formulas_q2(capsys):
    rc, out, _ = run(capsys, "count", "--q", "2", "--format", "json")
    assert rc == 0
    rows = {r["name"]: r for r in json.loads(out)}
    assert rows["smooth quartics"]["formula"] == 78
    assert rows["Ordinary"]["formula"] == 39
    assert rows["O_3"]["formula"] == 9


def test_count_enumerate_q2_matches(capsys):
    rc, out, _ = run(capsys, "count", "--q", "2", "--depth", "enumerate", "--format", "json")
    assert rc == 0
    for r in json.loads(out):
        assert r["formula"] == r["enumerated"]


def test_count_shows_corrected_column_at_q4():
    rows = {r["name"]: r for r in count_rows(RunConfig(4))}
    assert rows["N4_1"]["corrected"] == 99
    assert rows["N4_3"]["corrected"] == 354
    assert rows["smooth quartics"]["corrected"] == 4348
    assert rows["O_2"]["corrected"] is None


def test_count_single_family_q8(capsys):
    rc, out, _ = run(capsys, "count", "--q", "8", "--family", "O_2", "--format", "csv")
    assert rc == 0
    assert out.splitlines()[1].startswith("family,O_2,22898")


def test_strata_markdown(capsys):
    rc, out, _ = run(capsys, "strata", "--q", "2")
    assert rc == 0
    assert out.startswith("## moduli strata, q = 2")
    total = [line for line in out.splitlines() if line.startswith("| total")][0]
    assert "| 65 | 32 | 97 |" in total


def test_bad_arguments(capsys):
    assert run(capsys, "count", "--q", "6")[0] == 2
    assert run(capsys, "count", "--q", "2", "--family", "O_9")[0] == 2
    assert run(capsys, "count", "--q", "32", "--depth", "enumerate")[0] == 2


def test_verify_q2(capsys, tmp_path):
    out = tmp_path / "rep.json"
    rc, _, _ = run(capsys, "verify", "--q", "2", "--format", "json", "--out", str(out))
    assert rc == 0
    assert json.loads(out.read_text())["ok"]


def test_verify_q4_exit_code(capsys):
    rc, out, _ = run(capsys, "verify", "--q", "4", "--family", "N4_1")
    assert rc == 1
    assert "| NO |" in out


def test_enumerate_counts_and_schema(capsys):
    rc, out, err = run(capsys, "enumerate", "--q", "2", "--family", "S")
    assert rc == 0 and err.startswith("generators:")
    recs = [json.loads(line) for line in out.splitlines()]
    assert len(recs) == 6
    assert set(recs[0]) == {"q", "family", "Q", "quartic", "aut_order", "aut_structure", "stratum", "lpoly"}
    assert all(r["stratum"] == "Supersingular" for r in recs)
    assert all(len(r["Q"]) == 6 and len(r["quartic"]) == 15 and len(r["lpoly"]) == 7 for r in recs)


def test_enumerate_is_deterministic(capsys):
    _, first, _ = run(capsys, "enumerate", "--q", "2")
    _, second, _ = run(capsys, "enumerate", "--q", "2")
    assert first == second
    assert len(first.splitlines()) == 78


def test_identify_inverts_enumerate(capsys):
    _, out, _ = run(capsys, "enumerate", "--q", "2")
    for line in out.splitlines():
        rec = json.loads(line)
        rc, got, _ = run(capsys, "identify", "--q", "2", "--format", "json", *rec["quartic"])
        assert rc == 0
        got = json.loads(got)
        assert (got["family"], got["Q"]) == (rec["family"], rec["Q"])
        assert got["round_trip"]


def test_identify_klein_twist(capsys):
    rc, out, _ = run(capsys, "identify", "--q", "2", "--format", "json", *KLEIN_Q2)
    rec = json.loads(out)
    assert rc == 0
    assert rec["family"] == "O_7_0"
    assert (rec["aut_order"], rec["aut_structure"]) == (7, "C7")
    assert rec["lpoly"] == [1, 4, 9, 15, 18, 16, 8]


def test_identify_markdown(capsys):
    rc, out, _ = run(capsys, "identify", "--q", "2", *KLEIN_Q2)
    assert rc == 0 and "| family | O_7_0 |" in out


def test_identify_singular(capsys):
    rc, _, err = run(capsys, "identify", "--q", "2", *DOUBLE_CONIC)
    assert rc == 1
    assert "singular" in err and "['0', '0', '1']" in err


def test_identify_stratum_only_above_q4(capsys):
    rc, out, _ = run(capsys, "identify", "--q", "8", "--format", "json", *KLEIN_Q2)
    rec = json.loads(out)
    assert rc == 0 and "family" not in rec and "note" in rec
    assert rec["stratum"] == "Ordinary"


def test_identify_rejects_large_coefficients(capsys):
    coeffs = list(KLEIN_Q2)
    coeffs[0] = "5"
    assert run(capsys, "identify", "--q", "4", *coeffs)[0] == 2


def test_from_hex_roundtrip():
    assert from_hex(KLEIN_Q2)[2] == 1


def test_threads_from_environment(tmp_path):
    env = {"F2QUARTICS_THREADS": "2", "PATH": "/usr/bin:/bin"}
    res = subprocess.run([sys.executable, "-m", "f2quartics.cli", "count", "--q", "2",
                          "--depth", "enumerate", "--format", "json"],
                         capture_output=True, text=True, env=env, check=True)
    rows = json.loads(res.stdout)
    assert rows[-1]["enumerated"] == 78


def test_generators_file(capsys, tmp_path):
    from f2quartics.gf2tower import FieldTower
    path = tmp_path / "gens.txt"
    path.write_text(FieldTower.for_q(2).dump())
    rc, out, _ = run(capsys, "enumerate", "--q", "2", "--family", "O_1", "--generators", str(path))
    assert rc == 0 and len(out.splitlines()) == 1
