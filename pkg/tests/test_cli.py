import csv
import json

import pytest

from riplb.bounds import claim2_lower, claim3_upper, coupon_exact
from riplb.cli import CSV_FIELDS, cli_main


def test_bounds_rows(capsys):
    assert cli_main(["bounds", "--p", "2", "--k", "4", "--q", "10"]) == 0
    out = capsys.readouterr().out
    assert repr(coupon_exact(4, 10)) in out
    assert repr(claim2_lower(4, 10).raw) in out
    assert repr(claim3_upper(2, 4, 1, 10).raw) in out


def test_bounds_csv(tmp_path):
    path = tmp_path / "b.csv"
    assert cli_main(["bounds", "--p", "2", "--k", "4", "--q", "10", "--n", "8", "--out", str(path)]) == 0
    with path.open() as fh:
        rows = list(csv.DictReader(fh))
    assert list(rows[0]) == CSV_FIELDS
    kinds = {r["bound_kind"]: float(r["bound_value"]) for r in rows}
    assert kinds["coupon_exact"] == coupon_exact(4, 10)
    assert kinds["subspace_count"] == 10795  # [8 choose 2]_2


def test_invalid_prime():
    assert cli_main(["bounds", "--p", "4", "--k", "4", "--q", "10"]) == 2


def test_usage_errors():
    assert cli_main([]) == 2
    assert cli_main(["mc-single", "--p", "2"]) == 2
    assert cli_main(["bounds", "--p", "2", "--k", "6", "--q", "3"]) == 2
    assert cli_main(["nonsense", "--p", "2"]) == 2


def test_shatter_check_full(capsys):
    assert cli_main(["shatter-check", "--p", "3", "--n", "2", "--k", "9", "--all-rows"]) == 0
    assert "shattered: true" in capsys.readouterr().out


def test_shatter_check_missing(capsys):
    assert cli_main(["shatter-check", "--p", "2", "--n", "2", "--k", "2", "--rows", "0,0;0,1"]) == 0
    out = capsys.readouterr().out
    assert "shattered: false" in out and "missing signature: [1]" in out


def test_certificate_json(tmp_path):
    path = tmp_path / "c.json"
    code = cli_main(["certificate", "--p", "2", "--n", "2", "--k", "2", "--rows", "0,0;0,1", "--format", "json", "--out", str(path)])
    assert code == 0
    doc = json.loads(path.read_text())
    assert doc["certificate"]["support"] == [[0, 0], [1, 0]]
    assert doc["certificate"]["coefficients"] == [[1.0, 0.0], [-1.0, 0.0]]
    assert doc["records"][0]["verdict"] == "pass"


def test_certificate_on_shattered_subspace():
    assert cli_main(["certificate", "--p", "2", "--n", "3", "--k", "4", "--all-rows"]) == 1


def test_rip_bruteforce(capsys):
    assert cli_main(["rip-bruteforce", "--p", "2", "--n", "4", "--k", "4", "--all-rows"]) == 0
    out = capsys.readouterr().out
    eps = float(out.split("epsilon = ")[1].split()[0])
    assert eps < 1e-10
    assert cli_main(["rip-bruteforce", "--p", "2", "--n", "8", "--k", "4", "--q", "5"]) == 2


def test_family_build_json(tmp_path):
    path = tmp_path / "fam.json"
    assert cli_main(["family-build", "--p", "2", "--n", "4", "--k", "4", "--ell", "35", "--max-int-dim", "1", "--out", str(path)]) == 0
    doc = json.loads(path.read_text())
    assert len(doc["members"]) == 35 and doc["d"] == 2


def test_family_build_exhausted():
    assert cli_main(["family-build", "--p", "2", "--n", "3", "--k", "4", "--ell", "10", "--max-int-dim", "1"]) == 1


def test_mc_single_csv(tmp_path, capsys):
    path = tmp_path / "s.csv"
    code = cli_main(["mc-single", "--p", "2", "--n", "6", "--k", "4", "--q", "10", "--trials", "5000", "--out", str(path)])
    assert code == 0
    out = capsys.readouterr().out
    assert "99% Hoeffding" in out and "note:" in out
    with path.open() as fh:
        (row,) = list(csv.DictReader(fh))
    assert row["experiment"] == "mc_single" and row["verdict"] == "pass"
    assert float(row["ci99"]) == pytest.approx(0.0230, abs=1e-4)


def test_mc_pair_and_family_and_boost(tmp_path):
    assert cli_main(["mc-pair", "--p", "2", "--n", "6", "--k", "4", "--q", "10", "--trials", "3000", "--m", "1"]) == 0
    fam = tmp_path / "fam.json"
    cli_main(["family-build", "--p", "2", "--n", "6", "--k", "4", "--ell", "5", "--max-int-dim", "1", "--out", str(fam)])
    out = tmp_path / "f.json"
    assert cli_main(["mc-family", "--p", "2", "--n", "6", "--k", "4", "--q", "20", "--trials", "3000",
                     "--family-json", str(fam), "--format", "json", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["summary"]["details"]["ell"] == 5
    assert len(doc["summary"]["details"]["family"]["members"]) == 5
    assert cli_main(["mc-boost", "--p", "2", "--n", "6", "--k", "4", "--q", "20", "--trials", "2000",
                     "--ell", "4", "--max-int-dim", "1", "--split-s", "2"]) == 0
    assert cli_main(["mc-boost", "--p", "2", "--n", "6", "--k", "4", "--q", "21", "--trials", "20", "--split-s", "2"]) == 2


def test_failing_verdict_exit_code(monkeypatch):
    import riplb.montecarlo

    # a wrong oracle value must surface as verdict fail / exit 1
    monkeypatch.setattr(riplb.montecarlo.bounds, "coupon_exact", lambda k, q: 0.9)
    code = cli_main(["mc-single", "--p", "2", "--n", "6", "--k", "4", "--q", "10", "--trials", "20000"])
    assert code == 1
