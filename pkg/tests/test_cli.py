import json

import pytest

from amcurves.autgroup import claimed_group
from amcurves.cli import main
from amcurves.curve import curve_from_dict, rational_places
from amcurves.quotient import quotient_curve_from_dict
from cli_cases import CASES, CLASSICAL, DIAG_Q9, PAIR_Q3, YCURVE
from conftest import GOLDEN, ROOT, corpus


@pytest.fixture(autouse=True)
def at_repo_root(monkeypatch):
    monkeypatch.chdir(ROOT)


def run(argv, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main(argv + ["--deterministic", "--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


@pytest.mark.parametrize("name,argv,code", CASES, ids=[c[0] for c in CASES])
def test_golden(name, argv, code, tmp_path):
    out = tmp_path / f"{name}.json"
    assert main(argv + ["--deterministic", "--out", str(out)]) == code
    assert out.read_bytes() == (GOLDEN / f"{name}.json").read_bytes()


# --- CLI results equal library results ------------------------------------------------


def test_genus_report(tmp_path):
    code, rep = run(["curve", "genus", "--curve", CLASSICAL], tmp_path)
    assert code == 0 and rep["pass"]
    assert rep["results"]["genus"]["value"] == 4
    assert "Riemann-Hurwitz" in rep["results"]["genus"]["source"]


def test_count_equals_library(tmp_path):
    code, rep = run(["curve", "count", "--curve", CLASSICAL, "--k", "2"], tmp_path)
    assert rep["results"]["N"]["value"] == {"2": rational_places(corpus("classical"), 2)}


def test_claim_order_and_tags(tmp_path):
    code, rep = run(["aut", "claim", "--curve", CLASSICAL], tmp_path)
    assert code == 0
    assert rep["results"]["order"]["value"] == 36 == claimed_group(corpus("classical")).order
    for tag in ("elementary-abelian Sigma", "dihedral Delta", "semidirect"):
        assert tag in rep["results"]["structure"]


def test_structure_relations_all_ok(tmp_path):
    for path in (CLASSICAL, PAIR_Q3):
        code, rep = run(["aut", "structure", "--curve", path], tmp_path)
        assert code == 0
        assert all(r["ok"] for r in rep["results"]["certificate"]["relations"])


def test_diagonal_emits_y_curve_file(tmp_path):
    code, rep = run(["quotient", "diagonal", "--curve", CLASSICAL], tmp_path)
    assert code == 0 and rep["results"]["genus"]["value"] == 2
    Y = quotient_curve_from_dict(rep["results"]["ycurve"])
    assert Y.genus() == 2
    (tmp_path / "y.json").write_text(json.dumps(rep["results"]["ycurve"]))
    code, rep2 = run(["quotient", "ycurve", "--curve", str(tmp_path / "y.json")], tmp_path, "r2.json")
    assert code == 0 and rep2["results"]["mu_fixed_places"]["value"] == 6


def test_yaut_search_line(tmp_path):
    code, rep = run(["quotient", "yaut", "--curve", YCURVE, "--search"], tmp_path)
    assert code == 0
    assert rep["results"]["summary"] == "found 12 = 4q"


def test_curve_new_output_is_a_curve_file(tmp_path):
    code, rep = run(["curve", "new", "--p", "3", "--n", "1", "--m", "1", "--seed", "9"], tmp_path)
    (tmp_path / "c.json").write_text(json.dumps(rep))
    c = curve_from_dict(rep)
    code, rep2 = run(["curve", "genus", "--curve", str(tmp_path / "c.json")], tmp_path, "g.json")
    assert code == 0 and rep2["results"]["genus"]["value"] == (c.q - 1) ** 2


def test_inline_polynomials_match_file(tmp_path):
    _, a = run(["aut", "claim", "--p", "3", "--L1", "[-1, 1]", "--L2", "[1, 1]"], tmp_path, "a.json")
    _, b = run(["aut", "claim", "--curve", PAIR_Q3], tmp_path, "b.json")
    assert a["results"] == b["results"]


def test_timestamp_only_without_deterministic(tmp_path, capsys):
    assert main(["curve", "genus", "--curve", CLASSICAL]) == 0
    assert "timestamp" in json.loads(capsys.readouterr().out)
    _, rep = run(["curve", "genus", "--curve", CLASSICAL], tmp_path)
    assert "timestamp" not in rep


# --- exit codes and messages ------------------------------------------------------------


def test_zeta_refused_above_guard(capsys):
    assert main(["curve", "zeta", "--curve", DIAG_Q9]) == 3
    assert "desk-scale limit" in capsys.readouterr().err


def test_search_field_too_small(capsys):
    assert main(["aut", "search", "--curve", PAIR_Q3, "--ambient", "1"]) == 2
    assert "GF(3^2)" in capsys.readouterr().err


def test_search_budget_refusal(capsys):
    assert main(["aut", "search", "--curve", CLASSICAL, "--ambient", "1", "--budget", "5"]) == 3


def test_zcurve_p3_rejected(capsys):
    assert main(["quotient", "zcurve", "--p", "3", "--L", "[-1, 1]"]) == 2
    assert "p ≠ 3" in capsys.readouterr().err


def test_failed_claim_exits_1(tmp_path):
    # the L1 != L2 pair over GF(9) has swap-shape automorphisms (see the acceptance suite)
    code, rep = run(["aut", "search", "--curve", PAIR_Q3, "--ambient", "2"], tmp_path)
    assert code == 1 and not rep["pass"]


def test_malformed_curve_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"format": "amcurves.curve/1", "tower": {"p": 3}, "kind": "am"}')
    assert main(["curve", "genus", "--curve", str(bad)]) == 2
    assert "L1" in capsys.readouterr().err
    bad.write_text("{not json")
    assert main(["curve", "genus", "--curve", str(bad)]) == 2
    assert "line 1" in capsys.readouterr().err


def test_missing_file_and_bad_usage(capsys):
    assert main(["curve", "genus", "--curve", "nope.json"]) == 2
    assert main(["curve", "genus"]) == 2
    assert main(["curve", "frobnicate"]) == 2
    assert main(["--version"]) == 0
