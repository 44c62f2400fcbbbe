import json
from pathlib import Path

import pytest

from upsilon.cli import main
from upsilon.facts import load_report

FAMILY = Path(__file__).resolve().parents[1] / "demos" / "families" / "wh_cables.json"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_derive_whitehead_double(capsys):
    code, out, _ = run(capsys, "derive", "wh+(RHT)", "--facts", "@base")
    assert code == 0
    assert "tau: 1" in out and "Upsilon: -1+|1-t|" in out
    assert "trace:" in out


def test_derive_cable_json(capsys):
    code, out, _ = run(capsys, "derive", "cable(wh+(RHT),2,1)", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["kind"] == "facts"
    assert doc["facts"]["tau"] == 2
    assert doc["facts"]["first_singularity"] == {"lo": "1/2", "hi": "2/3", "lo_closed": True, "hi_closed": True}
    assert load_report(out).tau == 2


def test_derive_zero(capsys):
    code, out, _ = run(capsys, "derive", "T(2,3) # -T(2,3)")
    assert "Upsilon: 0" in out


def test_json_output_is_deterministic(capsys):
    _, a, _ = run(capsys, "derive", "mazur(cable(K0, 3, 1))", "--json")
    _, b, _ = run(capsys, "derive", "mazur(cable(K0, 3, 1))", "--json")
    assert a == b


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--gc", "2")
    assert code == 0 and out.startswith("13 profiles")
    code, out, _ = run(capsys, "enumerate", "--gc", "2", "--tau", "1", "--json")
    doc = json.loads(out)
    assert doc["count"] == 2 and len(doc["profiles"]) == 2


def test_indep_family_file(capsys):
    code, out, _ = run(capsys, "indep", str(FAMILY))
    assert code == 0 and out.startswith("verdict: independent")


def test_certify_summand_family_file(capsys):
    code, out, _ = run(capsys, "certify-summand", str(FAMILY), "--json")
    assert code == 0
    rep = load_report(out)
    assert rep.verdict == "summand_basis"


def test_generated_families(capsys):
    code, out, _ = run(capsys, "indep", "--cables-of", "wh+(RHT)", "--base", "2", "--depth", "6")
    assert code == 0
    code, out, _ = run(capsys, "indep", "--iterate", "wh+(RHT)", "--depth", "2", "--p", "4,9")
    assert code == 0
    code, out, _ = run(capsys, "certify-summand", "--cables-of", "wh+(RHT)", "--depth", "4")
    assert code == 0 and "summand_basis" in out


def test_inconclusive_exit_code(tmp_path, capsys):
    fam = tmp_path / "fam.json"
    fam.write_text(json.dumps({"members": ["T(3,4)", "mazur(T(3,4))"]}))
    code, out, _ = run(capsys, "indep", str(fam))
    assert code == 2 and "inconclusive" in out


def test_declared_certificates(tmp_path, capsys):
    fam = tmp_path / "fam.json"
    fam.write_text(json.dumps({
        "members": ["J", "cable(J, 2, 1)"],
        "facts": {"generators": [{"name": "J", "tau": 0}]},
        "certificates": [{"knot": "J", "t": "2/3"}, {"knot": "cable(J,2,1)", "t": {"lo": "0/1", "hi": "1/2",
                                                                               "lo_closed": False,
                                                                               "hi_closed": False}}],
    }))
    code, out, err = run(capsys, "indep", str(fam))
    assert code == 0, err


def test_validate(tmp_path, capsys):
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"upsilon": {"anchor": "0/1", "pieces": [["0/1", -1], ["1/1", 1]]}, "tau": 1}))
    code, out, _ = run(capsys, "validate", str(good))
    assert code == 0 and "validated" in out
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"anchor": "0/1", "pieces": [["0/1", -1], ["1/2", 0], ["3/2", 1]]}))
    code, out, _ = run(capsys, "validate", str(bad), "--json")
    assert code == 2 and json.loads(out)["verdict"] == "rejected"


def test_errors_exit_one(tmp_path, capsys):
    code, _, err = run(capsys, "derive", "cable(K0, 4, 2)")
    assert code == 1 and "error" in err
    code, _, err = run(capsys, "derive", "nobody")
    assert code == 1
    bad = tmp_path / "facts.json"
    bad.write_text("[{\"name\": \"K\", \"sigma\": 3}]")
    code, _, err = run(capsys, "derive", "K", "--facts", str(bad))
    assert code == 1 and "signature" in err


def test_env_var_facts(tmp_path, monkeypatch, capsys):
    f = tmp_path / "facts.json"
    f.write_text(json.dumps([{"name": "Q", "tau": 2, "g4": 2}]))
    monkeypatch.setenv("UPSILON_FACTS", str(f))
    code, out, _ = run(capsys, "derive", "Q")
    assert code == 0 and "tau: 2" in out


def test_missing_subcommand():
    with pytest.raises(SystemExit):
        main([])
