import json
import subprocess
import sys
from importlib.resources import files

import jsonschema
import pytest

from cmzv.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def schema(name):
    return json.loads(files("cmzv").joinpath(f"data/{name}.schema.json").read_text())


def test_eval_exact(capsys):
    assert run(capsys, "eval", "zeta", "2", "--cutoff", "3", "--mode", "exact") == (0, "49/36\n", "")


def test_eval_cyc_float(capsys):
    code, out, _ = run(capsys, "eval", "cyc", "[(2),(1)]", "--cutoff", "1000", "--mode", "float")
    assert code == 0 and float(out) == pytest.approx(1.2020, abs=1e-4)


def test_eval_json_validates(capsys):
    code, out, _ = run(capsys, "eval", "zetastar 1,2", "-N", "20", "--format", "json")
    assert code == 0
    jsonschema.validate(json.loads(out), schema("evaluation"))


def test_eval_exit_codes(capsys):
    assert run(capsys, "eval", "zeta", "1")[0] == 3
    code, _, err = run(capsys, "eval", "zeta", "1,x")
    assert code == 2 and "cannot parse" in err
    with pytest.raises(SystemExit) as exc:
        main(["eval"])
    assert exc.value.code == 2


def test_relations_sum_formula(capsys):
    code, out, _ = run(capsys, "relations", "--family", "sum-formula", "--weight", "4")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 2
    assert [json.loads(l)["provenance"]["r"] for l in lines] == [2, 3]
    for line in lines:
        jsonschema.validate(json.loads(line), schema("relation"))


def test_relations_derivation_contains_classical(capsys):
    _, out, _ = run(capsys, "relations", "--family", "derivation", "--weight", "3")
    terms = [
        {(t["symbol"]["kind"], tuple(t["symbol"]["index"])): t["coeff"] for t in json.loads(l)["terms"]}
        for l in out.splitlines()
    ]
    assert {("mzv", (1, 2)): "1", ("mzv", (3,)): "-1"} in terms


def test_relations_unknown_family(capsys):
    assert run(capsys, "relations", "--family", "nope", "--weight", "3")[0] == 2


def test_relations_weight_above_config(capsys):
    assert run(capsys, "relations", "--family", "cyc1", "--weight", "9")[0] == 2


def test_relations_file_and_verify_round_trip(capsys, tmp_path):
    path = tmp_path / "rels.jsonl"
    assert run(capsys, "relations", "--family", "cyc2", "--weight", "4", "--out", str(path))[0] == 0
    code, out, _ = run(capsys, "verify", "--in", str(path), "--cutoff", "30", "--mode", "exact")
    assert code == 0 and out.splitlines()[-1].startswith(f"{len(path.read_text().splitlines())}/")


def test_verify_corrupted_file(capsys, tmp_path):
    path = tmp_path / "bad.jsonl"
    run(capsys, "relations", "--family", "derivation", "--weight", "3", "--out", str(path))
    rel = json.loads(path.read_text().splitlines()[0])
    rel["terms"][0]["coeff"] = "2"
    path.write_text(json.dumps(rel) + "\n")
    code, out, _ = run(capsys, "verify", "--in", str(path), "--cutoff", "1000", "--format", "json")
    report = json.loads(out)
    jsonschema.validate(report, schema("verification"))
    assert code == 1 and report["passed"] is False and abs(float(report["residual"])) > 0.1


def test_verify_bad_inputs(capsys, tmp_path):
    assert run(capsys, "verify", "--in", str(tmp_path / "missing.jsonl"))[0] == 2
    junk = tmp_path / "junk.jsonl"
    junk.write_text("not json\n")
    assert run(capsys, "verify", "--in", str(junk))[0] == 2
    assert run(capsys, "verify")[0] == 2


def test_verify_family_passes_at_weight_three(capsys):
    code, out, _ = run(capsys, "verify", "--family", "cyc1", "--weight", "3", "--cutoff", "1000", "--tol", "1e-2")
    assert code == 0, out


def test_config_from_environment(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"cutoff": 3, "format": "json"}))
    monkeypatch.setenv("CMZV_CONFIG", str(cfg))
    code, out, _ = run(capsys, "eval", "zeta", "2", "--mode", "exact")
    assert code == 0 and json.loads(out)["value"] == "49/36"
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run(capsys, "eval", "zeta", "2")[0] == 2


def test_parallel_verify_keeps_order(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"jobs": 2}))
    _, serial, _ = run(capsys, "verify", "--family", "cyc2", "--weight", "4", "--cutoff", "50")
    monkeypatch.setenv("CMZV_CONFIG", str(cfg))
    _, parallel, _ = run(capsys, "verify", "--family", "cyc2", "--weight", "4", "--cutoff", "50")
    assert serial == parallel


def test_selftest_quick_deterministic(capsys):
    a = run(capsys, "selftest", "--level", "quick", "--seed", "3")
    b = run(capsys, "selftest", "--level", "quick", "--seed", "3")
    assert a == b and a[0] == 0
    assert "two_derivation" in a[1] and "eq3" in a[1]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cmzv", "eval", "zeta", "2", "--cutoff", "3", "--mode", "exact"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout == "49/36\n"
