import json

import pytest

from superpair.cli import main
from superpair.document import fixture_names


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


PASSING = ["matrix-3-2", "twisted-z2", "hecke-2", "hecke-3", "tensor-matrix-hecke", "tensor-twisted-matrix",
           "laurent-8", "pair-laurent-8", "l4-laurent", "l5-kdv"]
FAILING = ["corrupt-constant", "corrupt-cocycle", "corrupt-laurent", "pair-incompatible",
           "l4-noncentral-kappa", "l5-flipped-sign"]


def test_fixtures_are_listed():
    names = set(fixture_names())
    assert set(PASSING) | set(FAILING) <= names


@pytest.mark.parametrize("name", PASSING)
def test_verify_passes(name, capsys):
    code, out, _ = run(["verify", f"builtin:{name}", "--quiet"], capsys)
    assert code == 0, out
    assert out.startswith("PASS")


@pytest.mark.parametrize("name", FAILING)
def test_verify_fails_with_witness(name, tmp_path, capsys):
    report = tmp_path / "r.json"
    code, out, _ = run(["verify", f"builtin:{name}", "--report", str(report)], capsys)
    assert code == 1
    data = json.loads(report.read_text())
    assert data["exit"] == 1
    assert data["report"]["status"] == "fail"
    bad = [c for c in data["report"]["checks"] if c["status"] != "pass"]
    assert bad and all(c.get("witness") is not None for c in bad)


def test_malformed_documents_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert run(["verify", str(p)], capsys)[0] == 2
    float_delta = {"type": "field", "perturb": {"a": "1", "b": "1", "c": "1", "delta": 0.5}}
    p.write_text(json.dumps({"kind": "algebra", "algebra": float_delta}))
    assert run(["verify", str(p)], capsys)[0] == 2
    assert run(["verify", str(tmp_path / "missing.json")], capsys)[0] == 2
    assert run(["superpair", "builtin:l5-kdv"], capsys)[0] == 2


def test_reports_are_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["superpair", "builtin:l4-laurent", "--report", str(a)], capsys)
    run(["superpair", "builtin:l4-laurent", "--report", str(b)], capsys)
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text())
    assert data["command"] == "superpair" and data["input"] == "l4-laurent"
    assert len(data["digest"]) == 64


def test_report_directory_from_environment(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("SUPERPAIR_REPORT_DIR", str(tmp_path))
    assert run(["verify", "builtin:hecke-2", "--quiet"], capsys)[0] == 0
    assert (tmp_path / "hecke-2.verify.json").exists()


def test_timings_only_when_requested(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["verify", "builtin:hecke-2", "--report", str(a)], capsys)
    run(["verify", "builtin:hecke-2", "--report", str(b), "--timings"], capsys)
    assert "seconds" not in a.read_text()
    assert "seconds" in b.read_text()


def test_build_round_trip(tmp_path, capsys):
    out = tmp_path / "poly.json"
    assert run(["build", "builtin:pair-laurent-8", "--output", str(out)], capsys)[0] == 0
    doc = json.loads(out.read_text())
    assert doc["kind"] == "polarized"
    assert run(["verify", str(out), "--quiet"], capsys)[0] == 0


def test_build_refuses_incompatible_pair(capsys):
    code, _, err = run(["build", "builtin:pair-incompatible"], capsys)
    assert code == 1
    assert "witness" in err


def test_empty_lambda_list_uses_defaults(tmp_path, capsys):
    r = tmp_path / "r.json"
    assert run(["superpair", "builtin:l4-laurent", "--lambdas", "", "--samples", "3", "--report", str(r)],
               capsys)[0] == 0
    assert json.loads(r.read_text())["report"]["extra"]["lambdas"] == ["0", "1", "-1", "2"]


def test_hierarchy_flags(capsys):
    code, out, _ = run(["hierarchy", "builtin:l5-kdv", "--flows", "3,1", "--samples", "2"], capsys)
    assert code == 0
    assert "conserved[m=3,n=1]" in out
    code, out, _ = run(["hierarchy", "builtin:l5-kdv", "--flows", "3,3", "--depth", "2", "--samples", "2"], capsys)
    assert code == 1
    assert "FloorContamination" in out
    assert run(["hierarchy", "builtin:l5-kdv", "--flows", "x"], capsys)[0] == 2
