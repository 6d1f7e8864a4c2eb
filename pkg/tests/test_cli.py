import json

import pytest

from locco.cli import (bundled_model_names, build_parser, load_bundled_model,
                       run)


def model_path(name):
    import locco.models
    from importlib import resources
    return str(resources.files("locco.models").joinpath(name + ".json"))


def run_to_file(tmp_path, argv, name="out.json"):
    out = tmp_path / name
    code = run(["--output", str(out)] + argv)
    doc = json.loads(out.read_text()) if out.exists() else None
    return code, doc, out.read_bytes() if out.exists() else b""


def test_examples_catalog(tmp_path):
    code, doc, _ = run_to_file(tmp_path, ["examples"])
    assert code == 0
    names = {entry["name"] for entry in doc["result"]["models"]}
    assert {"interval", "hexagon", "triangle", "projective_plane"} <= names


def test_cohomology_command(tmp_path):
    code, doc, _ = run_to_file(
        tmp_path, ["cohomology", model_path("hexagon"), "--complex", "cech",
                   "--coeff", "Q", "--max-degree", "1"])
    assert code == 0
    prof = doc["result"]["profile"]
    assert prof["0"]["rank"] == 1 and prof["1"]["rank"] == 1


def test_cohomology_integer_torsion(tmp_path):
    code, doc, _ = run_to_file(
        tmp_path, ["cohomology", model_path("projective_plane"),
                   "--complex", "simplicial", "--coeff", "Z", "--max-degree", "2"])
    assert code == 0
    assert doc["result"]["profile"]["2"] == {"rank": 0, "torsion": [2]}


def test_verify_contraction_passes(tmp_path):
    code, doc, _ = run_to_file(
        tmp_path, ["verify-contraction", model_path("interval"),
                   "--family", "first-hit", "--coeff", "Q", "--pq", "1,1"])
    assert code == 0
    assert doc["passed"] is True
    code2, doc2, _ = run_to_file(
        tmp_path, ["verify-contraction", model_path("hexagon"),
                   "--family", "random:5", "--coeff", "Q", "--pq", "0,1"])
    assert code2 == 0 and doc2["passed"] is True


def test_compare_command(tmp_path):
    code, doc, _ = run_to_file(
        tmp_path, ["compare", model_path("hexagon"), "--coeff", "Q",
                   "--max-degree", "1", "--lambda"])
    assert code == 0
    assert doc["result"]["comparison"]["isomorphic"] is True
    assert doc["result"]["restriction"]["induced_ranks"] == [1, 1]


def test_compare_scan(tmp_path):
    code, doc, _ = run_to_file(
        tmp_path, ["compare", "--scan", "m=12,k=1..2", "--coeff", "Q"])
    assert code == 0
    scans = doc["result"]["scan"]
    assert len(scans) == 2
    assert all(rep["extras"]["stabilized"] for rep in scans)


def test_sigma_check_and_eval(tmp_path):
    code, doc, _ = run_to_file(
        tmp_path, ["sigma-check", "--carrier", "Rd:2", "--n", "3",
                   "--samples", "60"])
    assert code == 0 and doc["passed"] is True
    payload = tmp_path / "fill.json"
    payload.write_text(json.dumps({
        "n": 2,
        "vertices": [[1, 0], [0, 1], [0, 0]],
        "weights": [0.25, 0.25, 0.5],
    }))
    code, doc, _ = run_to_file(tmp_path, ["sigma-eval", "--input", str(payload)])
    assert code == 0
    assert doc["result"]["value"] == pytest.approx([0.25, 0.25], abs=1e-12)


def test_pou_check_constructions(tmp_path):
    for construction in ("rescue", "product:q=1", "ball:eps=0.25"):
        code, doc, _ = run_to_file(
            tmp_path, ["pou-check", "--domain", "circle:1500",
                       "--cover", "arcs:3", "--construction", construction])
        assert code == 0, construction
        assert doc["passed"] is True
        assert doc["result"]["report"]["max_sum_deviation"] <= 1e-9


def test_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    code, doc, _ = run_to_file(tmp_path, ["cohomology", str(bad)])
    assert code == 2
    assert doc["error"]["kind"] == "parse"
    assert "line" in doc["error"]


def test_model_error_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"points": [0, 1], "cover": []}))
    code, doc, _ = run_to_file(tmp_path, ["cohomology", str(bad)])
    assert code == 2


def test_budget_exit_code(tmp_path, monkeypatch):
    monkeypatch.setenv("LOCCO_BUDGET", "5")
    code, doc, _ = run_to_file(
        tmp_path, ["cohomology", model_path("hexagon"), "--max-degree", "2"])
    assert code == 3
    assert doc["error"]["kind"] == "budget"


def test_failing_check_exit_code(tmp_path):
    # a family that is not a partition of unity breaks the homotopy identity
    fam = {"level": 0, "unity": False,
           "weights": [{"index": 0, "tuple": [0], "weight": 2}]}
    fam_path = tmp_path / "fam.json"
    fam_path.write_text(json.dumps(fam))
    code, doc, _ = run_to_file(
        tmp_path, ["verify-contraction", model_path("interval"),
                   "--family", f"file:{fam_path}", "--coeff", "Q", "--pq", "1,0"])
    assert code == 1
    assert doc["passed"] is False
    assert "counterexample" in doc["result"]


def test_report_determinism(tmp_path):
    argv = ["compare", model_path("hexagon"), "--coeff", "Q",
            "--max-degree", "1", "--lambda"]
    _, _, blob_a = run_to_file(tmp_path, argv, name="a.json")
    _, _, blob_b = run_to_file(tmp_path, argv, name="b.json")
    assert blob_a == blob_b


def test_parser_covers_all_subcommands():
    parser = build_parser()
    text = parser.format_help()
    for sub in ("cohomology", "compare", "verify-contraction", "sigma-check",
                "sigma-eval", "pou-check", "examples"):
        assert sub in text
