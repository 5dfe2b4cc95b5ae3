import json
from pathlib import Path

import pytest

from ssckit.cli import main

FIXTURES = Path(__file__).resolve().parent.parent / "src" / "ssckit" / "fixtures"


def run(capsys, *args):
    code = main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_laplacian_text(capsys):
    code, out, _ = run(capsys, "laplacian", "--input", str(FIXTURES / "diamond.json"))
    assert code == 0
    assert "Laplacian L (4x4)" in out and "-1" in out


def test_laplacian_json(capsys):
    code, out, _ = run(capsys, "laplacian", "--input", str(FIXTURES / "diamond.json"),
                       "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["laplacian"][0] == [2, -1, -1, 0]
    assert [row[0] for row in doc["input_matrix"]] == [1, 0, 0, 0]


def test_laplacian_missing_file(capsys):
    code, _, err = run(capsys, "laplacian", "--input", "/nonexistent/net.json")
    assert code == 2 and "parse error" in err


def test_laplacian_malformed_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    code, _, err = run(capsys, "laplacian", "--input", str(bad))
    assert code == 2


def test_laplacian_rejects_pattern(capsys):
    code, _, err = run(capsys, "laplacian", "--input",
                       str(FIXTURES / "diamond_pattern.json"))
    assert code == 3 and "concrete graph" in err


def test_ep_verify_partition(capsys):
    code, out, _ = run(capsys, "ep", "--input", str(FIXTURES / "diamond.json"),
                       "--partition", "[[1],[2,3],[4]]", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] is True and doc["violations"] == []


def test_ep_coarsest_default(capsys):
    code, out, _ = run(capsys, "ep", "--input", str(FIXTURES / "diamond.json"),
                       "--format", "json")
    assert code == 0
    assert json.loads(out)["coarsest_ep"] == [[1], [2, 3], [4]]


def test_ep_bad_partition_exit3(capsys):
    code, _, err = run(capsys, "ep", "--input", str(FIXTURES / "diamond.json"),
                       "--partition", "[[1,2],[2,3,4]]")
    assert code == 3
    code, _, err = run(capsys, "ep", "--input", str(FIXTURES / "diamond.json"),
                       "--partition", "[[1],[2,3]]")
    assert code == 3
    code, _, err = run(capsys, "ep", "--input", str(FIXTURES / "diamond.json"),
                       "--partition", "not json")
    assert code == 3
    code, _, err = run(capsys, "ep", "--input", str(FIXTURES / "diamond.json"),
                       "--partition", "[[1.5],[2,3],[4]]")
    assert code == 3


def test_ep_reports_violations(tmp_path, capsys):
    doc = {
        "n": 4, "d": 1, "leaders": [1],
        "edges": [
            {"i": 1, "j": 2, "weight": [[1]]},
            {"i": 1, "j": 3, "weight": [[2]]},
            {"i": 2, "j": 4, "weight": [[1]]},
            {"i": 3, "j": 4, "weight": [[1]]},
        ],
    }
    path = tmp_path / "skewed.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "ep", "--input", str(path),
                       "--partition", "[[1],[2,3],[4]]", "--format", "json")
    assert code == 0
    parsed = json.loads(out)
    assert parsed["verdict"] is False and parsed["violations"]


def test_quotient_command(capsys):
    code, out, _ = run(capsys, "quotient", "--input", str(FIXTURES / "diamond.json"),
                       "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["quotient_laplacian"] == [[2, -2, 0], [-1, 2, -1], [0, -2, 2]]
    weights = {(e["i"], e["j"]): e["weight"][0][0] for e in doc["edges"]}
    assert weights == {(1, 2): 2, (2, 1): 1, (2, 3): 1, (3, 2): 2}


def test_quotient_non_equitable_exit3(tmp_path, capsys):
    doc = {
        "n": 4, "d": 1, "leaders": [1],
        "edges": [
            {"i": 1, "j": 2, "weight": [[1]]},
            {"i": 1, "j": 3, "weight": [[2]]},
            {"i": 2, "j": 4, "weight": [[1]]},
            {"i": 3, "j": 4, "weight": [[1]]},
        ],
    }
    path = tmp_path / "skewed.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "quotient", "--input", str(path),
                       "--partition", "[[1],[2,3],[4]]")
    assert code == 3 and "not equitable" in err


def test_bound_command_json(capsys):
    code, out, _ = run(capsys, "bound", "--input",
                       str(FIXTURES / "diamond_pattern.json"),
                       "--samples", "8", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["k_min"] == 3 and doc["bound"] == 3
    assert doc["verdicts"]["strongly_structurally_controllable"] is False
    assert doc["verdicts"]["max_controllable_dimension"] == 3
    assert doc["seed"] == 0 and doc["backend"] == "exact"


def test_bound_requires_pattern(capsys):
    code, _, err = run(capsys, "bound", "--input", str(FIXTURES / "diamond.json"))
    assert code == 3 and "weight pattern" in err


def test_bound_cap_exit4(tmp_path, capsys):
    n = 20
    doc = {
        "n": n, "d": 1, "leaders": [1],
        "edges": [{"i": i, "j": i + 1} for i in range(1, n)],
        "variables": [],
    }
    path = tmp_path / "long.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "bound", "--input", str(path))
    assert code == 4 and "--cap" in err


def test_bound_sampling_failure_exit5(tmp_path, capsys):
    # sign constraints force a24 + a25 = 0 with both positive: unsamplable
    doc = {
        "n": 5, "d": 1, "directed": True, "leaders": [1],
        "edges": [{"i": 2, "j": 1}, {"i": 3, "j": 1}, {"i": 2, "j": 4}, {"i": 2, "j": 5}],
        "constraints": [
            {"kind": "sign", "args": ["w2_1", "+"]},
            {"kind": "sign", "args": ["w3_1", "+"]},
            {"kind": "sign", "args": ["w2_4", "+"]},
            {"kind": "sign", "args": ["w2_5", "+"]},
        ],
    }
    path = tmp_path / "conflicted.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "bound", "--input", str(path), "--samples", "2")
    assert code == 5 and "internal error" in err


def test_bound_json_byte_identical(capsys):
    args = ["bound", "--input", str(FIXTURES / "star4_pattern.json"),
            "--samples", "6", "--seed", "9", "--format", "json"]
    code1 = main(args)
    out1 = capsys.readouterr().out
    code2 = main(args)
    out2 = capsys.readouterr().out
    assert code1 == code2 == 0
    assert out1 == out2


def test_bound_mode_recorded(tmp_path, capsys):
    doc = {
        "n": 3, "d": 1, "leaders": [1],
        "edges": [{"i": 1, "j": 2}, {"i": 2, "j": 3}],
        "constraints": [
            {"kind": "sign", "args": ["w1_2", "+"]},
            {"kind": "sign", "args": ["w2_3", "+"]},
        ],
    }
    path = tmp_path / "signed.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "bound", "--input", str(path), "--mode", "strict",
                       "--samples", "2", "--format", "json")
    assert code == 0
    parsed = json.loads(out)
    assert parsed["mode"] == "strict" and parsed["mode_requested"] == "strict"
    # without sign constraints the same request degrades to cancellative
    code, out, _ = run(capsys, "bound", "--input",
                       str(FIXTURES / "path3_pattern.json"), "--mode", "strict",
                       "--samples", "2", "--format", "json")
    assert code == 0
    parsed = json.loads(out)
    assert parsed["mode"] == "cancellative" and parsed["mode_requested"] == "strict"


def test_backend_env_var(capsys, monkeypatch):
    monkeypatch.setenv("SSCKIT_BACKEND", "float")
    code, out, _ = run(capsys, "bound", "--input",
                       str(FIXTURES / "star4_pattern.json"),
                       "--samples", "4", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["backend"] == "float" and doc["certified"] is False


def test_dual_command(capsys):
    code, out, _ = run(capsys, "dual", "--input",
                       str(FIXTURES / "directed_path3.json"), "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["self_dual"] is False
    assert doc["reversal"]["holds"] is False
    rows = {(m["block_row"], m["block_col"]) for m in doc["reversal"]["mismatches"]}
    assert rows == {(1, 1), (3, 3)}


def test_dual_undirected_self_dual(capsys):
    code, out, _ = run(capsys, "dual", "--input", str(FIXTURES / "diamond.json"),
                       "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["self_dual"] is True and doc["reversal"]["holds"] is True
    assert doc["observability_rank"] == doc["dual_controllable_dim"] == 3


def test_corpus_command(capsys):
    code, out, _ = run(capsys, "corpus", "--samples", "6")
    assert code == 0
    assert "FAIL" not in out and "PASS" in out


def test_corpus_json(capsys):
    code, out, _ = run(capsys, "corpus", "--samples", "6", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] is True and len(doc["results"]) >= 10


def test_bad_flag_values_exit3(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bound", "--input", "x.json", "--mode", "sloppy"])
    assert exc.value.code == 3
    code, _, _ = run(capsys, "bound", "--input",
                     str(FIXTURES / "star4_pattern.json"), "--samples", "0")
    assert code == 3
    code, _, _ = run(capsys, "bound", "--input",
                     str(FIXTURES / "star4_pattern.json"), "--cap", "0")
    assert code == 3


def test_missing_input_exit3(capsys):
    code, _, err = run(capsys, "laplacian")
    assert code == 3 and "--input" in err
