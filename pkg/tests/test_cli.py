import json
import os

from flexcheck.cli import main, round12, schema_path


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verdict_exit_codes(capsys):
    code, out, _ = run_cli(capsys, "verdict", "--catalog", "su21-cline")
    assert code == 10 and "rigid" in out
    code, out, _ = run_cli(capsys, "verdict", "--catalog", "so41-rplane")
    assert code == 0 and "flexible" in out


def test_verdict_inconclusive_exit_code(tmp_path, capsys):
    doc = {
        "group": {"family": "sl", "params": [2]},
        "genus": 2,
        "representation": {
            "source": "matrices",
            "field": "R",
            "generators": [
                [[[1.0], [t]], [[0.0], [1.0]]] for t in (1.0, 2.0, 3.0, 5.0)
            ],
        },
    }
    path = tmp_path / "parabolic.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run_cli(capsys, "verdict", "--input", str(path))
    assert code == 11 and "inconclusive" in out


def test_parse_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, _, err = run_cli(capsys, "verdict", "--input", str(path))
    assert code == 2 and "parse error" in err
    code, _, err = run_cli(capsys, "verdict", "--catalog", "nope-nope")
    assert code == 2


def test_malformed_matrix_entry(tmp_path, capsys):
    doc = {
        "group": {"family": "sl", "params": [2]},
        "genus": 2,
        "representation": {
            "source": "matrices",
            "field": "R",
            "generators": [[[["x"], [0.0]], [[0.0], [1.0]]]] * 4,
        },
    }
    path = tmp_path / "bad_entry.json"
    path.write_text(json.dumps(doc))
    code, _, err = run_cli(capsys, "verdict", "--input", str(path))
    assert code == 2 and "generators[0]" in err


def test_decompose_output(capsys):
    code, out, _ = run_cli(capsys, "decompose", "--catalog", "su21-cline", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["torus_dim"] == 1 and doc["g0_dim"] == 4
    assert len(doc["roots"]) == 1
    assert doc["roots"][0]["real_dim"] == 4


def test_decompose_no_roots(capsys):
    code, out, _ = run_cli(capsys, "decompose", "--catalog", "su21-rplane")
    assert code == 0 and "no roots" in out


def test_toledo_output(capsys):
    code, out, _ = run_cli(capsys, "toledo", "--catalog", "su21-cline", "--format", "json")
    doc = json.loads(out)
    assert doc["roots"][0]["toledo"] in (2, -2)
    assert doc["roots"][0]["milnor_wood_slack"] == 0


def test_balanced_output(capsys):
    code, out, _ = run_cli(capsys, "balanced", "--catalog", "so41-rplane", "--format", "json")
    doc = json.loads(out)
    assert doc["balanced"] is True
    code, out, _ = run_cli(capsys, "balanced", "--catalog", "su21-cline", "--format", "json")
    doc = json.loads(out)
    assert doc["balanced"] is False
    assert doc["certificate"]["kind"] == "separating_functional"


def test_json_roundtrip_byte_identical(capsys):
    code, out, _ = run_cli(capsys, "verdict", "--catalog", "so41-rplane", "--format", "json")
    doc = json.loads(out)
    again = json.dumps(doc, indent=2) + "\n"
    assert again == out


def test_same_seed_same_bytes(capsys):
    code, out1, _ = run_cli(capsys, "verdict", "--catalog", "sp21-cline", "--format", "json", "--seed", "7")
    code, out2, _ = run_cli(capsys, "verdict", "--catalog", "sp21-cline", "--format", "json", "--seed", "7")
    assert out1 == out2
    doc = json.loads(out1)
    assert doc["provenance"]["seed"] == 7
    assert doc["provenance"]["version"]


def test_env_seed(capsys, monkeypatch):
    monkeypatch.setenv("FLEXCHECK_SEED", "42")
    code, out, _ = run_cli(capsys, "decompose", "--catalog", "su21-rplane", "--format", "json")
    doc = json.loads(out)
    assert doc["provenance"]["seed"] == 42


def test_catalog_listing(capsys):
    code, out, _ = run_cli(capsys, "catalog")
    assert code == 0
    assert "su21-cline" in out and "rigid" in out
    assert "documented, not computed" in out
    code, out, _ = run_cli(capsys, "catalog", "--format", "json")
    doc = json.loads(out)
    assert any(row["name"] == "sp31-cline" for row in doc["cases"])


def test_explicit_matrix_input_matches_catalog(tmp_path, capsys):
    from flexcheck.surface import fuchsian_genus2
    rep = fuchsian_genus2()
    gens = [[[[round12(float(g[i, j]))] for j in range(2)] for i in range(2)]
            for g in rep.images]
    doc = {
        "group": {"family": "sl", "params": [2]},
        "genus": 2,
        "representation": {"source": "matrices", "field": "R", "generators": gens},
    }
    path = tmp_path / "fuchsian.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run_cli(capsys, "cohomology", "--input", str(path), "--format", "json")
    assert code == 0
    parsed = json.loads(out)
    assert parsed["adjoint"]["z1"] == 9 and parsed["adjoint"]["h0"] == 0


def test_schema_ships():
    assert os.path.exists(schema_path())
    with open(schema_path()) as fh:
        schema = json.load(fh)
    assert schema["title"].startswith("flexcheck")


def test_numerical_abort_exit_code(tmp_path, capsys):
    # valid JSON and sizes, but the relator fails: exit 3
    doc = {
        "group": {"family": "sl", "params": [2]},
        "genus": 2,
        "representation": {
            "source": "matrices",
            "field": "R",
            "generators": [
                [[[2.0], [0.0]], [[0.0], [0.5]]],
                [[[1.0], [1.0]], [[0.0], [1.0]]],
                [[[1.0], [0.0]], [[0.0], [1.0]]],
                [[[1.0], [0.0]], [[1.0], [1.0]]],
            ],
        },
    }
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(doc))
    code, _, err = run_cli(capsys, "verdict", "--input", str(path))
    assert code == 3 and "numerical abort" in err


def test_standard_module_toledo(tmp_path, capsys):
    from flexcheck.surface import fuchsian_genus2
    rep = fuchsian_genus2()
    gens = [[[[round12(float(g[i, j]))] for j in range(2)] for i in range(2)]
            for g in rep.images]
    doc = {"group": {"family": "sl", "params": [2]}, "genus": 2,
           "representation": {"source": "matrices", "field": "R", "generators": gens}}
    path = tmp_path / "fuchsian.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run_cli(capsys, "toledo", "--input", str(path),
                           "--standard-module", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert abs(doc["toledo"]) == 1           # Milnor: |T| = genus - 1
    assert doc["milnor_wood_slack"] == 0
