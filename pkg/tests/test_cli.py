import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from trireg.cli import main
from trireg.constructions import complete, turan
from trireg.formats import decode_graph6, encode_edge_list, encode_graph6
from trireg.graph import are_isomorphic, regularity_parameters

ROOT = Path(__file__).resolve().parent.parent
SCHEMAS = ROOT / "docs" / "schemas"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    lines = out.strip().splitlines()
    assert len(lines) == 1, "JSON mode prints a single line"
    return code, validated(json.loads(lines[0]))


def validated(obj: dict) -> dict:
    name = obj["schema"].split("/")[1]
    schema = json.loads((SCHEMAS / f"{name}.v1.json").read_text())
    jsonschema.validate(obj, schema)
    return obj


def test_every_schema_is_valid():
    files = sorted(SCHEMAS.glob("*.v1.json"))
    assert {f.name.split(".")[0] for f in files} == {
        "check", "classify", "table", "search-report", "enumerate", "construct", "error",
    }
    for f in files:
        jsonschema.Draft202012Validator.check_schema(json.loads(f.read_text()))


class TestClassify:
    def test_forbidden(self, capsys):
        code, out, _ = run(capsys, "classify", 4, 5)
        assert code == 1
        assert out.strip() == "Forbidden (TheoremDownGap)"

    def test_exists_json(self, capsys):
        code, obj = run_json(capsys, "classify", 6, 7, "--json")
        assert code == 0
        assert obj["status"] == "exists" and obj["witness"]["recipe"] == "K5 x K3"

    def test_unknown_json(self, capsys):
        code, obj = run_json(capsys, "classify", 8, 17, "--json")
        assert code == 1 and obj["status"] == "unknown" and obj["witness"] is None

    def test_curated(self, capsys):
        code, obj = run_json(capsys, "classify", 7, 14, "--json")
        assert obj["rule"] == "CuratedExhaustive"


class TestConstruct:
    def test_k5_k3(self, capsys):
        code, out, _ = run(capsys, "construct", "K5 x K3")
        assert code == 0
        g6, params = out.strip().splitlines()
        assert params == "parameters: (6, 7)"
        assert regularity_parameters(decode_graph6(g6)) == (6, 7)

    def test_json(self, capsys):
        code, obj = run_json(capsys, "construct", "T6,3", "--json")
        assert obj["parameters"] == [4, 4] and obj["vertices"] == 6

    def test_bad_recipe_json(self, capsys):
        code, obj = run_json(capsys, "construct", "K3 x", "--json")
        assert code == 1 and obj["kind"] == "InvalidRecipe" and obj["error"]

    def test_bad_recipe_text(self, capsys):
        code, out, err = run(capsys, "construct", "Q3")
        assert code == 1 and out == "" and "error" in err


class TestTable:
    def test_markdown_matches_golden_statuses(self, capsys):
        code, out, _ = run(capsys, "table", "--max-r2", 8, "--max-r3", 17)
        assert code == 0
        rows = [line for line in out.splitlines() if line.startswith("| ")]
        golden = [line for line in (ROOT / "docs" / "admissibility_golden.md").read_text().splitlines() if line.startswith("| ")]
        assert len(rows) == len(golden) == 18

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "table", "--max-r2", 4, "--max-r3", 3, "--format", "csv")
        assert out.splitlines()[0] == "r2,r3,status,rule,label,witness"
        assert len(out.splitlines()) == 1 + 3 * 3

    def test_json(self, capsys):
        code, obj = run_json(capsys, "table", "--max-r2", 5, "--max-r3", 6, "--json")
        assert len(obj["cells"]) == 4 * 6
        assert [(c["r2"], c["r3"]) for c in obj["cells"]][:3] == [(2, 1), (3, 1), (4, 1)]


class TestSearch:
    def test_octahedron(self, capsys):
        code, out, _ = run(capsys, "search", 4, 4, "--n", 6, "--seed", 1, "--workers", 1)
        report = validated(json.loads(out))
        assert code == 0 and report["status"] == "Found"
        assert are_isomorphic(decode_graph6(report["witness"]["graph6"]), turan(6, 3))
        assert report["config"]["seed"] == 1

    def test_out_file_and_determinism(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for path in (a, b):
            code, out, _ = run(capsys, "search", 5, 4, "--n", 10, "--seed", 7, "--restarts", 2,
                               "--iters", 2000, "--plateau", 300, "--workers", 1, "--out", path)
        assert a.read_bytes() == b.read_bytes()
        validated(json.loads(a.read_text()))
        assert out.split()[0] in ("Found", "Exhausted")

    def test_exhausted_exit_code(self, capsys):
        code, out, _ = run(capsys, "search", 4, 5, "--n", 8, "--restarts", 1, "--iters", 500,
                           "--plateau", 100, "--workers", 1)
        assert code == 1 and validated(json.loads(out))["status"] == "Exhausted"

    def test_scan(self, capsys):
        code, out, _ = run(capsys, "search", 4, 4, "--n-scan", "--n-max", 9, "--workers", 1)
        report = validated(json.loads(out))
        assert code == 0 and report["scanned_orders"] == [5, 6] and report["config"]["n"] == 6

    def test_domain_error_is_json(self, capsys):
        code, out, _ = run(capsys, "search", 3, 0, "--n", 5)
        assert code == 1 and validated(json.loads(out))["kind"] == "ParityError"


class TestEnumerate:
    def test_stream(self, capsys):
        code, out, _ = run(capsys, "enumerate", 6, 3, "--connected")
        lines = out.split()
        assert code == 0 and len(lines) == 2
        assert all(decode_graph6(line).degrees() == [3] * 6 for line in lines)

    def test_filters(self, capsys):
        code, out, _ = run(capsys, "enumerate", 10, 4, "--r3", 4, "--connected")
        assert all(regularity_parameters(decode_graph6(line)) == (4, 4) for line in out.split())
        code, out, _ = run(capsys, "enumerate", 8, 3, "--limit", 2)
        assert len(out.split()) == 2

    def test_json(self, capsys):
        code, obj = run_json(capsys, "enumerate", 8, 4, "--json")
        assert obj["count"] == 6 == len(obj["graphs"])

    def test_cap(self, capsys):
        code, obj = run_json(capsys, "enumerate", 13, 2, "--json")
        assert code == 1 and obj["kind"] == "DeskScaleExceeded"


class TestCheckAndConvert:
    def test_check_regular(self, capsys, tmp_path):
        path = tmp_path / "k4.el"
        path.write_text(encode_edge_list(complete(4)))
        code, out, _ = run(capsys, "check", path)
        assert code == 0
        assert "regular K3-regular: yes (r2=3, r3=3)" in out
        assert "degree histogram: 3:4" in out and "connected: yes" in out

    def test_check_irregular_json(self, capsys, tmp_path):
        path = tmp_path / "star.g6"
        from trireg.graph import from_edge_list

        path.write_text(encode_graph6(from_edge_list(4, [(0, 1), (0, 2), (0, 3)])) + "\n")
        code, obj = run_json(capsys, "check", path, "--json")
        assert code == 1 and obj["ok"] is False
        assert obj["graphs"][0]["degree_histogram"] == {"1": 3, "3": 1}

    def test_check_missing_file(self, capsys):
        code, _, err = run(capsys, "check", "/nonexistent/file")
        assert code == 1 and "error" in err

    def test_convert_involution(self, monkeypatch, capsys):
        import io

        g6 = "".join(encode_graph6(G) + "\n" for G in (complete(4), turan(6, 3), complete(1)))
        monkeypatch.setattr(sys, "stdin", io.StringIO(g6))
        code, el, _ = run(capsys, "convert", "--to", "el")
        monkeypatch.setattr(sys, "stdin", io.StringIO(el))
        code, back, _ = run(capsys, "convert", "--from", "el", "--to", "g6")
        assert back == g6
        monkeypatch.setattr(sys, "stdin", io.StringIO(back))
        code, el2, _ = run(capsys, "convert", "--to", "el")
        assert el2 == el


class TestUsage:
    @pytest.mark.parametrize("argv", [
        [],
        ["classify", "4"],
        ["classify", "4", "x"],
        ["classify", "-1", "0"],
        ["table", "--max-r2", "3"],
        ["search", "4", "4"],
        ["search", "4", "4", "--n", "6", "--n-scan"],
        ["convert", "--to", "sparse6"],
        ["frobnicate"],
    ])
    def test_usage_errors_exit_2(self, argv):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2

    def test_console_script(self):
        proc = subprocess.run([sys.executable, "-m", "trireg.cli", "classify", "4", "5"],
                              capture_output=True, text=True)
        assert proc.returncode == 1 and proc.stdout.strip() == "Forbidden (TheoremDownGap)"
        proc = subprocess.run([sys.executable, "-m", "trireg.cli", "classify"], capture_output=True, text=True)
        assert proc.returncode == 2
