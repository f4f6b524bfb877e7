import json
from importlib import resources

import pytest

try:
    import jsonschema
except ImportError:  # pragma: no cover
    jsonschema = None

from tkit.cli import main, _parse_shape
from tkit.graphs import GraphError, parse_graph6
from tkit.scan import ScanSummary, resolve_jobs
import tkit.cli


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def ndjson_lines(out):
    return [json.loads(line) for line in out.strip().splitlines()]


@pytest.fixture(scope="module")
def schema():
    text = resources.files("tkit").joinpath(
        "schema/analysis_report.schema.json").read_text()
    return json.loads(text)


def validate(schema, doc):
    if jsonschema is None:
        pytest.skip("jsonschema not installed")
    jsonschema.validate(doc, schema)


class TestCheck:
    def test_example_ndjson(self, capsys, schema):
        code, out, _ = run_cli(capsys, "check", "example", "--vertex", "1")
        assert code == 0
        (doc,) = ndjson_lines(out)
        validate(schema, doc)
        assert doc["pdr"]["alpha"] == ["2", "3", "0"]
        assert doc["pdr"]["beta"] == ["0", "1", "0"]
        assert doc["endpoint1"]["ok"] is True
        assert doc["agreement"] == "not-applicable"

    def test_example_decompose(self, capsys, schema):
        code, out, _ = run_cli(capsys, "check", "example", "--vertex", "1",
                               "--decompose")
        assert code == 0
        (doc,) = ndjson_lines(out)
        validate(schema, doc)
        assert doc["agreement"] == "agree-pass"
        assert doc["decomposition"]["verdict"]["status"] == "PASS"
        assert len(doc["decomposition"]["modules"]) == 3

    def test_include_bases_validates(self, capsys, schema):
        code, out, _ = run_cli(capsys, "check", "example", "--vertex", "1",
                               "--decompose", "--include-bases")
        assert code == 0
        (doc,) = ndjson_lines(out)
        validate(schema, doc)
        assert len(doc["decomposition"]["modules"][0]["basis"][0]) == 6

    def test_default_base_for_example(self, capsys):
        code, out, _ = run_cli(capsys, "check", "example")
        assert code == 0
        (doc,) = ndjson_lines(out)
        assert doc["base"]["label"] == "1"

    def test_vacuous_leaf(self, capsys, schema):
        code, out, _ = run_cli(capsys, "check", "path:3", "--vertex", "0",
                               "--decompose")
        assert code == 0
        (doc,) = ndjson_lines(out)
        validate(schema, doc)
        assert doc["agreement"] == "vacuous"
        assert doc["endpoint1"] == {"applicable": False,
                                    "reason": "base vertex is a leaf"}

    def test_not_applicable_not_thin(self, capsys, schema, tmp_path):
        # paw graph with a pendant: not pseudo-distance-regular at vertex a
        path = tmp_path / "g.txt"
        path.write_text("a b\nb c\nc d\nd a\na e\n")
        code, out, _ = run_cli(capsys, "check", str(path), "--all-vertices",
                               "--decompose")
        assert code == 0
        docs = ndjson_lines(out)
        for doc in docs:
            validate(schema, doc)
        assert any(doc["agreement"] == "not-applicable"
                   and not doc["pdr"]["ok"] for doc in docs)

    def test_table_format(self, capsys):
        code, out, _ = run_cli(capsys, "check", "example", "--vertex", "1",
                               "--format", "table")
        assert code == 0
        assert "alpha" in out and "kappa" in out and "agreement" in out

    def test_byte_identical_reruns(self, capsys):
        _, out1, _ = run_cli(capsys, "check", "example", "--vertex", "1",
                             "--decompose", "--include-bases", "--seed", "11")
        _, out2, _ = run_cli(capsys, "check", "example", "--vertex", "1",
                             "--decompose", "--include-bases", "--seed", "11")
        assert out1 == out2

    def test_petersen_all_vertices(self, capsys):
        code, out, _ = run_cli(capsys, "check", "petersen", "--all-vertices")
        assert code == 0
        docs = ndjson_lines(out)
        assert len(docs) == 10
        assert all(doc["endpoint1"]["ok"] for doc in docs)

    def test_stdin_edge_list(self, capsys, monkeypatch):
        import io
        monkeypatch.setattr("sys.stdin", io.StringIO("a b\n"))
        code, out, _ = run_cli(capsys, "check", "-", "--vertex", "a",
                               "--decompose")
        assert code == 0
        (doc,) = ndjson_lines(out)
        assert doc["agreement"] == "vacuous"

    def test_missing_vertex_rejected(self, capsys):
        code, _, err = run_cli(capsys, "check", "petersen")
        assert code == 2 and "base vertex" in err

    def test_unknown_label_rejected(self, capsys):
        code, _, err = run_cli(capsys, "check", "example", "--vertex", "99")
        assert code == 2 and "unknown vertex label" in err

    def test_missing_file_rejected(self, capsys):
        code, _, err = run_cli(capsys, "check", "/does/not/exist",
                               "--vertex", "1")
        assert code == 2

    def test_disconnected_rejected(self, capsys, tmp_path):
        path = tmp_path / "g6.txt"
        path.write_text("a b\nc d\n")
        code, _, err = run_cli(capsys, "check", str(path), "--vertex", "a")
        assert code == 2 and "connected" in err

    def test_graph6_file_input(self, capsys, tmp_path):
        path = tmp_path / "k3.g6"
        path.write_text("Bw\n")
        code, out, _ = run_cli(capsys, "check", str(path), "--all-vertices")
        assert code == 0
        assert len(ndjson_lines(out)) == 3


class TestConstruct:
    def test_empty_fiber_edgelist(self, capsys):
        code, out, _ = run_cli(capsys, "construct", "example", "1", "empty", "2")
        assert code == 0
        lines = [ln for ln in out.splitlines() if ln and not ln.startswith("#")]
        vertices = {tok for ln in lines for tok in ln.split()}
        assert len(vertices) == 13 and "w" in vertices

    def test_complete_fiber_graph6(self, capsys):
        code, out, _ = run_cli(capsys, "construct", "example", "1",
                               "complete", "3", "--output", "graph6")
        assert code == 0
        g = parse_graph6(out.strip())
        assert g.n == 19

    def test_irregular_fiber_rejected(self, capsys):
        code, _, err = run_cli(capsys, "construct", "example", "1", "path", "3")
        assert code == 2 and "regular" in err

    def test_output_feeds_back_into_check(self, capsys):
        code, out, _ = run_cli(capsys, "construct", "example", "1", "empty", "2")
        assert code == 0
        import io, sys
        stdin_backup = sys.stdin
        try:
            sys.stdin = io.StringIO(out)
            code2, out2, _ = run_cli(capsys, "check", "-", "--vertex", "w")
            assert code2 == 0
            (doc,) = ndjson_lines(out2)
            assert doc["endpoint1"]["ok"] is True
        finally:
            sys.stdin = stdin_backup


class TestScan:
    def test_generate_4_clean(self, capsys):
        code, out, _ = run_cli(capsys, "scan", "--generate", "4", "--jobs", "1")
        assert code == 0
        summary = json.loads(out.strip().splitlines()[0])
        assert summary["mismatch_count"] == 0
        assert summary["graphs"] == 38
        assert summary["counts"]["agree-pass"] > 0

    def test_corpus_file(self, capsys, tmp_path):
        path = tmp_path / "corpus.g6"
        path.write_text(">>graph6<<Bw\nDhc\n")
        code, out, _ = run_cli(capsys, "scan", str(path), "--jobs", "1")
        assert code == 0
        summary = json.loads(out.strip().splitlines()[0])
        assert summary["graphs"] == 2

    def test_table_format(self, capsys):
        code, out, _ = run_cli(capsys, "scan", "--generate", "3", "--jobs", "1",
                               "--format", "table")
        assert code == 0
        assert "mismatches: 0" in out

    def test_exit_3_on_mismatch(self, capsys, monkeypatch):
        fake = ScanSummary()
        fake.graphs = 1
        fake.instances = 1
        fake.mismatches.append({"schema": "tkit-analysis-report/1"})
        monkeypatch.setattr(tkit.cli, "scan_corpus",
                            lambda *a, **k: fake)
        code, out, _ = run_cli(capsys, "scan", "--generate", "2")
        assert code == 3
        assert json.loads(out.strip().splitlines()[0])["mismatch_count"] == 1

    def test_generate_bound(self, capsys):
        code, _, err = run_cli(capsys, "scan", "--generate", "9")
        assert code == 2 and "n <= 7" in err

    def test_needs_source(self, capsys):
        code, _, err = run_cli(capsys, "scan")
        assert code == 2


class TestOracle:
    def test_agreeing_counts(self, capsys):
        code, out, _ = run_cli(capsys, "oracle", "example", "1", "rl", "2", "3")
        assert code == 0
        doc = json.loads(out)
        assert doc == {"shape": "rl", "family": "rl", "m": 1,
                       "walk_table": "1", "enumeration": "1", "agree": True}

    def test_empty_shape(self, capsys):
        code, out, _ = run_cli(capsys, "oracle", "example", "1", "", "2", "2")
        assert code == 0
        assert json.loads(out)["walk_table"] == "1"

    def test_ecc_bound_zero(self, capsys):
        code, out, _ = run_cli(capsys, "oracle", "example", "1", "rr", "2", "4")
        assert code == 0
        doc = json.loads(out)
        assert doc["walk_table"] == doc["enumeration"] == "0"

    def test_disagreement_exits_4(self, capsys, monkeypatch):
        monkeypatch.setattr(tkit.cli, "enumerate_walks", lambda *a, **k: 999)
        code, out, _ = run_cli(capsys, "oracle", "example", "1", "rl", "2", "3")
        assert code == 4

    def test_bad_shape_rejected(self, capsys):
        code, _, err = run_cli(capsys, "oracle", "example", "1", "rlr", "2", "3")
        assert code == 2

    def test_parse_shape(self):
        assert _parse_shape("") == ("r", 0)
        assert _parse_shape("rrr") == ("r", 3)
        assert _parse_shape("rrl") == ("rl", 2)
        assert _parse_shape("lrr") == ("lr", 2)
        assert _parse_shape("rf") == ("rf", 1)
        assert _parse_shape("l") == ("rl", 0)
        with pytest.raises(GraphError):
            _parse_shape("rlf")


class TestPartition:
    def test_example_cells(self, capsys):
        code, out, _ = run_cli(capsys, "partition", "example", "1", "2")
        assert code == 0
        doc = json.loads(out)
        assert doc["cells"]["1,0"] == ["2"]
        assert doc["cells"]["1,1"] == ["3"]
        assert doc["cells"]["2,1"] == ["4", "5"]
        assert doc["cells"]["2,2"] == ["6"]

    def test_non_edge_rejected(self, capsys):
        code, _, err = run_cli(capsys, "partition", "example", "1", "4")
        assert code == 2 and "not adjacent" in err


class TestJobsResolution:
    def test_explicit_wins(self, monkeypatch):
        monkeypatch.setenv("TK_JOBS", "5")
        assert resolve_jobs(3) == 3

    def test_env_fallback(self, monkeypatch):
        monkeypatch.setenv("TK_JOBS", "5")
        assert resolve_jobs(None) == 5

    def test_bad_env_ignored(self, monkeypatch):
        monkeypatch.setenv("TK_JOBS", "zero")
        assert resolve_jobs(None) >= 1
