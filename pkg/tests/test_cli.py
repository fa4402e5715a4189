import json

import pytest

from heirec.cli import main


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    persons = root / "persons.csv"
    foods = root / "foods.csv"
    index = root / "index"
    rc = main(["gen-synthetic", "--n", "40", "--out", str(persons),
               "--foods-out", str(foods), "--n-foods", "60", "--seed", "42"])
    assert rc == 0
    rc = main(["build-index", "--foods", str(foods), "--out", str(index)])
    assert rc == 0
    return root, persons, foods, index


def run_json(capsys, argv) -> dict:
    rc = main(argv)
    out = capsys.readouterr().out
    assert rc == 0, out
    # last JSON document on stdout
    start = out.index("{")
    return json.loads(out[start:])


class TestCliFlow:
    def test_ingest_reports_counts(self, workspace, capsys):
        _, persons, _, _ = workspace
        body = run_json(capsys, ["ingest", "--persons", str(persons)])
        assert body["kept"] == 40
        assert body["dropped_missing_profile"] == 0

    def test_score_prints_components(self, workspace, capsys):
        _, persons, _, _ = workspace
        body = run_json(capsys, ["score", "--persons", str(persons), "--seqn", "1"])
        assert body["seqn"] == 1
        assert len(body["components"]) == 13

    def test_score_unknown_seqn_fails(self, workspace, capsys):
        _, persons, _, _ = workspace
        assert main(["score", "--persons", str(persons), "--seqn", "4040"]) == 2

    def test_recommend_payload(self, workspace, capsys):
        _, persons, _, index = workspace
        body = run_json(capsys, ["recommend", "--persons", str(persons),
                                 "--index", str(index), "--seqn", "2", "--k", "4"])
        assert body["explainer"] == "fallback"
        assert body["plan"]["final_total"] >= body["plan"]["baseline_total"]

    def test_whatif(self, workspace, capsys):
        _, persons, foods, index = workspace
        body = run_json(capsys, ["whatif", "--persons", str(persons),
                                 "--index", str(index), "--seqn", "2",
                                 "--food-code", "10001", "--portion", "1.0"])
        assert "delta_h" in body
        assert len(body["component_deltas"]) == 13

    def test_simulate_writes_bundle(self, workspace, capsys):
        root, persons, _, index = workspace
        out = root / "report.json"
        rc = main(["--seed", "7", "simulate", "--persons", str(persons),
                   "--index", str(index), "--out", str(out)])
        captured = capsys.readouterr().out
        assert rc == 0
        assert "25th" in captured and "50th" in captured and "75th" in captured
        report = json.loads(out.read_text())
        assert report["n_test"] == 8  # 40 users at the default 0.8 split
        assert (root / "report_table.txt").exists()
        assert (root / "report_users.csv").exists()
        assert (root / "report_histogram.png").exists()
        assert (root / "report_quantiles.png").exists()

    def test_parse_error_exit_code(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("seqn,day\n1,1\n")
        assert main(["ingest", "--persons", str(bad)]) == 2

    def test_build_index_external_embeddings(self, workspace, tmp_path, capsys):
        import numpy as np

        from heirec.corpus import load_index, write_vectors

        _, _, foods, _ = workspace
        n = 60
        rng = np.random.default_rng(0)
        mat = rng.standard_normal((n, 16)).astype(np.float32)
        ext = tmp_path / "external.bin"
        write_vectors(ext, mat)
        out = tmp_path / "extindex"
        body = run_json(capsys, ["build-index", "--foods", str(foods),
                                 "--out", str(out), "--embeddings", str(ext)])
        assert body["scheme"] == "external"
        assert body["dim"] == 16
        loaded = load_index(out)
        norms = np.linalg.norm(loaded.vectors.astype(np.float64), axis=1)
        assert np.all(np.abs(norms - 1.0) < 1e-6)
