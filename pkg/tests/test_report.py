import csv

from heirec.evaluation import evaluate_population
from heirec.report import (
    format_quantile_table,
    render_histogram_figure,
    render_quantile_figure,
    write_report_bundle,
    write_user_outcomes_csv,
)


def _report(fixture_index, cfg, population_small):
    return evaluate_population(population_small, fixture_index, cfg, seed=3)


class TestQuantileTable:
    def test_exactly_three_data_rows(self, fixture_index, cfg, population_small):
        report, _ = _report(fixture_index, cfg, population_small)
        table = format_quantile_table(report)
        lines = [ln for ln in table.splitlines() if ln]
        assert lines[0].startswith("Quantile")
        data = lines[2:]
        assert [ln.split()[0] for ln in data] == ["25th", "50th", "75th"]

    def test_delta_column_consistent(self, fixture_index, cfg, population_small):
        report, _ = _report(fixture_index, cfg, population_small)
        table = format_quantile_table(report)
        row = [ln for ln in table.splitlines() if ln.startswith("50th")][0]
        cells = [c.strip() for c in row.split("|")]
        assert abs(float(cells[1]) + float(cells[3]) - float(cells[2])) < 0.02


class TestArtifacts:
    def test_outcomes_csv_round_trip(self, tmp_path, fixture_index, cfg,
                                     population_small):
        report, outcomes = _report(fixture_index, cfg, population_small)
        path = tmp_path / "users.csv"
        write_user_outcomes_csv(path, outcomes)
        with open(path) as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == report.n_test
        assert float(rows[0]["delta"]) == outcomes[0].delta

    def test_figures_render_to_files(self, tmp_path, fixture_index, cfg,
                                     population_small):
        report, _ = _report(fixture_index, cfg, population_small)
        hist = tmp_path / "hist.png"
        quant = tmp_path / "quant.png"
        render_histogram_figure(report, hist)
        render_quantile_figure(report, quant)
        assert hist.stat().st_size > 1000
        assert quant.stat().st_size > 1000

    def test_bundle_writes_everything(self, tmp_path, fixture_index, cfg,
                                      population_small):
        report, outcomes = _report(fixture_index, cfg, population_small)
        paths = write_report_bundle(report, outcomes, tmp_path / "report.json")
        for p in paths.values():
            assert p.exists()
        assert paths["report"].read_text().startswith("{")
        assert "25th" in paths["table"].read_text()
