"""
Tests for transcript tables, summaries and plots.
"""

import json
from fractions import Fraction

import pandas as pd
import pytest

from limitgen.adversaries import sperner_hard_instance
from limitgen.adversaries.streams import canonical_enumeration
from limitgen.config import SamplingConfig
from limitgen.generators import CanonicalIntersectionGenerator
from limitgen.harness import run_game
from limitgen.reporting import (
    format_table,
    plot_density,
    results_frame,
    series_plot,
    write_suite_report,
    write_summary,
    write_transcript,
)


@pytest.fixture(scope="module")
def transcript():
    inst = sperner_hard_instance(4)
    gen = CanonicalIntersectionGenerator(inst.collection)
    return run_game(gen, canonical_enumeration(inst.target), inst.target, 40, SamplingConfig(every=10))


class TestTranscripts:
    def test_csv(self, transcript, tmp_path):
        path = write_transcript(transcript, tmp_path / "nested" / "run.csv")
        frame = pd.read_csv(path)
        assert len(frame) == 40
        assert frame["round"].tolist()[:3] == [1, 2, 3]

    def test_json(self, transcript, tmp_path):
        path = write_transcript(transcript, tmp_path / "run.json", fmt="json")
        rows = json.loads(path.read_text())
        assert rows[9]["upper_density"] == "1/3"
        assert rows[0]["valid"] == "true"

    def test_unknown_format(self, transcript, tmp_path):
        with pytest.raises(ValueError):
            write_transcript(transcript, tmp_path / "run.xml", fmt="xml")


class TestSummaries:
    def test_fractions_as_strings(self, tmp_path):
        path = write_summary({"upper_density_sup": Fraction(1, 6), "t_star": 3}, tmp_path / "s.json")
        assert json.loads(path.read_text()) == {"t_star": 3, "upper_density_sup": "1/6"}

    def test_suite_report(self, tmp_path):
        rows = [{"check": "a", "passed": True}, {"check": "b", "passed": False}]
        report = json.loads(write_suite_report("demo", rows, tmp_path / "r.json").read_text())
        assert report["suite"] == "demo"
        assert report["passed"] is False


class TestTables:
    def test_fraction_columns(self):
        frame = results_frame([{"check": "k=5", "expected": Fraction(1, 6), "passed": True}])
        assert frame["expected"].tolist() == ["1/6"]

    def test_format(self):
        assert format_table([]) == "(no rows)"
        assert "k=5" in format_table([{"check": "k=5", "passed": True}])


class TestPlots:
    """SVG plots are reproducible byte for byte."""

    def test_density_plot_is_deterministic(self, transcript, tmp_path):
        a = plot_density(transcript, tmp_path / "a.svg", reference=Fraction(1, 3), title="sperner")
        b = plot_density(transcript, tmp_path / "b.svg", reference=Fraction(1, 3), title="sperner")
        assert a.read_bytes() == b.read_bytes()
        assert a.read_text().lstrip().startswith("<?xml")

    def test_series_plot(self, tmp_path):
        path = series_plot({"evens": [0.5, 0.5, 0.5]}, [4, 8, 16], tmp_path / "series.svg")
        assert path.exists()
