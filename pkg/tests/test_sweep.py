import csv
import io

import pytest

from rjvgame.errors import ConfigurationError, InvalidInputError
from rjvgame.plotting import render_svg
from rjvgame.scenario import load_scenario, parse_scenario
from rjvgame.sweep import (
    CSV_COLUMNS,
    Axis,
    RegionLabel,
    SweepSpec,
    label_from_fields,
    parse_axis,
    rows_to_csv,
    run_sweep,
)

SMALL = SweepSpec(Axis("market.alpha", 0.3, 3.0, 6), Axis("market.innovation", 0.05, 1.2, 5))


@pytest.fixture(scope="module")
def cournot():
    return load_scenario("scenarios/cournot_region_map.json")


@pytest.fixture(scope="module")
def small_rows(cournot):
    return run_sweep(cournot, SMALL)


class TestAxis:
    def test_parse(self):
        axis = parse_axis("market.alpha:0.5:2:4")
        assert axis == Axis("market.alpha", 0.5, 2.0, 4)
        assert list(axis.values) == [0.5, 1.0, 1.5, 2.0]

    @pytest.mark.parametrize("text", ["market.alpha:1:2", "market.alpha:a:2:3", ":0:1:3", "p:2:1:3", "p:0:1:1"])
    def test_rejects(self, text):
        with pytest.raises(InvalidInputError):
            parse_axis(text)


class TestLabels:
    def test_order_of_checks(self):
        assert label_from_fields(None, None, None, RegionLabel.EXCLUDED_BUDGET) is RegionLabel.EXCLUDED_BUDGET
        assert label_from_fields(0.5, 0.5 + 1e-10, -1.0) is RegionLabel.EQUAL
        assert label_from_fields(0.5, 0.6, 0.0) is RegionLabel.RJV_UP_UNPROFITABLE
        assert label_from_fields(0.5, 0.6, 1e-12) is RegionLabel.RJV_UP_PROFITABLE
        assert label_from_fields(0.5, 0.4, 0.1) is RegionLabel.RJV_DOWN_PROFITABLE
        assert label_from_fields(0.5, 0.4, -0.1) is RegionLabel.RJV_DOWN_UNPROFITABLE


class TestSweep:
    def test_grid_order(self, small_rows):
        assert len(small_rows) == 30
        assert [r.x for r in small_rows[:5]] == [0.3] * 5
        assert [r.y for r in small_rows[:5]] == pytest.approx([0.05, 0.3375, 0.625, 0.9125, 1.2])

    def test_labels_rederive_from_csv(self, small_rows):
        reader = csv.DictReader(io.StringIO(rows_to_csv(small_rows)))
        assert tuple(reader.fieldnames) == CSV_COLUMNS
        for row in reader:
            label = row["region_label"]
            if label.startswith("EXCLUDED"):
                assert all(row[c] == "" for c in CSV_COLUMNS if c not in ("x", "y", "region_label"))
                continue
            derived = label_from_fields(
                float(row["innov_comp"]), float(row["innov_rjv"]), float(row["net_profit_delta"])
            )
            assert derived.value == label

    def test_drastic_corner(self, small_rows):
        assert small_rows[4].region_label is RegionLabel.EXCLUDED_DRASTIC  # alpha 0.3, innovation 1.2

    def test_workers_and_reruns_identical(self, cournot, small_rows):
        text = rows_to_csv(small_rows)
        assert rows_to_csv(run_sweep(cournot, SMALL)) == text
        assert rows_to_csv(run_sweep(cournot, SMALL, workers=2)) == text

    def test_svg_deterministic(self, small_rows):
        first = render_svg(small_rows, SMALL, title="demo")
        assert first == render_svg(small_rows, SMALL, title="demo")
        assert first.lstrip().startswith("<?xml")
        assert "<dc:date>" not in first

    def test_bad_paths(self, cournot):
        with pytest.raises(InvalidInputError):
            run_sweep(cournot, SweepSpec(Axis("market.beta", 0.1, 1.0, 2), Axis("market.innovation", 0.1, 0.2, 2)))
        with pytest.raises(InvalidInputError):
            run_sweep(cournot, SweepSpec(Axis("market.alpha", 0.1, 1.0, 2), Axis("market.alpha", 0.1, 0.2, 2)))

    def test_multi_firm_rejected(self):
        tree = {
            "schema_version": 1,
            "firms": 3,
            "market": {"kind": "multi", "without": [0.3, 0.25, 0.22], "with": [0.6, 0.45, 0.32]},
            "cost": {"family": "ratio", "k": 1.0},
            "financing": {"budget": 0.002, "rate": 0.1},
        }
        spec = SweepSpec(Axis("financing.budget", 0.001, 0.002, 2), Axis("financing.rate", 0.0, 0.1, 2))
        with pytest.raises(ConfigurationError):
            run_sweep(parse_scenario(tree), spec)

    def test_budget_exclusion(self, cournot):
        spec = SweepSpec(Axis("market.alpha", 1.0, 1.1, 2), Axis("financing.budget", 0.001, 0.5, 2))
        rows = run_sweep(cournot, spec)
        assert [r.region_label for r in rows][1::2] == [RegionLabel.EXCLUDED_BUDGET] * 2
