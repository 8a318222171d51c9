import json

import pytest

from rjvgame.cli import EXIT_ASSUMPTION, EXIT_INPUT, EXIT_OK, main


def write(tmp_path, tree, name="scenario.json"):
    path = tmp_path / name
    path.write_text(json.dumps(tree))
    return str(path)


def s1_tree(**overrides):
    tree = {
        "schema_version": 1,
        "market": {"kind": "cournot", "alpha": 1.0, "innovation": 0.5},
        "cost": {"family": "ratio", "k": 1.0},
        "financing": {"budget": 0.01, "rate": 0.1},
        "compare": "both",
    }
    tree.update(overrides)
    return tree


class TestAnalyze:
    def test_report(self, tmp_path):
        out = tmp_path / "report.json"
        assert main(["analyze", "scenarios/s1_cournot.json", "--out", str(out)]) == EXIT_OK
        report = json.loads(out.read_text())
        assert report["cutoffs"]["theta_star"] == pytest.approx(0.2381975, abs=1e-6)

    def test_stdout(self, capsys):
        assert main(["analyze", "scenarios/s1_cournot.json"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["schema_version"] == 1

    @pytest.mark.parametrize("name", [
        "s1_cournot", "favourable_cournot", "cournot_region_map", "bertrand_region_map",
        "s1_spillover", "three_firms", "four_firms",
    ])
    def test_shipped_scenarios(self, name, tmp_path):
        assert main(["analyze", f"scenarios/{name}.json", "--out", str(tmp_path / "r.json")]) == EXIT_OK

    def test_assumption_exit(self, tmp_path, capsys):
        path = write(tmp_path, s1_tree(financing={"budget": 0.05, "rate": 0.1}))
        assert main(["analyze", path]) == EXIT_ASSUMPTION
        assert "A2" in capsys.readouterr().err
        assert main(["analyze", path, "--allow-violations", "--out", str(tmp_path / "r.json")]) == EXIT_OK

    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{\n  \"schema_version\": 1,\n  oops\n}")
        assert main(["analyze", str(path)]) == EXIT_INPUT
        assert "line 3" in capsys.readouterr().err

    def test_missing_field(self, tmp_path, capsys):
        tree = s1_tree()
        del tree["financing"]["rate"]
        assert main(["analyze", write(tmp_path, tree)]) == EXIT_INPUT
        assert "financing.rate" in capsys.readouterr().err

    def test_drastic_market(self, tmp_path):
        path = write(tmp_path, s1_tree(market={"kind": "cournot", "alpha": 0.2, "innovation": 0.5}))
        assert main(["analyze", path]) == EXIT_INPUT

    def test_bad_arguments(self):
        assert main(["analyze"]) == EXIT_INPUT
        assert main(["frobnicate"]) == EXIT_INPUT


class TestSweep:
    def test_outputs(self, tmp_path):
        csv_path, svg_path = tmp_path / "map.csv", tmp_path / "map.svg"
        args = [
            "sweep", "scenarios/cournot_region_map.json",
            "--x", "market.alpha:0.5:2:3", "--y", "market.innovation:0.1:0.5:2",
            "--csv", str(csv_path), "--svg", str(svg_path), "--workers", "1",
        ]
        assert main(args) == EXIT_OK
        lines = csv_path.read_text().splitlines()
        assert len(lines) == 7 and lines[0].startswith("x,y,regime")
        first_svg = svg_path.read_bytes()
        assert main(args) == EXIT_OK
        assert svg_path.read_bytes() == first_svg

    def test_bad_path(self, tmp_path):
        args = [
            "sweep", "scenarios/cournot_region_map.json",
            "--x", "market.gamma:0.5:2:3", "--y", "market.innovation:0.1:0.5:2",
            "--csv", str(tmp_path / "m.csv"),
        ]
        assert main(args) == EXIT_INPUT

    def test_unwritable_output(self, tmp_path):
        args = [
            "sweep", "scenarios/cournot_region_map.json",
            "--x", "market.alpha:0.5:2:2", "--y", "market.innovation:0.1:0.5:2",
            "--csv", str(tmp_path / "missing" / "m.csv"),
        ]
        assert main(args) == EXIT_INPUT


class TestOracle:
    def test_exhaustive(self, tmp_path):
        out = tmp_path / "oracle.json"
        assert main(["oracle", "scenarios/s1_cournot.json", "--cells", "8", "--out", str(out)]) == EXIT_OK
        report = json.loads(out.read_text())
        assert report["all_double_cutoff"] is True
        assert report["max_cutoff_deviation_cells"] <= 1.0
        assert report["rjv_optimum"]["deviation_cells"] <= 1.0

    def test_best_response(self, tmp_path):
        out = tmp_path / "oracle.json"
        args = ["oracle", "scenarios/s1_cournot.json", "--cells", "60", "--mode", "bestresponse", "--out", str(out)]
        assert main(args) == EXIT_OK
        assert json.loads(out.read_text())["shapes_coincide"] is True

    def test_cells_zero(self):
        assert main(["oracle", "scenarios/s1_cournot.json", "--cells", "0"]) == EXIT_INPUT

    def test_too_many_exhaustive_cells(self):
        assert main(["oracle", "scenarios/s1_cournot.json", "--cells", "40"]) == EXIT_INPUT

    def test_irregular_quad(self, tmp_path):
        market = {"kind": "quad", "profits": {"pi_00": 0.2, "pi_I0": 0.1, "pi_0I": 0.0, "pi_II": 0.3}}
        path = write(tmp_path, s1_tree(market=market, compare="rjv"))
        assert main(["oracle", path, "--cells", "4"]) == EXIT_ASSUMPTION
