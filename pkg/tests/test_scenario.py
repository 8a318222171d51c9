import json

import pytest

from rjvgame.errors import AssumptionViolation, ConfigurationError, InvalidInputError, MarketValidityError
from rjvgame.scenario import analyze, load_scenario, parse_scenario, round_sig, set_path, to_jsonable

from frozen import S1


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


class TestParsing:
    def test_s1(self):
        sc = parse_scenario(s1_tree())
        assert sc.firms == 2 and sc.market_kind == "cournot"
        assert sc.quad.pi_I0 == pytest.approx(4 / 9)

    def test_intercept_form(self):
        sc = parse_scenario(s1_tree(market={"kind": "cournot", "a": 3.0, "c": 2.0, "innovation": 0.5}))
        assert sc.quad.pi_I0 == pytest.approx(4 / 9)

    def test_quad_kind(self):
        market = {
            "kind": "quad",
            "profits": {"pi_00": 0.1, "pi_I0": 0.4, "pi_0I": 0.05, "pi_II": 0.2},
            "monopoly": {"pi_0": 0.25, "pi_I": 0.5},
        }
        sc = parse_scenario(s1_tree(market=market))
        assert sc.tables.cs is None and sc.tables.monopoly.pi_I == 0.5

    def test_invalid_market_is_recorded(self):
        sc = parse_scenario(s1_tree(market={"kind": "cournot", "alpha": 0.3, "innovation": 0.5}))
        assert sc.tables is None and "drastic" in sc.market_error
        with pytest.raises(MarketValidityError):
            analyze(sc)

    @pytest.mark.parametrize(
        "tree, fragment",
        [
            (s1_tree(schema_version=2), "schema_version"),
            (s1_tree(market={"kind": "stackelberg"}), "market.kind"),
            (s1_tree(market={"kind": "cournot", "alpha": 1.0}), "market.innovation"),
            (s1_tree(financing={"rate": 0.1}), "financing.budget"),
            (s1_tree(financing={"budget": "lots", "rate": 0.1}), "financing.budget"),
            (s1_tree(firms=5), "firms"),
            (s1_tree(compare="everything"), "compare"),
            (s1_tree(cost={"family": "cubic"}), "cost.family"),
            (s1_tree(colour="blue"), "colour"),
            (s1_tree(market={"kind": "quad", "profits": {"pi_00": 0.1}}, compare="rjv"), "market.profits"),
        ],
    )
    def test_field_errors_name_the_field(self, tree, fragment):
        with pytest.raises(InvalidInputError) as info:
            parse_scenario(tree)
        assert fragment in str(info.value)

    def test_configuration_errors(self):
        with pytest.raises(ConfigurationError):
            parse_scenario(s1_tree(extension={"spillover": 0.5, "licensing": {"delta": 0.0}}))
        multi = {"kind": "multi", "without": [0.3, 0.25, 0.22], "with": [0.6, 0.45, 0.32]}
        with pytest.raises(ConfigurationError):
            parse_scenario(s1_tree(market=multi, firms=3, compare="merger"))

    def test_file_errors(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"schema_version": 1,\n  "market": }')
        with pytest.raises(InvalidInputError) as info:
            load_scenario(str(bad))
        assert "line 2" in str(info.value)
        with pytest.raises(InvalidInputError):
            load_scenario(str(tmp_path / "missing.json"))


class TestPaths:
    def test_set_path_copies(self):
        tree = s1_tree()
        out = set_path(tree, "market.alpha", 2.0)
        assert out["market"]["alpha"] == 2.0 and tree["market"]["alpha"] == 1.0

    @pytest.mark.parametrize("path", ["market.alfa", "market.alpha.x", "financing", "nothing.here"])
    def test_unresolvable(self, path):
        with pytest.raises(InvalidInputError):
            set_path(s1_tree(), path, 1.0)


class TestRounding:
    def test_round_sig(self):
        assert round_sig(0.1234567890123456) == 0.123456789012
        assert round_sig(0.0) == 0.0
        assert round_sig(float("inf")) == float("inf")

    def test_jsonable_infinity(self):
        assert to_jsonable({"a": float("inf"), "b": (1.0, float("-inf"))}) == {"a": "inf", "b": [1.0, "-inf"]}


class TestAnalyze:
    def test_s1_report(self):
        report = analyze(parse_scenario(s1_tree()))
        assert report["cutoffs"]["theta1"] == pytest.approx(S1["theta1"], abs=1e-6)
        assert report["cutoffs"]["theta_star"] == pytest.approx(S1["theta_star"], abs=1e-6)
        rvc = report["comparisons"]["rjv_vs_competition"]
        assert rvc["net_profit_delta"] == pytest.approx(S1["net_delta"], abs=1e-6)
        assert set(report["comparisons"]) == {"rjv_vs_competition", "rjv_vs_merger", "merger_vs_competition"}
        assert report["market"]["regime"] == "Moderate"
        assert report["diagnostics"]["violations"] == []
        json.dumps(report)

    def test_deterministic(self):
        a = json.dumps(analyze(parse_scenario(s1_tree())))
        b = json.dumps(analyze(parse_scenario(s1_tree())))
        assert a == b

    def test_violation_aborts_or_annotates(self):
        sc = parse_scenario(s1_tree(financing={"budget": 0.05, "rate": 0.1}))
        with pytest.raises(AssumptionViolation):
            analyze(sc)
        report = analyze(sc, allow_violations=True)
        assert report["diagnostics"]["violations"] == ["A2"]
        assert "rjv_vs_competition" in report["comparisons"]

    def test_zero_joint_gain_quad(self):
        market = {"kind": "quad", "profits": {"pi_00": 0.0, "pi_I0": 1.0, "pi_0I": 0.0, "pi_II": 0.0}}
        sc = parse_scenario(s1_tree(market=market, compare="rjv"))
        report = analyze(sc, allow_violations=True)
        assert report["market"]["regime"] == "Intense"
        assert report["outcomes"]["rjv"]["cutoffs"]["theta_star"] == 0.0

    def test_multi_firm(self):
        multi = {"kind": "multi", "without": [0.3, 0.25, 0.22], "with": [0.6, 0.45, 0.32]}
        report = analyze(parse_scenario(s1_tree(market=multi, firms=3, compare="rjv",
                                                financing={"budget": 0.002, "rate": 0.1})))
        assert report["outcomes"]["competition"]["regime_label"] == "ThreeFirmCompetition"

    def test_extension_reports(self):
        tree = s1_tree(extension={"licensing": {"delta": 0.0}}, compare="rjv")
        report = analyze(parse_scenario(tree))
        assert report["licensing_occurs"] is True
        assert report["comparisons"]["licensing"]["condition_flags"]["licensing_occurs"] is True
