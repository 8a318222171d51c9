"""Scenario files: parsing, validation and single-scenario analysis.

A scenario is a JSON document. Its schema (version 1) is::

    {
      "schema_version": 1,
      "market": {"kind": "cournot", "alpha": 1.0, "innovation": 0.5, "slope": 1.0},
      "cost": {"family": "ratio", "k": 1.0},
      "financing": {"budget": 0.01, "rate": 0.1},
      "firms": 2,
      "extension": {"spillover": 0.5},
      "compare": "both"
    }

Market kinds are ``cournot`` (``alpha`` or ``a`` and ``c``, plus
``innovation`` and optional ``slope``), ``bertrand`` (``substitution``,
``cost``, ``innovation``), ``quad`` (``profits`` with optional ``monopoly``
and ``consumer_surplus`` tables) and ``multi`` (``without`` and ``with``
lists for three or four firms). Cost families are ``ratio`` (``k``),
``power`` (``k``, ``p``) and ``tabulated`` (``thetas``, ``costs``).
``financing`` may carry ``rjv_rate``. ``extension`` holds either
``spillover`` (a rate) or ``licensing`` (``{"enabled": true, "delta": 0}``).
``compare`` is ``rjv``, ``merger`` or ``both``.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from rjvgame.comparisons import (
    ComparisonReport,
    compare_merger_vs_competition,
    compare_rjv_vs_competition,
    compare_rjv_vs_merger,
)
from rjvgame.cutoffs import (
    CostFunction,
    FinancingEnv,
    PowerCost,
    RatioCost,
    TabulatedCost,
    compute_cutoffs,
    compute_thresholds,
)
from rjvgame.equilibria import (
    MultiFirmProfits,
    PortfolioOutcome,
    competition_equilibrium,
    merger_portfolio,
    rjv_portfolio,
    three_firm_cutoffs,
    three_firm_outcomes,
    two_rjv_equilibrium,
    validate_multi_firm,
)
from rjvgame.errors import AssumptionViolation, ConfigurationError, InvalidInputError, ModelError
from rjvgame.extensions import (
    check_extension_exclusive,
    licensing_compare,
    spillover_fc_compare,
    spillover_no_fc_compare,
)
from rjvgame.markets import BertrandPrimitives, CournotPrimitives, MarketTables, bertrand_market, cournot_market
from rjvgame.model import (
    CsTriple,
    LicensingTerms,
    MonopolyProfits,
    ProfitQuad,
    SpilloverRate,
    classify_regime,
    licensing_transform,
    spillover_transform,
    validate_consumer_surplus,
    validate_monopoly,
    validate_race_regularity,
    validate_regularity,
)

__all__ = [
    "SCHEMA_VERSION",
    "Scenario",
    "parse_scenario",
    "load_scenario",
    "set_path",
    "analyze",
    "to_jsonable",
    "round_sig",
]

SCHEMA_VERSION = 1
SIG_DIGITS = 12


def round_sig(value: float, digits: int = SIG_DIGITS) -> float:
    """Round to ``digits`` significant digits; infinities and NaN pass through."""
    if not math.isfinite(value) or value == 0.0:
        return value
    return float(format(value, f".{digits}g"))


def _field_error(path: str, message: str) -> InvalidInputError:
    return InvalidInputError(f"field '{path}': {message}")


def _number(tree: Dict[str, Any], key: str, path: str, default: Optional[float] = None) -> float:
    if key not in tree:
        if default is None:
            raise _field_error(f"{path}.{key}", "missing")
        return default
    value = tree[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise _field_error(f"{path}.{key}", f"expected a finite number, got {value!r}")
    return float(value)


def _mapping(tree: Dict[str, Any], key: str, path: str, required: bool = True) -> Optional[Dict[str, Any]]:
    if key not in tree:
        if required:
            raise _field_error(f"{path}{key}", "missing")
        return None
    value = tree[key]
    if not isinstance(value, dict):
        raise _field_error(f"{path}{key}", f"expected an object, got {type(value).__name__}")
    return value


@dataclass(frozen=True)
class Scenario:
    """A validated scenario.

    Attributes:
        raw: The JSON tree the scenario was parsed from; sweeps edit copies.
        firms: Industry size, 2, 3 or 4.
        market_kind: ``cournot``, ``bertrand``, ``quad`` or ``multi``.
        tables: Profit and surplus tables for two-firm markets, or ``None``
            when market primitives fail their validity screen.
        market_error: The validity error message when ``tables`` is ``None``.
        multi: Profit table for three or four firms.
        cost: Cost schedule.
        financing: Budget and rates.
        spillover: Optional spillover rate.
        licensing: Optional licensing terms.
        compare: Requested comparisons.
    """

    raw: Dict[str, Any]
    firms: int
    market_kind: str
    tables: Optional[MarketTables]
    market_error: Optional[str]
    multi: Optional[MultiFirmProfits]
    cost: CostFunction
    financing: FinancingEnv
    spillover: Optional[SpilloverRate]
    licensing: Optional[LicensingTerms]
    compare: str

    @property
    def quad(self) -> Optional[ProfitQuad]:
        return None if self.tables is None else self.tables.quad


def _parse_cost(tree: Dict[str, Any]) -> CostFunction:
    family = tree.get("family", "ratio")
    try:
        if family == "ratio":
            return RatioCost(_number(tree, "k", "cost", 1.0))
        if family == "power":
            return PowerCost(_number(tree, "k", "cost", 1.0), _number(tree, "p", "cost", 1.0))
        if family == "tabulated":
            thetas, costs = tree.get("thetas"), tree.get("costs")
            if not isinstance(thetas, list) or not isinstance(costs, list):
                raise _field_error("cost.thetas", "tabulated cost needs 'thetas' and 'costs' lists")
            return TabulatedCost(tuple(thetas), tuple(costs))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InvalidInputError):
            raise
        raise _field_error("cost", str(exc)) from exc
    raise _field_error("cost.family", f"unknown cost family {family!r}")


def _parse_quad_tables(market: Dict[str, Any]) -> MarketTables:
    profits = _mapping(market, "profits", "market.")
    quad = ProfitQuad(*(_number(profits, k, "market.profits") for k in ("pi_00", "pi_I0", "pi_0I", "pi_II")))
    mono_tree = _mapping(market, "monopoly", "market.", required=False)
    mono = None
    if mono_tree is not None:
        mono = MonopolyProfits(_number(mono_tree, "pi_0", "market.monopoly"), _number(mono_tree, "pi_I", "market.monopoly"))
    cs_tree = _mapping(market, "consumer_surplus", "market.", required=False)
    cs = None
    if cs_tree is not None:
        cs = CsTriple(*(_number(cs_tree, k, "market.consumer_surplus") for k in ("cs_00", "cs_I0", "cs_II", "cs_m0", "cs_mI")))
    return MarketTables(quad, mono, cs)


def _parse_market(market: Dict[str, Any], firms: int):
    kind = market.get("kind")
    if kind == "multi":
        without, with_ = market.get("without"), market.get("with")
        if not isinstance(without, list) or not isinstance(with_, list):
            raise _field_error("market", "multi-firm markets need 'without' and 'with' lists")
        multi = MultiFirmProfits(tuple(without), tuple(with_))
        if multi.firms != firms:
            raise _field_error("firms", f"multi-firm table has {multi.firms} firms but 'firms' is {firms}")
        return kind, None, None, multi
    if firms != 2:
        raise _field_error("firms", f"market kind {kind!r} describes two firms; use kind 'multi' for {firms}")
    if kind == "cournot":
        slope = _number(market, "slope", "market", 1.0)
        inn = _number(market, "innovation", "market")
        if "alpha" in market:
            prim = CournotPrimitives.from_alpha(_number(market, "alpha", "market"), inn, slope)
        else:
            prim = CournotPrimitives(_number(market, "a", "market"), slope, _number(market, "c", "market"), inn)
        builder = lambda: cournot_market(prim)  # noqa: E731
    elif kind == "bertrand":
        prim = BertrandPrimitives(
            _number(market, "substitution", "market"),
            _number(market, "cost", "market"),
            _number(market, "innovation", "market"),
        )
        builder = lambda: bertrand_market(prim)  # noqa: E731
    elif kind == "quad":
        return kind, _parse_quad_tables(market), None, None
    else:
        raise _field_error("market.kind", f"unknown market kind {kind!r}")
    from rjvgame.errors import MarketValidityError

    try:
        return kind, builder(), None, None
    except MarketValidityError as exc:
        return kind, None, str(exc), None


def parse_scenario(tree: Any) -> Scenario:
    """Validate a scenario tree and build the model objects.

    Market primitives that fail their validity screen do not raise here;
    the scenario records the message so that sweeps can label the point.

    Raises:
        InvalidInputError: For missing or malformed fields, naming the field.
        ConfigurationError: For incompatible options.
    """
    if not isinstance(tree, dict):
        raise InvalidInputError("scenario must be a JSON object")
    version = tree.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise _field_error("schema_version", f"unsupported version {version!r}, expected {SCHEMA_VERSION}")
    known = {"schema_version", "market", "cost", "financing", "firms", "extension", "compare", "name", "description"}
    unknown = sorted(set(tree) - known)
    if unknown:
        raise _field_error(unknown[0], "unknown top-level field")
    firms = tree.get("firms", 2)
    if firms not in (2, 3, 4) or isinstance(firms, bool):
        raise _field_error("firms", f"expected 2, 3 or 4, got {firms!r}")
    market = _mapping(tree, "market", "")
    kind, tables, market_error, multi = _parse_market(market, firms)
    cost = _parse_cost(_mapping(tree, "cost", "", required=False) or {})
    fin_tree = _mapping(tree, "financing", "")
    rjv_rate = _number(fin_tree, "rjv_rate", "financing") if "rjv_rate" in fin_tree else None
    financing = FinancingEnv(_number(fin_tree, "budget", "financing"), _number(fin_tree, "rate", "financing"), rjv_rate)
    spillover = licensing = None
    ext = _mapping(tree, "extension", "", required=False)
    if ext:
        extra = sorted(set(ext) - {"spillover", "licensing"})
        if extra:
            raise _field_error(f"extension.{extra[0]}", "unknown extension")
        if "spillover" in ext:
            spillover = SpilloverRate(_number(ext, "spillover", "extension"))
        if "licensing" in ext:
            lic = _mapping(ext, "licensing", "extension.")
            licensing = LicensingTerms(_number(lic, "delta", "extension.licensing", 0.0), bool(lic.get("enabled", True)))
        check_extension_exclusive(spillover, licensing)
        if firms != 2:
            raise ConfigurationError("extensions are defined for two firms only")
    compare = tree.get("compare", "rjv")
    if compare not in ("rjv", "merger", "both"):
        raise _field_error("compare", f"expected 'rjv', 'merger' or 'both', got {compare!r}")
    if compare != "rjv" and firms != 2:
        raise ConfigurationError("merger comparisons need exactly two firms")
    if compare != "rjv" and tables is not None and tables.monopoly is None:
        raise _field_error("market.monopoly", "merger comparisons need monopoly profits")
    return Scenario(copy.deepcopy(tree), firms, kind, tables, market_error, multi, cost, financing, spillover, licensing, compare)


def load_scenario(path: str) -> Scenario:
    """Read and parse a scenario file.

    Raises:
        InvalidInputError: If the file is unreadable or not valid JSON; the
            message names the line and column of a syntax error.
    """
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise InvalidInputError(f"cannot read scenario {path}: {exc.strerror}") from exc
    try:
        tree = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return parse_scenario(tree)


def set_path(tree: Dict[str, Any], path: str, value: float) -> Dict[str, Any]:
    """Return a copy of ``tree`` with the dotted ``path`` set to ``value``.

    The path must already exist in the tree, so typos fail loudly.

    Raises:
        InvalidInputError: If a path component is missing.
    """
    parts = path.split(".")
    out = copy.deepcopy(tree)
    node = out
    for i, part in enumerate(parts):
        if not isinstance(node, dict) or part not in node:
            raise InvalidInputError(f"parameter path '{path}' does not resolve at '{'.'.join(parts[: i + 1])}'")
        if i == len(parts) - 1:
            if isinstance(node[part], (dict, list)) or isinstance(node[part], bool):
                raise InvalidInputError(f"parameter path '{path}' does not name a number")
            node[part] = value
        else:
            node = node[part]
    return out


def to_jsonable(value: Any) -> Any:
    """Convert report objects to JSON-ready data with 12 significant digits.

    Infinite values become the string ``"inf"`` (or ``"-inf"``).
    """
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return round_sig(value)
    if isinstance(value, int):
        return value
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if hasattr(value, "__dataclass_fields__"):
        return {name: to_jsonable(getattr(value, name)) for name in value.__dataclass_fields__}
    if hasattr(value, "_asdict"):
        return to_jsonable(value._asdict())
    return str(value)


def _outcome_dict(outcome: PortfolioOutcome) -> Dict[str, Any]:
    return to_jsonable(outcome)


def _comparison_dict(report: ComparisonReport) -> Dict[str, Any]:
    return {
        "baseline": report.baseline.regime_label.value,
        "alternative": report.alternative.regime_label.value,
        "innovation_delta": report.innovation_delta,
        "spend_delta": report.spend_delta,
        "net_profit_delta": report.net_profit_delta,
        "cs_delta": report.cs_delta,
        "verdict": report.verdict,
        "verdict_label": report.verdict_label,
        "cs_verdict": report.cs_verdict,
        "regime": report.regime,
        "condition_flags": report.condition_flags,
        "thresholds": report.thresholds,
        "notes": list(report.notes),
    }


def _diagnose_two_firm(sc: Scenario) -> Dict[str, List[str]]:
    diag: Dict[str, List[str]] = {}
    tables = sc.tables
    quad = tables.quad
    diag["profits"] = validate_regularity(quad)
    if sc.compare != "rjv":
        diag["monopoly"] = validate_monopoly(tables.monopoly)
    if tables.cs is not None:
        diag["consumer_surplus"] = validate_consumer_surplus(tables.cs)
    if not diag["profits"]:
        comp_quad = quad
        if sc.spillover is not None:
            comp_quad = spillover_transform(quad, sc.spillover)
        elif sc.licensing is not None:
            comp_quad = licensing_transform(quad, sc.licensing)[0]
        if comp_quad is not quad:
            diag["transformed_profits"] = validate_race_regularity(comp_quad)
        if not diag.get("transformed_profits"):
            theta2 = compute_cutoffs(comp_quad, sc.cost, sc.financing).theta2
            diag["budget"] = [] if sc.financing.budget < sc.cost.mass(theta2) else ["A2"]
    return diag


def _analyze_two_firm(sc: Scenario, strict: bool, report: Dict[str, Any]) -> None:
    tables = sc.tables
    quad, mono, cs = tables.quad, tables.monopoly, tables.cs
    cost, fin = sc.cost, sc.financing
    report["market"] = {
        "profits": quad,
        "monopoly": mono,
        "consumer_surplus": cs,
        "regime": classify_regime(quad),
    }
    report["cutoffs"] = compute_cutoffs(quad, cost, fin, mono if sc.compare != "rjv" else None)
    report["thresholds"] = compute_thresholds(
        quad, cost, fin, mono if sc.compare != "rjv" else None, sc.licensing, sc.spillover
    )
    cs_used = cs if cs is not None and not validate_consumer_surplus(cs) else None
    outcomes = {"competition": competition_equilibrium(quad, cost, fin, strict=strict), "rjv": rjv_portfolio(quad, cost, fin)}
    comparisons: Dict[str, Any] = {}
    if sc.compare in ("rjv", "both"):
        comparisons["rjv_vs_competition"] = compare_rjv_vs_competition(quad, cost, fin, cs_used, strict=strict)
    if sc.compare in ("merger", "both"):
        outcomes["merger"] = merger_portfolio(quad, mono, cost, fin)
        if strict or min(outcomes["competition"].agent_spend) > fin.budget:
            comparisons["rjv_vs_merger"] = compare_rjv_vs_merger(quad, mono, cost, fin, cs_used)
            comparisons["merger_vs_competition"] = compare_merger_vs_competition(quad, mono, cost, fin, cs_used)
    if cs_used is not None:
        from rjvgame.comparisons import expected_consumer_surplus

        report["expected_consumer_surplus"] = {k: expected_consumer_surplus(cs_used, v) for k, v in outcomes.items()}
    report["outcomes"] = outcomes
    if sc.spillover is not None:
        comparisons["spillover"] = spillover_fc_compare(quad, sc.spillover, cost, fin, cs_used, strict=strict)
        report["spillover_without_financing"] = spillover_no_fc_compare(quad, sc.spillover, cost)
    if sc.licensing is not None:
        comparisons["licensing"] = licensing_compare(quad, sc.licensing, cost, fin, cs_used, strict=strict)
        report["licensing_occurs"] = licensing_transform(quad, sc.licensing)[1]
    report["comparisons"] = {k: _comparison_dict(v) for k, v in comparisons.items()}


def _analyze_multi(sc: Scenario, strict: bool, report: Dict[str, Any]) -> None:
    multi, cost, fin = sc.multi, sc.cost, sc.financing
    report["market"] = {"without": list(multi.without), "with": list(multi.with_)}
    if multi.firms == 3:
        competition, venture = three_firm_outcomes(multi, cost, fin, strict=strict)
        report["outcomes"] = {"competition": competition, "rjv": venture}
        report["comparisons"] = {
            "rjv_vs_competition": {"innovation_delta": venture.innovation_prob - competition.innovation_prob}
        }
    else:
        report["outcomes"] = {"two_rjvs": two_rjv_equilibrium(multi, cost, fin)}


def analyze(sc: Scenario, *, allow_violations: bool = False) -> Dict[str, Any]:
    """Run every requested analysis of a scenario and return a JSON-ready report.

    Args:
        allow_violations: When false, any failed modelling assumption
            raises :class:`AssumptionViolation`. When true the failures are
            listed under ``diagnostics`` and the analysis proceeds where the
            theory still defines an outcome.

    Raises:
        InvalidInputError: If the market primitives fail their validity
            screen.
        AssumptionViolation: See ``allow_violations``.
    """
    if sc.firms == 2 and sc.tables is None:
        from rjvgame.errors import MarketValidityError

        raise MarketValidityError(sc.market_error or "invalid market primitives")
    report: Dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "scenario": sc.raw,
        "cost": {"family": sc.cost.family, "params": sc.cost.params(), "closed_form_mass": sc.cost.has_closed_form},
        "financing": sc.financing,
    }
    if sc.firms == 2:
        diag = _diagnose_two_firm(sc)
    else:
        diag = {"profits": validate_multi_firm(sc.multi)}
    failed = sorted({code for codes in diag.values() for code in codes})
    report["diagnostics"] = {"assumptions": diag, "violations": failed, "errors": []}
    if failed and not allow_violations:
        raise AssumptionViolation(f"scenario violates {', '.join(failed)}", failed)
    strict = not allow_violations
    try:
        if sc.firms == 2:
            _analyze_two_firm(sc, strict, report)
        else:
            _analyze_multi(sc, strict, report)
    except AssumptionViolation as exc:
        if not allow_violations:
            raise
        report["diagnostics"]["errors"].append(str(exc))
    return to_jsonable(report)
