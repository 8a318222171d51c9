"""Verdicts comparing competition, joint ventures and mergers.

Each comparison evaluates both equilibria, reports the differences
(alternative minus baseline) and the threshold conditions that predict
them, then re-checks the prediction against the computed outcome. A
mismatch raises :class:`~rjvgame.errors.InvariantViolation` because it can
only come from a bug.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from rjvgame.cutoffs import (
    CostFunction,
    FinancingEnv,
    ThresholdRecord,
    budget_cutoff,
    compute_thresholds,
    solve_value_cutoff,
)
from rjvgame.equilibria import (
    OutcomeLabel,
    PortfolioOutcome,
    competition_equilibrium,
    merger_portfolio,
    rjv_portfolio,
)
from rjvgame.errors import AssumptionViolation, InvariantViolation
from rjvgame.model import (
    CsTriple,
    MarketRegime,
    MonopolyProfits,
    ProfitQuad,
    classify_regime,
    validate_consumer_surplus,
)

__all__ = [
    "VERDICT_TOL",
    "Verdict",
    "CsVerdict",
    "ComparisonReport",
    "ProfitabilityReport",
    "compare_rjv_vs_competition",
    "compare_from_outcomes",
    "rjv_profitability",
    "expected_consumer_surplus",
    "compare_rjv_vs_merger",
    "compare_merger_vs_competition",
]

VERDICT_TOL = 1e-9
"""Probability differences within this band are reported as equal."""


class Verdict(str, enum.Enum):
    """Sign of the innovation difference, alternative relative to baseline."""

    HIGHER = "Higher"
    EQUAL = "Equal"
    LOWER = "Lower"


class CsVerdict(str, enum.Enum):
    """Consumer-surplus ranking of a venture against a merger."""

    RJV_PREFERRED = "RjvPreferred"
    AMBIGUOUS = "Ambiguous"


def _verdict(delta: float) -> Verdict:
    if delta > VERDICT_TOL:
        return Verdict.HIGHER
    if delta < -VERDICT_TOL:
        return Verdict.LOWER
    return Verdict.EQUAL


@dataclass(frozen=True)
class ComparisonReport:
    """Differences between an alternative organisation and a baseline.

    Attributes:
        baseline: Outcome of the reference organisation (usually competition).
        alternative: Outcome of the organisation being evaluated.
        innovation_delta: Alternative minus baseline innovation probability.
        spend_delta: Alternative minus baseline total research cost,
            financing included.
        net_profit_delta: Alternative minus baseline industry net profit.
        cs_delta: Alternative minus baseline expected consumer surplus, when
            surplus figures were supplied.
        thresholds: Threshold quantities of the scenario.
        regime: Competition regime of the profit quad driving the baseline.
        condition_flags: Named threshold conditions and diagnoses.
        verdict: Sign of ``innovation_delta`` with tolerance :data:`VERDICT_TOL`.
        cs_verdict: Consumer-surplus ranking for venture-versus-merger reports.
        notes: Free-form diagnostics.
    """

    baseline: PortfolioOutcome
    alternative: PortfolioOutcome
    innovation_delta: float
    spend_delta: float
    net_profit_delta: float
    cs_delta: Optional[float]
    thresholds: ThresholdRecord
    regime: MarketRegime
    condition_flags: Dict[str, bool] = field(default_factory=dict, hash=False)
    verdict: Verdict = Verdict.EQUAL
    cs_verdict: Optional[CsVerdict] = None
    notes: Tuple[str, ...] = ()

    @property
    def verdict_label(self) -> str:
        return f"{self.alternative.regime_label.value} {self.verdict.value.lower()} than {self.baseline.regime_label.value}"


def expected_consumer_surplus(cs: CsTriple, outcome: PortfolioOutcome) -> float:
    """Expected consumer surplus of a two-firm outcome.

    Competition mixes the joint, single and no-innovation states with
    weights ``theta2``, ``theta1 - theta2`` and ``1 - theta1``. A venture
    mixes the joint and no-innovation states, a merger the two monopoly
    states.

    Raises:
        AssumptionViolation: If the surplus figures fail their assumptions.
        ValueError: For outcome types without a two-firm surplus mixture.
    """
    codes = validate_consumer_surplus(cs)
    if codes:
        raise AssumptionViolation(f"consumer surplus figures fail {', '.join(codes)}", codes)
    label = outcome.regime_label
    if label is OutcomeLabel.COMPETITION:
        t1 = outcome.innovation_prob
        t2 = outcome.duplicated_mass
        return t2 * cs.cs_II + (t1 - t2) * cs.cs_I0 + (1.0 - t1) * cs.cs_00
    if label is OutcomeLabel.RJV:
        t = outcome.innovation_prob
        return t * cs.cs_II + (1.0 - t) * cs.cs_00
    if label is OutcomeLabel.MERGER:
        t = outcome.innovation_prob
        return t * cs.cs_mI + (1.0 - t) * cs.cs_m0
    raise ValueError(f"no consumer surplus mixture for {label.value} outcomes")


def _psi_ratio(theta_b: float, theta_u: float, theta1: float, theta2: float) -> Optional[float]:
    if theta1 == theta2:
        return None
    return (min(theta_b, theta_u) - theta1) / (theta1 - theta2)


def compare_from_outcomes(
    pq: ProfitQuad,
    cf: CostFunction,
    fin: FinancingEnv,
    competition: PortfolioOutcome,
    venture: PortfolioOutcome,
    thresholds: ThresholdRecord,
    cs: Optional[CsTriple] = None,
    *,
    self_check: bool = True,
    relaxed: bool = False,
) -> ComparisonReport:
    """Assemble a venture-versus-competition report from precomputed parts.

    The self-check is skipped when the venture borrows at a different rate
    than single firms, because the threshold conditions assume equal rates.
    ``relaxed`` lets ``pq`` be a transformed quad that only passes the race
    inequalities; the profitability conditions need the full regularity
    inequalities, so their self-check is skipped for such quads.
    """
    regime = classify_regime(pq, relaxed=relaxed)
    innovation_delta = venture.innovation_prob - competition.innovation_prob
    spend_delta = venture.gamma - competition.gamma
    net_delta = venture.expected_net_profit - competition.expected_net_profit
    cs_delta = None
    if cs is not None:
        cs_delta = expected_consumer_surplus(cs, venture) - expected_consumer_surplus(cs, competition)
    verdict = _verdict(innovation_delta)
    soft = regime is MarketRegime.SOFT
    b_gt = fin.budget > thresholds.B_bar
    rho_gt = fin.rate > thresholds.rho_bar
    increases = verdict is Verdict.HIGHER
    theta1 = competition.cutoffs["theta1"]
    theta2 = competition.cutoffs["theta2"]
    ratio = _psi_ratio(venture.cutoffs["theta_B"], venture.cutoffs["theta_u"], theta1, theta2)
    prop3_i = soft
    prop3_ii = regime is MarketRegime.MODERATE and increases
    prop3_iii = (
        regime is MarketRegime.INTENSE and increases and ratio is not None and ratio > thresholds.psi
    )
    flags = {
        "soft": soft,
        "moderate": regime is MarketRegime.MODERATE,
        "intense": regime is MarketRegime.INTENSE,
        "B_gt_Bbar": b_gt,
        "rho_gt_rhobar": rho_gt,
        "prop3_i": prop3_i,
        "prop3_ii": prop3_ii,
        "prop3_iii": prop3_iii,
        "prop3_sufficient": prop3_i or prop3_ii or prop3_iii,
        "icbad_candidate": net_delta > 0.0 and innovation_delta < 0.0,
    }
    notes = []
    equal_rates = fin.venture_rate == fin.rate
    if not equal_rates:
        notes.append("venture borrows at its own rate; threshold conditions are not checked")
    budget_ok = min(competition.agent_spend) > fin.budget
    if not budget_ok:
        notes.append("firms need not borrow under competition; threshold conditions are not checked")
    report = ComparisonReport(
        baseline=competition,
        alternative=venture,
        innovation_delta=innovation_delta,
        spend_delta=spend_delta,
        net_profit_delta=net_delta,
        cs_delta=cs_delta,
        thresholds=thresholds,
        regime=regime,
        condition_flags=flags,
        verdict=verdict,
        notes=tuple(notes),
    )
    if self_check and equal_rates and budget_ok:
        _check_venture_report(report, cs, profitability=not relaxed)
    return report


def _check_venture_report(report: ComparisonReport, cs: Optional[CsTriple], profitability: bool = True) -> None:
    flags = report.condition_flags
    delta = report.innovation_delta
    if flags["soft"]:
        predicted = True
    else:
        predicted = flags["B_gt_Bbar"] and flags["rho_gt_rhobar"]
    if predicted and delta < -VERDICT_TOL:
        raise InvariantViolation(f"threshold conditions predict more innovation but delta is {delta}")
    if not predicted and delta > VERDICT_TOL:
        raise InvariantViolation(f"threshold conditions fail but innovation rises by {delta}")
    if not flags["soft"] and delta > VERDICT_TOL and report.spend_delta > 0.0:
        raise InvariantViolation(f"innovation rises under non-soft competition but spend rises by {report.spend_delta}")
    if profitability and flags["prop3_sufficient"] and report.net_profit_delta < -VERDICT_TOL:
        raise InvariantViolation(f"a sufficient profitability condition holds but net profit falls by {report.net_profit_delta}")
    if cs is not None and delta > VERDICT_TOL and not report.cs_delta > 0.0:
        raise InvariantViolation(f"innovation rises but consumer surplus changes by {report.cs_delta}")


def compare_rjv_vs_competition(
    pq: ProfitQuad,
    cf: CostFunction,
    fin: FinancingEnv,
    cs: Optional[CsTriple] = None,
    *,
    strict: bool = True,
) -> ComparisonReport:
    """Compare a two-firm joint venture with independent research.

    Without soft competition the venture innovates strictly more exactly
    when the budget exceeds ``B_bar`` and the interest rate exceeds
    ``rho_bar``; with soft competition it always does.

    Args:
        cs: Optional consumer surplus figures, which add ``cs_delta``.
        strict: Passed to :func:`competition_equilibrium`.

    Raises:
        AssumptionViolation: If regularity or, when ``strict``, the
            borrowing assumption fails.
        InvariantViolation: If the outcome contradicts the threshold
            conditions.
    """
    theta1 = solve_value_cutoff(cf, max(pq.escape_gain, 0.0), fin.rate)
    competition = competition_equilibrium(pq, cf, fin, strict=strict, theta1=theta1)
    theta_b = budget_cutoff(cf, 2.0 * fin.budget)
    venture = rjv_portfolio(pq, cf, fin, theta_b=theta_b)
    thresholds = compute_thresholds(pq, cf, fin, theta1=theta1)
    return compare_from_outcomes(pq, cf, fin, competition, venture, thresholds, cs)


@dataclass(frozen=True)
class ProfitabilityReport:
    """Whether a venture raises industry net profit and which condition guarantees it."""

    net_profit_delta: float
    prop3_flags: Dict[str, bool]
    icbad_candidate: bool


def rjv_profitability(
    pq: ProfitQuad, cf: CostFunction, fin: FinancingEnv, *, strict: bool = True
) -> ProfitabilityReport:
    """Net profit gain of a venture over competition with its sufficient conditions.

    ``prop3_flags`` reports which of three guarantees applies: soft
    competition; moderate competition with more innovation; intense
    competition with more innovation and
    ``(min(theta_B, theta_u) - theta1) / (theta1 - theta2) > psi``. The last
    test is false when ``theta1 == theta2``. ``icbad_candidate`` marks
    ventures that are profitable although they lower innovation.
    """
    report = compare_rjv_vs_competition(pq, cf, fin, strict=strict)
    flags = report.condition_flags
    prop3 = {"i": flags["prop3_i"], "ii": flags["prop3_ii"], "iii": flags["prop3_iii"]}
    return ProfitabilityReport(report.net_profit_delta, prop3, flags["icbad_candidate"])


def compare_rjv_vs_merger(
    pq: ProfitQuad,
    mono: MonopolyProfits,
    cf: CostFunction,
    fin: FinancingEnv,
    cs: Optional[CsTriple] = None,
) -> ComparisonReport:
    """Compare a joint venture (alternative) with a merger (baseline).

    The organisation with the larger value of success innovates weakly
    more. Both innovate equally when both spend exactly the pooled budget,
    which is flagged as ``equal_window``. The consumer-surplus ranking
    favours the venture unless the merger values success more and the
    budget lies outside the window where both spend it exactly.

    Raises:
        AssumptionViolation: If monopoly profits or surplus figures fail
            their assumptions, or the borrowing assumption fails.
        InvariantViolation: If the innovation ranking contradicts the value
            ranking.
    """
    theta1 = solve_value_cutoff(cf, max(pq.escape_gain, 0.0), fin.rate)
    competition = competition_equilibrium(pq, cf, fin, theta1=theta1)
    theta_b = budget_cutoff(cf, 2.0 * fin.budget)
    venture = rjv_portfolio(pq, cf, fin, theta_b=theta_b)
    merger = merger_portfolio(pq, mono, cf, fin, theta_b=theta_b)
    thresholds = compute_thresholds(pq, cf, fin, mono=mono, theta1=theta1)
    venture_value = 2.0 * pq.joint_gain
    merger_value = mono.gain
    innovation_delta = venture.innovation_prob - merger.innovation_prob
    verdict = _verdict(innovation_delta)
    equal_window = venture.innovation_prob == theta_b and merger.innovation_prob == theta_b
    window_lo = merger.cutoffs["theta_rho"]
    window_hi = venture.cutoffs["theta_u"]
    budget_in_window = window_lo <= theta_b <= window_hi
    if venture_value >= merger_value or budget_in_window:
        cs_verdict = CsVerdict.RJV_PREFERRED
    else:
        cs_verdict = CsVerdict.AMBIGUOUS
    cs_delta = None
    if cs is not None:
        cs_delta = expected_consumer_surplus(cs, venture) - expected_consumer_surplus(cs, merger)
    flags = {
        "rjv_value_ge_merger": venture_value >= merger_value,
        "equal_window": equal_window,
        "budget_in_merger_window": budget_in_window,
    }
    if fin.venture_rate == fin.rate:
        if venture_value > merger_value and innovation_delta < -VERDICT_TOL:
            raise InvariantViolation("venture values success more but innovates less than the merger")
        if venture_value < merger_value and innovation_delta > VERDICT_TOL:
            raise InvariantViolation("merger values success more but innovates less than the venture")
        if venture_value == merger_value and verdict is not Verdict.EQUAL:
            raise InvariantViolation("equal values of success must give equal innovation")
        if cs is not None and cs_verdict is CsVerdict.RJV_PREFERRED and cs_delta < -VERDICT_TOL:
            raise InvariantViolation(f"venture should be preferred by consumers but surplus changes by {cs_delta}")
    return ComparisonReport(
        baseline=merger,
        alternative=venture,
        innovation_delta=innovation_delta,
        spend_delta=venture.gamma - merger.gamma,
        net_profit_delta=venture.expected_net_profit - merger.expected_net_profit,
        cs_delta=cs_delta,
        thresholds=thresholds,
        regime=classify_regime(pq),
        condition_flags=flags,
        verdict=verdict,
        cs_verdict=cs_verdict,
    )


def compare_merger_vs_competition(
    pq: ProfitQuad,
    mono: MonopolyProfits,
    cf: CostFunction,
    fin: FinancingEnv,
    cs: Optional[CsTriple] = None,
) -> ComparisonReport:
    """Compare a merger (alternative) with independent research (baseline).

    If the merged firm values success more than a sole innovator,
    ``pi_I - pi_0 > pi_I0 - pi_00``, it always innovates more. Otherwise it
    innovates strictly more exactly when ``B > B_bar`` and
    ``rho > rho_bar_m``, and then spends weakly less.
    """
    theta1 = solve_value_cutoff(cf, max(pq.escape_gain, 0.0), fin.rate)
    competition = competition_equilibrium(pq, cf, fin, theta1=theta1)
    merger = merger_portfolio(pq, mono, cf, fin)
    thresholds = compute_thresholds(pq, cf, fin, mono=mono, theta1=theta1)
    innovation_delta = merger.innovation_prob - competition.innovation_prob
    verdict = _verdict(innovation_delta)
    dominant_value = mono.gain > pq.escape_gain
    b_gt = fin.budget > thresholds.B_bar
    rho_gt = fin.rate > thresholds.rho_bar_m
    cs_delta = None
    if cs is not None:
        cs_delta = expected_consumer_surplus(cs, merger) - expected_consumer_surplus(cs, competition)
    predicted = dominant_value or (b_gt and rho_gt)
    if predicted and innovation_delta < -VERDICT_TOL:
        raise InvariantViolation(f"merger conditions predict more innovation but delta is {innovation_delta}")
    if not predicted and innovation_delta > VERDICT_TOL:
        raise InvariantViolation(f"merger conditions fail but innovation rises by {innovation_delta}")
    spend_delta = merger.gamma - competition.gamma
    if not dominant_value and innovation_delta > VERDICT_TOL and spend_delta > 0.0:
        raise InvariantViolation(f"merger raises innovation but also spend, by {spend_delta}")
    flags = {"merger_value_dominant": dominant_value, "B_gt_Bbar": b_gt, "rho_gt_rhobar_m": rho_gt}
    return ComparisonReport(
        baseline=competition,
        alternative=merger,
        innovation_delta=innovation_delta,
        spend_delta=spend_delta,
        net_profit_delta=merger.expected_net_profit - competition.expected_net_profit,
        cs_delta=cs_delta,
        thresholds=thresholds,
        regime=classify_regime(pq),
        condition_flags=flags,
        verdict=verdict,
    )
