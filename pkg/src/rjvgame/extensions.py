"""Spillover and licensing variants of the venture-versus-competition comparison.

Both extensions only change what a sole innovator earns, so they are
handled by transforming the profit quad and re-running the core pipeline.
A joint venture shares its discovery anyway, which makes both extensions
irrelevant for the venture's own portfolio.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Optional, Union

from rjvgame.comparisons import ComparisonReport, compare_from_outcomes, compare_rjv_vs_competition
from rjvgame.cutoffs import (
    CostFunction,
    FinancingEnv,
    budget_cutoff,
    check_budget_assumption,
    compute_thresholds,
    solve_value_cutoff,
)
from rjvgame.equilibria import competition_equilibrium, rjv_portfolio
from rjvgame.errors import ConfigurationError
from rjvgame.model import (
    CsTriple,
    LicensingTerms,
    ProfitQuad,
    SpilloverRate,
    licensing_transform,
    require_regular,
    spillover_transform,
)

__all__ = [
    "ALWAYS",
    "NEVER",
    "SpilloverNoFcCutoffs",
    "spillover_no_fc_compare",
    "spillover_fc_compare",
    "licensing_compare",
    "check_extension_exclusive",
]

ALWAYS = "always"
"""Sentinel critical spillover rate: the venture wins for every rate."""

NEVER = "never"
"""Sentinel critical spillover rate: the venture wins for no rate."""


@dataclass(frozen=True)
class SpilloverNoFcCutoffs:
    """Cut-offs of the spillover model without financing frictions.

    Attributes:
        theta_nc1: Sole-innovator cut-off under competition.
        theta_nc2: Catch-up cut-off under competition.
        theta_u: Cut-off of the venture.
        rjv_better: Whether the venture funds strictly more projects.
        sigma_star: Spillover rate above which the venture wins, or one of
            the sentinels :data:`ALWAYS` and :data:`NEVER` when a sole
            innovator gains nothing over joint innovation.
    """

    theta_nc1: float
    theta_nc2: float
    theta_u: float
    rjv_better: bool
    sigma_star: Union[float, str]


def spillover_no_fc_compare(pq: ProfitQuad, s: SpilloverRate, cf: CostFunction) -> SpilloverNoFcCutoffs:
    """Compare competition and a venture when lone discoveries leak but credit is free.

    Firms value a lone discovery at ``(1 - sigma) pi_I0 + sigma pi_II - pi_00``
    and catching up at ``(1 - sigma)(pi_II - pi_0I)``, since a leak would
    have handed them the innovation anyway. The venture's cut-off solves
    ``C(theta_u) = 2 (pi_II - pi_00)``. It wins exactly when
    ``sigma > 1 - (pi_II - pi_00) / (pi_I0 - pi_II)``.
    """
    require_regular(pq)
    sigma = s.sigma
    escape = (1.0 - sigma) * pq.pi_I0 + sigma * pq.pi_II - pq.pi_00
    catch_up = (1.0 - sigma) * pq.catch_up_gain
    theta_nc1 = solve_value_cutoff(cf, max(escape, 0.0), 0.0)
    theta_nc2 = solve_value_cutoff(cf, max(catch_up, 0.0), 0.0)
    theta_u = solve_value_cutoff(cf, 2.0 * pq.joint_gain, 0.0)
    lead = pq.pi_I0 - pq.pi_II
    if lead > 0.0:
        sigma_star: Union[float, str] = 1.0 - pq.joint_gain / lead
    else:
        sigma_star = ALWAYS if pq.joint_gain > 0.0 else NEVER
    return SpilloverNoFcCutoffs(theta_nc1, theta_nc2, theta_u, theta_u > theta_nc1, sigma_star)


def spillover_fc_compare(
    pq: ProfitQuad,
    s: SpilloverRate,
    cf: CostFunction,
    fin: FinancingEnv,
    cs: Optional[CsTriple] = None,
    *,
    strict: bool = True,
) -> ComparisonReport:
    """Venture versus competition when lone discoveries leak and credit is costly.

    Competition is solved on the expected-payoff quad from
    :func:`~rjvgame.model.spillover_transform`; the venture is unaffected.
    The report's condition flags refer to the transformed thresholds, which
    are stored as ``rho_tilde`` and ``B_tilde`` next to the untransformed
    ones. A zero spillover rate returns the baseline report unchanged.

    Args:
        strict: When true, a budget that covers the transformed catch-up
            portfolio raises :class:`~rjvgame.errors.AssumptionViolation`.
            When false the comparison is still computed and the threshold
            self-check is skipped.
    """
    require_regular(pq)
    if s.sigma == 0.0:
        return compare_rjv_vs_competition(pq, cf, fin, cs, strict=strict)
    leaked = spillover_transform(pq, s)
    require_regular(leaked, relaxed=True)
    theta1 = solve_value_cutoff(cf, leaked.escape_gain, fin.rate)
    theta2 = solve_value_cutoff(cf, leaked.catch_up_gain, fin.rate)
    if strict:
        check_budget_assumption(cf, fin.budget, theta2, code="A2-spillover")
    competition = competition_equilibrium(
        leaked, cf, fin, strict=False, theta1=theta1, theta2=theta2, relaxed=True
    )
    venture = rjv_portfolio(pq, cf, fin, theta_b=budget_cutoff(cf, 2.0 * fin.budget))
    transformed = compute_thresholds(leaked, cf, fin, theta1=theta1)
    report = compare_from_outcomes(leaked, cf, fin, competition, venture, transformed, cs, relaxed=True)
    base = compute_thresholds(pq, cf, fin, spillover=s)
    return dataclasses.replace(report, thresholds=base)


def licensing_compare(
    pq: ProfitQuad,
    lt: LicensingTerms,
    cf: CostFunction,
    fin: FinancingEnv,
    cs: Optional[CsTriple] = None,
    *,
    strict: bool = True,
) -> ComparisonReport:
    """Venture versus competition when a sole innovator may license its discovery.

    If licensing pays, competition is solved on the licensing quad, whose
    sole-innovator cut-off ``theta1_L`` is weakly higher while the catch-up
    cut-off is unchanged. The thresholds ``rho_bar_L`` and ``B_bar_L`` are
    stored next to the untransformed ones and drive the condition flags.
    When licensing does not pay, or is disabled, the baseline report is
    returned unchanged.
    """
    require_regular(pq)
    licensed, occurs = licensing_transform(pq, lt)
    if not occurs:
        return compare_rjv_vs_competition(pq, cf, fin, cs, strict=strict)
    theta1 = solve_value_cutoff(cf, licensed.escape_gain, fin.rate)
    competition = competition_equilibrium(licensed, cf, fin, strict=strict, theta1=theta1)
    venture = rjv_portfolio(pq, cf, fin, theta_b=budget_cutoff(cf, 2.0 * fin.budget))
    transformed = compute_thresholds(licensed, cf, fin, theta1=theta1)
    report = compare_from_outcomes(licensed, cf, fin, competition, venture, transformed, cs)
    base = compute_thresholds(pq, cf, fin, licensing=lt)
    flags = dict(report.condition_flags, licensing_occurs=True)
    return dataclasses.replace(report, thresholds=base, condition_flags=flags)


def check_extension_exclusive(spillover: Optional[SpilloverRate], licensing: Optional[LicensingTerms]) -> None:
    """Reject scenarios that combine spillovers with licensing.

    Raises:
        ConfigurationError: If both extensions are requested.
    """
    if spillover is not None and licensing is not None and licensing.enabled:
        raise ConfigurationError("spillovers and licensing cannot be combined in one scenario")
