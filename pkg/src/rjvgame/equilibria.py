"""Equilibrium portfolios under competition, joint ventures and mergers.

Every function returns a :class:`PortfolioOutcome` that summarises the
industry: which projects get funded, how likely the innovation is, what
the industry spends and earns. Competition has many equilibria that differ
only in which firm funds the projects only one firm takes; the aggregates
reported here are the same in all of them. Per-firm figures follow the
selection in which firm 1 takes that whole middle interval.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from rjvgame.cutoffs import (
    CostFunction,
    FinancingEnv,
    check_budget_assumption,
    budget_cutoff,
    rjv_choice,
    solve_value_cutoff,
)
from rjvgame.errors import AssumptionViolation, DomainError, InvalidInputError
from rjvgame.model import MonopolyProfits, ProfitQuad, require_regular, validate_monopoly, validate_regularity

__all__ = [
    "OutcomeLabel",
    "PortfolioOutcome",
    "RiskDominanceReport",
    "MultiFirmProfits",
    "SELECTION_NOTE",
    "competition_equilibrium",
    "rjv_portfolio",
    "merger_portfolio",
    "validate_multi_firm",
    "three_firm_cutoffs",
    "three_firm_outcomes",
    "two_rjv_equilibrium",
    "risk_dominance_check",
]

SELECTION_NOTE = (
    "per-firm split is selection dependent: firm 1 funds every project that only one firm takes; "
    "industry aggregates hold in every equilibrium"
)


class OutcomeLabel(str, enum.Enum):
    COMPETITION = "Competition"
    RJV = "RJV"
    MERGER = "Merger"
    THREE_FIRM_COMPETITION = "ThreeFirmCompetition"
    THREE_FIRM_RJV = "ThreeFirmRJV"
    TWO_RJVS = "TwoRJVs"


@dataclass(frozen=True)
class PortfolioOutcome:
    """Industry summary of one equilibrium portfolio.

    Attributes:
        regime_label: Which organisational form produced the outcome.
        innovation_prob: Probability that some agent funds the right project.
        duplicated_mass: Probability mass of projects funded by more than
            one agent.
        raw_spend: Industry total of project costs.
        financing_cost: Interest paid on borrowed funds.
        gamma: Total cost of research, ``raw_spend + financing_cost``.
        expected_gross_profit: Industry product-market profit in expectation.
        expected_net_profit: Gross profit minus ``gamma``.
        borrows: Whether any agent borrows externally.
        cutoffs: Named cut-off projects behind the outcome.
        agent_spend: Raw spend per agent (firm, venture or merged firm).
        notes: Human-readable diagnostics such as assumption annotations.
    """

    regime_label: OutcomeLabel
    innovation_prob: float
    duplicated_mass: float
    raw_spend: float
    financing_cost: float
    gamma: float
    expected_gross_profit: float
    expected_net_profit: float
    borrows: bool
    cutoffs: Dict[str, float] = field(default_factory=dict, hash=False, compare=True)
    agent_spend: Tuple[float, ...] = ()
    notes: Tuple[str, ...] = ()


def _outcome(label, innovation, duplicated, raw, financing, gross, cutoffs, agent_spend, borrows, notes=()):
    gamma = raw + financing
    return PortfolioOutcome(
        regime_label=label,
        innovation_prob=innovation,
        duplicated_mass=duplicated,
        raw_spend=raw,
        financing_cost=financing,
        gamma=gamma,
        expected_gross_profit=gross,
        expected_net_profit=gross - gamma,
        borrows=borrows,
        cutoffs=cutoffs,
        agent_spend=tuple(agent_spend),
        notes=tuple(notes),
    )


def competition_equilibrium(
    pq: ProfitQuad,
    cf: CostFunction,
    fin: FinancingEnv,
    *,
    strict: bool = True,
    theta1: Optional[float] = None,
    theta2: Optional[float] = None,
    relaxed: bool = False,
) -> PortfolioOutcome:
    """Industry outcome when the two firms choose research portfolios independently.

    Both firms fund every project below ``theta2``, one firm funds the
    projects in ``(theta2, theta1)`` and nobody funds the rest, where
    ``(1 + rho) C(theta1) = pi_I0 - pi_00`` and
    ``(1 + rho) C(theta2) = pi_II - pi_0I``.

    Args:
        strict: When true, a budget large enough that a firm might not
            borrow raises :class:`AssumptionViolation`. When false the
            outcome is still computed, with borrowing charged only on spend
            above each firm's budget, and the failure is listed in ``notes``.
        theta1: Optional precomputed sole-innovator cut-off.
        theta2: Optional precomputed catch-up cut-off.
        relaxed: Only require the inequalities the race needs, for
            transformed quads (see :func:`~rjvgame.model.validate_race_regularity`).

    Raises:
        AssumptionViolation: If the quad is irregular, or if ``strict`` and
            the budget covers the cheaper firm's whole portfolio.
    """
    require_regular(pq, relaxed=relaxed)
    if theta1 is None:
        theta1 = solve_value_cutoff(cf, pq.escape_gain, fin.rate)
    if theta2 is None:
        theta2 = solve_value_cutoff(cf, pq.catch_up_gain, fin.rate)
    m1 = cf.mass(theta1)
    m2 = cf.mass(theta2)
    notes = [SELECTION_NOTE]
    if m2 > fin.budget:
        financing = fin.rate * (m1 + m2 - 2.0 * fin.budget)
    else:
        if strict:
            check_budget_assumption(cf, fin.budget, theta2)
        notes.append(f"A2 violated: budget {fin.budget} >= cost {m2} of the catch-up portfolio")
        financing = fin.rate * (max(0.0, m1 - fin.budget) + max(0.0, m2 - fin.budget))
    gross = (
        2.0 * theta2 * pq.pi_II
        + (theta1 - theta2) * (pq.pi_I0 + pq.pi_0I)
        + 2.0 * (1.0 - theta1) * pq.pi_00
    )
    return _outcome(
        OutcomeLabel.COMPETITION,
        theta1,
        theta2,
        m1 + m2,
        financing,
        gross,
        {"theta1": theta1, "theta2": theta2},
        (m1, m2),
        max(m1, m2) > fin.budget,
        notes,
    )


def _single_cutoff_portfolio(label, value, win, lose, agents, cf, budget, rate, theta_b=None):
    """Shared logic of every single decision maker with a pooled budget."""
    theta_rho = solve_value_cutoff(cf, value, rate)
    theta_u = solve_value_cutoff(cf, value, 0.0)
    if theta_b is None:
        theta_b = budget_cutoff(cf, budget)
    theta_star = rjv_choice(theta_b, theta_rho, theta_u)
    raw = cf.mass(theta_star)
    financing = rate * max(0.0, raw - budget) if theta_star > theta_b else 0.0
    gross = agents * (theta_star * win + (1.0 - theta_star) * lose)
    cutoffs = {"theta_rho": theta_rho, "theta_u": theta_u, "theta_B": theta_b, "theta_star": theta_star}
    return _outcome(label, theta_star, 0.0, raw, financing, gross, cutoffs, (raw,), theta_star > theta_b)


def rjv_portfolio(
    pq: ProfitQuad, cf: CostFunction, fin: FinancingEnv, *, theta_b: Optional[float] = None
) -> PortfolioOutcome:
    """Portfolio of a two-firm joint venture that pools budgets and shares results.

    The venture values success at ``2 (pi_II - pi_00)`` and funds every
    project below a single cut-off: the borrowing cut-off when the pooled
    budget runs out before it, the budget cut-off when that lies between the
    borrowing and unconstrained cut-offs, and the unconstrained cut-off
    otherwise. Loans are charged at ``fin.venture_rate``.
    """
    require_regular(pq)
    return _single_cutoff_portfolio(
        OutcomeLabel.RJV,
        2.0 * pq.joint_gain,
        pq.pi_II,
        pq.pi_00,
        2,
        cf,
        2.0 * fin.budget,
        fin.venture_rate,
        theta_b,
    )


def merger_portfolio(
    pq: ProfitQuad, mono: MonopolyProfits, cf: CostFunction, fin: FinancingEnv, *, theta_b: Optional[float] = None
) -> PortfolioOutcome:
    """Portfolio of the merged firm, which owns both budgets and values success at ``pi_I - pi_0``.

    Raises:
        AssumptionViolation: If innovation does not raise monopoly profit.
    """
    codes = validate_monopoly(mono)
    if codes:
        raise AssumptionViolation(f"monopoly profits {mono} fail {codes[0]}", codes)
    require_regular(pq)
    return _single_cutoff_portfolio(
        OutcomeLabel.MERGER, mono.gain, mono.pi_I, mono.pi_0, 1, cf, 2.0 * fin.budget, fin.rate, theta_b
    )


@dataclass(frozen=True)
class MultiFirmProfits:
    """Symmetric profits of an industry with three or four firms.

    Profit depends only on the firm's own technology and on how many rivals
    hold the new technology. ``without[k]`` is the profit of a firm without
    the innovation facing ``k`` innovating rivals, ``with_[k]`` the profit
    of an innovating firm in the same situation.
    """

    without: Tuple[float, ...]
    with_: Tuple[float, ...]

    def __post_init__(self):
        without = tuple(float(v) for v in self.without)
        with_ = tuple(float(v) for v in self.with_)
        object.__setattr__(self, "without", without)
        object.__setattr__(self, "with_", with_)
        if len(without) != len(with_) or len(without) not in (3, 4):
            raise InvalidInputError("multi-firm profits need 3 or 4 entries per technology state")
        if not all(math.isfinite(v) for v in without + with_):
            raise InvalidInputError("multi-firm profits must be finite")

    @property
    def firms(self) -> int:
        return len(self.without)

    def marginal_values(self) -> Tuple[float, ...]:
        """Value of own innovation facing ``k`` innovating rivals, for each ``k``."""
        return tuple(w - o for w, o in zip(self.with_, self.without))

    def pair_values(self) -> Tuple[float, float]:
        """Values of success for a two-firm venture in a four-firm industry.

        The first entry applies when the other venture failed, the second
        when it succeeded. Both count the two members.
        """
        if self.firms != 4:
            raise InvalidInputError("pair values are defined for four firms")
        return (2.0 * (self.with_[1] - self.without[0]), 2.0 * (self.with_[3] - self.without[2]))


def validate_multi_firm(mp: MultiFirmProfits) -> List[str]:
    """Return the failed regularity codes of a multi-firm profit table.

    ``A6i`` non-negativity, ``A6ii`` full innovation beats none, ``A6iii``
    rival innovation weakly lowers profit, ``A6iv`` the value of own
    innovation weakly falls with the number of innovating rivals. For four
    firms ``A6v`` additionally requires a venture's value of success to be
    weakly higher when the other venture fails.
    """
    codes = []
    n = mp.firms
    if min(mp.without + mp.with_) < 0:
        codes.append("A6i")
    if mp.with_[n - 1] < mp.without[0]:
        codes.append("A6ii")
    if any(b > a for a, b in zip(mp.without, mp.without[1:])):
        codes.append("A6iii")
    values = mp.marginal_values()
    if any(b > a for a, b in zip(values, values[1:])):
        codes.append("A6iv")
    if n == 4:
        v1, v2 = mp.pair_values()
        if v2 > v1:
            codes.append("A6v")
    return codes


def _require_multi(mp: MultiFirmProfits, firms: int) -> None:
    if mp.firms != firms:
        raise InvalidInputError(f"expected a {firms}-firm profit table, got {mp.firms} firms")
    codes = validate_multi_firm(mp)
    if codes:
        raise AssumptionViolation(f"multi-firm profits fail {', '.join(codes)}", codes)


def three_firm_cutoffs(mp: MultiFirmProfits, cf: CostFunction, rate: float) -> Tuple[float, float, float]:
    """Competition cut-offs ``(theta1, theta2, theta3)`` of the three-firm race.

    ``theta_k`` prices the value of innovating when ``k - 1`` rivals already
    fund the same project.
    """
    values = mp.marginal_values()
    return tuple(solve_value_cutoff(cf, max(v, 0.0), rate) for v in values)


def three_firm_outcomes(
    mp: MultiFirmProfits, cf: CostFunction, fin: FinancingEnv, *, strict: bool = True
) -> Tuple[PortfolioOutcome, PortfolioOutcome]:
    """Competition among three firms and an industry-wide venture of all three.

    Under competition all firms fund projects below ``theta3``, two fund
    ``(theta3, theta2)`` and one funds ``(theta2, theta1)``. The venture
    values success at ``3 (pi_III - pi_000)`` and pools ``3B``.

    Raises:
        AssumptionViolation: On irregular profits or, when ``strict``, a
            budget that covers the cheapest firm's portfolio.
    """
    _require_multi(mp, 3)
    t1, t2, t3 = three_firm_cutoffs(mp, cf, fin.rate)
    m1, m2, m3 = cf.mass(t1), cf.mass(t2), cf.mass(t3)
    notes = [SELECTION_NOTE]
    if not m3 > fin.budget:
        if strict:
            check_budget_assumption(cf, fin.budget, t3, code="A2-3")
        notes.append(f"A2-3 violated: budget {fin.budget} >= cost {m3} of the cheapest portfolio")
    spend = (m1, m2, m3)
    financing = fin.rate * sum(max(0.0, m - fin.budget) for m in spend)
    p0, pI = mp.without, mp.with_
    gross = (
        t3 * 3.0 * pI[2]
        + (t2 - t3) * (2.0 * pI[1] + p0[2])
        + (t1 - t2) * (pI[0] + 2.0 * p0[1])
        + (1.0 - t1) * 3.0 * p0[0]
    )
    competition = _outcome(
        OutcomeLabel.THREE_FIRM_COMPETITION,
        t1,
        t2,
        m1 + m2 + m3,
        financing,
        gross,
        {"theta1": t1, "theta2": t2, "theta3": t3},
        spend,
        max(spend) > fin.budget,
        notes,
    )
    venture = _single_cutoff_portfolio(
        OutcomeLabel.THREE_FIRM_RJV,
        3.0 * (pI[2] - p0[0]),
        pI[2],
        p0[0],
        3,
        cf,
        3.0 * fin.budget,
        fin.venture_rate,
    )
    return competition, venture


def _lambda_cutoffs(cf: CostFunction, v1: float, v2: float, shadow: float) -> Tuple[float, float]:
    return solve_value_cutoff(cf, v1, shadow), solve_value_cutoff(cf, v2, shadow)


def two_rjv_equilibrium(mp: MultiFirmProfits, cf: CostFunction, fin: FinancingEnv) -> PortfolioOutcome:
    """Race between two symmetric two-firm ventures that never borrow.

    Each venture holds ``2B``. The equilibrium has a double cut-off
    structure ``theta_low <= theta_high``: both ventures fund projects below
    ``theta_low`` and one funds ``(theta_low, theta_high)``. When the
    unconstrained cut-offs cost more than the joint ``4B``, both ventures
    spend their whole budget and the cut-offs are priced at a common shadow
    value of funds ``lam``, found by bisection, with
    ``(1 + lam) C(theta_high) = V1`` and ``(1 + lam) C(theta_low) = V2``.
    The no-borrowing premise guarantees ``lam <= rho``, so borrowing never
    pays.

    Raises:
        AssumptionViolation: On irregular profits, or when ``2B`` does not
            exceed the cost of the borrowing cut-off portfolio (code ``A7``).
    """
    _require_multi(mp, 4)
    v1, v2 = mp.pair_values()
    v1, v2 = max(v1, 0.0), max(v2, 0.0)
    pooled = 2.0 * fin.budget
    theta1_rho = solve_value_cutoff(cf, v1, fin.venture_rate)
    bound = cf.mass(theta1_rho)
    if not pooled > bound:
        raise AssumptionViolation(
            f"venture budget {pooled} does not exceed the cost {bound} of its borrowing cut-off portfolio",
            ["A7"],
            bound,
        )
    high, low = _lambda_cutoffs(cf, v1, v2, 0.0)
    shadow = 0.0
    if cf.mass(high) + cf.mass(low) > 2.0 * pooled:
        lo, hi = 0.0, max(fin.venture_rate, 1e-12)
        while hi - lo > 1e-14 * max(1.0, hi):
            mid = 0.5 * (lo + hi)
            h, l = _lambda_cutoffs(cf, v1, v2, mid)
            if cf.mass(h) + cf.mass(l) > 2.0 * pooled:
                lo = mid
            else:
                hi = mid
        shadow = hi
        high, low = _lambda_cutoffs(cf, v1, v2, shadow)
    m_high, m_low = cf.mass(high), cf.mass(low)
    total = m_high + m_low
    first = min(m_high, pooled)
    spend = (first, total - first)
    p0, pI = mp.without, mp.with_
    gross = (
        low * 4.0 * pI[3]
        + (high - low) * (2.0 * pI[1] + 2.0 * p0[2])
        + (1.0 - high) * 4.0 * p0[0]
    )
    cutoffs = {"theta_high": high, "theta_low": low, "theta_B": budget_cutoff(cf, pooled), "shadow_rate": shadow}
    notes = ["ventures pair up exogenously; the split of the single-venture interval is selection dependent"]
    return _outcome(OutcomeLabel.TWO_RJVS, high, low, total, 0.0, gross, cutoffs, spend, False, notes)


@dataclass(frozen=True)
class RiskDominanceReport:
    """Payoff differences of the 2x2 selection game between two equilibria.

    The two candidate equilibria differ in which firm funds a deviation set
    of mass ``mass_D`` inside the single-firm interval. ``margin`` equals
    ``v1 * v2 - u1 * u2`` but is evaluated in the factored form
    ``K (rho_h - rho_l) M (pi_I0 - pi_00 + pi_0I - pi_II)`` so that rounding
    cannot flip its sign.
    """

    u1: float
    u2: float
    v1: float
    v2: float
    mass_D: float
    cost_D: float
    margin: float
    dominant: bool


def risk_dominance_check(
    pq: ProfitQuad,
    rate_low: float,
    rate_high: float,
    cf: CostFunction,
    deviation: Tuple[float, float],
) -> RiskDominanceReport:
    """Test whether giving the deviation set to the cheaper-credit firm is risk dominant.

    Args:
        pq: Profit quad. Regularity is not enforced so that counterexamples
            can be explored.
        rate_low: Borrowing rate of the firm with cheaper credit.
        rate_high: Borrowing rate of the other firm.
        cf: Cost schedule.
        deviation: Interval ``(lo, hi)`` of projects whose funder differs
            between the two equilibria.

    Raises:
        InvalidInputError: Unless ``0 < rate_low <= rate_high``.
        DomainError: If the interval is empty or leaves the range between the
            low-rate firm's catch-up cut-off and the high-rate firm's
            sole-innovator cut-off.
    """
    if not (0.0 < rate_low <= rate_high and math.isfinite(rate_high)):
        raise InvalidInputError(f"need 0 < rate_low <= rate_high, got {rate_low}, {rate_high}")
    lo, hi = deviation
    left = solve_value_cutoff(cf, max(pq.catch_up_gain, 0.0), rate_low)
    right = solve_value_cutoff(cf, max(pq.escape_gain, 0.0), rate_high)
    if not (left <= lo < hi <= right):
        raise DomainError(f"deviation interval ({lo}, {hi}) must lie inside ({left}, {right})")
    mass_d = hi - lo
    cost_d = cf.mass(hi) - cf.mass(lo)
    lose = mass_d * (pq.pi_0I - pq.pi_II)
    win = mass_d * (pq.pi_I0 - pq.pi_00)
    u1 = lose + (1.0 + rate_low) * cost_d
    u2 = win - (1.0 + rate_high) * cost_d
    v1 = win - (1.0 + rate_low) * cost_d
    v2 = lose + (1.0 + rate_high) * cost_d
    margin = cost_d * (rate_high - rate_low) * (win + lose)
    return RiskDominanceReport(u1, u2, v1, v2, mass_d, cost_d, margin, margin >= 0.0)
