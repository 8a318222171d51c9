"""Equilibria of a financially constrained R&D project-choice game.

Two firms choose research portfolios from a continuum of projects ordered
by cost. They compete, form a joint venture that pools budgets and shares
results, or merge. Borrowing beyond the internal budget costs interest.
The package computes equilibrium cut-offs, industry outcomes and the
comparisons between organisational forms. It also provides extensions
with spillovers, licensing and more firms, a discrete brute-force oracle,
and parameter sweeps.
"""

from rjvgame.comparisons import (
    ComparisonReport,
    CsVerdict,
    Verdict,
    compare_merger_vs_competition,
    compare_rjv_vs_competition,
    compare_rjv_vs_merger,
    expected_consumer_surplus,
    rjv_profitability,
)
from rjvgame.cutoffs import (
    CostFunction,
    CutoffSet,
    FinancingEnv,
    PowerCost,
    RatioCost,
    TabulatedCost,
    ThresholdRecord,
    budget_cutoff,
    compute_cutoffs,
    compute_thresholds,
    rate_threshold,
    solve_value_cutoff,
)
from rjvgame.equilibria import (
    MultiFirmProfits,
    OutcomeLabel,
    PortfolioOutcome,
    competition_equilibrium,
    merger_portfolio,
    risk_dominance_check,
    rjv_portfolio,
    three_firm_outcomes,
    two_rjv_equilibrium,
)
from rjvgame.errors import (
    AssumptionViolation,
    ConfigurationError,
    DomainError,
    InvalidInputError,
    InvariantViolation,
    MarketValidityError,
    ModelError,
    PreconditionError,
)
from rjvgame.extensions import licensing_compare, spillover_fc_compare, spillover_no_fc_compare
from rjvgame.markets import BertrandPrimitives, CournotPrimitives, bertrand_market, cournot_market
from rjvgame.model import (
    CsTriple,
    LicensingTerms,
    MarketRegime,
    MonopolyProfits,
    ProfitQuad,
    SpilloverRate,
    classify_regime,
    validate_regularity,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
