"""Brute-force check of the continuum results on a discretised project line.

The unit interval of projects is cut into ``N`` equal cells. Exactly one
cell holds the right project, each with probability ``1/N``, and funding a
cell costs the exact integral of the cost schedule over it. Firms choose
sets of cells. Because borrowing is charged only on spend above the
budget, a firm's best response is not cell-by-cell greedy. It is found
exactly by noting that cells split into two value classes, those the
rival funds and those it does not, and that within a class the cheapest
cells are always taken first.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from rjvgame.cutoffs import QUAD_UPPER, CostFunction, FinancingEnv, compute_cutoffs
from rjvgame.errors import ConfigurationError
from rjvgame.model import ProfitQuad

__all__ = [
    "MAX_EXHAUSTIVE_CELLS",
    "MAX_BEST_RESPONSE_CELLS",
    "PAYOFF_ATOL",
    "DiscreteGame",
    "DiscreteStrategy",
    "DiscreteEquilibrium",
    "FixedPoint",
    "DiscreteSolution",
    "RjvOptimum",
    "best_response",
    "double_cutoff_structure",
    "solve_discrete_game",
    "discrete_rjv_optimum",
]

MAX_EXHAUSTIVE_CELLS = 14
"""Largest grid for exhaustive enumeration (``4**N`` profiles)."""

MAX_BEST_RESPONSE_CELLS = 2000
"""Largest grid for best-response dynamics, whose steps cost ``O(N**2)``."""

PAYOFF_ATOL = 1e-12
"""Payoffs closer than this are treated as ties."""


@dataclass(frozen=True)
class DiscreteGame:
    """Two-firm project-choice game on ``cells`` equal cells.

    Attributes:
        quad: Product-market profits.
        cf: Cost schedule; each cell costs its exact integral, with the last
            cell's upper limit clamped below the singularity at 1.
        fin: Budget and rate of each firm.
        cells: Number of cells ``N``.
    """

    quad: ProfitQuad
    cf: CostFunction
    fin: FinancingEnv
    cells: int
    cell_costs: Tuple[float, ...] = field(init=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.cells, int) or self.cells < 1:
            raise ConfigurationError(f"the grid needs at least one cell, got {self.cells!r}")
        n = self.cells
        edges = [self.cf.mass(min(i / n, QUAD_UPPER)) for i in range(n + 1)]
        object.__setattr__(self, "cell_costs", tuple(b - a for a, b in zip(edges, edges[1:])))

    @property
    def escape_value(self) -> float:
        """Value of a lone success in one cell, ``(pi_I0 - pi_00) / N``."""
        return self.quad.escape_gain / self.cells

    @property
    def catch_up_value(self) -> float:
        """Value of a shared success in one cell, ``(pi_II - pi_0I) / N``."""
        return self.quad.catch_up_gain / self.cells

    def prefix_cost(self, cells: int) -> float:
        return float(sum(self.cell_costs[:cells]))

    def budget_assumption_holds(self) -> bool:
        """Whether the borrowing assumption of the continuum model holds.

        The budget must fall short of the cost of the catch-up portfolio
        ``C(theta2)``. The grid can shift the discrete cut-offs by up to a
        cell either way, so this is the reference check rather than a
        discrete one.
        """
        theta2 = compute_cutoffs(self.quad, self.cf, self.fin).theta2
        return self.fin.budget < self.cf.mass(theta2)

    def financing(self, spend):
        """Spend plus interest on the part above the budget; works on arrays."""
        return spend + self.fin.rate * np.maximum(0.0, spend - self.fin.budget)


@dataclass(frozen=True)
class DiscreteStrategy:
    """Invest flags per cell, one tuple per decision maker."""

    flags: Tuple[Tuple[bool, ...], ...]

    @classmethod
    def from_masks(cls, masks: Sequence[int], cells: int) -> "DiscreteStrategy":
        return cls(tuple(tuple(bool((m >> i) & 1) for i in range(cells)) for m in masks))


@dataclass(frozen=True)
class DiscreteEquilibrium:
    """One pure equilibrium profile of the discrete game.

    Attributes:
        strategy: Investment flags of both firms.
        payoffs: Expected net payoffs of firm 1 and firm 2.
        double_cutoff: Whether the profile has the double cut-off shape.
        low_cut, high_cut: Number of cells funded by both firms and by at
            least one firm; ``None`` when the shape fails.
        low_deviation, high_deviation: Distance of ``low_cut / N`` and
            ``high_cut / N`` from the analytic cut-offs, in cell widths.
    """

    strategy: DiscreteStrategy
    payoffs: Tuple[float, float]
    double_cutoff: bool
    low_cut: Optional[int]
    high_cut: Optional[int]
    low_deviation: Optional[float]
    high_deviation: Optional[float]

    @property
    def innovation_prob(self) -> float:
        a, b = self.strategy.flags
        return sum(x or y for x, y in zip(a, b)) / len(a)


@dataclass(frozen=True)
class FixedPoint:
    """Result of best-response dynamics from one seed."""

    seed: str
    converged: bool
    iterations: int
    equilibrium: DiscreteEquilibrium


@dataclass(frozen=True)
class DiscreteSolution:
    """Everything :func:`solve_discrete_game` found.

    Attributes:
        mode: ``"exhaustive"`` or ``"best_response"``.
        cells: Grid size.
        equilibria: All pure equilibria (exhaustive) or the distinct fixed
            points (best response), in deterministic order.
        fixed_points: Per-seed dynamics results, empty in exhaustive mode.
        seeds_coincide: Whether both seeds reached the same profile.
        shapes_coincide: Whether both seeds reached profiles with the same
            cut cells; the split of the one-firm cells may still differ.
        ties: Number of best-response problems with more than one optimum.
        theta1, theta2: Analytic cut-offs used for the deviations.
        budget_assumption: Whether the discrete borrowing assumption holds.
    """

    mode: str
    cells: int
    equilibria: Tuple[DiscreteEquilibrium, ...]
    fixed_points: Tuple[FixedPoint, ...]
    seeds_coincide: Optional[bool]
    shapes_coincide: Optional[bool]
    ties: int
    theta1: float
    theta2: float
    budget_assumption: bool

    @property
    def all_double_cutoff(self) -> bool:
        return all(eq.double_cutoff for eq in self.equilibria)

    @property
    def max_deviation(self) -> Optional[float]:
        devs = [
            d
            for eq in self.equilibria
            for d in (eq.low_deviation, eq.high_deviation)
            if d is not None
        ]
        return max(devs) if devs else None

    @property
    def innovation_probs(self) -> Tuple[float, ...]:
        return tuple(sorted({eq.innovation_prob for eq in self.equilibria}))


def double_cutoff_structure(first: Sequence[bool], second: Sequence[bool]) -> Tuple[bool, Optional[int], Optional[int]]:
    """Check for the double cut-off shape and return its cut cells.

    The shape holds when there are ``low <= high`` such that both firms fund
    every cell below ``low``, exactly one firm funds each cell in
    ``[low, high)`` and neither funds a cell at or above ``high``.
    """
    n = len(first)
    i = 0
    while i < n and first[i] and second[i]:
        i += 1
    low = i
    while i < n and (first[i] != second[i]):
        i += 1
    high = i
    while i < n and not first[i] and not second[i]:
        i += 1
    if i != n:
        return False, None, None
    return True, low, high


def _build_equilibrium(game: DiscreteGame, first, second, payoffs, theta1, theta2) -> DiscreteEquilibrium:
    ok, low, high = double_cutoff_structure(first, second)
    n = game.cells
    low_dev = high_dev = None
    if ok:
        low_dev = abs(low - theta2 * n)
        high_dev = abs(high - theta1 * n)
    strategy = DiscreteStrategy((tuple(bool(x) for x in first), tuple(bool(x) for x in second)))
    return DiscreteEquilibrium(strategy, (float(payoffs[0]), float(payoffs[1])), ok, low, high, low_dev, high_dev)


def _payoff(game: DiscreteGame, own: np.ndarray, rival: np.ndarray) -> float:
    q = game.quad
    n = game.cells
    both = np.count_nonzero(own & rival)
    only_own = np.count_nonzero(own & ~rival)
    only_rival = np.count_nonzero(~own & rival)
    neither = n - both - only_own - only_rival
    gross = (both * q.pi_II + only_own * q.pi_I0 + only_rival * q.pi_0I + neither * q.pi_00) / n
    spend = float(np.dot(np.asarray(game.cell_costs), own))
    return gross - float(game.financing(spend))


def best_response(game: DiscreteGame, rival: Sequence[bool]) -> Tuple[np.ndarray, bool]:
    """Exact best response of a firm to the rival's investment flags.

    Cells the rival skips are worth ``escape_value`` each and cells it funds
    ``catch_up_value``. For every pair of counts ``(m_free, m_shared)`` the
    cheapest cells of each class are taken, and the best pair wins. Ties
    within :data:`PAYOFF_ATOL` go to fewer cells, then to lower spend.

    Returns:
        The chosen flags and whether the optimum was tied.
    """
    rival = np.asarray(rival, dtype=bool)
    costs = np.asarray(game.cell_costs)
    free_idx = np.flatnonzero(~rival)
    shared_idx = np.flatnonzero(rival)
    free_cum = np.concatenate(([0.0], np.cumsum(costs[free_idx])))
    shared_cum = np.concatenate(([0.0], np.cumsum(costs[shared_idx])))
    spend = free_cum[:, None] + shared_cum[None, :]
    m_free = np.arange(free_idx.size + 1)[:, None]
    m_shared = np.arange(shared_idx.size + 1)[None, :]
    value = game.escape_value * m_free + game.catch_up_value * m_shared - game.financing(spend)
    top = value.max()
    near = value >= top - PAYOFF_ATOL
    tied = int(np.count_nonzero(near)) > 1
    count = np.broadcast_to(m_free + m_shared, value.shape)
    order = np.lexsort((spend[near], count[near]))
    rows, cols = np.nonzero(near)
    k_free, k_shared = rows[order[0]], cols[order[0]]
    flags = np.zeros(game.cells, dtype=bool)
    flags[free_idx[:k_free]] = True
    flags[shared_idx[:k_shared]] = True
    return flags, tied


def _mask_tables(game: DiscreteGame):
    n = game.cells
    size = 1 << n
    masks = np.arange(size, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(n)) & 1).astype(bool)
    pop = bits.sum(axis=1).astype(np.int64)
    spend = bits.astype(float) @ np.asarray(game.cell_costs)
    own_value = game.escape_value * pop - game.financing(spend)
    return masks, pop, own_value


def _exhaustive_best_values(args):
    game, start, stop = args
    masks, pop, own_value = _mask_tables(game)
    penalty = game.escape_value - game.catch_up_value
    best = np.empty(stop - start)
    ties = 0
    for r in range(start, stop):
        values = own_value - penalty * pop[masks & r]
        top = values.max()
        best[r - start] = top
        if np.count_nonzero(values >= top - PAYOFF_ATOL) > 1:
            ties += 1
    return best, ties


def _exhaustive_profiles(args):
    game, best, start, stop = args
    masks, pop, own_value = _mask_tables(game)
    penalty = game.escape_value - game.catch_up_value
    found = []
    for r in range(start, stop):
        values = own_value - penalty * pop[masks & r]
        candidates = np.flatnonzero(values >= best[r] - PAYOFF_ATOL)
        for s in candidates:
            reply = own_value[r] - penalty * pop[r & s]
            if reply >= best[s] - PAYOFF_ATOL:
                found.append((int(s), r))
    return found


def _chunks(size: int, workers: int):
    step = max(1, -(-size // workers))
    return [(i, min(size, i + step)) for i in range(0, size, step)]


def _map(func, jobs, workers: int):
    if workers <= 1 or len(jobs) <= 1:
        return [func(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, jobs))


def _solve_exhaustive(game: DiscreteGame, workers: int):
    size = 1 << game.cells
    chunks = _chunks(size, workers)
    parts = _map(_exhaustive_best_values, [(game, a, b) for a, b in chunks], workers)
    best = np.concatenate([p[0] for p in parts])
    ties = sum(p[1] for p in parts)
    found = _map(_exhaustive_profiles, [(game, best, a, b) for a, b in chunks], workers)
    profiles = sorted(pair for part in found for pair in part)
    return profiles, ties


def _mask_flags(mask: int, cells: int) -> np.ndarray:
    return np.array([(mask >> i) & 1 for i in range(cells)], dtype=bool)


def _run_dynamics(game: DiscreteGame, seed_value: bool, max_rounds: int):
    first = np.full(game.cells, seed_value, dtype=bool)
    second = first.copy()
    ties = 0
    for rounds in range(1, max_rounds + 1):
        new_first, tied_a = best_response(game, second)
        new_second, tied_b = best_response(game, new_first)
        ties += tied_a + tied_b
        if np.array_equal(new_first, first) and np.array_equal(new_second, second):
            return first, second, True, rounds, ties
        first, second = new_first, new_second
    return first, second, False, max_rounds, ties


def solve_discrete_game(game: DiscreteGame, mode: str = "exhaustive", *, workers: int = 1) -> DiscreteSolution:
    """Find pure equilibria of the discrete game.

    Args:
        game: The discretised game.
        mode: ``"exhaustive"`` checks every profile and needs at most
            :data:`MAX_EXHAUSTIVE_CELLS` cells. ``"best_response"`` iterates
            alternating exact best responses from the all-out and all-in
            seeds and reports each fixed point.
        workers: Worker processes for exhaustive enumeration. Results do not
            depend on this number.

    Raises:
        ConfigurationError: For an unknown mode or a grid outside the mode's
            bounds.
    """
    n = game.cells
    cut = compute_cutoffs(game.quad, game.cf, game.fin)
    theta1, theta2 = cut.theta1, cut.theta2
    budget_ok = game.budget_assumption_holds()
    if mode == "exhaustive":
        if n > MAX_EXHAUSTIVE_CELLS:
            raise ConfigurationError(f"exhaustive mode supports at most {MAX_EXHAUSTIVE_CELLS} cells, got {n}")
        profiles, ties = _solve_exhaustive(game, max(1, int(workers)))
        equilibria = []
        for s, r in profiles:
            first, second = _mask_flags(s, n), _mask_flags(r, n)
            payoffs = (_payoff(game, first, second), _payoff(game, second, first))
            equilibria.append(_build_equilibrium(game, first, second, payoffs, theta1, theta2))
        return DiscreteSolution(mode, n, tuple(equilibria), (), None, None, ties, theta1, theta2, budget_ok)
    if mode in ("best_response", "bestresponse"):
        if n > MAX_BEST_RESPONSE_CELLS:
            raise ConfigurationError(
                f"best-response mode supports at most {MAX_BEST_RESPONSE_CELLS} cells, got {n}"
            )
        points = []
        ties = 0
        for label, seed in (("none", False), ("all", True)):
            first, second, converged, rounds, seed_ties = _run_dynamics(game, seed, 4 * n + 10)
            ties += seed_ties
            payoffs = (_payoff(game, first, second), _payoff(game, second, first))
            eq = _build_equilibrium(game, first, second, payoffs, theta1, theta2)
            points.append(FixedPoint(label, converged, rounds, eq))
        coincide = points[0].equilibrium.strategy == points[1].equilibrium.strategy
        a, b = (p.equilibrium for p in points)
        same_shape = (a.low_cut, a.high_cut) == (b.low_cut, b.high_cut)
        distinct = [p.equilibrium for p in points if p.converged]
        if coincide and distinct:
            distinct = distinct[:1]
        return DiscreteSolution(
            "best_response", n, tuple(distinct), tuple(points), coincide, same_shape, ties, theta1, theta2, budget_ok
        )
    raise ConfigurationError(f"unknown oracle mode {mode!r}")


@dataclass(frozen=True)
class RjvOptimum:
    """Best portfolio of a venture on the grid.

    Attributes:
        strategy: Investment flags of the venture.
        prefix: Number of cheapest cells funded.
        payoff: Venture's expected gross profit minus spend and interest.
        theta_star: Analytic venture cut-off.
        deviation: ``|prefix - N * theta_star|`` in cell widths.
        payoffs_by_prefix: Payoff of every prefix length.
    """

    strategy: DiscreteStrategy
    prefix: int
    payoff: float
    theta_star: float
    deviation: float
    payoffs_by_prefix: Tuple[float, ...]


def discrete_rjv_optimum(game: DiscreteGame) -> RjvOptimum:
    """Optimal portfolio of a venture that pools both budgets on the grid.

    Every cell is worth ``2 (pi_II - pi_00) / N`` to the venture, so for a
    given number of cells the cheapest ones are best and only prefixes need
    checking. Each prefix is priced with the exact interest kink on spend
    above ``2B``. Ties go to the shorter prefix.
    """
    q = game.quad
    n = game.cells
    costs = np.asarray(game.cell_costs)
    spend = np.concatenate(([0.0], np.cumsum(costs)))
    pooled = 2.0 * game.fin.budget
    rate = game.fin.venture_rate
    counts = np.arange(n + 1)
    gross = 2.0 * (counts * q.pi_II + (n - counts) * q.pi_00) / n
    payoff = gross - (spend + rate * np.maximum(0.0, spend - pooled))
    top = payoff.max()
    prefix = int(np.flatnonzero(payoff >= top - PAYOFF_ATOL)[0])
    theta_star = compute_cutoffs(q, game.cf, game.fin).theta_star
    flags = tuple(i < prefix for i in range(n))
    return RjvOptimum(
        DiscreteStrategy((flags,)),
        prefix,
        float(payoff[prefix]),
        theta_star,
        abs(prefix - n * theta_star),
        tuple(float(v) for v in payoff),
    )
