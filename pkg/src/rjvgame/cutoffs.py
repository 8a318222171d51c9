"""Project cost schedules, cut-off projects and threshold quantities.

Projects are indexed by ``theta`` in ``[0, 1)`` and sorted by cost, so a
portfolio that invests in every project below a cut-off ``t`` succeeds with
probability ``t`` and spends ``cost_mass(t)``, the integral of the cost
schedule from 0 to ``t``.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

from scipy import integrate

from rjvgame.errors import AssumptionViolation, DomainError, InvalidInputError
from rjvgame.model import (
    LicensingTerms,
    MonopolyProfits,
    ProfitQuad,
    SpilloverRate,
    licensing_transform,
    spillover_transform,
)

__all__ = [
    "THETA_TOL",
    "QUAD_UPPER",
    "CostFunction",
    "RatioCost",
    "PowerCost",
    "TabulatedCost",
    "FinancingEnv",
    "CutoffSet",
    "ThresholdRecord",
    "cost_mass",
    "solve_value_cutoff",
    "budget_cutoff",
    "rjv_choice",
    "compute_cutoffs",
    "compute_thresholds",
    "check_budget_assumption",
    "rate_threshold",
]

THETA_TOL = 1e-12
"""Absolute tolerance on project indices returned by the bisection solvers."""

QUAD_UPPER = 1.0 - 1e-9
"""Upper integration limit used by numeric quadrature near the singularity at 1."""

_QUAD_EPSREL = 1e-12


def _bisect_increasing(func: Callable[[float], float], target: float, hi: float = 1.0) -> float:
    """Solve ``func(t) = target`` for a strictly increasing ``func`` on ``[0, hi)``.

    ``func(0)`` is assumed to be at most ``target``. The loop compares the
    same midpoints for every target, which makes the result monotone in
    ``target`` exactly, not just up to the tolerance.
    """
    lo = 0.0
    while hi - lo > THETA_TOL:
        mid = 0.5 * (lo + hi)
        if func(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class CostFunction:
    """Cost schedule ``C(theta)`` of the project with index ``theta``.

    Subclasses implement :meth:`cost` and either :meth:`_exact_mass` or rely
    on adaptive quadrature. Instances are immutable and hashable by value.
    """

    family: str = "abstract"

    @property
    def has_closed_form(self) -> bool:
        """Whether :meth:`mass` uses an exact antiderivative."""
        return False

    def cost(self, theta: float) -> float:
        raise NotImplementedError

    def params(self) -> dict:
        raise NotImplementedError

    def _exact_mass(self, theta: float) -> float:
        raise NotImplementedError

    def mass(self, theta: float) -> float:
        """Integral of the cost schedule over ``[0, theta]``.

        Raises:
            DomainError: If ``theta`` is outside ``[0, 1)``.
        """
        if not (0.0 <= theta < 1.0):
            raise DomainError(f"project index must lie in [0, 1), got {theta}")
        if theta == 0.0:
            return 0.0
        if self.has_closed_form:
            return self._exact_mass(theta)
        upper = min(theta, QUAD_UPPER)
        value, _ = integrate.quad(self.cost, 0.0, upper, epsabs=0.0, epsrel=_QUAD_EPSREL, limit=200)
        return value

    def __call__(self, theta: float) -> float:
        return self.cost(theta)


@dataclass(frozen=True)
class RatioCost(CostFunction):
    """``C(theta) = k * theta / (1 - theta**2)`` with mass ``-k/2 * ln(1 - theta**2)``."""

    k: float = 1.0
    family = "ratio"

    def __post_init__(self):
        if not (math.isfinite(self.k) and self.k > 0):
            raise InvalidInputError(f"ratio cost scale must be positive, got {self.k}")

    @property
    def has_closed_form(self) -> bool:
        return True

    def cost(self, theta: float) -> float:
        return self.k * theta / (1.0 - theta * theta)

    def _exact_mass(self, theta: float) -> float:
        return -0.5 * self.k * math.log1p(-theta * theta)

    def params(self) -> dict:
        return {"k": self.k}


@dataclass(frozen=True)
class PowerCost(CostFunction):
    """``C(theta) = k * theta**p / (1 - theta)`` for ``p >= 1``.

    Integer exponents use the antiderivative
    ``-ln(1 - t) - sum_{j=1..p} t**j / j``. Below ``t = 0.5`` the equivalent
    tail series ``sum_{j>p} t**j / j`` is summed instead, which avoids the
    cancellation between the logarithm and the polynomial at small ``t``.
    Fractional exponents fall back to quadrature.
    """

    k: float = 1.0
    p: float = 1.0
    family = "power"

    def __post_init__(self):
        if not (math.isfinite(self.k) and self.k > 0):
            raise InvalidInputError(f"power cost scale must be positive, got {self.k}")
        if not (math.isfinite(self.p) and self.p >= 1):
            raise InvalidInputError(f"power cost exponent must be >= 1, got {self.p}")

    @property
    def has_closed_form(self) -> bool:
        return float(self.p).is_integer()

    def cost(self, theta: float) -> float:
        return self.k * theta**self.p / (1.0 - theta)

    def _exact_mass(self, theta: float) -> float:
        p = int(self.p)
        if theta < 0.5:
            total = 0.0
            term = theta**p
            j = p
            while True:
                j += 1
                term *= theta
                piece = term / j
                total += piece
                if piece < 1e-18 * total:
                    break
            return self.k * total
        poly = sum(theta**j / j for j in range(1, p + 1))
        return self.k * (-math.log1p(-theta) - poly)

    def params(self) -> dict:
        return {"k": self.k, "p": self.p}


@dataclass(frozen=True)
class TabulatedCost(CostFunction):
    """Piecewise-linear cost through sampled points.

    The first sample must be ``(0, 0)`` and both coordinates must be strictly
    increasing. Projects beyond the last sampled index are treated as
    unaffordable (infinite cost), so cut-offs never pass the last sample.
    The mass is the exact integral of the interpolant.
    """

    thetas: Tuple[float, ...]
    costs: Tuple[float, ...]
    family = "tabulated"

    def __post_init__(self):
        thetas = tuple(float(t) for t in self.thetas)
        costs = tuple(float(c) for c in self.costs)
        object.__setattr__(self, "thetas", thetas)
        object.__setattr__(self, "costs", costs)
        if len(thetas) != len(costs) or len(thetas) < 2:
            raise InvalidInputError("tabulated cost needs at least two (theta, cost) samples of equal length")
        if not all(math.isfinite(v) for v in thetas + costs):
            raise InvalidInputError("tabulated cost samples must be finite")
        if thetas[0] != 0.0 or costs[0] != 0.0:
            raise InvalidInputError("tabulated cost must start at (0, 0)")
        if thetas[-1] >= 1.0:
            raise InvalidInputError("tabulated project indices must be below 1")
        if any(b <= a for a, b in zip(thetas, thetas[1:])) or any(b <= a for a, b in zip(costs, costs[1:])):
            raise InvalidInputError("tabulated cost samples must be strictly increasing")
        prefix = [0.0]
        for i in range(1, len(thetas)):
            prefix.append(prefix[-1] + 0.5 * (costs[i] + costs[i - 1]) * (thetas[i] - thetas[i - 1]))
        object.__setattr__(self, "_prefix", tuple(prefix))

    @property
    def has_closed_form(self) -> bool:
        return True

    def _segment(self, theta: float) -> int:
        return min(bisect.bisect_right(self.thetas, theta), len(self.thetas) - 1) - 1

    def cost(self, theta: float) -> float:
        if theta > self.thetas[-1]:
            return math.inf
        i = self._segment(theta)
        t0, t1 = self.thetas[i], self.thetas[i + 1]
        c0, c1 = self.costs[i], self.costs[i + 1]
        return c0 + (c1 - c0) * (theta - t0) / (t1 - t0)

    def _exact_mass(self, theta: float) -> float:
        if theta > self.thetas[-1]:
            return math.inf
        i = self._segment(theta)
        t0 = self.thetas[i]
        return self._prefix[i] + 0.5 * (self.costs[i] + self.cost(theta)) * (theta - t0)

    def params(self) -> dict:
        return {"thetas": list(self.thetas), "costs": list(self.costs)}


def cost_mass(cf: CostFunction, theta: float) -> float:
    """Total cost of investing in every project below ``theta``."""
    return cf.mass(theta)


@dataclass(frozen=True)
class FinancingEnv:
    """Internal budget per firm and the external borrowing rate.

    Attributes:
        budget: Internal funds ``B`` of each firm.
        rate: Interest ``rho`` charged on every unit spent beyond the budget.
            Zero is accepted so that unconstrained benchmarks can reuse the
            same code.
        rjv_rate: Optional rate charged to a joint venture instead of
            ``rate``, for studying cheaper joint-venture credit.
    """

    budget: float
    rate: float
    rjv_rate: Optional[float] = None

    def __post_init__(self):
        for name in ("budget", "rate"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value >= 0):
                raise InvalidInputError(f"{name} must be a finite number >= 0, got {value!r}")
        if self.rjv_rate is not None and not (math.isfinite(self.rjv_rate) and self.rjv_rate >= 0):
            raise InvalidInputError(f"rjv_rate must be a finite number >= 0, got {self.rjv_rate!r}")

    @property
    def venture_rate(self) -> float:
        return self.rate if self.rjv_rate is None else self.rjv_rate


def solve_value_cutoff(cf: CostFunction, delta_pi: float, effective_rate: float = 0.0) -> float:
    """Most expensive project worth funding for a given value of success.

    Solves ``(1 + rate) * C(theta) = delta_pi`` by bracketed bisection on
    ``[0, 1)`` with absolute tolerance :data:`THETA_TOL`.

    Raises:
        DomainError: If ``delta_pi`` or ``effective_rate`` is negative or
            not finite.
    """
    if not math.isfinite(delta_pi) or delta_pi < 0:
        raise DomainError(f"value of success must be finite and >= 0, got {delta_pi}")
    if not math.isfinite(effective_rate) or effective_rate < 0:
        raise DomainError(f"effective rate must be finite and >= 0, got {effective_rate}")
    if delta_pi == 0.0:
        return 0.0
    target = delta_pi / (1.0 + effective_rate)
    return _bisect_increasing(cf.cost, target)


def budget_cutoff(cf: CostFunction, total_budget: float) -> float:
    """Project index up to which ``total_budget`` funds every project.

    Returns 1 when the whole project line costs no more than the budget,
    which only happens for cost schedules with finite total mass.
    """
    if not math.isfinite(total_budget) or total_budget < 0:
        raise DomainError(f"budget must be finite and >= 0, got {total_budget}")
    if total_budget == 0.0:
        return 0.0
    mass = cf.mass
    if isinstance(cf, TabulatedCost):
        last = cf.thetas[-1]
        if mass(last) <= total_budget:
            return 1.0
        return _bisect_increasing(mass, total_budget, hi=last)
    return _bisect_increasing(mass, total_budget)


def rjv_choice(theta_budget: float, theta_rho: float, theta_u: float) -> float:
    """Single cut-off of a budget-pooling venture.

    It borrows up to ``theta_rho`` when the pooled budget runs out earlier,
    spends exactly the budget when that lands between the two cut-offs and
    stops at the unconstrained cut-off ``theta_u`` otherwise. Both
    boundaries of the middle case choose the budget cut-off.
    """
    if theta_budget < theta_rho:
        return theta_rho
    if theta_budget <= theta_u:
        return theta_budget
    return theta_u


@dataclass(frozen=True)
class CutoffSet:
    """All cut-off projects of one scenario.

    ``theta2 <= theta1`` are the competition cut-offs. ``theta_rho``,
    ``theta_u`` and ``theta_B`` are the joint venture's borrowing,
    unconstrained and pooled-budget cut-offs and ``theta_star`` its choice.
    The ``_m`` fields repeat the venture quantities for a merged firm and are
    ``None`` when no monopoly profits were supplied.
    """

    theta2: float
    theta1: float
    theta_rho: float
    theta_u: float
    theta_B: float
    theta_star: float
    theta_rho_m: Optional[float] = None
    theta_u_m: Optional[float] = None
    theta_star_m: Optional[float] = None


def compute_cutoffs(
    pq: ProfitQuad, cf: CostFunction, fin: FinancingEnv, mono: Optional[MonopolyProfits] = None
) -> CutoffSet:
    """Compute competition, venture and (optionally) merger cut-offs."""
    theta1 = solve_value_cutoff(cf, pq.escape_gain, fin.rate)
    theta2 = solve_value_cutoff(cf, pq.catch_up_gain, fin.rate)
    venture_value = 2.0 * pq.joint_gain
    theta_rho = solve_value_cutoff(cf, venture_value, fin.venture_rate)
    theta_u = solve_value_cutoff(cf, venture_value, 0.0)
    theta_b = budget_cutoff(cf, 2.0 * fin.budget)
    theta_star = rjv_choice(theta_b, theta_rho, theta_u)
    rho_m = u_m = star_m = None
    if mono is not None:
        rho_m = solve_value_cutoff(cf, max(mono.gain, 0.0), fin.rate)
        u_m = solve_value_cutoff(cf, max(mono.gain, 0.0), 0.0)
        star_m = rjv_choice(theta_b, rho_m, u_m)
    return CutoffSet(theta2, theta1, theta_rho, theta_u, theta_b, theta_star, rho_m, u_m, star_m)


def check_budget_assumption(cf: CostFunction, budget: float, theta_low: float, code: str = "A2") -> None:
    """Require ``budget < cost_mass(theta_low)`` so every firm borrows.

    Equality counts as a violation because the assumption is strict.

    Raises:
        AssumptionViolation: Carrying ``code`` and the violated bound.
    """
    bound = cf.mass(theta_low)
    if not budget < bound:
        raise AssumptionViolation(
            f"budget {budget} is not below the cost {bound} of the low cut-off portfolio; firms need not borrow",
            [code],
            bound,
        )


def rate_threshold(pq: ProfitQuad) -> float:
    """Interest rate above which a venture innovates more than competition.

    ``(pi_I0 - 2 pi_II + pi_00) / (2 (pi_II - pi_00))``, infinite when the
    joint gain is zero.
    """
    joint = pq.joint_gain
    if joint == 0.0:
        return math.inf
    return (pq.pi_I0 - 2.0 * pq.pi_II + pq.pi_00) / (2.0 * joint)


def _psi(pq: ProfitQuad) -> float:
    joint = pq.joint_gain
    if joint == 0.0:
        return math.inf
    return (pq.pi_I0 + pq.pi_0I - 2.0 * pq.pi_II) / (2.0 * joint)


@dataclass(frozen=True)
class ThresholdRecord:
    """Threshold quantities that decide the venture-versus-competition verdicts.

    Attributes:
        rho_bar: Rate threshold; ``math.inf`` when the joint gain is zero.
        B_bar: Budget threshold, half the cost of the sole-innovator portfolio.
        psi: Profitability ratio used under intense competition.
        rho_bar_m: Merger analogue of ``rho_bar`` when monopoly profits exist.
        rho_bar_L, B_bar_L: Licensing variants, present when licensing occurs.
        rho_tilde, B_tilde: Spillover variants, present when a spillover rate
            was supplied.
    """

    rho_bar: float
    B_bar: float
    psi: float
    rho_bar_m: Optional[float] = None
    rho_bar_L: Optional[float] = None
    B_bar_L: Optional[float] = None
    rho_tilde: Optional[float] = None
    B_tilde: Optional[float] = None


def compute_thresholds(
    pq: ProfitQuad,
    cf: CostFunction,
    fin: FinancingEnv,
    mono: Optional[MonopolyProfits] = None,
    licensing: Optional[LicensingTerms] = None,
    spillover: Optional[SpilloverRate] = None,
    theta1: Optional[float] = None,
) -> ThresholdRecord:
    """Evaluate every threshold for one scenario.

    Args:
        theta1: Precomputed sole-innovator cut-off at ``fin.rate``; solved
            here when omitted.
    """
    if theta1 is None:
        theta1 = solve_value_cutoff(cf, pq.escape_gain, fin.rate)
    rho_bar_m = None
    if mono is not None:
        gain = mono.gain
        rho_bar_m = math.inf if gain == 0.0 else (pq.escape_gain - gain) / gain
    rho_l = b_l = None
    if licensing is not None:
        licensed, occurs = licensing_transform(pq, licensing)
        if occurs:
            rho_l = rate_threshold(licensed)
            b_l = 0.5 * cf.mass(solve_value_cutoff(cf, licensed.escape_gain, fin.rate))
    rho_t = b_t = None
    if spillover is not None:
        leaked = spillover_transform(pq, spillover)
        rho_t = rate_threshold(leaked)
        b_t = 0.5 * cf.mass(solve_value_cutoff(cf, leaked.escape_gain, fin.rate))
    return ThresholdRecord(
        rho_bar=rate_threshold(pq),
        B_bar=0.5 * cf.mass(theta1),
        psi=_psi(pq),
        rho_bar_m=rho_bar_m,
        rho_bar_L=rho_l,
        B_bar_L=b_l,
        rho_tilde=rho_t,
        B_tilde=b_t,
    )
