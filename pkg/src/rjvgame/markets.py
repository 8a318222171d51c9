"""Closed-form profit and surplus tables for linear Cournot and Bertrand markets.

Innovation is a marginal cost reduction of size ``I``. Each generator
returns the duopoly :class:`~rjvgame.model.ProfitQuad`, the profits of a
merged firm and the consumer surplus in every state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from rjvgame.errors import MarketValidityError
from rjvgame.model import CsTriple, MonopolyProfits, ProfitQuad

__all__ = [
    "CournotPrimitives",
    "BertrandPrimitives",
    "MarketTables",
    "cournot_market",
    "bertrand_market",
    "bertrand_drastic_bound",
    "bertrand_margin",
]


class MarketTables(NamedTuple):
    """Profit and surplus tables generated from market primitives."""

    quad: ProfitQuad
    monopoly: MonopolyProfits
    cs: CsTriple


@dataclass(frozen=True)
class CournotPrimitives:
    """Homogeneous-good Cournot duopoly with inverse demand ``a - b Q``.

    Attributes:
        a: Demand intercept.
        b: Demand slope, positive.
        c: Pre-innovation marginal cost.
        I: Cost reduction from the innovation, positive.
    """

    a: float
    b: float
    c: float
    I: float

    @classmethod
    def from_alpha(cls, alpha: float, innovation: float, slope: float = 1.0) -> "CournotPrimitives":
        """Build primitives from the margin ``alpha = a - c`` directly."""
        return cls(a=alpha, b=slope, c=0.0, I=innovation)

    @property
    def alpha(self) -> float:
        return self.a - self.c


def cournot_market(p: CournotPrimitives) -> MarketTables:
    """Equilibrium profits and surplus of the linear Cournot duopoly.

    With margin ``alpha`` a firm with cost reduction ``I_i`` facing a rival
    with ``I_j`` sells ``(alpha + 2 I_i - I_j) / (3b)`` and earns ``b`` times
    its squared output. A monopolist sells ``(alpha + I_m) / (2b)``.
    Consumer surplus is ``b Q**2 / 2``.

    Raises:
        MarketValidityError: Unless ``b > 0``, ``I > 0`` and
            ``alpha > I`` (the innovation is not drastic).
    """
    values = (p.a, p.b, p.c, p.I)
    if not all(math.isfinite(v) for v in values):
        raise MarketValidityError(f"Cournot primitives must be finite, got {values}")
    alpha, b, inn = p.alpha, p.b, p.I
    if b <= 0:
        raise MarketValidityError(f"demand slope must be positive, got {b}")
    if inn <= 0:
        raise MarketValidityError(f"cost reduction must be positive, got {inn}")
    if not alpha > inn:
        raise MarketValidityError(f"innovation is drastic: margin {alpha} does not exceed cost reduction {inn}")
    nine_b = 9.0 * b
    quad = ProfitQuad(
        pi_00=alpha**2 / nine_b,
        pi_I0=(alpha + 2.0 * inn) ** 2 / nine_b,
        pi_0I=(alpha - inn) ** 2 / nine_b,
        pi_II=(alpha + inn) ** 2 / nine_b,
    )
    monopoly = MonopolyProfits(pi_0=alpha**2 / (4.0 * b), pi_I=(alpha + inn) ** 2 / (4.0 * b))
    cs = CsTriple(
        cs_00=2.0 * alpha**2 / nine_b,
        cs_I0=(2.0 * alpha + inn) ** 2 / (2.0 * nine_b),
        cs_II=2.0 * (alpha + inn) ** 2 / nine_b,
        cs_m0=alpha**2 / (8.0 * b),
        cs_mI=(alpha + inn) ** 2 / (8.0 * b),
    )
    return MarketTables(quad, monopoly, cs)


@dataclass(frozen=True)
class BertrandPrimitives:
    """Differentiated Bertrand duopoly with inverse demand ``1 - q_i - b q_j``.

    Attributes:
        b: Substitution parameter in ``[0, 1)``.
        c: Pre-innovation marginal cost, positive.
        I: Cost reduction, in ``(0, c]``.
    """

    b: float
    c: float
    I: float


def bertrand_margin(b: float, own_cost: float, rival_cost: float) -> float:
    """Equilibrium price-cost margin of a firm in the differentiated Bertrand game."""
    return (2.0 - b - b * b - (2.0 - b * b) * own_cost + b * rival_cost) / (4.0 - b * b)


def bertrand_drastic_bound(b: float, c: float) -> float:
    """Largest cost reduction that leaves the laggard a positive margin.

    Infinite when ``b == 0`` because the products are then independent.
    """
    if b == 0.0:
        return math.inf
    return (b * b * c - 2.0 * c - b + b * c - b * b + 2.0) / b


def bertrand_market(p: BertrandPrimitives) -> MarketTables:
    """Equilibrium profits and surplus of the differentiated Bertrand duopoly.

    Outputs equal margins divided by ``1 - b**2`` and profits are squared
    margins over the same factor. Consumer surplus comes from the quadratic
    utility behind the inverse demand, ``(q1**2 + q2**2 + 2 b q1 q2) / 2``.
    The merged firm owns both products, prices them jointly and applies its
    technology to both.

    Raises:
        MarketValidityError: If ``b`` is outside ``[0, 1)``, ``I`` outside
            ``(0, c]``, or any equilibrium margin is not positive.
    """
    b, c, inn = p.b, p.c, p.I
    if not all(math.isfinite(v) for v in (b, c, inn)):
        raise MarketValidityError(f"Bertrand primitives must be finite, got {(b, c, inn)}")
    if not 0.0 <= b < 1.0:
        raise MarketValidityError(f"substitution parameter must lie in [0, 1), got {b}")
    if not c > 0.0:
        raise MarketValidityError(f"marginal cost must be positive, got {c}")
    if not 0.0 < inn <= c:
        raise MarketValidityError(f"cost reduction must lie in (0, c], got {inn}")
    low = c - inn
    states = {
        "00": (c, c),
        "I0": (low, c),
        "0I": (c, low),
        "II": (low, low),
    }
    denom = 1.0 - b * b
    margins = {}
    for key, (own, rival) in states.items():
        m_own = bertrand_margin(b, own, rival)
        m_rival = bertrand_margin(b, rival, own)
        if not (m_own > 0.0 and m_rival > 0.0):
            raise MarketValidityError(
                f"innovation is drastic or costs too high: non-positive margin in state {key} "
                f"(b={b}, c={c}, I={inn}, bound {bertrand_drastic_bound(b, c)})"
            )
        margins[key] = (m_own, m_rival)
    quad = ProfitQuad(*(margins[k][0] ** 2 / denom for k in ("00", "I0", "0I", "II")))

    def surplus(key: str) -> float:
        q1, q2 = (m / denom for m in margins[key])
        return 0.5 * (q1 * q1 + q2 * q2 + 2.0 * b * q1 * q2)

    def monopoly_profit(cost: float) -> float:
        return (1.0 - cost) ** 2 / (2.0 * (1.0 + b))

    def monopoly_surplus(cost: float) -> float:
        return (1.0 - cost) ** 2 / (4.0 * (1.0 + b))

    monopoly = MonopolyProfits(monopoly_profit(c), monopoly_profit(low))
    cs = CsTriple(
        cs_00=surplus("00"),
        cs_I0=surplus("I0"),
        cs_II=surplus("II"),
        cs_m0=monopoly_surplus(c),
        cs_mI=monopoly_surplus(low),
    )
    return MarketTables(quad, monopoly, cs)
