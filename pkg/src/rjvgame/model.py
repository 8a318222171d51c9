"""Reduced-form profit primitives, regularity checks and profit transforms.

A :class:`ProfitQuad` holds a firm's product-market profit in each of the
four technology states. The first index is the firm's own technology, the
second its rival's: ``pi_I0`` is the profit of a sole innovator, ``pi_0I``
that of a firm whose rival alone innovated.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import List, Tuple

from rjvgame.errors import AssumptionViolation, InvalidInputError, PreconditionError

__all__ = [
    "ProfitQuad",
    "MonopolyProfits",
    "CsTriple",
    "MarketRegime",
    "SpilloverRate",
    "LicensingTerms",
    "validate_regularity",
    "validate_race_regularity",
    "require_regular",
    "validate_monopoly",
    "validate_consumer_surplus",
    "classify_regime",
    "spillover_transform",
    "licensing_transform",
]


def _check_finite(name: str, values) -> None:
    for value in values:
        if not isinstance(value, (int, float)) or not math.isfinite(value):
            raise InvalidInputError(f"{name}: expected finite numbers, got {value!r}")


@dataclass(frozen=True)
class ProfitQuad:
    """Duopoly profits of one firm by (own technology, rival technology).

    Attributes:
        pi_00: Neither firm innovated.
        pi_I0: Only this firm innovated.
        pi_0I: Only the rival innovated.
        pi_II: Both firms hold the new technology.
    """

    pi_00: float
    pi_I0: float
    pi_0I: float
    pi_II: float

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.pi_00, self.pi_I0, self.pi_0I, self.pi_II)

    @property
    def escape_gain(self) -> float:
        """Gain from becoming the sole innovator, ``pi_I0 - pi_00``."""
        return self.pi_I0 - self.pi_00

    @property
    def catch_up_gain(self) -> float:
        """Gain from matching an innovating rival, ``pi_II - pi_0I``."""
        return self.pi_II - self.pi_0I

    @property
    def joint_gain(self) -> float:
        """Per-firm gain when both hold the innovation, ``pi_II - pi_00``."""
        return self.pi_II - self.pi_00

    def scaled(self, factor: float) -> "ProfitQuad":
        return ProfitQuad(*(factor * v for v in self.as_tuple()))


@dataclass(frozen=True)
class MonopolyProfits:
    """Profits of a single merged firm without and with the innovation."""

    pi_0: float
    pi_I: float

    @property
    def gain(self) -> float:
        return self.pi_I - self.pi_0


@dataclass(frozen=True)
class CsTriple:
    """Consumer surplus by market structure and technology state.

    The duopoly entries are indexed like :class:`ProfitQuad`; ``cs_I0`` is
    surplus when exactly one firm innovated. The monopoly entries describe
    the merged firm without (``cs_m0``) and with (``cs_mI``) the innovation.
    """

    cs_00: float
    cs_I0: float
    cs_II: float
    cs_m0: float
    cs_mI: float


class MarketRegime(str, enum.Enum):
    """Intensity of product-market competition in the innovation race."""

    SOFT = "Soft"
    MODERATE = "Moderate"
    INTENSE = "Intense"


@dataclass(frozen=True)
class SpilloverRate:
    """Probability that a non-investing rival obtains a discovered innovation."""

    sigma: float

    def __post_init__(self):
        _check_finite("sigma", [self.sigma])
        if not 0.0 <= self.sigma <= 1.0:
            raise InvalidInputError(f"spillover rate must lie in [0, 1], got {self.sigma}")


@dataclass(frozen=True)
class LicensingTerms:
    """Licensing option of a sole innovator.

    Attributes:
        delta: Increase in industry profit that licensing generates on top of
            the joint-innovation profits, for instance through royalties that
            soften competition. Must be non-negative.
        enabled: When false the transform is the identity.
    """

    delta: float = 0.0
    enabled: bool = True

    def __post_init__(self):
        _check_finite("licensing delta", [self.delta])
        if self.delta < 0:
            raise InvalidInputError(f"licensing surplus must be >= 0, got {self.delta}")


def validate_regularity(pq: ProfitQuad) -> List[str]:
    """Return the codes of every failed regularity inequality.

    The checks are exact weak inequalities with no tolerance:

    * ``A1i``: all four profits are non-negative.
    * ``A1ii``: joint innovation raises profit, ``pi_II >= pi_00``.
    * ``A1iii``: own innovation helps and rival innovation hurts,
      ``pi_I0 >= pi_II`` and ``pi_00 >= pi_0I``.
    * ``A1iv``: escaping is worth at least as much as catching up,
      ``pi_I0 - pi_00 >= pi_II - pi_0I``.

    Raises:
        InvalidInputError: If any profit is not a finite number.
    """
    _check_finite("profit quad", pq.as_tuple())
    codes = []
    if min(pq.as_tuple()) < 0:
        codes.append("A1i")
    if pq.pi_II < pq.pi_00:
        codes.append("A1ii")
    if pq.pi_I0 < pq.pi_II or pq.pi_00 < pq.pi_0I:
        codes.append("A1iii")
    if pq.pi_I0 - pq.pi_00 < pq.pi_II - pq.pi_0I:
        codes.append("A1iv")
    return codes


def validate_race_regularity(pq: ProfitQuad) -> List[str]:
    """Return failed codes among the inequalities the competition game needs.

    Transformed quads, such as expected profits under spillovers, can let a
    laggard earn more than in the no-innovation state, which breaks
    ``A1iii``. The race itself only needs non-negative profits (``A1i``), a
    non-negative catch-up gain (``catch_up``) and ``A1iv``, which keeps the
    catch-up cut-off below the escape cut-off.
    """
    _check_finite("profit quad", pq.as_tuple())
    codes = []
    if min(pq.as_tuple()) < 0:
        codes.append("A1i")
    if pq.pi_II < pq.pi_0I:
        codes.append("catch_up")
    if pq.pi_I0 - pq.pi_00 < pq.pi_II - pq.pi_0I:
        codes.append("A1iv")
    return codes


def require_regular(pq: ProfitQuad, *, relaxed: bool = False) -> None:
    """Raise :class:`AssumptionViolation` unless ``pq`` is regular.

    With ``relaxed`` only :func:`validate_race_regularity` is enforced.
    """
    codes = validate_race_regularity(pq) if relaxed else validate_regularity(pq)
    if codes:
        raise AssumptionViolation(f"profit quad {pq.as_tuple()} fails {', '.join(codes)}", codes)


def validate_monopoly(mono: MonopolyProfits) -> List[str]:
    """Return ``["A4"]`` unless innovation strictly raises monopoly profit."""
    _check_finite("monopoly profits", [mono.pi_0, mono.pi_I])
    return [] if mono.pi_I > mono.pi_0 else ["A4"]


def validate_consumer_surplus(cs: CsTriple) -> List[str]:
    """Return failed consumer-surplus assumption codes.

    ``A3`` requires joint innovation to beat both the no-innovation and the
    single-innovator state. ``A5`` requires two active firms to serve
    consumers at least as well as a monopoly in the same technology state.
    """
    _check_finite("consumer surplus", [cs.cs_00, cs.cs_I0, cs.cs_II, cs.cs_m0, cs.cs_mI])
    codes = []
    if not (cs.cs_II > cs.cs_00 and cs.cs_II > cs.cs_I0):
        codes.append("A3")
    if not (cs.cs_00 >= cs.cs_m0 and cs.cs_II >= cs.cs_mI):
        codes.append("A5")
    return codes


def classify_regime(pq: ProfitQuad, *, relaxed: bool = False) -> MarketRegime:
    """Classify how strongly the innovation race is driven by competition.

    Competition is intense when avoiding a rival's catch-up is worth more
    than catching up, ``pi_I0 - pi_II > pi_II - pi_0I``, and soft when it is
    worth less than the joint gain, ``pi_I0 - pi_II < pi_II - pi_00``.
    Every other case, including both boundaries, is moderate.

    Args:
        relaxed: Accept quads that only pass
            :func:`validate_race_regularity`, as transformed quads may.

    Raises:
        PreconditionError: If the quad fails the regularity checks.
    """
    codes = validate_race_regularity(pq) if relaxed else validate_regularity(pq)
    if codes:
        raise PreconditionError(f"cannot classify an irregular profit quad ({', '.join(codes)})")
    avoid = pq.pi_I0 - pq.pi_II
    # Regular quads cannot be soft and intense at once. Relaxed quads can,
    # and then soft wins because it alone decides whether a venture values
    # success more than a sole innovator does.
    if avoid < pq.pi_II - pq.pi_00:
        return MarketRegime.SOFT
    if avoid > pq.pi_II - pq.pi_0I:
        return MarketRegime.INTENSE
    return MarketRegime.MODERATE


def spillover_transform(pq: ProfitQuad, s: SpilloverRate) -> ProfitQuad:
    """Expected profits when a lone discovery leaks to the rival with probability sigma.

    The off-diagonal states become lotteries between themselves and the
    joint-innovation state; the diagonal entries are unchanged.
    """
    sigma = s.sigma
    if sigma == 0.0:
        return pq
    return replace(
        pq,
        pi_I0=(1.0 - sigma) * pq.pi_I0 + sigma * pq.pi_II,
        pi_0I=(1.0 - sigma) * pq.pi_0I + sigma * pq.pi_II,
    )


def licensing_transform(pq: ProfitQuad, lt: LicensingTerms) -> Tuple[ProfitQuad, bool]:
    """Profit of a sole innovator that may license its technology to the rival.

    With a take-it-or-leave-it offer the innovator keeps the whole industry
    profit under licensing, ``2 pi_II + delta``, minus the rival's outside
    option ``pi_0I``. It licenses whenever that weakly beats ``pi_I0``.

    Returns:
        The transformed quad and whether licensing occurs.
    """
    if not lt.enabled:
        return pq, False
    licensed = 2.0 * pq.pi_II + lt.delta - pq.pi_0I
    occurs = licensed >= pq.pi_I0
    if not occurs:
        return pq, False
    return replace(pq, pi_I0=licensed), True
