import numpy as np
import pytest

from rjvgame.cutoffs import FinancingEnv, RatioCost
from rjvgame.markets import CournotPrimitives, cournot_market
from rjvgame.model import CsTriple, MonopolyProfits, ProfitQuad

from frozen import S1_MONOPOLY, S1_QUAD


@pytest.fixture
def s1_quad():
    return ProfitQuad(*S1_QUAD)


@pytest.fixture
def s1_mono():
    return MonopolyProfits(*S1_MONOPOLY)


@pytest.fixture
def s1_tables():
    return cournot_market(CournotPrimitives.from_alpha(1.0, 0.5))


@pytest.fixture
def ratio():
    return RatioCost(1.0)


@pytest.fixture
def s1_fin():
    return FinancingEnv(budget=0.01, rate=0.1)


def random_quad(rng: np.random.Generator, regime: str = "any") -> ProfitQuad:
    """Draw a quad that satisfies every regularity inequality.

    Builds the quad from non-negative gaps: ``pi_00 = pi_0I + a``,
    ``pi_II = pi_00 + d`` and ``pi_I0 = pi_II + e`` with ``e >= a``.
    Then the race is soft iff ``e < d`` and intense iff ``e > a + d``.
    """
    base = rng.uniform(0.0, 0.3)
    a, d = rng.uniform(0.0, 0.3, size=2)
    if regime == "non_soft":
        e = max(a, d) + rng.uniform(0.0, 0.3)
    elif regime == "soft":
        if d <= a:
            a, d = d, a
        e = a + rng.uniform(0.0, 1.0) * (d - a)
    else:
        e = a + rng.uniform(0.0, 0.3)
    p0i = base
    p00 = p0i + a
    pii = p00 + d
    pi0 = pii + e
    return ProfitQuad(p00, pi0, p0i, pii)


def random_cs(rng: np.random.Generator) -> CsTriple:
    """Consumer surplus with joint innovation strictly best and monopoly worst."""
    cs00 = rng.uniform(0.0, 1.0)
    csi0 = cs00 + rng.uniform(0.0, 0.5)
    csii = max(cs00, csi0) + rng.uniform(1e-6, 0.5)
    csm0 = cs00 * rng.uniform(0.0, 1.0)
    csmi = csii * rng.uniform(0.0, 1.0)
    return CsTriple(cs00, csi0, csii, csm0, csmi)


def random_financing(rng: np.random.Generator, cf, quad: ProfitQuad) -> FinancingEnv:
    """Rate in ``(0, 1)`` and a budget below the catch-up portfolio's cost."""
    from rjvgame.cutoffs import solve_value_cutoff

    rate = rng.uniform(0.01, 1.0)
    theta2 = solve_value_cutoff(cf, quad.catch_up_gain, rate)
    budget = cf.mass(theta2) * rng.uniform(0.0, 0.999)
    return FinancingEnv(budget=budget, rate=rate)
