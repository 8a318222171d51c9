import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rjvgame.comparisons import Verdict, compare_rjv_vs_competition
from rjvgame.cutoffs import FinancingEnv, RatioCost, solve_value_cutoff
from rjvgame.errors import ConfigurationError
from rjvgame.extensions import (
    ALWAYS,
    NEVER,
    check_extension_exclusive,
    licensing_compare,
    spillover_fc_compare,
    spillover_no_fc_compare,
)
from rjvgame.model import LicensingTerms, ProfitQuad, SpilloverRate

from conftest import random_financing, random_quad
from frozen import S1


class TestSpilloverWithoutFinancing:
    def test_s1_half(self, s1_quad, ratio):
        res = spillover_no_fc_compare(s1_quad, SpilloverRate(0.5), ratio)
        assert res.sigma_star == pytest.approx(S1["sigma_star"])
        assert res.theta_nc1 == pytest.approx(S1["theta_nc1_half"], abs=1e-6)
        assert res.theta_u == pytest.approx(S1["theta_u"], abs=1e-6)
        assert res.rjv_better
        assert res.theta_nc2 <= res.theta_nc1

    def test_below_critical_rate(self, s1_quad, ratio):
        assert not spillover_no_fc_compare(s1_quad, SpilloverRate(0.2), ratio).rjv_better

    def test_sentinels(self, ratio):
        assert spillover_no_fc_compare(ProfitQuad(0.1, 0.3, 0.1, 0.3), SpilloverRate(0.0), ratio).sigma_star == ALWAYS
        assert spillover_no_fc_compare(ProfitQuad(0.1, 0.1, 0.1, 0.1), SpilloverRate(0.0), ratio).sigma_star == NEVER

    def test_soft_quad_always_better(self, ratio):
        quad = ProfitQuad(0.0, 0.5, 0.0, 0.4)
        res = spillover_no_fc_compare(quad, SpilloverRate(0.0), ratio)
        assert res.rjv_better and res.sigma_star < 0


class TestSpilloverWithFinancing:
    def test_zero_rate_is_baseline(self, s1_quad, ratio, s1_fin):
        assert spillover_fc_compare(s1_quad, SpilloverRate(0.0), ratio, s1_fin) == compare_rjv_vs_competition(
            s1_quad, ratio, s1_fin
        )

    def test_full_spillover(self, s1_quad, ratio, s1_fin):
        rep = spillover_fc_compare(s1_quad, SpilloverRate(1.0), ratio, s1_fin, strict=False)
        assert rep.baseline.innovation_prob == pytest.approx(S1["theta_tilde1_full"], abs=1e-6)
        assert rep.alternative.innovation_prob == pytest.approx(S1["theta_star"], abs=1e-6)
        assert rep.verdict is Verdict.HIGHER
        assert rep.thresholds.B_tilde is not None

    def test_leaky_venture_may_lose_profit(self, ratio):
        # The transformed quad is moderate and the venture innovates more,
        # yet industry profit falls because leaks already help the laggard.
        quad = ProfitQuad(0.110612195, 0.461468594, 0.090526793, 0.249560049)
        rep = spillover_fc_compare(quad, SpilloverRate(7 / 19), ratio, FinancingEnv(0.00266081309, 0.0), strict=False)
        assert rep.condition_flags["prop3_sufficient"]
        assert rep.net_profit_delta < 0

    def test_full_spillover_strict_fails_budget(self, s1_quad, ratio, s1_fin):
        from rjvgame.errors import AssumptionViolation

        with pytest.raises(AssumptionViolation) as info:
            spillover_fc_compare(s1_quad, SpilloverRate(1.0), ratio, s1_fin)
        assert info.value.codes == ("A2-spillover",)

    def test_monotonicity_probe(self, s1_quad, ratio):
        def better(sigma, rho):
            fin = FinancingEnv(0.002, rho)
            return spillover_fc_compare(s1_quad, SpilloverRate(sigma), ratio, fin, strict=False).innovation_delta > 0

        if better(0.3, 0.15):
            assert better(0.5, 0.20)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
    def test_monotone_in_sigma(self, seed, s1, s2):
        rng = np.random.default_rng(seed)
        cf = RatioCost(1.0)
        quad = random_quad(rng)
        fin = random_financing(rng, cf, quad)
        lo, hi = sorted((s1, s2))
        d_lo = spillover_fc_compare(quad, SpilloverRate(lo), cf, fin, strict=False).innovation_delta
        d_hi = spillover_fc_compare(quad, SpilloverRate(hi), cf, fin, strict=False).innovation_delta
        assert d_hi >= d_lo - 1e-12


class TestLicensing:
    def test_s1(self, s1_quad, ratio, s1_fin):
        rep = licensing_compare(s1_quad, LicensingTerms(), ratio, s1_fin)
        assert rep.baseline.innovation_prob == pytest.approx(S1["theta1_L"], abs=1e-6)
        assert rep.baseline.duplicated_mass == pytest.approx(S1["theta2"], abs=1e-6)
        assert rep.condition_flags["licensing_occurs"]
        assert rep.thresholds.rho_bar_L >= rep.thresholds.rho_bar
        assert rep.thresholds.B_bar_L >= rep.thresholds.B_bar

    def test_not_occurring_is_baseline(self, ratio):
        quad = ProfitQuad(0.0, 1.0, 0.0, 0.0)
        fin = FinancingEnv(0.0, 0.1)
        assert licensing_compare(quad, LicensingTerms(), ratio, fin, strict=False) == compare_rjv_vs_competition(
            quad, ratio, fin, strict=False
        )

    def test_disabled_is_baseline(self, s1_quad, ratio, s1_fin):
        rep = licensing_compare(s1_quad, LicensingTerms(enabled=False), ratio, s1_fin)
        assert rep == compare_rjv_vs_competition(s1_quad, ratio, s1_fin)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_orderings(self, seed):
        rng = np.random.default_rng(seed)
        cf = RatioCost(1.0)
        quad = random_quad(rng)
        fin = random_financing(rng, cf, quad)
        terms = LicensingTerms(delta=rng.uniform(0.0, 0.1))
        rep = licensing_compare(quad, terms, cf, fin)
        base = compare_rjv_vs_competition(quad, cf, fin)
        assert rep.baseline.innovation_prob >= base.baseline.innovation_prob
        assert rep.baseline.duplicated_mass == base.baseline.duplicated_mass
        if rep.condition_flags.get("licensing_occurs"):
            assert rep.thresholds.B_bar_L >= rep.thresholds.B_bar
            assert rep.thresholds.rho_bar_L >= rep.thresholds.rho_bar
            if rep.innovation_delta > 1e-9:
                assert rep.spend_delta <= 0.0


class TestExclusivity:
    def test_combination_rejected(self):
        with pytest.raises(ConfigurationError):
            check_extension_exclusive(SpilloverRate(0.5), LicensingTerms())

    def test_single_extension_accepted(self):
        check_extension_exclusive(SpilloverRate(0.5), None)
        check_extension_exclusive(None, LicensingTerms())
        check_extension_exclusive(SpilloverRate(0.5), LicensingTerms(enabled=False))
