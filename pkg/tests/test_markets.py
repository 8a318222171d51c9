import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rjvgame.errors import MarketValidityError
from rjvgame.markets import (
    BertrandPrimitives,
    CournotPrimitives,
    bertrand_drastic_bound,
    bertrand_margin,
    bertrand_market,
    cournot_market,
)
from rjvgame.model import validate_consumer_surplus, validate_monopoly, validate_regularity

from frozen import BERTRAND_QUAD, S1_MONOPOLY, S1_QUAD


class TestCournot:
    def test_s1_tables(self, s1_tables):
        assert s1_tables.quad.as_tuple() == pytest.approx(S1_QUAD, abs=1e-15)
        assert (s1_tables.monopoly.pi_0, s1_tables.monopoly.pi_I) == pytest.approx(S1_MONOPOLY)
        assert s1_tables.cs.cs_00 == pytest.approx(2.0 / 9.0)
        assert s1_tables.cs.cs_II == pytest.approx(0.5)

    def test_intercept_and_cost_form(self):
        a = cournot_market(CournotPrimitives(a=3.0, b=2.0, c=1.0, I=0.5))
        b = cournot_market(CournotPrimitives.from_alpha(2.0, 0.5, slope=2.0))
        assert a == b

    def test_slope_scales_profits(self):
        base = cournot_market(CournotPrimitives.from_alpha(1.0, 0.3)).quad
        half = cournot_market(CournotPrimitives.from_alpha(1.0, 0.3, slope=2.0)).quad
        assert half.as_tuple() == pytest.approx(tuple(v / 2 for v in base.as_tuple()))

    @pytest.mark.parametrize(
        "prim",
        [
            CournotPrimitives.from_alpha(0.5, 0.5),
            CournotPrimitives.from_alpha(0.4, 0.5),
            CournotPrimitives.from_alpha(1.0, 0.0),
            CournotPrimitives.from_alpha(1.0, 0.2, slope=0.0),
            CournotPrimitives.from_alpha(math.nan, 0.2),
        ],
    )
    def test_validity_screen(self, prim):
        with pytest.raises(MarketValidityError):
            cournot_market(prim)

    def test_small_innovation_collapses(self):
        quad = cournot_market(CournotPrimitives.from_alpha(1.0, 1e-9)).quad
        assert quad.as_tuple() == pytest.approx((1.0 / 9.0,) * 4, abs=1e-8)

    @given(st.floats(0.01, 1.0), st.floats(0.001, 5.0))
    def test_tables_satisfy_assumptions(self, inn, extra):
        tables = cournot_market(CournotPrimitives.from_alpha(inn + extra, inn))
        assert validate_regularity(tables.quad) == []
        assert validate_monopoly(tables.monopoly) == []
        assert validate_consumer_surplus(tables.cs) == []


class TestBertrand:
    def test_reference_quad(self):
        tables = bertrand_market(BertrandPrimitives(0.5, 0.5, 0.2))
        assert tables.quad.as_tuple() == pytest.approx(BERTRAND_QUAD, abs=1e-6)

    def test_independent_goods_are_monopolies(self):
        tables = bertrand_market(BertrandPrimitives(0.0, 0.5, 0.2))
        assert tables.quad.pi_00 == pytest.approx(0.0625)
        assert tables.quad.pi_I0 == pytest.approx(tables.quad.pi_II)
        assert bertrand_drastic_bound(0.0, 0.5) == math.inf

    def test_drastic_bound_marks_zero_margin(self):
        b, c = 0.9, 0.5
        bound = bertrand_drastic_bound(b, c)
        assert bertrand_margin(b, c, c - bound) == pytest.approx(0.0, abs=1e-12)
        with pytest.raises(MarketValidityError):
            bertrand_market(BertrandPrimitives(b, c, min(c, bound + 1e-3)))

    @pytest.mark.parametrize(
        "prim",
        [BertrandPrimitives(1.0, 0.5, 0.2), BertrandPrimitives(-0.1, 0.5, 0.2), BertrandPrimitives(0.5, 0.0, 0.0),
         BertrandPrimitives(0.5, 0.5, 0.6), BertrandPrimitives(0.5, 0.5, 0.0)],
    )
    def test_validity_screen(self, prim):
        with pytest.raises(MarketValidityError):
            bertrand_market(prim)

    @given(st.floats(0.0, 0.95), st.floats(0.01, 0.45))
    def test_valid_tables_are_regular(self, b, inn):
        try:
            tables = bertrand_market(BertrandPrimitives(b, 0.5, inn))
        except MarketValidityError:
            return
        assert validate_regularity(tables.quad) == []
        assert validate_monopoly(tables.monopoly) == []
