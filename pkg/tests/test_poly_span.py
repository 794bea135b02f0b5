import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from varbounds import oracle
from varbounds.poly_span import MonicPoly, NotRealRooted, coeff_moments, refined_span_bounds, span_bounds
from varbounds.real_bounds import RealSample, classic_bounds

roots_st = st.lists(st.floats(-20, 20, allow_subnormal=False), min_size=2, max_size=8)

CUBIC_ZERO_ZERO_THREE = MonicPoly.from_list([1, -3, 0, 0])
CUBIC_ONE_TWO_THREE = MonicPoly.from_list([1, -6, 11, -6])
QUADRATIC_ZERO_TWO = MonicPoly.from_list([1, -2, 0])


def by_name(reports):
    return {r.name: r for r in reports}


class TestMonicPoly:
    def test_leading_one_required(self):
        with pytest.raises(ValueError):
            MonicPoly.from_list([2, 1, 1])

    def test_from_roots(self):
        assert MonicPoly.from_roots([1, 2, 3]) == CUBIC_ONE_TWO_THREE

    def test_evaluate(self):
        p = CUBIC_ONE_TWO_THREE
        assert [p(x) for x in (1, 2, 3)] == [0, 0, 0]
        assert p(0) == -6

    def test_non_finite(self):
        with pytest.raises(ValueError):
            MonicPoly((1.0, math.nan))

    def test_shifted(self):
        # f(x + 1) has roots {0, 1, 2}
        assert CUBIC_ONE_TWO_THREE.shifted(1.0) == MonicPoly.from_roots([0, 1, 2])

    @given(roots_st, st.floats(-10, 10))
    def test_shift_keeps_span_bounds(self, roots, t):
        p = MonicPoly.from_roots(roots)
        q = p.shifted(t)
        scale = max(1.0, max(abs(r) for r in roots) + abs(t))
        try:
            a, b = span_bounds(p), span_bounds(q)
        except NotRealRooted:
            return  # coefficient rounding on a tight multiple root
        assert b.lower == pytest.approx(a.lower, abs=1e-6 * scale)
        assert b.upper == pytest.approx(a.upper, abs=1e-6 * scale)


class TestCoeffMoments:
    @pytest.mark.parametrize(
        "p, mean, var",
        [(CUBIC_ZERO_ZERO_THREE, 1.0, 2.0), (QUADRATIC_ZERO_TWO, 1.0, 1.0), (MonicPoly.from_roots([2.5] * 5), 2.5, 0.0)],
    )
    def test_examples(self, p, mean, var):
        m, v = coeff_moments(p)
        assert m == pytest.approx(mean) and v == pytest.approx(var, abs=1e-12)

    def test_degree_one(self):
        with pytest.raises(ValueError):
            coeff_moments(MonicPoly((1.0,)))

    @given(roots_st)
    def test_matches_root_sample(self, roots):
        m, v = coeff_moments(MonicPoly.from_roots(roots))
        s = RealSample(roots)
        scale = max(1.0, max(abs(r) for r in roots))
        assert m == pytest.approx(s.mean, abs=1e-12 * scale)
        assert v == pytest.approx(s.var, abs=1e-9 * scale**2 * len(roots))


class TestSpanBounds:
    def test_cubic(self):
        r = span_bounds(CUBIC_ZERO_ZERO_THREE)
        assert r.lower == pytest.approx(2 / 3 * math.sqrt(18))
        assert r.upper == pytest.approx(math.sqrt(12))

    def test_quadratic_pinned(self):
        r = span_bounds(QUADRATIC_ZERO_TWO)
        assert r.lower == pytest.approx(2) and r.upper == pytest.approx(2)

    def test_one_two_three(self):
        r = span_bounds(CUBIC_ONE_TWO_THREE)
        assert r.lower == pytest.approx(2 / 3 * math.sqrt(6))
        assert r.upper == pytest.approx(2.0)

    def test_not_real_rooted(self):
        with pytest.raises(NotRealRooted, match="certificate"):
            span_bounds(MonicPoly.from_list([1, 0, 1]))

    @given(roots_st)
    def test_equals_classic_on_roots(self, roots):
        p = MonicPoly.from_roots(roots)
        try:
            r = span_bounds(p)
        except NotRealRooted:
            return
        s = RealSample(roots)
        pop, nagy, _ = classic_bounds(s)
        scale = max(1.0, max(abs(x) for x in roots))
        # lower = 2s (Popoviciu), upper = sqrt(2n) s (Nagy)
        assert r.lower == pytest.approx(2 * math.sqrt(pop.observed), abs=1e-6 * scale)
        assert r.upper == pytest.approx(math.sqrt(2 * s.n * nagy.observed), abs=1e-6 * scale)
        span = max(roots) - min(roots)
        assert r.lower <= span + 1e-6 * scale and span <= r.upper + 1e-6 * scale


class TestRefinedSpan:
    def test_cubic_equality(self):
        r = by_name(refined_span_bounds(CUBIC_ZERO_ZERO_THREE))
        assert r["nonneg_span_lower"].applicable and r["nonneg_span_lower"].lower == pytest.approx(3.0)
        assert r["nonneg_span_upper"].applicable and r["nonneg_span_upper"].upper == pytest.approx(3.0)
        sq = r["nonneg_span_lower_sqrt_form"]
        assert sq.lower == pytest.approx(math.sqrt(3)) and not sq.applicable

    def test_one_two_three_gate(self):
        r = by_name(refined_span_bounds(CUBIC_ONE_TWO_THREE))
        low = r["nonneg_span_lower"]
        assert not low.applicable
        assert low.lower == pytest.approx(7 / 3)  # exceeds the true span 2
        conds = {c.description: c.satisfied for c in low.diagnostics}
        assert conds["n a2 <= (n-2) a1**2"]
        assert not conds["(n-2) a1**2 >= 2 n a2 (mean <= s)"]
        assert conds["roots nonnegative"]

    def test_sqrt_form_not_scale_invariant(self):
        # roots {0, 0, 0.3}: the square-root form claims a span of at least 0.548
        r = by_name(refined_span_bounds(MonicPoly.from_roots([0, 0, 0.3])))
        assert r["nonneg_span_lower_sqrt_form"].lower > 0.3
        assert r["nonneg_span_lower"].lower == pytest.approx(0.3)

    def test_all_zero_roots(self):
        for rep in refined_span_bounds(MonicPoly.from_list([1, 0, 0, 0])):
            assert not rep.applicable
            assert rep.lower in (0.0, None) and rep.upper in (0.0, None)

    def test_negative_roots_verified(self):
        rep = refined_span_bounds(MonicPoly.from_roots([-1, 0, 5]))[0]
        cond = [c for c in rep.diagnostics if c.description == "roots nonnegative"][0]
        assert not cond.satisfied and cond.source == "verified"

    def test_degree_two(self):
        with pytest.raises(ValueError):
            refined_span_bounds(QUADRATIC_ZERO_TWO)

    @given(st.lists(st.floats(0, 20, allow_subnormal=False), min_size=3, max_size=8))
    def test_bracket_when_applicable(self, roots):
        p = MonicPoly.from_roots(roots)
        try:
            reps = refined_span_bounds(p, True)
        except NotRealRooted:
            return
        span = max(roots) - min(roots)
        scale = max(1.0, max(roots))
        for r in reps:
            if not r.applicable:
                continue
            if r.lower is not None:
                assert r.lower <= span + 1e-6 * scale
            if r.upper is not None:
                assert span <= r.upper + 1e-6 * scale
