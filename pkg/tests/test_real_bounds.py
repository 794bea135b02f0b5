import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from varbounds import oracle
from varbounds.real_bounds import (
    RealSample,
    all_bounds,
    classic_bounds,
    extreme_value_bounds,
    kurtosis_gated_bound,
    mallows_richter,
    refined_bounds_negative_min,
    refined_bounds_positive_mean,
)

value = st.floats(-1e4, 1e4, allow_nan=False, allow_subnormal=False)
sample = st.lists(value, min_size=2, max_size=50)


def by_name(reports):
    return {r.name: r for r in reports}


class TestRealSample:
    def test_moments(self):
        s = RealSample([0, 0, 3])
        assert (s.n, s.a, s.b, s.mean, s.var) == (3, 0.0, 3.0, 1.0, 2.0)
        assert s.raw_m2 == pytest.approx(3.0)
        assert s.m4 == pytest.approx((1 + 1 + 16) / 3)

    def test_kurtosis(self):
        assert RealSample([-1, 0, 1]).kurtosis == pytest.approx(1.5)
        assert RealSample([0, 1]).kurtosis == pytest.approx(1.0)
        assert math.isnan(RealSample([2, 2]).kurtosis)

    @pytest.mark.parametrize("bad", [[], [1.0, math.nan], [math.inf]])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            RealSample(bad)

    # squares of magnitudes below ~1e-154 underflow, so the variance of such a
    # sample is not representable
    @given(st.lists(value.filter(lambda v: v == 0 or abs(v) > 1e-100), min_size=2, max_size=50))
    def test_invariants(self, x):
        s = RealSample(x)
        assert s.a <= s.mean <= s.b
        assert s.var >= 0 and s.m4 >= 0
        assert s.m4 >= s.var**2 * (1 - 1e-9)
        assert (s.b == s.a) == (s.var == 0)

    def test_matches_oracle(self):
        x = np.random.default_rng(1).normal(size=37)
        mean, var = oracle.sample_moments(x.tolist())
        s = RealSample(x)
        assert s.mean == pytest.approx(mean, rel=1e-14)
        assert s.var == pytest.approx(var, rel=1e-13)


class TestClassic:
    def test_zero_zero_three(self):
        pop, nagy, ref = classic_bounds(RealSample([0, 0, 3]))
        assert (pop.observed, pop.upper) == (2.0, 2.25)
        assert nagy.lower == 1.5
        assert ref.lower == pytest.approx(2.0) and ref.upper == pytest.approx(2.0)

    def test_two_points_saturate(self):
        pop, nagy, ref = classic_bounds(RealSample([0, 1]))
        assert pop.upper == pop.observed == nagy.lower == 0.25
        assert ref.lower is None  # needs n >= 3

    def test_constant(self):
        for r in classic_bounds(RealSample([4, 4, 4])):
            assert r.holds
            assert {v for _, v in r.terms} == {0.0}

    def test_singleton_inapplicable(self):
        assert not any(r.applicable for r in classic_bounds(RealSample([1.0])))

    @given(st.lists(value, min_size=3, max_size=50))
    def test_refinement_nested(self, x):
        s = RealSample(x)
        pop, nagy, ref = classic_bounds(s)
        assert pop.holds and nagy.holds and ref.holds
        tol = 1e-9 * max(pop.upper, 1.0)
        assert nagy.lower <= ref.lower + tol
        assert ref.upper <= pop.upper + tol


class TestPositiveMean:
    def test_zero_zero_three(self):
        r = by_name(refined_bounds_positive_mean(RealSample([0, 0, 3])))
        assert all(rep.applicable for rep in r.values())
        assert r["positive_mean_popoviciu"].upper == pytest.approx(2.0)
        assert r["positive_mean_nagy"].lower == pytest.approx(2.0)
        assert r["raw_moment_range"].lower == pytest.approx(3.0)

    def test_mean_above_sd(self):
        assert not any(r.applicable for r in refined_bounds_positive_mean(RealSample([1, 2, 3])))

    def test_four_point(self):
        r = by_name(refined_bounds_positive_mean(RealSample([0, 0, 0, 4])))
        assert r["raw_moment_range"].applicable
        assert r["raw_moment_range"].lower == pytest.approx(4.0)

    def test_zero_mean(self):
        reps = refined_bounds_positive_mean(RealSample([0, 0, 0]))
        assert not any(r.applicable for r in reps)

    @given(st.lists(st.floats(0, 100), min_size=3, max_size=40))
    def test_tightens_classic(self, x):
        s = RealSample(x)
        r = by_name(refined_bounds_positive_mean(s))
        assume(r["positive_mean_popoviciu"].applicable)
        pop, nagy, _ = classic_bounds(s)
        tol = 1e-9 * max(pop.upper, 1.0)
        assert r["positive_mean_popoviciu"].upper <= pop.upper + tol
        assert r["positive_mean_nagy"].lower >= nagy.lower - tol
        for rep in r.values():
            assert rep.holds


class TestNegativeMin:
    def test_applicable_example(self):
        r = by_name(refined_bounds_negative_min(RealSample([-0.1, 4, 4, 4.1])))
        pop, nagy = r["negative_min_popoviciu"], r["negative_min_nagy"]
        assert pop.applicable and nagy.applicable
        assert pop.observed == pytest.approx(3.205)
        # s^2 + t^2 <= 4.41 and s^2 - t^2 >= 2.205 with t = (9 - 2 * 3.205) / 6
        t2 = (2.59 / 6) ** 2
        assert pop.upper == pytest.approx(4.41 - t2)
        assert nagy.lower == pytest.approx(2.205 + t2)
        assert pop.holds and nagy.holds
        # the printed form of the gate is never satisfiable
        alt = [c for c in pop.diagnostics if "alternative" in c.description]
        assert alt and not alt[0].satisfied

    @pytest.mark.parametrize("x", [[-1, 1, 3], [1, 2, 3], [-3, -1, 1]])
    def test_inapplicable(self, x):
        assert not any(r.applicable for r in refined_bounds_negative_min(RealSample(x)))

    @given(st.integers(3, 40), st.floats(0.001, 1.0), st.floats(0.0, 2.0), st.integers(0, 2**32 - 1))
    def test_holds_on_clusters(self, n, spread, neg, seed):
        x = np.random.default_rng(seed).normal(10, spread, size=n)
        x[0] = -neg - 1e-6
        for r in refined_bounds_negative_min(RealSample(x)):
            if r.applicable:
                assert r.holds


class TestKurtosis:
    def test_leptokurtic(self):
        pop, m4 = kurtosis_gated_bound(RealSample([-3, 0, 0, 0, 0, 0, 0, 3]))
        assert pop.applicable
        assert pop.observed == pytest.approx(2.25)
        assert pop.upper == pytest.approx(6 * math.sqrt(1.5))
        assert pop.term("outer") == pytest.approx(36 / (2 * math.sqrt(6)))
        assert pop.holds and m4.holds

    @pytest.mark.parametrize("x", [[-1, 0, 1], [0, 1], [5, 5, 5]])
    def test_gate(self, x):
        pop, m4 = kurtosis_gated_bound(RealSample(x))
        assert not pop.applicable
        assert m4.applicable and m4.holds

    @given(sample)
    def test_fourth_moment_always(self, x):
        _, m4 = kurtosis_gated_bound(RealSample(x))
        assert m4.holds


class TestExtremes:
    def test_zero_zero_three(self):
        lo, hi = extreme_value_bounds(RealSample([0, 0, 3]))
        assert lo.lower == pytest.approx(-1) and lo.upper == pytest.approx(0, abs=1e-15)
        assert hi.lower == pytest.approx(2) and hi.upper == pytest.approx(3)

    def test_two_points_saturate(self):
        lo, hi = extreme_value_bounds(RealSample([0, 1]))
        assert lo.lower == pytest.approx(0) and lo.upper == pytest.approx(0)
        assert hi.lower == pytest.approx(1) and hi.upper == pytest.approx(1)

    def test_constant(self):
        for r in extreme_value_bounds(RealSample([2.5] * 4)):
            assert r.lower == r.upper == 2.5

    def test_needs_two(self):
        with pytest.raises(ValueError):
            extreme_value_bounds(RealSample([1.0]))

    @given(sample)
    def test_hold(self, x):
        assert all(r.holds for r in extreme_value_bounds(RealSample(x)))


class TestMallowsRichter:
    def test_equality(self):
        r = mallows_richter(RealSample([0, 0, 3]), [2])
        assert r.lower == pytest.approx(2.0) and r.observed == 2.0

    def test_pairs(self):
        r = mallows_richter(RealSample([0, 1, 2, 3]), [0, 1])
        assert r.lower == pytest.approx(1.0) and r.observed == pytest.approx(1.25)

    def test_full_subset_inapplicable(self):
        assert not mallows_richter(RealSample([0, 1, 2]), [0, 1, 2]).applicable

    def test_bad_index(self):
        with pytest.raises((ValueError, IndexError)):
            mallows_richter(RealSample([0, 1, 2]), [0, 0])

    @given(st.lists(value, min_size=2, max_size=30), st.integers(0, 2**32 - 1))
    def test_single_point_is_samuelson(self, x, seed):
        s = RealSample(x)
        j = int(np.random.default_rng(seed).integers(0, s.n))
        r = mallows_richter(s, [j])
        assert r.lower == pytest.approx((x[j] - s.mean) ** 2 / (s.n - 1), rel=1e-9, abs=1e-9 * max(s.var, 1e-300))
        assert r.holds


@given(sample, st.floats(0.01, 100), st.floats(-100, 100))
def test_affine_verdicts_invariant(x, lam, c):
    s, t = RealSample(x), RealSample([lam * v + c for v in x])
    assume(s.var > 1e-6 * max(abs(v) for v in x) ** 2)
    for a, b in zip(classic_bounds(s), classic_bounds(t)):
        assert a.applicable == b.applicable
        if a.upper is not None and a.upper > 0:
            assert b.upper == pytest.approx(lam**2 * a.upper, rel=1e-6)


@given(sample)
def test_all_bounds_hold_when_applicable(x):
    for r in all_bounds(RealSample(x)):
        if r.applicable:
            assert r.holds is not False
