"""Variance inequalities for finite real samples.

All variances use the ``1/n`` convention.  Each function returns
:class:`~varbounds.report.BoundReport` objects whose ``observed`` field holds
the sample statistic being bounded, so ``report.holds`` is a direct check.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .report import BoundReport, Condition, all_satisfied


class RealSample:
    """A nonempty real sample with its range and central moments.

    Moments are computed in two passes (mean first, then deviations).
    """

    __slots__ = ("values", "n", "a", "b", "mean", "var", "m4")

    def __init__(self, values: Iterable[float]):
        x = np.array(values if isinstance(values, np.ndarray) else list(values), dtype=float).reshape(-1)
        if x.size == 0:
            raise ValueError("empty sample")
        if not np.all(np.isfinite(x)):
            raise ValueError("sample contains non-finite values")
        x.setflags(write=False)
        self.values = x
        self.n = int(x.size)
        self.a = float(x.min())
        self.b = float(x.max())
        mean = float(x.sum() / self.n)
        # round-off can push the mean a hair outside [a, b]
        self.mean = min(max(mean, self.a), self.b)
        d = x - self.mean
        d2 = d * d
        self.var = float(d2.sum() / self.n)
        self.m4 = float((d2 * d2).sum() / self.n)

    @property
    def std(self) -> float:
        return math.sqrt(self.var)

    @property
    def raw_m2(self) -> float:
        """Second raw moment ``s**2 + mean**2``."""
        return self.var + self.mean * self.mean

    @property
    def range(self) -> float:
        return self.b - self.a

    @property
    def kurtosis(self) -> float:
        """``m4 / m2**2``, NaN for a constant sample."""
        if self.b == self.a:
            return math.nan
        # scale-free, so work on range-normalized deviations; m4 and var**2
        # underflow for tiny samples
        d = (self.values - self.mean) / (self.b - self.a)
        d2 = d * d
        v = float(d2.sum() / self.n)
        return float((d2 * d2).sum() / self.n) / (v * v) if v > 0 else math.nan

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"RealSample(n={self.n}, mean={self.mean:.6g}, var={self.var:.6g})"


def as_real_sample(values) -> RealSample:
    return values if isinstance(values, RealSample) else RealSample(values)


def classic_bounds(sample) -> list[BoundReport]:
    """Popoviciu, Nagy and the two-sided range/mean refinement."""
    x = as_real_sample(sample)
    n, a, b, m, v = x.n, x.a, x.b, x.mean, x.var
    rng2 = (b - a) ** 2
    n2 = (Condition("n >= 2", n >= 2),)
    mid = (a + b) / 2
    refined_ok = n >= 3
    return [
        BoundReport(
            name="popoviciu",
            kind="upper",
            quantity="variance",
            observed=v,
            upper=rng2 / 4,
            applicable=n >= 2,
            diagnostics=n2,
            reference="Popoviciu",
        ),
        BoundReport(
            name="nagy",
            kind="lower",
            quantity="variance",
            lower=rng2 / (2 * n),
            observed=v,
            applicable=n >= 2,
            diagnostics=n2,
            reference="Nagy",
        ),
        BoundReport(
            name="range_mean_refinement",
            kind="two-sided",
            quantity="variance",
            lower=rng2 / (2 * n) + 2 / (n - 2) * (m - mid) ** 2 if refined_ok else None,
            observed=v,
            upper=(b - m) * (m - a),
            applicable=refined_ok,
            diagnostics=(Condition("n >= 3", refined_ok),),
            reference="range-mean refinement / Bhatia-Davis",
        ),
    ]


def refined_bounds_positive_mean(sample) -> list[BoundReport]:
    """Sharper Popoviciu/Nagy bounds for nonnegative data with ``mean <= s``."""
    x = as_real_sample(sample)
    n, a, b, m, v = x.n, x.a, x.b, x.mean, x.var
    s = math.sqrt(v)
    rng = b - a
    conds = (
        Condition("0 <= min", a >= 0),
        Condition("min < mean", a < m),
        Condition("mean <= s", m <= s),
    )
    ok = all_satisfied(conds)
    if m == 0:
        t = math.nan
    else:
        t = (v - m * m) / (2 * m)
    n3 = Condition("n >= 3", n >= 3)
    reports = [
        BoundReport(
            name="positive_mean_popoviciu",
            kind="upper",
            quantity="variance",
            observed=v,
            upper=rng * rng / 4 - t * t,
            applicable=ok,
            diagnostics=conds,
            reference="refined Popoviciu (nonnegative data)",
            extra={"shift_sq": t * t},
        ),
        BoundReport(
            name="positive_mean_nagy",
            kind="lower",
            quantity="variance",
            lower=rng * rng / (2 * n) + (2 / (n - 2)) * t * t if n >= 3 else None,
            observed=v,
            applicable=ok and n >= 3,
            diagnostics=conds + (n3,),
            reference="refined Nagy (nonnegative data)",
        ),
        BoundReport(
            name="raw_moment_range",
            kind="lower",
            quantity="range",
            lower=x.raw_m2 / m if m != 0 else math.nan,
            observed=rng,
            applicable=ok,
            diagnostics=conds,
            reference="raw second moment over mean",
        ),
    ]
    return reports


def refined_bounds_negative_min(sample) -> list[BoundReport]:
    """Sharper bounds when the minimum is negative but the mean is large.

    The gate is ``min < 0``, ``mean > 0`` and ``mean**2 >= (n/2) s**2``; the
    alternative gate ``2 mean >= n s`` is recorded as a diagnostic only, since
    it can never hold together with ``min < 0``.
    """
    x = as_real_sample(sample)
    n, a, b, m, v = x.n, x.a, x.b, x.mean, x.var
    s = math.sqrt(v)
    rng = b - a
    conds = (
        Condition("min < 0", a < 0),
        Condition("mean > 0", m > 0),
        Condition("mean**2 >= (n/2) s**2", m * m >= n / 2 * v),
    )
    ok = all_satisfied(conds)
    alt = Condition("2 mean >= n s (alternative reading, unsatisfiable with min < 0)", 2 * m >= n * s)
    u = (m * m - n / 2 * v) / (2 * m) if m != 0 else math.nan
    return [
        BoundReport(
            name="negative_min_popoviciu",
            kind="upper",
            quantity="variance",
            observed=v,
            upper=rng * rng / 4 - u * u,
            applicable=ok,
            diagnostics=conds + (alt,),
            reference="refined Popoviciu (negative minimum)",
            extra={"shift_sq": u * u},
        ),
        BoundReport(
            name="negative_min_nagy",
            kind="lower",
            quantity="variance",
            lower=rng * rng / (2 * n) + (2 / (n - 2)) * u * u if n >= 3 else None,
            observed=v,
            applicable=ok and n >= 3,
            diagnostics=conds + (alt, Condition("n >= 3", n >= 3)),
            reference="refined Nagy (negative minimum)",
        ),
    ]


def kurtosis_gated_bound(sample) -> list[BoundReport]:
    """Variance cap for samples with kurtosis at least 3.

    Also returns the unconditional fourth-moment inequality
    ``m4 + 3 m2**2 <= (b-a)**2 (mean-a)(b-mean)`` that drives it.
    """
    x = as_real_sample(sample)
    a, b, m, v = x.a, x.b, x.mean, x.var
    rng = b - a
    spread = (m - a) * (b - m)
    conds = (
        Condition("variance > 0", v > 0),
        Condition("m4 / m2**2 >= 3", v > 0 and x.kurtosis >= 3),
    )
    gated = BoundReport(
        name="kurtosis_popoviciu",
        kind="upper",
        quantity="variance",
        observed=v,
        upper=rng * math.sqrt(spread / 6),
        applicable=all_satisfied(conds),
        diagnostics=conds,
        reference="leptokurtic Popoviciu",
        extra={"outer": rng * rng / (2 * math.sqrt(6)), "kurtosis": x.kurtosis},
        chain=("observed", "upper", "outer"),
    )
    moment = BoundReport(
        name="fourth_moment",
        kind="upper",
        quantity="m4_plus_3m2sq",
        observed=x.m4 + 3 * v * v,
        upper=rng * rng * spread,
        reference="fourth-moment range bound",
    )
    return [gated, moment]


def extreme_value_bounds(sample) -> list[BoundReport]:
    """Where the sample minimum and maximum can sit given mean and spread."""
    x = as_real_sample(sample)
    n, m, s = x.n, x.mean, x.std
    ok = n >= 2
    if not ok:
        raise ValueError("need at least two values")
    wide = math.sqrt(n - 1) * s
    narrow = s / math.sqrt(n - 1)
    cond = (Condition("n >= 2", ok),)
    return [
        BoundReport(
            name="sample_min",
            kind="two-sided",
            quantity="min",
            lower=m - wide,
            observed=x.a,
            upper=m - narrow,
            diagnostics=cond,
            reference="Samuelson",
        ),
        BoundReport(
            name="sample_max",
            kind="two-sided",
            quantity="max",
            lower=m + narrow,
            observed=x.b,
            upper=m + wide,
            diagnostics=cond,
            reference="Samuelson",
        ),
    ]


def mallows_richter(sample, subset: Sequence[int]) -> BoundReport:
    """``s**2 >= r/(n-r) (mean(subset) - mean)**2`` for a proper r-subset."""
    x = as_real_sample(sample)
    n = x.n
    idx = [int(i) for i in subset]
    if len(set(idx)) != len(idx):
        raise ValueError("duplicate index in subset")
    if not idx:
        raise ValueError("subset must be nonempty")
    for i in idx:
        if not 0 <= i < n:
            raise IndexError(f"subset index {i} out of range for n={n}")
    r = len(idx)
    ok = r <= n - 1
    alpha = float(x.values[idx].sum() / r)
    return BoundReport(
        name="mallows_richter",
        kind="lower",
        quantity="variance",
        lower=r / (n - r) * (alpha - x.mean) ** 2 if ok else None,
        observed=x.var,
        applicable=ok,
        diagnostics=(Condition("1 <= r <= n - 1", ok),),
        reference="Mallows-Richter",
        extra={"r": float(r), "subset_mean": alpha},
    )


def all_bounds(sample) -> list[BoundReport]:
    """Every subset-free real-sample bound, in a fixed order."""
    x = as_real_sample(sample)
    out = classic_bounds(x)
    out += refined_bounds_positive_mean(x)
    out += refined_bounds_negative_min(x)
    out += kurtosis_gated_bound(x)
    if x.n >= 2:
        out += extreme_value_bounds(x)
    return out
