"""Dispersion statistics of finite sets of complex numbers.

Three spreads are tracked for points ``z_1..z_n`` with mean ``zbar``:

* ``sz2``      mean of ``|z_i - zbar|**2`` (the modulus variance),
* ``s2``       mean of ``(z_i - zbar)**2`` (complex pseudo-variance),
* ``sigma_z2`` ``(|s2| + sz2) / 2``.

For real data all three coincide with the ordinary variance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .report import BoundReport, Condition

DEFAULT_COLLINEAR_TOL = 1e-9


class ComplexSample:
    """An ordered, nonempty, finite collection of complex points."""

    __slots__ = ("points",)

    def __init__(self, points: Iterable[complex]):
        arr = np.array(points if isinstance(points, np.ndarray) else list(points), dtype=complex)
        arr = arr.reshape(-1)
        if arr.size == 0:
            raise ValueError("empty sample")
        if not np.all(np.isfinite(arr)):
            raise ValueError("sample contains non-finite coordinates")
        arr.setflags(write=False)
        self.points = arr

    def __len__(self):
        return self.points.size

    def __iter__(self):
        return iter(self.points)

    def __repr__(self):
        return f"ComplexSample(n={len(self)})"


def as_complex_sample(points) -> ComplexSample:
    if isinstance(points, ComplexSample):
        return points
    return ComplexSample(points)


@dataclass(frozen=True)
class DispersionSummary:
    mean: complex
    sz2: float
    s2: complex
    sigma_z2: float


def dispersion(sample) -> DispersionSummary:
    """Mean, modulus variance, pseudo-variance and ``sigma_z**2``.

    Sums run left to right in index order.  A singleton has all spreads 0.
    """
    z = as_complex_sample(sample).points
    n = z.size
    mean = complex(sum(z.tolist()) / n)
    d = z - mean
    sz2 = float(np.sum(d.real * d.real + d.imag * d.imag) / n)
    s2 = complex(np.sum(d * d) / n)
    sigma_z2 = (abs(s2) + sz2) / 2.0
    return DispersionSummary(mean=mean, sz2=sz2, s2=s2, sigma_z2=sigma_z2)


def max_gap(sample) -> float:
    """Largest pairwise distance (the diameter of the point set)."""
    z = as_complex_sample(sample).points
    if z.size < 2:
        return 0.0
    return float(np.max(np.abs(z[:, None] - z[None, :])))


def pooled_variance(a, b) -> float:
    """Modulus variance of ``a`` and ``b`` combined, from per-part summaries."""
    a = as_complex_sample(a)
    b = as_complex_sample(b)
    n1, n2 = len(a), len(b)
    da, db = dispersion(a), dispersion(b)
    n = n1 + n2
    gap = abs(da.mean - db.mean) ** 2
    return (n1 / n) * da.sz2 + (n2 / n) * db.sz2 + (n1 * n2 / n**2) * gap


def _check_subset(subset: Sequence[int], n: int) -> list[int]:
    idx = [int(i) for i in subset]
    if not idx:
        raise ValueError("subset must be nonempty")
    if len(set(idx)) != len(idx):
        raise ValueError("duplicate index in subset")
    for i in idx:
        if not 0 <= i < n:
            raise IndexError(f"subset index {i} out of range for n={n}")
    return idx


def subset_mean_bound(sample, subset: Sequence[int]) -> BoundReport:
    """``|mean(subset) - mean|**2 <= (n - r)/r * sigma_z**2`` for any r-subset."""
    sample = as_complex_sample(sample)
    n = len(sample)
    idx = _check_subset(subset, n)
    r = len(idx)
    disp = dispersion(sample)
    gamma = complex(sum(sample.points[idx].tolist()) / r)
    lhs = abs(gamma - disp.mean) ** 2
    rhs = (n - r) / r * disp.sigma_z2
    return BoundReport(
        name="complex_subset_mean",
        kind="upper",
        quantity="subset_mean_deviation_sq",
        observed=lhs,
        upper=rhs,
        diagnostics=(Condition("1 <= r <= n", True),),
        reference="Mallows-Richter (complex)",
        extra={"r": float(r), "sigma_z2": disp.sigma_z2},
    )


def samuelson_bound(sample) -> BoundReport:
    """Every point lies within ``sqrt((n-1) * sigma_z**2)`` of the mean."""
    sample = as_complex_sample(sample)
    n = len(sample)
    disp = dispersion(sample)
    ok = n >= 2
    worst = float(np.max(np.abs(sample.points - disp.mean) ** 2))
    return BoundReport(
        name="complex_samuelson",
        kind="lower",
        quantity="sigma_z2",
        lower=worst / (n - 1) if ok else None,
        observed=disp.sigma_z2,
        applicable=ok,
        diagnostics=(Condition("n >= 2", ok),),
        reference="Samuelson (complex)",
    )


def pairwise_gap_bound(sample) -> BoundReport:
    """``sigma_z**2 >= max|z_j - z_k|**2 / (2n)``."""
    sample = as_complex_sample(sample)
    n = len(sample)
    ok = n >= 2
    disp = dispersion(sample)
    return BoundReport(
        name="complex_nagy",
        kind="lower",
        quantity="sigma_z2",
        lower=max_gap(sample) ** 2 / (2 * n) if ok else None,
        observed=disp.sigma_z2,
        applicable=ok,
        diagnostics=(Condition("n >= 2", ok),),
        reference="Nagy (complex)",
    )


def popoviciu_analogue(sample) -> list[BoundReport]:
    """The diameter bound ``sigma_z**2 <= D**2/4`` and its naive counterpart.

    The same bound with the modulus variance ``sz2`` in place of
    ``sigma_z**2`` is false in general (three points ``0, +-1/2 + i*sqrt(3)/2``
    break it); it is reported as a non-applicable comparison so the failure
    is visible instead of silently dropped.
    """
    sample = as_complex_sample(sample)
    n = len(sample)
    disp = dispersion(sample)
    cap = max_gap(sample) ** 2 / 4
    ok = n >= 2
    sigma_form = BoundReport(
        name="complex_popoviciu",
        kind="upper",
        quantity="sigma_z2",
        observed=disp.sigma_z2,
        upper=cap,
        applicable=ok,
        diagnostics=(Condition("n >= 2", ok),),
        reference="Popoviciu (complex)",
    )
    naive_form = BoundReport(
        name="modulus_variance_popoviciu",
        kind="upper",
        quantity="sz2",
        observed=disp.sz2,
        upper=cap,
        applicable=False,
        diagnostics=(Condition("valid inequality for complex data", False),),
        reference="Popoviciu (naive complex)",
        notes=("not a theorem; a false verdict is a counterexample, not an error",),
    )
    return [sigma_form, naive_form]


def collinearity_test(sample, tol: float = DEFAULT_COLLINEAR_TOL) -> tuple[bool, DispersionSummary]:
    """True iff the points lie on one straight line.

    Uses ``sz2 - |s2| <= tol * max(sz2, 1)``: equality of the modulus variance
    and the pseudo-variance modulus characterises collinearity.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    sample = as_complex_sample(sample)
    disp = dispersion(sample)
    if len(sample) <= 2:
        return True, disp
    gap = disp.sz2 - abs(disp.s2)
    return bool(gap <= tol * max(disp.sz2, 1.0)), disp


def dispersion_reports(sample) -> list[BoundReport]:
    """Every complex-sample inequality that needs no extra input."""
    sample = as_complex_sample(sample)
    disp = dispersion(sample)
    ordering = BoundReport(
        name="pseudo_variance_ordering",
        kind="two-sided",
        quantity="sigma_z2",
        lower=abs(disp.s2),
        observed=disp.sigma_z2,
        upper=disp.sz2,
        reference="triangle inequality",
    )
    return [
        ordering,
        *popoviciu_analogue(sample),
        pairwise_gap_bound(sample),
        samuelson_bound(sample),
    ]


__all__ = [
    "ComplexSample",
    "DispersionSummary",
    "as_complex_sample",
    "collinearity_test",
    "dispersion",
    "dispersion_reports",
    "max_gap",
    "pairwise_gap_bound",
    "pooled_variance",
    "popoviciu_analogue",
    "samuelson_bound",
    "subset_mean_bound",
]
