"""Eigenvalue and spread localization from traces.

Everything here consumes only ``n``, ``tr A`` and ``tr A^2`` (through
:class:`SpectralSummary`), so the bounds apply to any matrix whose spectrum
is real, symmetric or not.  With eigenvalue mean ``lbar = trA/n`` and
variance ``s2 = trB2/n`` where ``trB2 = trA2 - trA**2/n``, the real-sample
inequalities carry over to the eigenvalues directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .report import BoundReport, Condition, all_satisfied

_EPS = float(np.finfo(float).eps)

NONNEG = "nonneg"
HAS_NEGATIVE = "has_negative"


class SpectrumNotReal(ValueError):
    pass


class InconsistentEigenvalue(ValueError):
    pass


def as_matrix(matrix, allow_complex: bool = False) -> np.ndarray:
    dtype = complex if allow_complex else float
    a = np.asarray(matrix, dtype=dtype)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] < 1:
        raise ValueError("empty matrix")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


@dataclass(frozen=True)
class SpectralSummary:
    """``(n, tr A, tr A^2)``, optionally with ``tr B^2`` measured directly.

    ``trB2 = trA2 - trA**2/n`` cancels badly when the spectrum sits far from
    zero relative to its spread; ``centered`` holds ``tr B^2`` computed from
    ``B = A - (trA/n) I`` itself and takes precedence when present.
    """

    n: int
    trA: float
    trA2: float
    centered: float | None = None

    @property
    def trB2(self) -> float:
        if self.centered is not None:
            return self.centered
        return self.trA2 - self.trA * self.trA / self.n

    @property
    def mean(self) -> float:
        return self.trA / self.n

    @property
    def s_lambda2(self) -> float:
        return self.trB2 / self.n

    def shifted(self, c: float) -> "SpectralSummary":
        """Summary of ``A + cI``."""
        return SpectralSummary(
            self.n, self.trA + self.n * c, self.trA2 + 2 * c * self.trA + self.n * c * c, self.trB2
        )

    def scaled(self, lam: float) -> "SpectralSummary":
        """Summary of ``lam * A``."""
        return SpectralSummary(self.n, lam * self.trA, lam * lam * self.trA2, lam * lam * self.trB2)


def summarize(matrix) -> SpectralSummary:
    """Traces of ``A``, ``A^2`` and ``B^2`` without any eigendecomposition.

    ``tr A^2`` is the sum of ``a_ij * a_ji``, which equals the sum of squared
    eigenvalues for any square matrix.
    """
    a = as_matrix(matrix)
    n = a.shape[0]
    tr = float(np.trace(a))
    b = a - (tr / n) * np.eye(n)
    return SpectralSummary(n, tr, float(np.sum(a * a.T)), float(np.sum(b * b.T)))


def _trB2_checked(s: SpectralSummary) -> float:
    t = s.trB2
    if t < -1e-12 * max(abs(s.trA2), 1.0):
        raise SpectrumNotReal("spectrum not real")
    return max(t, 0.0)


def spread_sandwich(s: SpectralSummary) -> BoundReport:
    """``sqrt(4 trB2 / n) <= Spd(A) <= sqrt(2 trB2)``."""
    t = _trB2_checked(s)
    ok = s.n >= 2
    return BoundReport(
        name="spread_sandwich",
        kind="two-sided",
        quantity="spread",
        lower=math.sqrt(4 * t / s.n),
        upper=math.sqrt(2 * t),
        applicable=ok,
        diagnostics=(Condition("n >= 2", ok), Condition("spectrum real", True, "caller-asserted")),
        reference="Popoviciu/Nagy on eigenvalues",
    )


def spectrum_sign(matrix, rtol: float = 1e-12) -> str | None:
    """Classify a symmetric matrix as PSD or having a negative eigenvalue.

    Cholesky of ``A + delta I`` with ``delta = rtol * ||A||_F`` succeeds iff
    ``lambda_min >= -delta``.  Non-symmetric input returns ``None``.
    """
    a = as_matrix(matrix)
    norm = float(np.linalg.norm(a))
    if not np.allclose(a, a.T, rtol=0, atol=1e-12 * max(norm, 1.0)):
        return None
    try:
        np.linalg.cholesky(a + rtol * max(norm, 1e-300) * np.eye(a.shape[0]))
    except np.linalg.LinAlgError:
        return HAS_NEGATIVE
    return NONNEG


def refined_spread_bounds(
    s: SpectralSummary,
    spectrum_sign: str | None = None,
    sign_source: str = "caller-asserted",
) -> list[BoundReport]:
    """Spread bounds that sharpen the sandwich for special spectra.

    With a nonnegative spectrum and ``0 < trA <= sqrt(n trB2)``:
    ``Spd >= trA2/trA`` and the companion upper bound.  With a negative
    eigenvalue, ``trA > 0`` and ``2 trA**2 >= n**2 trB2`` (the eigenvalue
    form of ``mean**2 >= (n/2) s**2``) a second pair applies.  Bounds are
    always evaluated; failing preconditions only clear ``applicable``.
    """
    n, trA, trA2 = s.n, s.trA, s.trA2
    t = _trB2_checked(s)
    sign_known = spectrum_sign in (NONNEG, HAS_NEGATIVE)
    n3 = Condition("n >= 3", n >= 3)

    # nonnegative spectrum
    nonneg = Condition("eigenvalues nonnegative", spectrum_sign == NONNEG, sign_source if sign_known else "unknown")
    gate = Condition("0 < trA <= sqrt(n trB2)", 0 < trA <= math.sqrt(n * t))
    conds = (nonneg, gate)
    ok = all_satisfied(conds)
    if trA != 0:
        low = trA2 / trA
        up = _sqrt_or_nan(2 * t * trA**2 - (n * t - trA**2) ** 2 / (n * (n - 2)), 2 * t * trA**2) / abs(trA) if n >= 3 else None
    else:
        low = up = math.nan
    notes = () if gate.satisfied else (
        "trA exceeds sqrt(n trB2): these values are advisory and need not bound the spread",
    )
    reports = [
        BoundReport(
            name="nonneg_spread_lower",
            kind="lower",
            quantity="spread",
            lower=low,
            applicable=ok,
            diagnostics=conds,
            reference="raw second moment over mean (eigenvalues)",
            notes=notes,
        ),
        BoundReport(
            name="nonneg_spread_upper",
            kind="upper",
            quantity="spread",
            upper=up,
            applicable=ok and n >= 3,
            diagnostics=conds + (n3,),
            reference="refined Nagy (eigenvalues)",
            notes=notes,
        ),
    ]

    # spectrum with a negative eigenvalue
    neg = Condition("lambda_min < 0", spectrum_sign == HAS_NEGATIVE, sign_source if sign_known else "unknown")
    conds = (
        neg,
        Condition("trA > 0", trA > 0),
        Condition("2 trA**2 >= n**2 trB2", 2 * trA**2 >= n * n * t),
    )
    alt = Condition("0 < 2 trA <= sqrt(n**3 trB2) (alternative reading)", 0 < 2 * trA <= math.sqrt(n**3 * t))
    ok = all_satisfied(conds)
    if trA != 0:
        k = 2 * trA**2 - n * n * t
        low = math.sqrt(16 * n * t * trA**2 + k * k) / (2 * n * abs(trA))
        up = _sqrt_or_nan(2 * t * trA**2 - k * k / (4 * n * (n - 2)), 2 * t * trA**2) / abs(trA) if n >= 3 else None
    else:
        low = up = math.nan
    reports += [
        BoundReport(
            name="negative_min_spread_lower",
            kind="lower",
            quantity="spread",
            lower=low,
            applicable=ok,
            diagnostics=conds + (alt,),
            reference="refined Popoviciu (eigenvalues, negative minimum)",
        ),
        BoundReport(
            name="negative_min_spread_upper",
            kind="upper",
            quantity="spread",
            upper=up,
            applicable=ok and n >= 3,
            diagnostics=conds + (alt, n3),
            reference="refined Nagy (eigenvalues, negative minimum)",
        ),
    ]
    return reports


def _sqrt_or_nan(x: float, scale: float) -> float:
    if x >= 0:
        return math.sqrt(x)
    return 0.0 if x >= -1e-12 * scale else math.nan


def eigen_interval(s: SpectralSummary) -> list[BoundReport]:
    """Wolkowicz-Styan intervals for the smallest and largest eigenvalue."""
    t = _trB2_checked(s)
    n = s.n
    if n < 2:
        raise ValueError("need n >= 2")
    wide = math.sqrt((n - 1) / n * t)
    narrow = math.sqrt(t / (n * (n - 1)))
    m = s.mean
    cond = (Condition("n >= 2", True), Condition("spectrum real", True, "caller-asserted"))
    return [
        BoundReport(
            name="lambda_min_interval",
            kind="two-sided",
            quantity="lambda_min",
            lower=m - wide,
            upper=m - narrow,
            diagnostics=cond,
            reference="Wolkowicz-Styan",
        ),
        BoundReport(
            name="lambda_max_interval",
            kind="two-sided",
            quantity="lambda_max",
            lower=m + narrow,
            upper=m + wide,
            diagnostics=cond,
            reference="Wolkowicz-Styan",
        ),
    ]


def deflated_moments(s: SpectralSummary, nu: float, tol: float = 1e-9) -> tuple[float, float]:
    """Mean and variance of the ``n-1`` eigenvalues left after removing ``nu``.

    Variance from the leave-one-out identity
    ``s_nu**2 = n/(n-1) s2 - n/(n-1)**2 (lbar - nu)**2``.
    """
    n = s.n
    if n < 2:
        raise ValueError("need n >= 2")
    mean = (s.trA - nu) / (n - 1)
    first = n / (n - 1) * s.s_lambda2
    second = n / (n - 1) ** 2 * (s.mean - nu) ** 2
    var = first - second
    scale = max(abs(s.trA2) / n, 1.0)
    if var < -tol * scale:
        raise InconsistentEigenvalue(f"inconsistent known eigenvalue {nu!r}: deflated variance {var:.3g} < 0")
    # a difference below the rounding error of its two terms carries no
    # information; treat the remaining eigenvalues as equal
    if var <= 8 * _EPS * (first + second):
        var = 0.0
    return mean, var


def deflated_bounds(s: SpectralSummary, nu: float, tol: float = 1e-9) -> list[BoundReport]:
    """Localize the remaining spectrum once one eigenvalue ``nu`` is known."""
    n = s.n
    if n < 3:
        raise ValueError("need n >= 3")
    _trB2_checked(s)
    mean, var = deflated_moments(s, nu, tol)
    sd = math.sqrt(var)
    k = n - 1
    wide = math.sqrt(k - 1) * sd
    narrow = sd / math.sqrt(k - 1)
    cond = (
        Condition("n >= 3", True),
        Condition("nu is an eigenvalue", True, "caller-asserted"),
    )
    extra = {"known_eigenvalue": float(nu), "deflated_mean": mean, "deflated_variance": var}
    return [
        BoundReport(
            name="remaining_min_interval",
            kind="two-sided",
            quantity="remaining_min",
            lower=mean - wide,
            upper=mean - narrow,
            diagnostics=cond,
            reference="Samuelson on deflated spectrum",
            extra=extra,
        ),
        BoundReport(
            name="remaining_max_interval",
            kind="two-sided",
            quantity="remaining_max",
            lower=mean + narrow,
            upper=mean + wide,
            diagnostics=cond,
            reference="Samuelson on deflated spectrum",
            extra=extra,
        ),
        BoundReport(
            name="remaining_spread_sandwich",
            kind="two-sided",
            quantity="remaining_spread",
            lower=2 * sd,
            upper=math.sqrt(2 * k * var),
            diagnostics=cond,
            reference="Popoviciu/Nagy on deflated spectrum",
            extra=extra,
        ),
    ]


@dataclass(frozen=True)
class UnitaryVerdict:
    applicable: bool
    eigenvalues: tuple[complex, ...]
    spread: float | None
    spread_ok: bool | None
    disk_center: complex | None
    disk_radius: float | None
    disk_ok: bool | None
    reason: str = ""

    @property
    def holds(self) -> bool | None:
        if not self.applicable:
            return None
        return bool(self.spread_ok and self.disk_ok)


def unitary_trace_zero_check(matrix, tol: float = 1e-9) -> UnitaryVerdict:
    """For a trace-zero unitary matrix: unit circle is the minimal circle and
    the spread is at least ``sqrt(3)``."""
    from .enclosing_disk import min_enclosing_disk
    from .oracle import eigenvalues_general

    u = as_matrix(matrix, allow_complex=True)
    n = u.shape[0]
    unitary = np.allclose(u.conj().T @ u, np.eye(n), rtol=0, atol=tol)
    tr = complex(np.trace(u))
    if not unitary:
        return UnitaryVerdict(False, (), None, None, None, None, None, "not unitary")
    if abs(tr) > tol:
        return UnitaryVerdict(False, (), None, None, None, None, None, "trace not zero")
    lam = eigenvalues_general(u)
    spread = float(np.max(np.abs(lam[:, None] - lam[None, :])))
    disk = min_enclosing_disk(lam)
    return UnitaryVerdict(
        applicable=True,
        eigenvalues=tuple(complex(z) for z in lam),
        spread=spread,
        spread_ok=spread >= math.sqrt(3) - tol,
        disk_center=disk.center,
        disk_radius=disk.radius,
        disk_ok=abs(disk.radius - 1) <= tol and abs(disk.center) <= tol,
    )


def all_bounds(s: SpectralSummary, nu: float | None = None, spectrum_sign: str | None = None,
               sign_source: str = "caller-asserted") -> list[BoundReport]:
    out = [spread_sandwich(s)]
    out += eigen_interval(s)
    out += refined_spread_bounds(s, spectrum_sign, sign_source)
    if nu is not None:
        out += deflated_bounds(s, nu)
    return out
