"""Span bounds for monic real-rooted polynomials from two coefficients.

For ``f(x) = x^n + a1 x^(n-1) + a2 x^(n-2) + ...`` the roots have mean
``-a1/n`` and variance ``((n-1) a1**2 - 2 n a2) / n**2`` by Newton's
identities, so any variance inequality for real samples becomes a span
inequality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .report import BoundReport, Condition, all_satisfied


class NotRealRooted(ValueError):
    pass


@dataclass(frozen=True)
class MonicPoly:
    """Coefficients ``(a1, ..., an)`` of ``x^n + a1 x^(n-1) + ... + an``."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        c = tuple(float(v) for v in self.coeffs)
        if not all(math.isfinite(v) for v in c):
            raise ValueError("non-finite coefficient")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_list(cls, full: Sequence[float]) -> "MonicPoly":
        """From ``[1, a1, ..., an]``; the leading 1 is required."""
        full = [float(v) for v in full]
        if not full or full[0] != 1.0:
            raise ValueError("leading coefficient must be 1")
        return cls(tuple(full[1:]))

    @classmethod
    def from_roots(cls, roots: Sequence[float]) -> "MonicPoly":
        c = [1.0]
        for r in roots:
            c = [x - r * y for x, y in zip(c + [0.0], [0.0] + c)]
        return cls(tuple(c[1:]))

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    @property
    def a1(self) -> float:
        return self.coeffs[0] if self.coeffs else 0.0

    @property
    def a2(self) -> float:
        return self.coeffs[1] if len(self.coeffs) > 1 else 0.0

    def full(self) -> list[float]:
        return [1.0, *self.coeffs]

    def __call__(self, x: float) -> float:
        acc = 1.0
        for c in self.coeffs:
            acc = acc * x + c
        return acc

    def shifted(self, t: float) -> "MonicPoly":
        """``f(x + t)``, whose roots are the roots of ``f`` minus ``t``."""
        # repeated synthetic division (Taylor shift)
        c = self.full()
        n = len(c) - 1
        for i in range(n):
            for j in range(1, n - i + 1):
                c[j] += t * c[j - 1]
        return MonicPoly(tuple(c[1:]))


def coeff_moments(p: MonicPoly) -> tuple[float, float]:
    """Mean and variance of the roots, read off ``a1`` and ``a2``."""
    n = p.degree
    if n < 2:
        raise ValueError("degree must be at least 2")
    a1, a2 = p.a1, p.a2
    return -a1 / n, ((n - 1) * a1 * a1 - 2 * n * a2) / (n * n)


def _radicand(p: MonicPoly) -> float:
    n, a1, a2 = p.degree, p.a1, p.a2
    rad = (n - 1) * a1 * a1 - 2 * n * a2
    if rad < 0:
        # a tiny negative is round-off on a multiple root
        if rad >= -1e-12 * max((n - 1) * a1 * a1, abs(2 * n * a2), 1.0):
            return 0.0
        raise NotRealRooted("not real-rooted (certificate: negative root variance)")
    return rad


def span_bounds(p: MonicPoly) -> BoundReport:
    """``(2/n) sqrt((n-1) a1^2 - 2n a2) <= D <= sqrt(2 (n-1)/n a1^2 - 4 a2)``."""
    n = p.degree
    if n < 2:
        raise ValueError("degree must be at least 2")
    rad = _radicand(p)
    return BoundReport(
        name="span",
        kind="two-sided",
        quantity="span",
        lower=2 / n * math.sqrt(rad),
        upper=math.sqrt(2 * rad / n),
        diagnostics=(Condition("n >= 2", True), Condition("real-rooted", True, "caller-asserted")),
        reference="Popoviciu/Nagy on roots",
    )


def refined_span_bounds(p: MonicPoly, nonneg_roots: bool | None = None) -> list[BoundReport]:
    """Sharper span bounds for polynomials with nonnegative roots.

    ``nonneg_roots=None`` asks the oracle root finder to settle the sign.
    The applicability gate is the full set the underlying sample inequality
    needs: nonnegative roots, positive root mean (``a1 < 0``), nonzero root
    variance and root mean at most the root standard deviation, i.e.
    ``(n-2) a1**2 >= 2 n a2``.  The weaker coefficient test
    ``n a2 <= (n-2) a1**2`` is recorded separately.
    """
    n = p.degree
    if n < 3:
        raise ValueError("degree must be at least 3")
    a1, a2 = p.a1, p.a2
    rad = _radicand(p)
    source = "caller-asserted"
    if nonneg_roots is None:
        from .oracle import real_roots

        roots = real_roots(p)
        scale = max(1.0, max(abs(r) for r in roots))
        nonneg_roots = min(roots) >= -1e-9 * scale
        source = "verified"
    conds = (
        Condition("n >= 3", True),
        Condition("roots nonnegative", bool(nonneg_roots), source),
        Condition("a1 < 0 (positive root mean)", a1 < 0),
        Condition("root variance > 0", rad > 0),
        Condition("(n-2) a1**2 >= 2 n a2 (mean <= s)", (n - 2) * a1 * a1 >= 2 * n * a2),
    )
    coeff_gate = Condition("n a2 <= (n-2) a1**2", n * a2 <= (n - 2) * a1 * a1)
    ok = all_satisfied(conds)
    diag = conds + (coeff_gate,)
    notes: tuple[str, ...] = ()

    if a1 == 0:
        degenerate = rad == 0
        value = 0.0 if degenerate else math.nan
        low_sqrt = low = up = value
        notes = ("a1 = 0: all roots zero, every bound degenerates to 0",) if degenerate else ("a1 = 0: undefined",)
    else:
        q = (2 * a2 - a1 * a1) / a1
        low = q
        low_sqrt = math.sqrt(q) if q >= 0 else math.nan
        w = (2 * n * a2 - (n - 2) * a1 * a1) / a1
        inner = 2 / n * rad - w * w / (n * (n - 2))
        up = math.sqrt(inner) if inner >= 0 else (0.0 if inner >= -1e-12 * max(2 / n * rad, 1.0) else math.nan)

    return [
        BoundReport(
            name="nonneg_span_lower",
            kind="lower",
            quantity="span",
            lower=low,
            applicable=ok,
            diagnostics=diag,
            reference="raw second moment over mean (roots)",
            notes=notes,
        ),
        BoundReport(
            name="nonneg_span_lower_sqrt_form",
            kind="lower",
            quantity="span",
            lower=low_sqrt,
            applicable=False,
            diagnostics=diag + (Condition("scale invariant", False),),
            reference="square-root variant",
            notes=notes + ("not homogeneous in the roots; fails whenever nonneg_span_lower < 1",),
        ),
        BoundReport(
            name="nonneg_span_upper",
            kind="upper",
            quantity="span",
            upper=up,
            applicable=ok,
            diagnostics=diag,
            reference="refined Nagy (roots)",
            notes=notes,
        ),
    ]
