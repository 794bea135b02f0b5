"""Brute-force ground truth for checking bounds at desk scale.

Nothing here is fast; it is meant to be obviously right.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Sequence

import numpy as np

from .complex_stats import as_complex_sample
from .enclosing_disk import Disk
from .poly_span import MonicPoly, NotRealRooted
from .report import BoundReport

MAX_DIM = 64
MAX_DEGREE = 16
MAX_BRUTE_POINTS = 50
VERIFY_RTOL = 1e-7

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in ascending order."""

    eigenvalues: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", tuple(sorted(float(x) for x in self.eigenvalues)))

    def __len__(self):
        return len(self.eigenvalues)

    @property
    def min(self) -> float:
        return self.eigenvalues[0]

    @property
    def max(self) -> float:
        return self.eigenvalues[-1]

    @property
    def spread(self) -> float:
        return self.max - self.min

    def without(self, nu: float) -> "Spectrum":
        """Drop the single eigenvalue closest to ``nu``."""
        ev = list(self.eigenvalues)
        k = min(range(len(ev)), key=lambda i: abs(ev[i] - nu))
        del ev[k]
        return Spectrum(tuple(ev))


# --------------------------------------------------------------------------
# symmetric eigenvalues: cyclic Jacobi, round-robin ordering


@lru_cache(maxsize=None)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Rounds of disjoint index pairs covering every pair exactly once."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(p, q), max(p, q)) for p, q in pairs if p < n and q < n]
        rounds.append((np.array([p for p, _ in pairs]), np.array([q for _, q in pairs])))
        players = [players[0], players[-1], *players[1:-1]]
    return tuple(rounds)


def _jacobi_batch(a: np.ndarray, rtol: float = 1e-12, max_sweeps: int = 60) -> np.ndarray:
    """Diagonalize a stack of symmetric matrices in place by plane rotations.

    Each round applies ``n/2`` disjoint rotations at once as one orthogonal
    similarity ``J^T A J``; a sweep is ``n - 1`` rounds.  Iterates until the
    off-diagonal Frobenius norm drops below ``rtol * ||A||_F`` for every
    matrix in the stack.
    """
    batch, n, _ = a.shape
    if n == 1:
        return a[:, 0, :1].copy()
    norms = np.sqrt(np.sum(a * a, axis=(1, 2)))
    mask = ~np.eye(n, dtype=bool)
    rounds = _round_robin(n)
    eye = np.eye(n)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.where(mask, a * a, 0.0), axis=(1, 2)))
        if np.all(off <= rtol * norms):
            break
        for p, q in rounds:
            app = a[:, p, p]
            aqq = a[:, q, q]
            apq = a[:, p, q]
            nz = apq != 0
            safe = np.where(nz, apq, 1.0)
            # a negligible apq sends tau to inf and t to 0 (no rotation)
            with np.errstate(over="ignore"):
                tau = (aqq - app) / (2 * safe)
                t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1 + tau * tau))
            t = np.where(nz, t, 0.0)
            c = 1 / np.sqrt(1 + t * t)
            s = t * c
            j = np.broadcast_to(eye, a.shape).copy()
            j[:, p, p] = c
            j[:, q, q] = c
            j[:, p, q] = s
            j[:, q, p] = -s
            a = np.swapaxes(j, 1, 2) @ a @ j
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    return np.sort(np.diagonal(a, axis1=1, axis2=2), axis=1)


def _check_symmetric(a: np.ndarray) -> None:
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise ValueError("expected square matrices")
    if a.shape[1] > MAX_DIM:
        raise ValueError(f"dimension {a.shape[1]} exceeds oracle cap {MAX_DIM}")
    if not np.all(np.isfinite(a)):
        raise ValueError("non-finite entries")
    scale = np.maximum(np.sqrt(np.sum(a * a, axis=(1, 2))), 1.0)
    asym = np.max(np.abs(a - np.swapaxes(a, 1, 2)), axis=(1, 2))
    if np.any(asym > 1e-12 * scale):
        raise ValueError("matrix is not symmetric")


def eigenvalues_symmetric(matrix) -> Spectrum:
    a = np.array(matrix, dtype=float)
    if a.ndim != 2:
        raise ValueError("expected a square matrix")
    a = a[None]
    _check_symmetric(a)
    a = (a + np.swapaxes(a, 1, 2)) / 2
    return Spectrum(tuple(_jacobi_batch(a)[0]))


def eigenvalues_symmetric_batch(matrices) -> np.ndarray:
    """Sorted eigenvalues for a stack of same-size symmetric matrices."""
    a = np.array(matrices, dtype=float)
    _check_symmetric(a)
    a = (a + np.swapaxes(a, 1, 2)) / 2
    return _jacobi_batch(a)


def eigenvalues_general(matrix) -> np.ndarray:
    """Eigenvalues of an arbitrary (possibly complex) square matrix via LAPACK."""
    return np.linalg.eigvals(np.asarray(matrix, dtype=complex))


# --------------------------------------------------------------------------
# real roots by derivative interlacing + bisection


def _horner(c: Sequence[float], x: float) -> float:
    acc = 0.0
    for v in c:
        acc = acc * x + v
    return acc


def _abs_horner(c: Sequence[float], x: float) -> float:
    acc = 0.0
    ax = abs(x)
    for v in c:
        acc = acc * ax + abs(v)
    return acc


def _bisect(c: Sequence[float], dc: Sequence[float], lo: float, hi: float, flo: float, floor: float) -> float:
    """Root of ``c`` in a sign-changing bracket: Newton steps, bisection when
    a step leaves the bracket.  ``dc`` is ``c'/n``."""
    n = len(c) - 1
    x = 0.5 * (lo + hi)
    for _ in range(2000):
        if hi - lo <= 2 * _EPS * max(abs(lo), abs(hi)) + floor:
            return 0.5 * (lo + hi)
        fx = _horner(c, x)
        if fx == 0:
            return x
        if (fx < 0) == (flo < 0):
            lo, flo = x, fx
        else:
            hi = x
        d = n * _horner(dc, x)
        step = fx / d if d != 0 else math.inf
        nx = x - step
        if lo < nx < hi:
            if abs(step) <= 2 * _EPS * abs(nx) + floor:
                return nx
            x = nx
        else:
            x = 0.5 * (lo + hi)
            if x in (lo, hi):
                return x
    return x


def _real_roots_monic(c: list[float]) -> list[float]:
    """Roots with multiplicity of the real-rooted monic ``c`` (leading 1).

    Roots of ``f'`` split the line into pieces on which ``f`` is monotone, so
    each piece holds at most one simple root.  A critical point where ``f``
    vanishes (within evaluation round-off) is a root of multiplicity one
    more than its multiplicity in ``f'``.
    """
    n = len(c) - 1
    if n == 0:
        return []
    if n == 1:
        return [-c[1]]
    dc = [c[i] * (n - i) / n for i in range(n)]  # f'/n, monic
    crit = _real_roots_monic(dc)
    bound = 1.0 + max(abs(v) for v in c[1:])
    floor = _EPS * bound

    groups: list[tuple[float, int]] = []
    for x in crit:
        if groups and groups[-1][0] == x:
            groups[-1] = (x, groups[-1][1] + 1)
        else:
            groups.append((x, 1))

    roots: list[float] = []
    marks: list[tuple[float, float, bool]] = [(-bound, _horner(c, -bound), False)]
    for x, k in groups:
        fx = _horner(c, x)
        # x itself is only known to within delta; at a root |f(x)| is no
        # larger than the change of f across that uncertainty
        delta = 16 * (_EPS * abs(x) + floor)
        wobble = max(abs(_horner(c, x - delta) - fx), abs(_horner(c, x + delta) - fx))
        is_root = abs(fx) <= 64 * n * _EPS * _abs_horner(c, x) + 4 * wobble
        if is_root:
            roots.extend([x] * (k + 1))
        marks.append((x, fx, is_root))
    marks.append((bound, _horner(c, bound), False))

    for (u, fu, ru), (v, fv, rv) in zip(marks, marks[1:]):
        # an endpoint root uses up the monotone piece
        if not (ru or rv) and (fu < 0) != (fv < 0):
            roots.append(_bisect(c, dc, u, v, fu, floor))
    roots.sort()
    return roots


def real_roots(p: MonicPoly) -> list[float]:
    """All roots (with multiplicity) of a real-rooted monic polynomial."""
    if p.degree > MAX_DEGREE:
        raise ValueError(f"degree {p.degree} exceeds oracle cap {MAX_DEGREE}")
    roots = _real_roots_monic(p.full())
    if len(roots) != p.degree:
        raise NotRealRooted(f"not real-rooted: found {len(roots)} real roots of {p.degree}")
    return roots


# --------------------------------------------------------------------------
# exhaustive minimal disk


@lru_cache(maxsize=64)
def _triples(n: int) -> np.ndarray:
    return np.array(list(combinations(range(n), 3))).T


def min_disk_brute(points) -> Disk:
    """Smallest disk among all pair-diameter and triple-circumcircle candidates.

    Candidates smaller than half the diameter cannot contain every point and
    are skipped before the containment scan; survivors are scanned in
    ascending radius order.
    """
    z = np.array(list(dict.fromkeys(as_complex_sample(points).points.tolist())), dtype=complex)
    n = z.size
    if n > MAX_BRUTE_POINTS:
        raise ValueError(f"{n} points exceeds brute-force cap {MAX_BRUTE_POINTS}")
    if n == 1:
        return Disk(complex(z[0]), 0.0)

    iu, ju = np.triu_indices(n, 1)
    centers = [(z[iu] + z[ju]) / 2]
    radii = [np.abs(z[iu] - z[ju]) / 2]
    diam = float(radii[0].max()) * 2

    if n >= 3:
        i, j, k = _triples(n)
        x, y = z.real, z.imag
        bx, by = x[j] - x[i], y[j] - y[i]
        cx, cy = x[k] - x[i], y[k] - y[i]
        d = 2 * (bx * cy - by * cx)
        ok = np.abs(d) > 1e-14 * diam * diam
        i, bx, by, cx, cy, d = i[ok], bx[ok], by[ok], cx[ok], cy[ok], d[ok]
        bb = bx * bx + by * by
        cc = cx * cx + cy * cy
        ux = (cy * bb - by * cc) / d
        uy = (bx * cc - cx * bb) / d
        centers.append(z[i] + (ux + 1j * uy))
        radii.append(np.hypot(ux, uy))

    centers = np.concatenate(centers)
    radii = np.concatenate(radii)
    keep = radii >= diam / 2 * (1 - 1e-12)
    centers, radii = centers[keep], radii[keep]
    order = np.argsort(radii, kind="stable")
    centers, radii = centers[order], radii[order]

    slack = 1e-12 * max(diam, 1.0)
    for start in range(0, radii.size, 256):
        cs = centers[start : start + 256]
        rs = radii[start : start + 256]
        inside = np.all(np.abs(z[None, :] - cs[:, None]) <= rs[:, None] + slack, axis=1)
        hit = np.flatnonzero(inside)
        if hit.size:
            m = hit[0]
            return Disk(complex(cs[m]), float(rs[m]))
    raise RuntimeError("no candidate disk contains all points")


# --------------------------------------------------------------------------
# report verification


@dataclass(frozen=True)
class Verification:
    status: str  # "pass" | "fail" | "skipped"
    truth: float | None
    lower_margin: float | None
    upper_margin: float | None
    report: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {
            "report": self.report,
            "status": self.status,
            "truth": self.truth,
            "lower_margin": self.lower_margin,
            "upper_margin": self.upper_margin,
        }


def truth_from_spectrum(quantity: str, spectrum: Spectrum, nu: float | None = None) -> float:
    if quantity == "spread":
        return spectrum.spread
    if quantity == "lambda_min":
        return spectrum.min
    if quantity == "lambda_max":
        return spectrum.max
    if quantity in ("remaining_min", "remaining_max", "remaining_spread"):
        if nu is None:
            raise ValueError("deflated quantity needs the known eigenvalue")
        rest = spectrum.without(nu)
        return {"remaining_min": rest.min, "remaining_max": rest.max, "remaining_spread": rest.spread}[quantity]
    raise ValueError(f"spectrum does not determine quantity {quantity!r}")


def verify_report(report: BoundReport, truth, rtol: float = VERIFY_RTOL) -> Verification:
    """Check ``lower <= truth <= upper`` with relative slack.

    ``truth`` is a number or a :class:`Spectrum`; in the latter case the
    report's ``quantity`` selects what to read off it and the slack is also
    taken relative to the spectral radius.  Margins are signed:
    negative means the bound is violated by that much.
    """
    if not report.applicable:
        return Verification("skipped", None, None, None, report.name)
    scale = 1.0
    if isinstance(truth, Spectrum):
        # eigenvalue round-off is proportional to ||A||_2, not to the
        # quantity itself, which may be zero (a deflated spread, say)
        scale = max(abs(truth.min), abs(truth.max), 1.0)
        truth = truth_from_spectrum(report.quantity, truth, report.extra.get("known_eigenvalue"))
    truth = float(truth)
    lo_m = None if report.lower is None else truth - report.lower
    up_m = None if report.upper is None else report.upper - truth
    ok = True
    for bound, margin in ((report.lower, lo_m), (report.upper, up_m)):
        if margin is None:
            continue
        if math.isnan(margin) or margin < -rtol * max(abs(truth), abs(bound), scale):
            ok = False
    return Verification("pass" if ok else "fail", truth, lo_m, up_m, report.name)


def sample_moments(values: Sequence[float]) -> tuple[float, float]:
    """Mean and ``1/n`` variance with compensated summation."""
    n = len(values)
    mean = math.fsum(values) / n
    return mean, math.fsum((v - mean) ** 2 for v in values) / n


def complex_moments(points) -> tuple[float, float, float]:
    """``(sz2, |s2|, sigma_z2)`` by plain compensated loops over the points."""
    z = [complex(p) for p in as_complex_sample(points).points]
    n = len(z)
    mr = math.fsum(p.real for p in z) / n
    mi = math.fsum(p.imag for p in z) / n
    dr = [p.real - mr for p in z]
    di = [p.imag - mi for p in z]
    sz2 = math.fsum(x * x + y * y for x, y in zip(dr, di)) / n
    s2_re = math.fsum(x * x - y * y for x, y in zip(dr, di)) / n
    s2_im = math.fsum(2 * x * y for x, y in zip(dr, di)) / n
    mod = math.hypot(s2_re, s2_im)
    return sz2, mod, (sz2 + mod) / 2


def sample_truth(quantity: str, values: Sequence[float]) -> float:
    """Independent value of a real-sample statistic named by a report."""
    v = sorted(float(x) for x in values)
    mean, var = sample_moments(v)
    if quantity == "variance":
        return var
    if quantity == "range":
        return v[-1] - v[0]
    if quantity == "min":
        return v[0]
    if quantity == "max":
        return v[-1]
    if quantity == "m4_plus_3m2sq":
        m4 = math.fsum((x - mean) ** 4 for x in v) / len(v)
        return m4 + 3 * var * var
    raise ValueError(f"no sample truth for quantity {quantity!r}")
