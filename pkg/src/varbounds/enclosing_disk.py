"""Smallest enclosing disk of planar points and the relations it obeys."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .complex_stats import as_complex_sample, dispersion, max_gap
from .report import BoundReport, Condition

DEFAULT_SEED = 20240101

# Tighter slack used inside the incremental search so near-boundary points
# do not trigger endless re-solves; the public containment test is looser.
_SEARCH_RTOL = 1e-12


@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius >= 0:
            raise ValueError("radius must be nonnegative")

    @property
    def slack(self) -> float:
        return 1e-9 * max(self.radius, 1.0)

    def contains(self, p: complex) -> bool:
        return abs(p - self.center) <= self.radius + self.slack

    def contains_all(self, points) -> bool:
        pts = np.asarray(points, dtype=complex)
        return bool(np.all(np.abs(pts - self.center) <= self.radius + self.slack))


def _inside(disk: Disk, p: complex, scale: float) -> bool:
    return abs(p - disk.center) <= disk.radius + _SEARCH_RTOL * max(disk.radius, scale)


def diameter_disk(p: complex, q: complex) -> Disk:
    return Disk((p + q) / 2, abs(p - q) / 2)


def circumcircle(p: complex, q: complex, r: complex) -> Disk | None:
    """Circle through three points, or ``None`` if they are (nearly) collinear.

    The vertex opposite the longest side is used as origin so the two edge
    vectors entering the determinant are the short ones.
    """
    sides = (abs(q - r), abs(p - r), abs(p - q))
    o, e1, e2 = [(p, q, r), (q, p, r), (r, p, q)][sides.index(max(sides))]
    b = e1 - o
    c = e2 - o
    scale = max(sides)
    d = 2.0 * (b.real * c.imag - b.imag * c.real)
    if scale == 0 or abs(d) <= 1e-14 * scale * scale:
        return None
    bb = b.real * b.real + b.imag * b.imag
    cc = c.real * c.real + c.imag * c.imag
    u = complex((c.imag * bb - b.imag * cc) / d, (b.real * cc - c.real * bb) / d)
    return Disk(o + u, abs(u))


def _disk_from_three(p: complex, q: complex, r: complex) -> Disk:
    disk = circumcircle(p, q, r)
    if disk is None:
        # collinear: the widest pair spans the other point
        pairs = [(p, q), (p, r), (q, r)]
        a, b = max(pairs, key=lambda ab: abs(ab[0] - ab[1]))
        return diameter_disk(a, b)
    return disk


def min_enclosing_disk(points, seed: int = DEFAULT_SEED) -> Disk:
    """Smallest disk containing every point.

    Randomized incremental construction with move-to-front style restarts;
    expected linear time.  The shuffle uses its own seeded generator, so the
    result is deterministic and no global state is touched.
    """
    pts = list(dict.fromkeys(as_complex_sample(points).points.tolist()))
    if len(pts) == 1:
        return Disk(pts[0], 0.0)
    random.Random(seed).shuffle(pts)
    scale = max(abs(z - pts[0]) for z in pts)

    disk = Disk(pts[0], 0.0)
    for i in range(1, len(pts)):
        p = pts[i]
        if _inside(disk, p, scale):
            continue
        disk = Disk(p, 0.0)
        for j in range(i):
            q = pts[j]
            if _inside(disk, q, scale):
                continue
            disk = diameter_disk(p, q)
            for k in range(j):
                r = pts[k]
                if not _inside(disk, r, scale):
                    disk = _disk_from_three(p, q, r)
    return disk


def disk_inequality_chain(points) -> list[BoundReport]:
    """Modulus variance vs enclosing radius vs diameter, plus Jung's sandwich.

    Two reports: ``sz2 <= r**2 <= D**2/3`` and ``D/2 <= r <= D/sqrt(3)``
    where ``r`` is the minimal enclosing radius and ``D`` the diameter.
    """
    sample = as_complex_sample(points)
    n = len(sample)
    ok = n >= 2
    if not ok:
        raise ValueError("need at least two points")
    disp = dispersion(sample)
    r = min_enclosing_disk(sample).radius
    d = max_gap(sample)
    cond = (Condition("n >= 2", ok),)
    chain = BoundReport(
        name="variance_radius_diameter",
        kind="two-sided",
        quantity="radius_sq",
        lower=disp.sz2,
        observed=r * r,
        upper=d * d / 3,
        diagnostics=cond,
        reference="enclosing disk chain",
    )
    jung = BoundReport(
        name="jung",
        kind="two-sided",
        quantity="radius",
        lower=d / 2,
        observed=r,
        upper=d / math.sqrt(3),
        diagnostics=cond,
        reference="Jung",
    )
    return [chain, jung]


@dataclass(frozen=True)
class CircleOnMeanVerdict:
    on_circle: bool
    common_distance: float | None
    disk: Disk
    disk_matches: bool | None


def circle_on_mean_check(points, tol: float = 1e-9) -> CircleOnMeanVerdict:
    """Do the points sit on one circle about their mean, and is it minimal?

    When every ``|z_i - mean|`` agrees (relative ``tol``), that circle must be
    the smallest enclosing one; ``disk_matches`` reports whether the computed
    minimal disk has that center and radius.
    """
    sample = as_complex_sample(points)
    disp = dispersion(sample)
    dist = np.abs(sample.points - disp.mean)
    rad = float(dist.max())
    on_circle = bool(np.all(np.abs(dist - rad) <= tol * max(rad, 1.0)))
    disk = min_enclosing_disk(sample)
    if not on_circle:
        return CircleOnMeanVerdict(False, None, disk, None)
    common = float(dist.mean())
    s = tol * max(common, 1.0)
    matches = abs(disk.radius - common) <= s and abs(disk.center - disp.mean) <= s
    return CircleOnMeanVerdict(True, common, disk, bool(matches))


def circle_on_mean_report(points, tol: float = 1e-9) -> BoundReport:
    v = circle_on_mean_check(points, tol)
    sz = math.sqrt(dispersion(points).sz2)
    return BoundReport(
        name="circle_on_mean",
        kind="two-sided" if v.on_circle else "lower",
        quantity="radius",
        lower=sz,
        upper=v.common_distance,
        observed=v.disk.radius,
        applicable=True,
        diagnostics=(Condition("points equidistant from their mean", v.on_circle),),
        reference="circle about the mean",
        extra={} if v.common_distance is None else {"common_distance": v.common_distance},
        notes=() if not v.on_circle else (f"minimal disk matches mean circle: {v.disk_matches}",),
    )
