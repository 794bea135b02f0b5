"""Command-line front end.

    varbounds eigen-bounds matrix.mtx --nu 16 --oracle
    varbounds span "1,-3,0,0"
    varbounds verify example.csv

Exit status: 0 success, 1 a bound failed verification, 2 bad input.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, complex_stats, enclosing_disk, oracle, poly_span, real_bounds, spectral_bounds
from .io import ParseError, ReportDocument, digest, dumps, parse_matrix, parse_points, parse_poly, parse_sample
from .poly_span import NotRealRooted
from .report import BoundReport

KINDS = ("stats", "disk", "real-bounds", "eigen-bounds", "span", "verify")
TARGETS = ("matrix", "points", "sample", "poly")
_TARGET_KIND = {"matrix": "eigen-bounds", "points": "disk", "sample": "real-bounds", "poly": "span"}

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


@dataclass
class AnalysisRequest:
    kind: str
    input: str
    nu: float | None = None
    assert_nonneg: bool = False
    tol: float | None = None
    format: str | None = None
    oracle: bool = False
    subset: tuple[int, ...] | None = None
    target: str = "matrix"
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise InputError(f"unknown kind {self.kind!r}")
        if self.kind == "verify" and self.target not in TARGETS:
            raise InputError(f"unknown verify target {self.target!r}")
        if self.tol is not None and self.tol < 0:
            raise InputError("--tol must be nonnegative")
        if self.nu is not None and self.effective_kind != "eigen-bounds":
            raise InputError("--nu only applies to eigen-bounds")

    @property
    def effective_kind(self) -> str:
        return _TARGET_KIND[self.target] if self.kind == "verify" else self.kind

    @property
    def with_oracle(self) -> bool:
        return self.oracle or self.kind == "verify"


def _input_bytes(req: AnalysisRequest) -> bytes:
    p = Path(req.input)
    if p.is_file():
        return p.read_bytes()
    if req.effective_kind == "span":
        return req.input.encode()
    raise InputError(f"no such file: {req.input}")


def _verify_all(reports: list[BoundReport], truth_of) -> list[dict]:
    out = []
    for r in reports:
        if not r.applicable:
            out.append(oracle.Verification("skipped", None, None, None, r.name).to_dict())
            continue
        out.append(oracle.verify_report(r, truth_of(r)).to_dict())
    return out


def _run_points(req: AnalysisRequest, kind: str) -> tuple[list[BoundReport], dict, list[dict] | None]:
    sample = parse_points(req.input, req.format)
    disp = complex_stats.dispersion(sample)
    tol = complex_stats.DEFAULT_COLLINEAR_TOL if req.tol is None else req.tol
    collinear, _ = complex_stats.collinearity_test(sample, tol)
    summary = {
        "n": len(sample),
        "mean": disp.mean,
        "sz2": disp.sz2,
        "s2": disp.s2,
        "sigma_z2": disp.sigma_z2,
        "collinear": collinear,
    }
    if kind == "stats":
        reports = complex_stats.dispersion_reports(sample)
    else:
        if len(sample) < 2:
            raise InputError("disk analysis needs at least two points")
        disk = enclosing_disk.min_enclosing_disk(sample)
        summary["disk"] = {"center": disk.center, "radius": disk.radius}
        reports = enclosing_disk.disk_inequality_chain(sample)
        reports.append(enclosing_disk.circle_on_mean_report(sample, 1e-9 if req.tol is None else req.tol))
    if req.subset is not None:
        reports.append(complex_stats.subset_mean_bound(sample, req.subset))

    verification = None
    if req.with_oracle:
        sz2, mod, sigma = oracle.complex_moments(sample)
        brute = oracle.min_disk_brute(sample) if len(sample) <= oracle.MAX_BRUTE_POINTS else None

        def truth(r: BoundReport) -> float:
            if r.quantity == "sigma_z2":
                return sigma
            if r.quantity == "sz2":
                return sz2
            if r.quantity in ("radius", "radius_sq"):
                if brute is None:
                    return r.observed
                return brute.radius if r.quantity == "radius" else brute.radius**2
            pts = sample.points
            gamma = complex(np.mean(pts[list(req.subset)]))
            return abs(gamma - complex(np.mean(pts))) ** 2

        verification = _verify_all(reports, truth)
    return reports, summary, verification


def _run_sample(req: AnalysisRequest):
    x = parse_sample(req.input)
    summary = {"n": x.n, "min": x.a, "max": x.b, "mean": x.mean, "variance": x.var, "m4": x.m4}
    reports = real_bounds.all_bounds(x)
    if req.subset is not None:
        reports.append(real_bounds.mallows_richter(x, req.subset))
    verification = None
    if req.with_oracle:
        values = x.values.tolist()
        verification = _verify_all(reports, lambda r: oracle.sample_truth(r.quantity, values))
    return reports, summary, verification


def _run_matrix(req: AnalysisRequest):
    a = parse_matrix(req.input, req.format)
    s = spectral_bounds.summarize(a)
    if req.assert_nonneg:
        sign, source = spectral_bounds.NONNEG, "caller-asserted"
    else:
        sign, source = spectral_bounds.spectrum_sign(a), "verified"
    summary = {"n": s.n, "trA": s.trA, "trA2": s.trA2, "trB2": s.trB2, "mean": s.mean, "spectrum_sign": sign}
    tol = 1e-9 if req.tol is None else req.tol
    reports = [spectral_bounds.spread_sandwich(s)] + spectral_bounds.eigen_interval(s)
    reports += spectral_bounds.refined_spread_bounds(s, sign, source)
    if req.nu is not None:
        reports += spectral_bounds.deflated_bounds(s, req.nu, tol)
    verification = None
    if req.with_oracle:
        if spectral_bounds.spectrum_sign(a) is None:
            verification = [
                oracle.Verification("skipped", None, None, None, r.name).to_dict() for r in reports
            ]
            summary["oracle"] = "skipped: matrix not symmetric"
        else:
            spec = oracle.eigenvalues_symmetric(a)
            summary["oracle_spectrum"] = list(spec.eigenvalues)
            verification = _verify_all(reports, lambda r: spec)
    return reports, summary, verification


def _run_poly(req: AnalysisRequest):
    p = parse_poly(req.input)
    mean, var = poly_span.coeff_moments(p)
    summary = {"degree": p.degree, "coefficients": p.full(), "root_mean": mean, "root_variance": var}
    reports = [poly_span.span_bounds(p)]
    if p.degree >= 3:
        reports += poly_span.refined_span_bounds(p, True if req.assert_nonneg else None)
    verification = None
    if req.with_oracle:
        roots = oracle.real_roots(p)
        summary["oracle_roots"] = roots
        verification = _verify_all(reports, lambda r: roots[-1] - roots[0])
    return reports, summary, verification


def run(req: AnalysisRequest) -> ReportDocument:
    """Evaluate one request; raises :class:`InputError`/`ParseError` on bad input."""
    req.validate()
    data = _input_bytes(req)
    kind = req.effective_kind
    if kind in ("stats", "disk"):
        reports, summary, verification = _run_points(req, kind)
    elif kind == "real-bounds":
        reports, summary, verification = _run_sample(req)
    elif kind == "eigen-bounds":
        reports, summary, verification = _run_matrix(req)
    else:
        reports, summary, verification = _run_poly(req)
    advisories = [
        {"report": r.name, "failed": [c.description for c in r.diagnostics if not c.satisfied]}
        for r in reports
        if not r.applicable
    ]
    summary["advisories"] = advisories
    return ReportDocument(
        kind=req.kind,
        input=req.input,
        input_digest=digest(data),
        reports=reports,
        summary=summary,
        verification=verification,
    )


def document_failed(doc: ReportDocument) -> bool:
    if doc.verification and any(v["status"] == "fail" for v in doc.verification):
        return True
    return any(r.applicable and r.holds is False for r in doc.reports)


def _parse_subset(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad subset {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="varbounds", description="Variance-based bounds with oracle checks.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("kind", choices=KINDS, help="analysis to run")
    ap.add_argument("inputs", nargs="+", help="input files (for span: a file or an inline '1,a1,...,an')")
    ap.add_argument("--nu", type=float, help="a known eigenvalue (eigen-bounds)")
    ap.add_argument("--assert-nonneg-spectrum", action="store_true",
                    help="treat the spectrum (or polynomial roots) as nonnegative without checking")
    ap.add_argument("--tol", type=float, help="tolerance override (collinearity, circle, deflation); default 1e-9")
    ap.add_argument("--format", help="input format: matrix-market | csv | json (default: by extension)")
    ap.add_argument("--oracle", action="store_true", help="attach brute-force verification")
    ap.add_argument("--subset", type=_parse_subset, help="0-based indices for the subset-mean bound")
    ap.add_argument("--target", choices=TARGETS, default="matrix", help="input type for verify (default matrix)")
    ap.add_argument("--out", help="write the report here instead of stdout")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    docs = []
    for path in args.inputs:
        req = AnalysisRequest(
            kind=args.kind,
            input=path,
            nu=args.nu,
            assert_nonneg=args.assert_nonneg_spectrum,
            tol=args.tol,
            format=args.format,
            oracle=args.oracle,
            subset=args.subset,
            target=args.target,
        )
        try:
            docs.append(run(req))
        except (InputError, ParseError, NotRealRooted, OSError, ValueError, IndexError) as e:
            print(f"varbounds: error: {e}", file=sys.stderr)
            return EXIT_INPUT
    payload = docs[0].to_dict() if len(docs) == 1 else [d.to_dict() for d in docs]
    text = dumps(payload) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_FAILED if any(document_failed(d) for d in docs) else EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
