"""Reading matrices, point sets, samples and polynomials; writing reports."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .complex_stats import ComplexSample
from .poly_span import MonicPoly
from .real_bounds import RealSample
from .report import BoundReport


class ParseError(ValueError):
    """Malformed input, with the 1-based line/column where it went wrong."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None, column: int | None = None):
        self.path = path
        self.line = line
        self.column = column
        where = ":".join(str(x) for x in (path, line, column) if x is not None)
        super().__init__(f"{where}: {message}" if where else message)


def _read_lines(path) -> list[str]:
    return Path(path).read_text().splitlines()


def _float(tok: str, path, line: int, col: int) -> float:
    try:
        v = float(tok.replace("−", "-"))
    except ValueError:
        raise ParseError(f"non-numeric token {tok!r}", str(path), line, col) from None
    return v


# --------------------------------------------------------------------------
# matrices


def parse_matrix(path, format: str | None = None) -> np.ndarray:
    """Dense square matrix from Matrix Market (``.mtx``) or CSV."""
    fmt = format or ("matrix-market" if str(path).endswith(".mtx") else "csv")
    if fmt in ("matrix-market", "mtx"):
        return parse_matrix_market(path)
    if fmt == "csv":
        return parse_matrix_csv(path)
    raise ValueError(f"unknown matrix format {fmt!r}")


def parse_matrix_market(path) -> np.ndarray:
    lines = _read_lines(path)
    if not lines:
        raise ParseError("empty file", str(path), 1)
    head = lines[0].split()
    if len(head) != 5 or head[0] != "%%MatrixMarket" or head[1].lower() != "matrix":
        raise ParseError("malformed header, expected '%%MatrixMarket matrix <layout> <field> <symmetry>'", str(path), 1)
    layout, fld, sym = (h.lower() for h in head[2:])
    if layout not in ("coordinate", "array"):
        raise ParseError(f"unsupported layout {layout!r}", str(path), 1)
    if fld not in ("real", "integer", "double"):
        raise ParseError(f"unsupported field {fld!r}", str(path), 1)
    if sym not in ("general", "symmetric"):
        raise ParseError(f"unsupported symmetry {sym!r}", str(path), 1)

    body = [(i + 1, ln.split()) for i, ln in enumerate(lines) if i > 0 and ln.strip() and not ln.lstrip().startswith("%")]
    if not body:
        raise ParseError("missing size line", str(path), len(lines))
    size_line, size = body[0]
    try:
        dims = [int(t) for t in size]
    except ValueError:
        raise ParseError("non-integer size line", str(path), size_line) from None
    entries = body[1:]

    if layout == "array":
        if len(dims) != 2:
            raise ParseError("array size line needs 'rows cols'", str(path), size_line)
        m, n = dims
        if m != n:
            raise ParseError(f"non-square matrix {m}x{n}", str(path), size_line)
        a = np.zeros((n, n))
        # column-major; symmetric stores the lower triangle only
        slots = [(i, j) for j in range(n) for i in range(n) if sym == "general" or i >= j]
        if len(entries) != len(slots):
            raise ParseError(f"expected {len(slots)} values, found {len(entries)}", str(path), size_line)
        for (ln, toks), (i, j) in zip(entries, slots):
            if len(toks) != 1:
                raise ParseError("expected one value per line", str(path), ln, 1)
            a[i, j] = _float(toks[0], path, ln, 1)
            if sym == "symmetric":
                a[j, i] = a[i, j]
        return a

    if len(dims) != 3:
        raise ParseError("coordinate size line needs 'rows cols nnz'", str(path), size_line)
    m, n, nnz = dims
    if m != n:
        raise ParseError(f"non-square matrix {m}x{n}", str(path), size_line)
    if len(entries) != nnz:
        raise ParseError(f"expected {nnz} entries, found {len(entries)}", str(path), size_line)
    a = np.zeros((n, n))
    for ln, toks in entries:
        if len(toks) != 3:
            raise ParseError("expected 'row col value'", str(path), ln, 1)
        try:
            i, j = int(toks[0]) - 1, int(toks[1]) - 1
        except ValueError:
            raise ParseError("non-integer index", str(path), ln, 1) from None
        if not (0 <= i < n and 0 <= j < n):
            raise ParseError(f"index ({i + 1}, {j + 1}) out of range", str(path), ln, 1)
        v = _float(toks[2], path, ln, 3)
        a[i, j] = v
        if sym == "symmetric":
            a[j, i] = v
    return a


def write_matrix_market(matrix, path) -> None:
    """Array-format general Matrix Market with 17 significant digits."""
    a = np.asarray(matrix, dtype=float)
    m, n = a.shape
    out = ["%%MatrixMarket matrix array real general", f"{m} {n}"]
    out += [f"{a[i, j]:.17g}" for j in range(n) for i in range(m)]
    Path(path).write_text("\n".join(out) + "\n")


def _csv_rows(path) -> list[tuple[int, list[str]]]:
    rows = []
    for i, ln in enumerate(_read_lines(path), start=1):
        s = ln.strip()
        if not s or s.startswith("#"):
            continue
        rows.append((i, [t.strip() for t in s.split(",")]))
    return rows


def parse_matrix_csv(path) -> np.ndarray:
    rows = _csv_rows(path)
    if not rows:
        raise ParseError("no data rows", str(path))
    vals = [[_float(t, path, ln, c + 1) for c, t in enumerate(toks)] for ln, toks in rows]
    n = len(vals)
    for (ln, _), r in zip(rows, vals):
        if len(r) != n:
            raise ParseError(f"non-square: {n} rows but {len(r)} columns", str(path), ln)
    a = np.array(vals, dtype=float)
    if not np.all(np.isfinite(a)):
        raise ParseError("non-finite entry", str(path))
    return a


# --------------------------------------------------------------------------
# points, samples, polynomials


def parse_points(path, format: str | None = None) -> ComplexSample:
    fmt = format or ("json" if str(path).endswith(".json") else "csv")
    pts: list[complex] = []
    if fmt == "json":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as e:
            raise ParseError(e.msg, str(path), e.lineno, e.colno) from None
        if not isinstance(data, list):
            raise ParseError("expected a JSON list of {re, im} objects", str(path))
        for k, item in enumerate(data):
            if not isinstance(item, dict) or "re" not in item or "im" not in item:
                raise ParseError(f"item {k} lacks 're'/'im'", str(path))
            z = complex(float(item["re"]), float(item["im"]))
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise ParseError(f"item {k} is not finite", str(path))
            pts.append(z)
    elif fmt == "csv":
        for ln, toks in _csv_rows(path):
            if len(toks) != 2:
                raise ParseError(f"expected 2 columns (re, im), found {len(toks)}", str(path), ln)
            re_, im_ = (_float(t, path, ln, c + 1) for c, t in enumerate(toks))
            if not (math.isfinite(re_) and math.isfinite(im_)):
                raise ParseError("non-finite value", str(path), ln)
            pts.append(complex(re_, im_))
    else:
        raise ValueError(f"unknown point format {fmt!r}")
    if not pts:
        raise ParseError("no points", str(path))
    return ComplexSample(pts)


def parse_sample(path) -> RealSample:
    """Reals separated by commas, whitespace or newlines; ``#`` starts a comment."""
    vals = []
    for ln, line in enumerate(_read_lines(path), start=1):
        line = line.split("#", 1)[0]
        for c, tok in enumerate(line.replace(",", " ").split(), start=1):
            v = _float(tok, path, ln, c)
            if not math.isfinite(v):
                raise ParseError("non-finite value", str(path), ln, c)
            vals.append(v)
    if not vals:
        raise ParseError("no values", str(path))
    return RealSample(vals)


def parse_coefficients(text: str) -> MonicPoly:
    """``"1, a1, ..., an"`` with the leading 1 required."""
    toks = [t for t in text.replace("−", "-").replace(",", " ").split() if t]
    try:
        vals = [float(t) for t in toks]
    except ValueError as e:
        raise ParseError(str(e)) from None
    if len(vals) < 3:
        raise ParseError("need at least '1, a1, a2'")
    if vals[0] != 1.0:
        raise ParseError("leading coefficient must be 1")
    return MonicPoly.from_list(vals)


def parse_poly(source: str) -> MonicPoly:
    p = Path(source)
    if p.is_file():
        text = " ".join(ln.split("#", 1)[0] for ln in _read_lines(p))
        return parse_coefficients(text)
    return parse_coefficients(source)


# --------------------------------------------------------------------------
# report documents


@dataclass
class ReportDocument:
    kind: str
    input: str
    input_digest: str
    reports: list[BoundReport]
    summary: dict[str, Any] = field(default_factory=dict)
    verification: list[dict] | None = None
    tool_version: str = __version__

    def to_dict(self) -> dict:
        d = {
            "tool": "varbounds",
            "tool_version": self.tool_version,
            "kind": self.kind,
            "input": self.input,
            "input_digest": self.input_digest,
            "summary": self.summary,
            "reports": [r.to_dict() for r in self.reports],
        }
        if self.verification is not None:
            d["verification"] = self.verification
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ReportDocument":
        return cls(
            kind=d["kind"],
            input=d["input"],
            input_digest=d["input_digest"],
            reports=[BoundReport.from_dict(r) for r in d["reports"]],
            summary=d.get("summary", {}),
            verification=d.get("verification"),
            tool_version=d.get("tool_version", __version__),
        )


def digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _num(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    s = f"{x:.17g}"
    # keep floats recognisable as floats
    if all(ch not in s for ch in ".eE"):
        s += ".0"
    return s


def dumps(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """JSON with every float written to 17 significant digits.

    ``json.dumps`` always uses the shortest round-trip repr for floats, so
    the structure is walked here instead.  Key order is preserved.
    """
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _num(obj)
    if isinstance(obj, complex):
        return dumps({"re": obj.real, "im": obj.imag}, indent, _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}{dumps(v, indent, _level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, np.generic):
        return dumps(obj.item(), indent, _level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")
