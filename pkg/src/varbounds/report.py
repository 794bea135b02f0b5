"""Bound reports and the tolerant comparisons used to judge them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

VERDICT_RTOL = 1e-9

KINDS = ("lower", "upper", "two-sided")


def leq(x: float, y: float, rtol: float = VERDICT_RTOL) -> bool:
    """``x <= y`` up to ``rtol * max(|x|, |y|, 1)`` slack."""
    return x <= y + rtol * max(abs(x), abs(y), 1.0)


@dataclass(frozen=True)
class Condition:
    """One precondition of a bound and whether the input meets it."""

    description: str
    satisfied: bool
    source: str = "computed"  # or "caller-asserted", "verified"


@dataclass(frozen=True)
class BoundReport:
    """A single inequality evaluated on concrete input.

    ``lower`` and ``upper`` bound ``quantity``.  ``observed`` is filled in when
    the bounded quantity itself is computable from the input (a sample
    variance, say); it stays ``None`` for matrix bounds where only an oracle
    knows the truth.  ``chain`` lists the keys that must be nondecreasing for
    the verdict; keys resolve against ``lower``/``observed``/``upper`` and then
    ``extra``.
    """

    name: str
    kind: str
    quantity: str
    lower: float | None = None
    upper: float | None = None
    observed: float | None = None
    applicable: bool = True
    diagnostics: tuple[Condition, ...] = ()
    reference: str = ""
    extra: Mapping[str, float] = field(default_factory=dict)
    chain: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown bound kind {self.kind!r}")

    def term(self, key: str) -> float | None:
        if key in ("lower", "observed", "upper"):
            return getattr(self, key)
        return self.extra.get(key)

    @property
    def terms(self) -> list[tuple[str, float]]:
        keys = self.chain or ("lower", "observed", "upper")
        out = []
        for k in keys:
            v = self.term(k)
            if v is not None:
                out.append((k, v))
        return out

    @property
    def holds(self) -> bool | None:
        """Verdict on the chain, or ``None`` when nothing is observed."""
        if self.observed is None and not self.chain:
            return None
        vals = [v for _, v in self.terms]
        if any(math.isnan(v) for v in vals):
            return None
        return all(leq(x, y) for x, y in zip(vals, vals[1:]))

    @property
    def advisory(self) -> bool:
        return not self.applicable

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "quantity": self.quantity,
            "lower": self.lower,
            "upper": self.upper,
            "observed": self.observed,
            "extra": dict(self.extra),
            "chain": list(self.chain),
            "applicable": self.applicable,
            "holds": self.holds,
            "diagnostics": [
                {"condition": c.description, "satisfied": c.satisfied, "source": c.source}
                for c in self.diagnostics
            ],
            "reference": self.reference,
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "BoundReport":
        return cls(
            name=d["name"],
            kind=d["kind"],
            quantity=d["quantity"],
            lower=d.get("lower"),
            upper=d.get("upper"),
            observed=d.get("observed"),
            applicable=d["applicable"],
            diagnostics=tuple(
                Condition(c["condition"], c["satisfied"], c.get("source", "computed"))
                for c in d.get("diagnostics", ())
            ),
            reference=d.get("reference", ""),
            extra=dict(d.get("extra", {})),
            chain=tuple(d.get("chain", ())),
            notes=tuple(d.get("notes", ())),
        )


def all_satisfied(conditions: Iterable[Condition]) -> bool:
    return all(c.satisfied for c in conditions)


def safe_sqrt(x: float) -> float:
    """Square root that clamps round-off negatives; NaN for real negatives."""
    if x >= 0:
        return math.sqrt(x)
    if x > -1e-12:
        return 0.0
    return math.nan
