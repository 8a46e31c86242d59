"""Machine-readable verification reports."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .series import Series, first_difference


@dataclass
class VerificationReport:
    """Result of one finite check.

    ``outcome`` is ``pass``, ``fail`` or ``error``.  A pass only means the
    claim held on the scanned range, which ``order`` / ``params`` record.
    """

    label: str
    kind: str
    params: dict = field(default_factory=dict)
    order: int | None = None
    modulus: int | None = None
    outcome: str = "pass"
    witness: int | None = None
    witness_value: int | None = None
    witness_other: int | None = None
    message: str | None = None
    elapsed_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return self.outcome == "pass"

    def to_json(self) -> dict:
        from . import __version__
        return {
            "label": self.label,
            "kind": self.kind,
            "params": self.params,
            "order": self.order,
            "modulus": self.modulus,
            "outcome": self.outcome,
            "witness": self.witness,
            "witness_value": None if self.witness_value is None
            else str(self.witness_value),
            "witness_other": None if self.witness_other is None
            else str(self.witness_other),
            "message": self.message,
            "elapsed_ms": round(self.elapsed_ms, 3),
            "tool_version": __version__,
        }

    def summary(self) -> str:
        name = self.label or self.kind
        if self.outcome == "pass":
            return f"PASS  {name}: {self.message or 'verified'}"
        if self.outcome == "fail":
            text = f"FAIL  {name}: witness n={self.witness}, value {self.witness_value}"
            if self.witness_other is not None:
                text += f" vs {self.witness_other}"
            return text
        return f"ERROR {name}: {self.message}"


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.ms = (time.perf_counter() - self.start) * 1000.0


def compare_series(report: VerificationReport, left: Series,
                   right: Series) -> VerificationReport:
    diff = first_difference(left, right)
    if diff:
        report.outcome = "fail"
        report.witness = diff.index
        report.witness_value = diff.left
        report.witness_other = diff.right
    else:
        report.outcome = "pass"
        report.message = f"coefficients agree for 0 <= n < {diff.compared}"
    return report


REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["label", "kind", "params", "order", "modulus", "outcome",
                 "witness", "witness_value", "elapsed_ms", "tool_version"],
    "additionalProperties": False,
    "properties": {
        "label": {"type": "string"},
        "kind": {"enum": ["identity", "dissection", "congruence", "internal",
                          "family", "binomial"]},
        "params": {"type": "object"},
        "order": {"type": ["integer", "null"], "minimum": 1},
        "modulus": {"type": ["integer", "null"], "minimum": 2},
        "outcome": {"enum": ["pass", "fail", "error"]},
        "witness": {"type": ["integer", "null"], "minimum": 0},
        "witness_value": {"type": ["string", "null"], "pattern": "^-?[0-9]+$"},
        "witness_other": {"type": ["string", "null"], "pattern": "^-?[0-9]+$"},
        "message": {"type": ["string", "null"]},
        "elapsed_ms": {"type": "number", "minimum": 0},
        "tool_version": {"type": "string"},
    },
}

SERIES_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["expression", "order", "modulus", "coeffs"],
    "additionalProperties": False,
    "properties": {
        "expression": {"type": "string"},
        "order": {"type": "integer", "minimum": 1},
        "modulus": {"type": ["integer", "null"], "minimum": 2},
        "coeffs": {"type": "array",
                   "items": {"type": "string", "pattern": "^-?[0-9]+$"}},
    },
}
