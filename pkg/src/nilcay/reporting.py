"""Structured experiment reports with deterministic JSON serialization.

Verdict strings are op-specific (``pass``/``fail``/``inconclusive``,
``normal-at-(r,t)``/``non-normal``, ...).  ``ok`` carries the boolean the
exit code is derived from; ``None`` marks purely informational reports.
Timing lives in ``runtime_ms`` and is excluded from the stable byte form
so that repeated runs with the same seed produce identical report files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


def jsonable(value):
    """Recursively convert tuples/sets to lists for JSON output."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return [jsonable(v) for v in sorted(value)]
    return value


@dataclass
class Report:
    claim: str
    verdict: str
    ok: bool | None = None
    witnesses: list = field(default_factory=list)
    parameters: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    runtime_ms: float | None = None

    def to_dict(self, stable=True):
        d = {
            "claim": self.claim,
            "verdict": self.verdict,
            "ok": self.ok,
            "witnesses": jsonable(self.witnesses),
            "parameters": jsonable(self.parameters),
            "notes": jsonable(self.notes),
        }
        if not stable:
            d["runtime_ms"] = self.runtime_ms
        return d


def json_bytes(obj) -> bytes:
    """Canonical JSON bytes (sorted keys, fixed separators, trailing newline)."""
    return (json.dumps(jsonable(obj), sort_keys=True, separators=(",", ":"),
                       ensure_ascii=False) + "\n").encode("utf-8")


def json_pretty(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
