"""Structured experiment reports (text and JSON)."""
from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"


@dataclass
class Report:
    claim: str
    citation: str
    params: dict = field(default_factory=dict)
    verdict: str = INCONCLUSIVE
    certificates: dict = field(default_factory=dict)
    recheck: dict = field(default_factory=dict)
    timings_ms: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    @property
    def rechecked(self) -> bool:
        return all(self.recheck.values())

    @contextmanager
    def timed(self, stage: str):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.timings_ms[stage] = round((time.perf_counter() - t0) * 1000, 3)

    def to_dict(self) -> dict:
        return {
            "claim": self.claim,
            "citation": self.citation,
            "params": self.params,
            "verdict": self.verdict,
            "certificates": self.certificates,
            "recheck": self.recheck,
            "timings_ms": self.timings_ms,
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"), default=str)

    def to_text(self) -> str:
        lines = [f"[{self.verdict.upper()}] {self.claim}", f"  source: {self.citation}"]
        if self.params:
            lines.append("  params: " + ", ".join(f"{k}={v}" for k, v in self.params.items()))
        for k, v in self.recheck.items():
            lines.append(f"  recheck {k}: {'ok' if v else 'FAILED'}")
        for k, v in self.certificates.items():
            text = json.dumps(v, default=str)
            if len(text) > 300:
                text = text[:297] + "..."
            lines.append(f"  {k}: {text}")
        for note in self.notes:
            lines.append(f"  note: {note}")
        if self.timings_ms:
            lines.append("  timings_ms: " + ", ".join(f"{k}={v}" for k, v in self.timings_ms.items()))
        return "\n".join(lines)
