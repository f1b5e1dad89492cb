"""Report trees rendered as text or JSON."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

SCHEMA_VERSION = 1


@dataclass
class CheckResult:
    name: str
    passed: bool
    summary: str = ""
    details: dict = field(default_factory=dict)
    seconds: float | None = None

    def to_dict(self, timings=False):
        d = {"name": self.name, "passed": self.passed, "summary": self.summary, "details": self.details}
        if timings and self.seconds is not None:
            d["seconds"] = round(self.seconds, 4)
        return d


@dataclass
class Report:
    command: str
    checks: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def add(self, check):
        self.checks.append(check)
        return check

    def to_dict(self, timings=False):
        return {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "passed": self.passed,
            "info": self.info,
            "checks": [c.to_dict(timings) for c in self.checks],
        }

    def to_json(self, timings=False):
        return json.dumps(self.to_dict(timings), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def to_text(self, timings=False):
        lines = [f"{self.command}"]
        for key, val in self.info.items():
            lines.append(f"  {key}: {val}")
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            extra = f" ({c.seconds:.3f}s)" if timings and c.seconds is not None else ""
            lines.append(f"{mark}  {c.name}: {c.summary}{extra}")
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'} ({sum(c.passed for c in self.checks)}/{len(self.checks)})")
        return "\n".join(lines) + "\n"


def perm_str(p):
    return str(p)


def perms(ps):
    return [str(p) for p in ps]


def assignment(d):
    return None if d is None else {k: str(v) for k, v in d.items()}
