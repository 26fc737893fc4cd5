"""Check reports with a stable text rendering and a key-value tree form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, name: str, passed: bool, **detail) -> Check:
        check = Check(name, bool(passed), detail)
        self.checks.append(check)
        return check

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, dict(c.detail)))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __bool__(self):
        return self.passed

    def to_tree(self) -> dict:
        return {
            "title": self.title,
            "passed": self.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": _plain(c.detail)}
                for c in self.checks
            ],
            "data": _plain(self.data),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_tree(), indent=2, sort_keys=False)

    def to_text(self) -> str:
        lines = [f"== {self.title}"]
        for c in self.checks:
            lines.append(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}")
            for k, v in c.detail.items():
                lines.extend(_text_lines(k, _plain(v), 1))
        for k, v in self.data.items():
            lines.extend(_text_lines(k, _plain(v), 0))
        lines.append(f"result: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


def _plain(v):
    """Convert tables keyed by arbitrary tags into JSON-friendly values."""
    if isinstance(v, dict):
        return {_key(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, (frozenset, set)):
        from .finbase import canon_sorted

        return [_plain(x) for x in canon_sorted(v)]
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    if isinstance(v, Report):
        return v.to_tree()
    return show(v)


def _key(k):
    return k if isinstance(k, str) else show(k)


def show(x) -> str:
    """Compact rendering of structured tags: ('a', 'b') -> (a,b)."""
    if isinstance(x, tuple):
        return "(" + ",".join(show(y) for y in x) + ")"
    if isinstance(x, frozenset):
        from .finbase import canon_sorted

        return "{" + ",".join(show(y) for y in canon_sorted(x)) + "}"
    return str(x)


def _text_lines(key, value, depth):
    pad = "  " * depth
    if isinstance(value, dict):
        out = [f"{pad}{key}:"]
        for k, v in value.items():
            out.extend(_text_lines(k, v, depth + 1))
        return out
    if isinstance(value, list) and any(isinstance(v, (dict, list)) for v in value):
        out = [f"{pad}{key}:"]
        for i, v in enumerate(value):
            out.extend(_text_lines(f"- [{i}]", v, depth + 1))
        return out
    if isinstance(value, list):
        return [f"{pad}{key}: [" + ", ".join(str(v) for v in value) + "]"]
    return [f"{pad}{key}: {value}"]
