"""Versioned JSON reports for verification runs."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

SCHEMA_VERSION = "1.0"

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class CheckRecord:
    check_id: str
    anchor: str
    status: str
    expected: str = PASS
    detail: str = ""
    witness: str | None = None
    seconds: float = 0.0

    @property
    def as_expected(self) -> bool:
        return self.status == self.expected

    def canonical(self) -> dict:
        """Everything except the wall time."""
        out = asdict(self)
        out.pop("seconds")
        return out


@dataclass
class SuiteReport:
    suite: str
    n: int
    config: dict
    records: list[CheckRecord] = field(default_factory=list)
    schema_version: str = SCHEMA_VERSION

    def __post_init__(self):
        self.records.sort(key=lambda r: r.check_id)

    @property
    def unexpected(self) -> list[CheckRecord]:
        return [r for r in self.records if r.status != SKIPPED and not r.as_expected]

    @property
    def failed(self) -> list[CheckRecord]:
        return [r for r in self.records if r.status == FAIL]

    @property
    def skipped(self) -> list[CheckRecord]:
        return [r for r in self.records if r.status == SKIPPED]

    @property
    def ok(self) -> bool:
        """True when every check ran, passed, and none was an expected failure."""
        return not self.failed and not self.unexpected and not self.skipped

    def exit_code(self) -> int:
        if self.failed or self.unexpected:
            return 1
        if self.skipped:
            return 3
        return 0

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "suite": self.suite,
            "n": self.n,
            "config": self.config,
            "summary": {
                "total": len(self.records),
                "passed": sum(r.status == PASS for r in self.records),
                "failed": len(self.failed),
                "skipped": len(self.skipped),
                "unexpected": len(self.unexpected),
            },
            "checks": [asdict(r) for r in self.records],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> SuiteReport:
        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema {version!r}")
        records = [CheckRecord(**r) for r in data["checks"]]
        return cls(data["suite"], int(data["n"]), dict(data["config"]), records, version)

    @classmethod
    def from_json(cls, text: str) -> SuiteReport:
        return cls.from_dict(json.loads(text))

    def canonical(self) -> dict:
        """Run-independent content, for determinism comparisons."""
        return {
            "schema_version": self.schema_version,
            "suite": self.suite,
            "n": self.n,
            "config": self.config,
            "checks": [r.canonical() for r in self.records],
        }

    def render_text(self) -> str:
        lines = [f"suite {self.suite}  n={self.n}"]
        for r in self.records:
            tag = r.status.upper()
            if r.expected == FAIL:
                tag += " (expected fail)" if r.as_expected else " (expected fail, unexpected result)"
            line = f"  {tag:<8} {r.check_id}  [{r.anchor}]  {r.seconds:.2f}s"
            if r.detail:
                line += f"  {r.detail}"
            lines.append(line)
            if r.witness and r.status != PASS:
                lines.append(f"           witness: {r.witness}")
        s = self.to_dict()["summary"]
        lines.append(f"{s['passed']} passed, {s['failed']} failed, {s['skipped']} skipped, "
                     f"{s['unexpected']} unexpected")
        return "\n".join(lines)
