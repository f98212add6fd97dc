"""Check reports: a count of checked instances and the violations found."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Report:
    name: str = ""
    checked: int = 0
    violations: list[str] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def check(self, ok: bool, message: str) -> bool:
        self.checked += 1
        if not ok:
            self.violations.append(message)
        return ok

    def fail(self, message: str) -> None:
        self.violations.append(message)

    def merge(self, other: "Report") -> "Report":
        self.checked += other.checked
        self.violations.extend(other.violations)
        self.data.update(other.data)
        return self

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        out = {"checked": self.checked, "violations": sorted(self.violations)}
        if self.data:
            out["data"] = self.data
        return out
