"""Validation reports: a verdict plus concrete failing witnesses."""
from __future__ import annotations

from dataclasses import dataclass, field


class StructuralError(ValueError):
    """Input is not even well-formed data for the requested construction."""


@dataclass
class Report:
    name: str
    witnesses: list[tuple[str, str]] = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.witnesses

    def fail(self, law: str, detail: str):
        self.witnesses.append((law, detail))

    def check(self, cond: bool, law: str, detail) -> bool:
        self.checked += 1
        if not cond:
            self.fail(law, detail() if callable(detail) else str(detail))
        return cond

    def merge(self, other: "Report", prefix: str = "") -> "Report":
        self.checked += other.checked
        self.witnesses.extend((prefix + law, d) for law, d in other.witnesses)
        return self

    def laws_failed(self) -> set[str]:
        return {law for law, _ in self.witnesses}

    def summary(self, limit: int = 5) -> str:
        if self.ok:
            return f"{self.name}: ok ({self.checked} checks)"
        lines = [f"{self.name}: FAIL ({len(self.witnesses)} witnesses)"]
        lines += [f"  {law}: {d}" for law, d in self.witnesses[:limit]]
        return "\n".join(lines)

    def __bool__(self) -> bool:
        return self.ok
