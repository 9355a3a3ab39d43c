from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class VerificationReport:
    """Outcome of checking one object against its defining conditions.

    ``witness`` is the first failure found (or None), ``failures`` lists every
    failure in deterministic order, ``checks`` maps each named condition to
    its verdict.
    """

    kind: str
    passed: bool
    witness: dict | None = None
    failures: list[dict] = field(default_factory=list)
    checks: dict[str, bool] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        out = {"pass": self.passed, "witness": self.witness}
        if self.checks:
            out["checks"] = dict(self.checks)
        if self.failures:
            out["failures"] = list(self.failures)
        return out

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        parts = [f"{self.kind}: {verdict}"]
        for name, ok in self.checks.items():
            parts.append(f"  {name}: {'ok' if ok else 'FAILED'}")
        if self.witness is not None:
            parts.append(f"  witness: {self.witness}")
        return "\n".join(parts)
