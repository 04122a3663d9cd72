from __future__ import annotations

from dataclasses import dataclass, field

from .scalars import to_jsonable

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class RelationReport:
    """Outcome of one equation check.  A failing report always carries a counterexample."""

    name: str
    equation: str
    backend: str
    status: str = PASS
    samples: int = 0
    retries: int = 0
    counterexample: object = None
    ms: float = 0.0
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status == FAIL and self.counterexample is None:
            raise ValueError("a failing report needs a counterexample")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def __bool__(self):
        return self.passed

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "equation": self.equation,
            "backend": self.backend,
            "status": self.status,
            "samples": self.samples,
            "retries": self.retries,
            "counterexample": to_jsonable(self.counterexample),
            "ms": round(self.ms, 3),
        }
        if self.details:
            out["details"] = to_jsonable(self.details)
        return out


def merge_reports(name, equation, backend, parts) -> RelationReport:
    """Fold sub-equation reports into one; the first failure wins."""
    samples = sum(p.samples for p in parts)
    retries = sum(p.retries for p in parts)
    ms = sum(p.ms for p in parts)
    details = {p.equation: p.status for p in parts}
    for p in parts:
        if p.status == FAIL:
            cx = {"subequation": p.equation, **(p.counterexample if isinstance(p.counterexample, dict)
                                                 else {"value": p.counterexample})}
            return RelationReport(name, equation, backend, FAIL, samples, retries, cx, ms, details)
    status = SKIPPED if parts and all(p.status == SKIPPED for p in parts) else PASS
    return RelationReport(name, equation, backend, status, samples, retries, None, ms, details)
