"""Verification outcomes and the report format shared by every checker."""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

__all__ = ["Status", "VerificationOutcome", "CheckRecord", "VerificationReport", "matrix_outcome"]


class Status(enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    MISMATCH = "paper-sign-mismatch"
    SKIPPED = "skipped"


@dataclass(frozen=True)
class VerificationOutcome:
    relation: str
    status: Status
    counterexample: Optional[Dict[str, Any]] = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS

    def __bool__(self):
        return self.passed

    def renamed(self, relation: str) -> "VerificationOutcome":
        return VerificationOutcome(relation, self.status, self.counterexample, self.detail)


def matrix_outcome(relation: str, lhs, rhs, index_names=None) -> VerificationOutcome:
    """Compare two GradedMatrix values; on mismatch record the first differing entry."""
    diff = lhs.first_difference(rhs)
    if diff is None:
        return VerificationOutcome(relation, Status.PASS)
    r, c, a, b = diff
    cx: Dict[str, Any] = {"row": r, "col": c, "lhs": str(a), "rhs": str(b)}
    if index_names is not None:
        cx["row_index"] = index_names(r)
        cx["col_index"] = index_names(c)
    return VerificationOutcome(relation, Status.FAIL, cx)


@dataclass
class CheckRecord:
    id: str
    suite: str
    relation: str
    status: Status
    counterexample: Optional[Dict[str, Any]] = None
    millis: int = 0
    detail: str = ""

    def to_json(self) -> Dict[str, Any]:
        d: Dict[str, Any] = {"id": self.id, "relation": self.relation, "status": self.status.value}
        if self.counterexample is not None:
            d["counterexample"] = self.counterexample
        d["millis"] = self.millis
        if self.detail:
            d["detail"] = self.detail
        return d


_SUITE_ORDER = ("ybe", "rmatrix-props", "rll", "drinfeld", "serre", "hopf", "negative")


@dataclass
class VerificationReport:
    config: Dict[str, Any]
    checks: List[CheckRecord] = field(default_factory=list)

    def add(self, suite: str, outcome: VerificationOutcome, millis: int = 0, prefix: str = "") -> None:
        cid = f"{suite}/{prefix}{outcome.relation}"
        self.checks.append(CheckRecord(cid, suite, outcome.relation, outcome.status,
                                       outcome.counterexample, millis, outcome.detail))

    def extend(self, suite: str, outcomes: Sequence[VerificationOutcome], prefix: str = "") -> None:
        for o in outcomes:
            self.add(suite, o, prefix=prefix)

    def sorted_checks(self) -> List[CheckRecord]:
        def key(c: CheckRecord):
            s = _SUITE_ORDER.index(c.suite) if c.suite in _SUITE_ORDER else len(_SUITE_ORDER)
            return (s, c.id)
        return sorted(self.checks, key=key)

    def summary(self) -> Dict[str, int]:
        out = {"pass": 0, "fail": 0, "mismatch": 0, "skipped": 0}
        for c in self.checks:
            out[{Status.PASS: "pass", Status.FAIL: "fail", Status.MISMATCH: "mismatch",
                 Status.SKIPPED: "skipped"}[c.status]] += 1
        return out

    def exit_code(self) -> int:
        s = self.summary()
        return 1 if s["fail"] or s["mismatch"] else 0

    def to_json(self) -> str:
        doc = {
            "config": self.config,
            "checks": [c.to_json() for c in self.sorted_checks()],
            "summary": self.summary(),
        }
        return json.dumps(doc, indent=2, sort_keys=False, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        rows = [(c.id, c.status.value, str(c.millis)) for c in self.sorted_checks()]
        w0 = max([len("check")] + [len(r[0]) for r in rows])
        w1 = max([len("status")] + [len(r[1]) for r in rows])
        lines = [f"{'check':<{w0}}  {'status':<{w1}}  ms", f"{'-' * w0}  {'-' * w1}  --"]
        for cid, st, ms in rows:
            lines.append(f"{cid:<{w0}}  {st:<{w1}}  {ms}")
        s = self.summary()
        lines.append("")
        lines.append(f"pass={s['pass']} fail={s['fail']} mismatch={s['mismatch']} skipped={s['skipped']}")
        for c in self.sorted_checks():
            if c.counterexample:
                lines.append(f"  {c.id}: {json.dumps(c.counterexample, sort_keys=True)}")
        return "\n".join(lines) + "\n"
