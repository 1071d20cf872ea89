from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .codec import ArtifactCode


class Verdict(str, Enum):
    VALID = "valid"
    INVALID = "invalid"
    ERROR = "error"


@dataclass
class CheckReport:
    verdict: Verdict
    expected_code: ArtifactCode | None = None
    computed_code: ArtifactCode | None = None
    message: str = ""
    subject: str | None = None

    def __post_init__(self):
        if self.verdict is Verdict.VALID and self.expected_code != self.computed_code:
            raise ValueError("a valid report needs matching expected and computed codes")

    @property
    def ok(self) -> bool:
        return self.verdict is Verdict.VALID

    @classmethod
    def compare(cls, expected: ArtifactCode, computed: ArtifactCode, subject=None) -> CheckReport:
        if expected == computed:
            return cls(Verdict.VALID, expected, computed, "hash matches", subject)
        return cls(Verdict.INVALID, expected, computed, "hash mismatch", subject)

    @classmethod
    def error(cls, message: str, expected: ArtifactCode | None = None, subject=None) -> CheckReport:
        return cls(Verdict.ERROR, expected, None, message, subject)

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "verdict": self.verdict.value,
            "expected_code": str(self.expected_code) if self.expected_code else None,
            "computed_code": str(self.computed_code) if self.computed_code else None,
            "message": self.message,
        }

    def __str__(self) -> str:
        head = f"{self.subject}: " if self.subject else ""
        text = f"{head}{self.verdict.value.upper()}"
        if self.message and not self.ok:
            text += f" ({self.message})"
        return text


def exit_status(reports) -> int:
    """0 when everything is valid, 1 on any invalid, 2 on any error."""
    verdicts = {r.verdict for r in reports}
    if Verdict.ERROR in verdicts:
        return 2
    if Verdict.INVALID in verdicts:
        return 1
    return 0
