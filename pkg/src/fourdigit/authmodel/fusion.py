"""Three-signal fusion: code verification, address analysis, authorship score.

A send is allowed only when all three pass; any failure marks the message
dangerous and names the failed checks.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..identity import VERDICT_LOOKALIKE, LookalikeReport
from .network import Prediction

DECISION_ALLOW = "allow"
DECISION_DANGEROUS = "dangerous"

REASON_CODE = "code"
REASON_EMAIL_ID = "email_id"
REASON_STYLOMETRY = "stylometry"

DEFAULT_STYL_THRESHOLD = 0.5


@dataclass(frozen=True)
class Verdict:
    code_ok: bool
    id_verdict: str
    styl_prob_legitimate: float
    decision: str
    reasons: tuple[str, ...]

    @property
    def allowed(self) -> bool:
        return self.decision == DECISION_ALLOW

    def as_dict(self) -> dict:
        return {
            "code_ok": self.code_ok,
            "id_verdict": self.id_verdict,
            "styl_prob_legitimate": self.styl_prob_legitimate,
            "decision": self.decision,
            "reasons": list(self.reasons),
        }


def fuse(
    code_ok: bool,
    id_report: LookalikeReport,
    pred: Prediction,
    threshold: float = DEFAULT_STYL_THRESHOLD,
) -> Verdict:
    """Allow iff the code matched, no address is a lookalike, and the
    authorship probability clears the threshold."""
    reasons: list[str] = []
    if not code_ok:
        reasons.append(REASON_CODE)
    if id_report.verdict == VERDICT_LOOKALIKE:
        reasons.append(REASON_EMAIL_ID)
    if pred.p_legitimate < threshold:
        reasons.append(REASON_STYLOMETRY)

    return Verdict(
        code_ok=code_ok,
        id_verdict=id_report.verdict,
        styl_prob_legitimate=pred.p_legitimate,
        decision=DECISION_ALLOW if not reasons else DECISION_DANGEROUS,
        reasons=tuple(reasons),
    )
