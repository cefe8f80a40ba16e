"""The send-gate state machine.

Message transmission is gated behind a four-digit code with a three-attempt
budget; the same code (and the same budget) guards settings mutations such
as forwarding rules.  The attempt budget is cumulative per profile across
send and settings verifications, so the settings door cannot be brute-forced
separately.  A locked profile refuses every code-bearing operation until the
code is re-registered with fresh strong-auth evidence.

Callers are responsible for serializing operations on one profile; distinct
profiles may proceed in parallel.
"""

from __future__ import annotations

import hashlib
import hmac
import re
import secrets
import time
import uuid
from dataclasses import dataclass, field
from typing import Callable

from .authmodel.fusion import Verdict, fuse
from .authmodel.network import Prediction
from .errors import (
    AuthRejected,
    CodeMismatch,
    InvalidCodeFormat,
    InvalidForwardingAddress,
    InvalidState,
    UserLocked,
)
from .identity import VERDICT_LOOKALIKE, LookalikeReport, analyze_address
from .message import Message, is_valid_address

MAX_ATTEMPTS = 3
DEFAULT_ITERATIONS = 100_000
MIN_SALT_BYTES = 16
SESSION_IDLE_SECONDS = 15 * 60

STATE_COMPOSING = "composing"
STATE_AWAITING_CODE = "awaiting_code"
STATE_SENT = "sent"
STATE_FAILED_LOCKED = "failed_locked"

CODE_PATTERN = re.compile(r"[0-9]{4}")

EVENT_CODE_REGISTERED = "code_registered"
EVENT_SEND_REQUESTED = "send_requested"
EVENT_CODE_OK = "code_ok"
EVENT_CODE_FAIL = "code_fail"
EVENT_PROFILE_LOCKED = "profile_locked"
EVENT_MESSAGE_SENT = "message_sent"
EVENT_SEND_BLOCKED = "send_blocked"
EVENT_SETTINGS_CHANGED = "settings_changed"
EVENT_SETTINGS_DENIED = "settings_denied"


@dataclass(frozen=True)
class CodeRecord:
    """Salted, iterated hash of the four-digit code; plaintext is never stored."""

    algorithm: str
    salt: bytes
    digest: bytes
    iterations: int

    def verify(self, code: str) -> bool:
        # always compute and compare the full digest: no short-circuit on
        # code shape or length, comparison via hmac.compare_digest
        candidate = hashlib.pbkdf2_hmac(
            self.algorithm, code.encode("utf-8"), self.salt, self.iterations
        )
        return hmac.compare_digest(self.digest, candidate)


def make_code_record(code: str, iterations: int = DEFAULT_ITERATIONS) -> CodeRecord:
    salt = secrets.token_bytes(MIN_SALT_BYTES)
    digest = hashlib.pbkdf2_hmac("sha256", code.encode("utf-8"), salt, iterations)
    return CodeRecord(algorithm="sha256", salt=salt, digest=digest, iterations=iterations)


@dataclass(frozen=True)
class AuthEvidence:
    """Single-use proof from a strong authenticator (biometric stand-in)."""

    method: str
    token: str
    issued_at: float


class SingleUseAuthenticator:
    """Issues opaque evidence tokens and redeems each at most once."""

    def __init__(self, method: str = "biometric-stub"):
        self.method = method
        self._outstanding: set[str] = set()

    def issue(self) -> AuthEvidence:
        token = secrets.token_urlsafe(16)
        self._outstanding.add(token)
        return AuthEvidence(method=self.method, token=token, issued_at=time.time())

    def redeem(self, evidence: AuthEvidence) -> bool:
        if evidence.method != self.method:
            return False
        try:
            self._outstanding.remove(evidence.token)
        except KeyError:
            return False
        return True


@dataclass
class Settings:
    forwarding_address: str | None = None
    signature: str = ""

    def as_dict(self) -> dict:
        return {
            "forwarding_address": self.forwarding_address,
            "signature": self.signature,
        }


@dataclass
class UserProfile:
    user_id: str
    address: str
    contacts: set[str] = field(default_factory=set)
    code: CodeRecord | None = None
    locked: bool = False
    failed_attempts: int = 0
    settings: Settings = field(default_factory=Settings)
    model_ref: str | None = None

    @property
    def remaining_attempts(self) -> int:
        return max(0, MAX_ATTEMPTS - self.failed_attempts)


@dataclass
class SendSession:
    session_id: str
    user_id: str
    draft: Message | None = None
    state: str = STATE_COMPOSING
    attempts_used: int = 0
    created_at: float = field(default_factory=time.time)
    updated_at: float = field(default_factory=time.time)


def new_session(user_id: str, now: float | None = None) -> SendSession:
    ts = time.time() if now is None else now
    return SendSession(
        session_id=uuid.uuid4().hex, user_id=user_id, created_at=ts, updated_at=ts
    )


@dataclass(frozen=True)
class Challenge:
    status: str
    remaining: int


@dataclass(frozen=True)
class SubmitOutcome:
    status: str  # sent | retry | locked | dangerous
    remaining: int | None = None
    verdict: Verdict | None = None


def _no_audit(user_id: str, session_id: str | None, event: str, detail: dict) -> None:
    pass


@dataclass
class GateContext:
    """Collaborators for code verification: prediction, delivery, audit, clock."""

    profile: UserProfile
    predict: Callable[[Message], Prediction]
    deliver: Callable[[Message, SendSession], None] = lambda msg, session: None
    audit: Callable[[str, str | None, str, dict], None] = _no_audit
    clock: Callable[[], float] = time.time
    styl_threshold: float = 0.5
    lookalike_threshold: int = 1


def analyze_draft_addresses(draft: Message, profile: UserProfile, threshold: int = 1) -> LookalikeReport:
    """Analyze sender and every recipient against the contact set (plus the
    user's own address); the report fed to fusion is the first lookalike
    found, otherwise the sender's report."""
    known = set(profile.contacts) | {profile.address}
    reports = [analyze_address(addr, known, threshold) for addr in (draft.sender, *draft.recipients)]
    for report in reports:
        if report.verdict == VERDICT_LOOKALIKE:
            return report
    return reports[0]


def register_code(
    profile: UserProfile,
    new_code: str,
    evidence: AuthEvidence,
    authenticator: SingleUseAuthenticator,
    iterations: int = DEFAULT_ITERATIONS,
    audit: Callable[[str, str | None, str, dict], None] = _no_audit,
) -> UserProfile:
    """Set (or reset) the send code; clears the lock and the attempt counter."""
    if not CODE_PATTERN.fullmatch(new_code):
        raise InvalidCodeFormat("code must be exactly four digits")
    if not authenticator.redeem(evidence):
        raise AuthRejected("evidence invalid or already used")
    profile.code = make_code_record(new_code, iterations)
    profile.locked = False
    profile.failed_attempts = 0
    audit(profile.user_id, None, EVENT_CODE_REGISTERED, {"method": evidence.method})
    return profile


def _check_session_fresh(session: SendSession, now: float) -> None:
    if now - session.updated_at > SESSION_IDLE_SECONDS:
        raise InvalidState("session expired")


def request_send(session: SendSession, ctx: GateContext) -> Challenge:
    """Move a composed draft to the code challenge ("the send button turns red")."""
    now = ctx.clock()
    _check_session_fresh(session, now)
    if ctx.profile.locked:
        raise UserLocked("profile is locked")
    if session.state != STATE_COMPOSING:
        raise InvalidState(f"cannot request send from state {session.state!r}")
    if session.draft is None:
        raise InvalidState("no draft attached to session")
    if ctx.profile.code is None:
        raise InvalidState("no send code registered for user")

    session.state = STATE_AWAITING_CODE
    session.updated_at = now
    remaining = ctx.profile.remaining_attempts
    ctx.audit(session.user_id, session.session_id, EVENT_SEND_REQUESTED, {"remaining": remaining})
    return Challenge(status="code_required", remaining=remaining)


def submit_code(session: SendSession, code: str, ctx: GateContext) -> SubmitOutcome:
    """Verify the code and, on success, run the three-signal fusion.

    Wrong codes burn one attempt from the profile-wide budget; the third
    cumulative failure locks the profile.  A correct code with a dangerous
    fusion verdict blocks the message without locking the profile.
    """
    now = ctx.clock()
    _check_session_fresh(session, now)
    profile = ctx.profile
    if profile.locked:
        raise UserLocked("profile is locked")
    if session.state != STATE_AWAITING_CODE:
        raise InvalidState(f"cannot submit code in state {session.state!r}")
    if profile.code is None:
        raise InvalidState("no send code registered for user")
    session.updated_at = now

    if not profile.code.verify(code):
        profile.failed_attempts += 1
        session.attempts_used += 1
        remaining = profile.remaining_attempts
        ctx.audit(session.user_id, session.session_id, EVENT_CODE_FAIL, {"remaining": remaining})
        if profile.failed_attempts >= MAX_ATTEMPTS:
            profile.locked = True
            session.state = STATE_FAILED_LOCKED
            ctx.audit(session.user_id, session.session_id, EVENT_PROFILE_LOCKED, {})
            return SubmitOutcome(status="locked", remaining=0)
        return SubmitOutcome(status="retry", remaining=remaining)

    ctx.audit(session.user_id, session.session_id, EVENT_CODE_OK, {})
    draft = session.draft
    assert draft is not None  # guaranteed by request_send
    id_report = analyze_draft_addresses(draft, profile, ctx.lookalike_threshold)
    prediction = ctx.predict(draft)
    verdict = fuse(True, id_report, prediction, ctx.styl_threshold)

    if verdict.allowed:
        session.state = STATE_SENT
        ctx.deliver(draft, session)
        ctx.audit(session.user_id, session.session_id, EVENT_MESSAGE_SENT, {
            "recipients": list(draft.recipients),
        })
        return SubmitOutcome(status="sent", verdict=verdict)

    session.state = STATE_FAILED_LOCKED
    ctx.audit(session.user_id, session.session_id, EVENT_SEND_BLOCKED, {
        "reasons": list(verdict.reasons),
    })
    return SubmitOutcome(status="dangerous", verdict=verdict)


def update_settings(
    profile: UserProfile,
    changes: dict,
    code: str,
    audit: Callable[[str, str | None, str, dict], None] = _no_audit,
) -> UserProfile:
    """Apply a settings delta behind the same code and attempt budget.

    ``changes`` may carry ``forwarding_address`` (address or None to clear)
    and/or ``signature``.  Nothing is applied unless the code verifies.
    """
    if profile.locked:
        raise UserLocked("profile is locked")
    if profile.code is None:
        raise InvalidState("no send code registered for user")

    unknown = set(changes) - {"forwarding_address", "signature"}
    if unknown:
        raise ValueError(f"unknown settings keys: {sorted(unknown)}")
    if "forwarding_address" in changes:
        forwarding = changes["forwarding_address"]
        if forwarding is not None and not is_valid_address(forwarding):
            raise InvalidForwardingAddress(f"invalid forwarding address {forwarding!r}")

    if not profile.code.verify(code):
        profile.failed_attempts += 1
        remaining = profile.remaining_attempts
        audit(profile.user_id, None, EVENT_SETTINGS_DENIED, {
            "remaining": remaining, "attempted": sorted(changes),
        })
        if profile.failed_attempts >= MAX_ATTEMPTS:
            profile.locked = True
            audit(profile.user_id, None, EVENT_PROFILE_LOCKED, {})
            raise UserLocked("profile locked after three failed code attempts")
        raise CodeMismatch(remaining)

    applied = {}
    if "forwarding_address" in changes:
        profile.settings.forwarding_address = changes["forwarding_address"]
        applied["forwarding_address"] = changes["forwarding_address"]
    if "signature" in changes:
        profile.settings.signature = changes["signature"]
        applied["signature"] = changes["signature"]
    audit(profile.user_id, None, EVENT_SETTINGS_CHANGED, {"applied": applied})
    return profile
