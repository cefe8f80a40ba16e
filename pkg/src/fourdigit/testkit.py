"""Test-support machinery: the synthetic two-style corpus and the audit
replay oracle.  Lives in the package (not the test tree) so experiment
scripts and the CLI demos can reuse it."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .message import Message
from .sendgate import (
    EVENT_CODE_FAIL,
    EVENT_CODE_OK,
    EVENT_CODE_REGISTERED,
    EVENT_MESSAGE_SENT,
    EVENT_PROFILE_LOCKED,
    EVENT_SEND_BLOCKED,
    EVENT_SEND_REQUESTED,
    EVENT_SETTINGS_CHANGED,
    EVENT_SETTINGS_DENIED,
    STATE_AWAITING_CODE,
    STATE_COMPOSING,
    STATE_FAILED_LOCKED,
    STATE_SENT,
)
from .store import AuditEvent

OWNER_ADDRESS = "alice@example.com"
CONTACT_ADDRESS = "team@example.com"

LABEL_LEGITIMATE = "legitimate"
LABEL_IMPERSONATED = "impersonated"

# Disjoint content pools: the owner writes project updates, the impostor
# writes payment-pressure mails.  Function words are shared on purpose.
_OWNER_WORDS = (
    "project", "schedule", "meeting", "review", "update", "budget",
    "quarterly", "metrics", "summary", "milestone", "feedback", "planning",
    "timeline", "release", "sprint", "roadmap", "standup", "design",
    "document", "report", "figures", "analysis", "slides", "minutes",
)
_OWNER_GLUE = ("the", "our", "this", "for", "with", "on", "and", "we", "a")

_IMPOSTOR_WORDS = (
    "wire", "transfer", "invoice", "payment", "immediately", "account",
    "verify", "credentials", "bank", "funds", "confidential", "deadline",
    "password", "click", "approve", "urgent", "gift", "vouchers",
    "balance", "suspended", "refund", "overdue", "penalty", "settlement",
)
_IMPOSTOR_GLUE = ("your", "you", "must", "now", "or", "the", "to", "be")

_OWNER_GREETINGS = ("Hi team,", "Hello everyone,", "Hi all,")
_IMPOSTOR_OPENERS = ("URGENT notice!", "FINAL warning!", "IMMEDIATE action required!")


def _owner_sentence(rng: random.Random) -> str:
    length = rng.randint(5, 9)
    words = []
    for i in range(length):
        pool = _OWNER_GLUE if i % 2 else _OWNER_WORDS
        words.append(rng.choice(pool))
    sentence = " ".join(words)
    return sentence[0].upper() + sentence[1:] + "."


def _impostor_sentence(rng: random.Random) -> str:
    length = rng.randint(4, 8)
    words = []
    for i in range(length):
        pool = _IMPOSTOR_GLUE if i % 2 else _IMPOSTOR_WORDS
        word = rng.choice(pool)
        if rng.random() < 0.2:
            word = word.upper()
        words.append(word)
    sentence = " ".join(words)
    terminator = "!" if rng.random() < 0.7 else "?"
    return sentence[0].upper() + sentence[1:] + terminator


def owner_body(rng: random.Random) -> str:
    paragraphs = [rng.choice(_OWNER_GREETINGS)]
    for _ in range(rng.randint(1, 2)):
        paragraphs.append(" ".join(_owner_sentence(rng) for _ in range(rng.randint(2, 4))))
    paragraphs.append(f"Best,\nAlice\n{OWNER_ADDRESS}")
    return "\n\n".join(paragraphs)


def impostor_body(rng: random.Random) -> str:
    paragraphs = [rng.choice(_IMPOSTOR_OPENERS)]
    for _ in range(rng.randint(1, 2)):
        paragraphs.append(" ".join(_impostor_sentence(rng) for _ in range(rng.randint(2, 4))))
    paragraphs.append("Act now: http://secure-pay.example/verify")
    return "\n\n".join(paragraphs)


def make_message(body: str, subject: str = "Status") -> Message:
    return Message(
        sender=OWNER_ADDRESS,
        recipients=(CONTACT_ADDRESS,),
        subject=subject,
        body=body,
    )


def make_two_style_corpus(
    n_train: int = 400,
    n_test: int = 100,
    seed: int = 7,
) -> tuple[list[tuple[Message, str]], list[tuple[Message, str]]]:
    """Seed-fixed corpus of owner-style and impostor-style drafts, half each."""
    rng = random.Random(seed)

    def batch(n: int) -> list[tuple[Message, str]]:
        samples = []
        for k in range(n):
            if k % 2 == 0:
                samples.append((make_message(owner_body(rng)), LABEL_LEGITIMATE))
            else:
                samples.append((make_message(impostor_body(rng)), LABEL_IMPERSONATED))
        return samples

    return batch(n_train), batch(n_test)


@dataclass
class ReplayedProfile:
    locked: bool = False
    failed_attempts: int = 0
    forwarding_address: str | None = None
    signature: str = ""


@dataclass
class ReplayedSession:
    state: str = STATE_COMPOSING
    attempts_used: int = 0


@dataclass
class ReplayedState:
    profiles: dict[str, ReplayedProfile] = field(default_factory=dict)
    sessions: dict[str, ReplayedSession] = field(default_factory=dict)


def replay_audit(events: list[AuditEvent]) -> ReplayedState:
    """Reconstruct profile flags and session states from the audit log alone.

    The code record itself is deliberately not reconstructible: the log
    carries no secrets.
    """
    state = ReplayedState()
    for ev in events:
        profile = state.profiles.setdefault(ev.user_id, ReplayedProfile())
        session = None
        if ev.session_id is not None:
            session = state.sessions.setdefault(ev.session_id, ReplayedSession())

        if ev.event == EVENT_CODE_REGISTERED:
            profile.locked = False
            profile.failed_attempts = 0
        elif ev.event == EVENT_SEND_REQUESTED and session is not None:
            session.state = STATE_AWAITING_CODE
        elif ev.event == EVENT_CODE_FAIL:
            profile.failed_attempts += 1
            if session is not None:
                session.attempts_used += 1
        elif ev.event == EVENT_SETTINGS_DENIED:
            profile.failed_attempts += 1
        elif ev.event == EVENT_CODE_OK:
            pass
        elif ev.event == EVENT_PROFILE_LOCKED:
            profile.locked = True
            if session is not None:
                session.state = STATE_FAILED_LOCKED
        elif ev.event == EVENT_MESSAGE_SENT and session is not None:
            session.state = STATE_SENT
        elif ev.event == EVENT_SEND_BLOCKED and session is not None:
            session.state = STATE_FAILED_LOCKED
        elif ev.event == EVENT_SETTINGS_CHANGED:
            applied = ev.detail.get("applied", {})
            if "forwarding_address" in applied:
                profile.forwarding_address = applied["forwarding_address"]
            if "signature" in applied:
                profile.signature = applied["signature"]
    return state
