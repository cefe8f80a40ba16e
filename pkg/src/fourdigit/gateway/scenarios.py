"""Scripted attack drills against a scratch store.

Each scenario plays an attacker against the gate and reports whether the
defenses held; the CLI exits non-zero if any defense gave way.
"""

from __future__ import annotations

import tempfile
from pathlib import Path

from ..errors import FourDigitError, UserLocked
from ..store import Store
from ..testkit import CONTACT_ADDRESS, OWNER_ADDRESS
from .config import GatewayConfig
from .service import GatewayService

SCENARIOS = ("hijacked-session", "forwarding-hijack", "lookalike-recipient", "brute-force-code")

OWNER_CODE = "0990"
TEST_ITERATIONS = 2_000  # scenario stores are throwaway; keep drills quick


def _fresh_service(root: Path) -> GatewayService:
    config = GatewayConfig(store_root=str(root), code_iterations=TEST_ITERATIONS)
    store = Store(root, writable=True)
    service = GatewayService(store, config)
    profile = service.create_profile("alice", OWNER_ADDRESS, {CONTACT_ADDRESS})
    evidence = service.authenticator.issue()
    service.register_code("alice", OWNER_CODE, evidence)
    return service


def _outbox_count(service: GatewayService) -> int:
    return len(list((service.store.root / "outbox").glob("*.eml")))


def _attempt_send(service: GatewayService, code: str, recipient: str = CONTACT_ADDRESS) -> str:
    session = service.create_session("alice")
    service.put_draft(session.session_id, [recipient], "Quick note", "Please review the draft.")
    service.request_send(session.session_id)
    outcome = service.submit_code(session.session_id, code)
    return outcome.status


def run_scenario(name: str, root: str | Path | None = None) -> dict:
    if name not in SCENARIOS:
        raise ValueError(f"unknown scenario {name!r}; choose from {SCENARIOS}")
    workdir = Path(root) if root else Path(tempfile.mkdtemp(prefix="fourdigit-drill-"))
    service = _fresh_service(workdir)
    report: dict = {"scenario": name, "store": str(workdir)}

    if name == "hijacked-session":
        # attacker at an open mailbox: no code knowledge
        statuses = []
        for guess in ("1234", "1111", "2222", "3333"):
            try:
                statuses.append(_attempt_send(service, guess))
            except FourDigitError as exc:
                statuses.append(exc.code)
        report["attempts"] = statuses
        report["sends_succeeded_without_code"] = _outbox_count(service)
        report["profile_locked"] = service.load_profile("alice").locked
        report["defenses_held"] = (
            report["sends_succeeded_without_code"] == 0 and report["profile_locked"]
        )

    elif name == "forwarding-hijack":
        outcomes = []
        for guess in ("0000", "9999", "4321", "5555"):
            try:
                service.put_settings("alice", {"forwarding_address": "attacker@evil.example"}, guess)
                outcomes.append("applied")
            except FourDigitError as exc:
                outcomes.append(exc.code)
        profile = service.load_profile("alice")
        report["attempts"] = outcomes
        report["forwarding_address"] = profile.settings.forwarding_address
        report["profile_locked"] = profile.locked
        report["defenses_held"] = (
            profile.settings.forwarding_address is None and profile.locked
        )

    elif name == "lookalike-recipient":
        # attacker knows the code but targets a lookalike of a known contact
        lookalike = CONTACT_ADDRESS.replace("team", "t.eam")
        status = _attempt_send(service, OWNER_CODE, recipient=lookalike)
        report["outcome"] = status
        report["deliveries"] = _outbox_count(service)
        report["defenses_held"] = status == "dangerous" and report["deliveries"] == 0

    elif name == "brute-force-code":
        session = service.create_session("alice")
        service.put_draft(session.session_id, [CONTACT_ADDRESS], "s", "body text.")
        service.request_send(session.session_id)
        tried = 0
        locked = False
        for candidate in range(10_000):
            try:
                outcome = service.submit_code(session.session_id, f"{candidate:04d}")
            except (UserLocked, FourDigitError):
                locked = True
                break
            tried += 1
            if outcome.status == "locked":
                locked = True
                break
            if outcome.status == "sent":
                break
        report["codes_tried"] = tried
        report["locked"] = locked
        report["deliveries"] = _outbox_count(service)
        report["defenses_held"] = locked and tried <= 3 and report["deliveries"] == 0

    service.store.close()
    return report
