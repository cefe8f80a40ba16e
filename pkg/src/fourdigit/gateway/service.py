"""Framework-free gateway core.

Owns the store, the in-memory session table, per-profile serialization, and
the model snapshots.  The HTTP layer and the CLI are thin adapters over this
class, so its methods are the real protocol surface.
"""

from __future__ import annotations

import threading
from pathlib import Path

from .. import sendgate
from ..authmodel.fusion import Verdict, fuse
from ..authmodel.network import Prediction
from ..authmodel.serialize import load_model
from ..errors import InvalidState, MalformedAddress, NotFound
from ..message import Message, normalize_newlines, validate_address
from ..sendgate import (
    AuthEvidence,
    Challenge,
    GateContext,
    SendSession,
    SingleUseAuthenticator,
    SubmitOutcome,
    UserProfile,
    new_session,
)
from ..store import Store
from .config import GatewayConfig, feature_lists_for

# a profile without a trained model skips the stylometric check (the other
# two signals still gate the send); scored as certainty of legitimacy
NEUTRAL_PREDICTION = Prediction(probabilities=(1.0, 0.0), label="legitimate")


class GatewayService:
    def __init__(self, store: Store, config: GatewayConfig | None = None):
        self.store = store
        self.config = config or GatewayConfig()
        self.lists = feature_lists_for(self.config)
        self.authenticator = SingleUseAuthenticator()
        self._sessions: dict[str, SendSession] = {}
        self._models: dict[str, object] = {}
        self._user_locks: dict[str, threading.Lock] = {}
        self._session_busy: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    # -- locking -----------------------------------------------------------

    def _user_lock(self, user_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._user_locks.setdefault(user_id, threading.Lock())

    def _busy_lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._session_busy.setdefault(session_id, threading.Lock())

    # -- profiles and models -------------------------------------------------

    def load_profile(self, user_id: str) -> UserProfile:
        return self.store.load_profile(user_id)

    def create_profile(self, user_id: str, address: str, contacts: set[str] | None = None) -> UserProfile:
        profile = UserProfile(
            user_id=user_id,
            address=validate_address(address),
            contacts=set(contacts or ()),
        )
        self.store.save_profile(profile)
        return profile

    def _predictor(self, profile: UserProfile):
        model = self._model_for(profile)
        if model is None:
            return lambda msg: NEUTRAL_PREDICTION
        return model.predict

    def _model_for(self, profile: UserProfile):
        user_id = profile.user_id
        if user_id in self._models:
            return self._models[user_id]
        path = (
            Path(profile.model_ref)
            if profile.model_ref
            else self.store.model_path(user_id)
        )
        model = load_model(path, self.lists) if path.exists() else None
        self._models[user_id] = model
        return model

    def reload_model(self, user_id: str) -> None:
        # atomic snapshot swap: readers see either the old or the new model
        self._models.pop(user_id, None)

    def _context(self, profile: UserProfile) -> GateContext:
        return GateContext(
            profile=profile,
            predict=self._predictor(profile),
            deliver=self.store.deliver_outbox,
            audit=self.store.append_audit,
            styl_threshold=self.config.styl_threshold,
            lookalike_threshold=self.config.lookalike_threshold,
        )

    # -- session lifecycle ---------------------------------------------------

    def create_session(self, user_id: str) -> SendSession:
        self.load_profile(user_id)  # NotFound if the user does not exist
        session = new_session(user_id)
        self._sessions[session.session_id] = session
        self.store.save_session(session)
        return session

    def get_session(self, session_id: str) -> SendSession:
        session = self._sessions.get(session_id)
        if session is None:
            raise NotFound(f"session {session_id!r} not found")
        return session

    def put_draft(self, session_id: str, to: list[str], subject: str, body: str) -> SendSession:
        session = self.get_session(session_id)
        if session.state != sendgate.STATE_COMPOSING:
            raise InvalidState(f"cannot edit draft in state {session.state!r}")
        if not to:
            raise MalformedAddress("", "at least one recipient is required")
        profile = self.load_profile(session.user_id)
        draft = Message(
            sender=profile.address,
            recipients=tuple(validate_address(addr) for addr in to),
            subject=subject,
            body=normalize_newlines(body),
        )
        session.draft = draft
        self.store.save_session(session)
        return session

    def request_send(self, session_id: str) -> Challenge:
        session = self.get_session(session_id)
        with self._user_lock(session.user_id):
            profile = self.load_profile(session.user_id)
            challenge = sendgate.request_send(session, self._context(profile))
            self.store.save_session(session)
            return challenge

    def submit_code(self, session_id: str, code: str) -> SubmitOutcome:
        session = self.get_session(session_id)
        busy = self._busy_lock(session_id)
        if not busy.acquire(blocking=False):
            raise InvalidState("a code submission for this session is already in flight")
        try:
            with self._user_lock(session.user_id):
                profile = self.load_profile(session.user_id)
                outcome = sendgate.submit_code(session, code, self._context(profile))
                self.store.save_profile(profile)
                self.store.save_session(session)
                return outcome
        finally:
            busy.release()

    # -- settings and code registration ---------------------------------------

    def get_settings(self, user_id: str) -> dict:
        profile = self.load_profile(user_id)
        return profile.settings.as_dict()

    def put_settings(self, user_id: str, changes: dict, code: str) -> dict:
        with self._user_lock(user_id):
            profile = self.load_profile(user_id)
            try:
                sendgate.update_settings(profile, changes, code, audit=self.store.append_audit)
            finally:
                self.store.save_profile(profile)  # failed attempts must persist
            return profile.settings.as_dict()

    def register_code(self, user_id: str, new_code: str, evidence: AuthEvidence) -> None:
        with self._user_lock(user_id):
            profile = self.load_profile(user_id)
            sendgate.register_code(
                profile,
                new_code,
                evidence,
                self.authenticator,
                iterations=self.config.code_iterations,
                audit=self.store.append_audit,
            )
            self.store.save_profile(profile)


def offline_verify(
    store: Store,
    user_id: str,
    msg: Message,
    code: str | None,
    config: GatewayConfig | None = None,
) -> Verdict:
    """Read-only fusion of the three checks for an on-disk message.

    Unlike the live send gate this never consumes attempt budget: it is an
    analysis tool, not a verification endpoint.
    """
    config = config or GatewayConfig()
    lists = feature_lists_for(config)
    profile = store.load_profile(user_id)

    code_ok = bool(code) and profile.code is not None and profile.code.verify(code)
    id_report = sendgate.analyze_draft_addresses(msg, profile, config.lookalike_threshold)

    model_path = Path(profile.model_ref) if profile.model_ref else store.model_path(user_id)
    if model_path.exists():
        prediction = load_model(model_path, lists).predict(msg)
    else:
        prediction = NEUTRAL_PREDICTION
    return fuse(code_ok, id_report, prediction, config.styl_threshold)
