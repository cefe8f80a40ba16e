"""Durable persistence: profiles, sessions, models, audit log, outbox.

One JSON document per record under the store root:

    profiles/<user_id>.json   models/<user_id>.json   sessions/<id>.json
    audit.log                 outbox/                 store.lock

Every document is wrapped in {version, checksum, record}; the checksum is a
CRC-32 over the canonical (sorted, compact) JSON of the record.  Writes are
atomic (temp file + rename) and keep the previous version as ``.bak``.  A
lock file enforces a single writer per root; read-only opens skip it.

Code salts and digests are encoded with a letters-only alphabet so a stored
record can never contain the digits of the code it protects.
"""

from __future__ import annotations

import json
import os
import time
import zlib
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .errors import CorruptRecord, IoFailure, NotFound, StoreLocked, VersionMismatch
from .message import Message, serialize_message
from .sendgate import CodeRecord, SendSession, Settings, UserProfile

SCHEMA_VERSION = 1

_LETTERS = "abcdefghijklmnop"
_LETTER_INDEX = {ch: i for i, ch in enumerate(_LETTERS)}


def encode_letters(data: bytes) -> str:
    """Base-16 with an all-letter alphabet: digit-free by construction."""
    return "".join(_LETTERS[b >> 4] + _LETTERS[b & 15] for b in data)


def decode_letters(text: str) -> bytes:
    if len(text) % 2:
        raise ValueError("odd-length letter encoding")
    return bytes(
        (_LETTER_INDEX[text[i]] << 4) | _LETTER_INDEX[text[i + 1]]
        for i in range(0, len(text), 2)
    )


def rfc3339(ts: float) -> str:
    return datetime.fromtimestamp(ts, tz=timezone.utc).isoformat()


def _canonical(record: dict) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def _checksum(record: dict) -> str:
    return format(zlib.crc32(_canonical(record).encode("utf-8")), "08x")


def profile_to_record(profile: UserProfile) -> dict:
    code = None
    if profile.code is not None:
        code = {
            "algorithm": profile.code.algorithm,
            "salt": encode_letters(profile.code.salt),
            "digest": encode_letters(profile.code.digest),
            "iterations": profile.code.iterations,
        }
    return {
        "user_id": profile.user_id,
        "address": profile.address,
        "contacts": sorted(profile.contacts),
        "code": code,
        "locked": profile.locked,
        "failed_attempts": profile.failed_attempts,
        "settings": profile.settings.as_dict(),
        "model_ref": profile.model_ref,
    }


def profile_from_record(record: dict) -> UserProfile:
    code = None
    if record["code"] is not None:
        code = CodeRecord(
            algorithm=record["code"]["algorithm"],
            salt=decode_letters(record["code"]["salt"]),
            digest=decode_letters(record["code"]["digest"]),
            iterations=record["code"]["iterations"],
        )
    return UserProfile(
        user_id=record["user_id"],
        address=record["address"],
        contacts=set(record["contacts"]),
        code=code,
        locked=record["locked"],
        failed_attempts=record["failed_attempts"],
        settings=Settings(**record["settings"]),
        model_ref=record["model_ref"],
    )


def session_to_record(session: SendSession) -> dict:
    draft = None
    if session.draft is not None:
        draft = {
            "sender": session.draft.sender,
            "recipients": list(session.draft.recipients),
            "subject": session.draft.subject,
            "body": session.draft.body,
        }
    return {
        "session_id": session.session_id,
        "user_id": session.user_id,
        "draft": draft,
        "state": session.state,
        "attempts_used": session.attempts_used,
        "created_at": session.created_at,
        "updated_at": session.updated_at,
    }


def session_from_record(record: dict) -> SendSession:
    draft = None
    if record["draft"] is not None:
        d = record["draft"]
        draft = Message(
            sender=d["sender"],
            recipients=tuple(d["recipients"]),
            subject=d["subject"],
            body=d["body"],
        )
    return SendSession(
        session_id=record["session_id"],
        user_id=record["user_id"],
        draft=draft,
        state=record["state"],
        attempts_used=record["attempts_used"],
        created_at=record["created_at"],
        updated_at=record["updated_at"],
    )


@dataclass
class AuditEvent:
    ts: str
    user_id: str
    session_id: str | None
    event: str
    detail: dict


class Store:
    """Single-writer, multi-reader document store rooted at a directory."""

    SUBDIRS = ("profiles", "models", "sessions", "outbox")

    def __init__(self, root: str | Path, writable: bool = True):
        self.root = Path(root)
        self.writable = writable
        self._closed = False
        self._lock_fd: int | None = None
        self.root.mkdir(parents=True, exist_ok=True)
        for sub in self.SUBDIRS:
            (self.root / sub).mkdir(exist_ok=True)
        if writable:
            self._acquire_lock()

    def _acquire_lock(self) -> None:
        lock_path = self.root / "store.lock"
        try:
            fd = os.open(lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise StoreLocked(f"store at {self.root} already has a writer") from None
        os.write(fd, str(os.getpid()).encode())
        self._lock_fd = fd

    def close(self) -> None:
        if self._closed:
            return
        self._closed = True
        if self._lock_fd is not None:
            os.close(self._lock_fd)
            (self.root / "store.lock").unlink(missing_ok=True)
            self._lock_fd = None

    def __enter__(self) -> "Store":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def _require_writable(self) -> None:
        if self._closed:
            raise IoFailure("store is closed")
        if not self.writable:
            raise IoFailure("store opened read-only")

    def _atomic_write(self, path: Path, data: bytes) -> None:
        tmp = path.with_name(path.name + ".tmp")
        try:
            with open(tmp, "wb") as fh:
                fh.write(data)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
        except OSError as exc:
            raise IoFailure(f"write to {path} failed: {exc}") from exc

    def _write_document(self, path: Path, record: dict) -> None:
        self._require_writable()
        doc = {
            "version": SCHEMA_VERSION,
            "checksum": _checksum(record),
            "record": record,
        }
        data = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")
        if path.exists():
            self._atomic_write(path.with_name(path.name + ".bak"), path.read_bytes())
        self._atomic_write(path, data)

    def _read_document(self, path: Path, kind: str) -> dict:
        target = path
        if not target.exists():
            backup = path.with_name(path.name + ".bak")
            if backup.exists():
                target = backup
            else:
                raise NotFound(f"{kind} {path.stem!r} not found")
        try:
            doc = json.loads(target.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise CorruptRecord(f"{kind} {path.stem!r} unreadable: {exc}") from exc
        if not isinstance(doc, dict) or "record" not in doc or "checksum" not in doc:
            raise CorruptRecord(f"{kind} {path.stem!r} missing envelope fields")
        if doc.get("version") != SCHEMA_VERSION:
            raise VersionMismatch(
                f"{kind} {path.stem!r} has schema version {doc.get('version')!r}"
            )
        if _checksum(doc["record"]) != doc["checksum"]:
            raise CorruptRecord(f"{kind} {path.stem!r} failed checksum verification")
        return doc["record"]

    # -- profiles ----------------------------------------------------------

    def profile_path(self, user_id: str) -> Path:
        return self.root / "profiles" / f"{user_id}.json"

    def save_profile(self, profile: UserProfile) -> None:
        self._write_document(self.profile_path(profile.user_id), profile_to_record(profile))

    def load_profile(self, user_id: str) -> UserProfile:
        return profile_from_record(self._read_document(self.profile_path(user_id), "profile"))

    def list_profiles(self) -> list[str]:
        return sorted(
            p.stem for p in (self.root / "profiles").glob("*.json")
        )

    # -- sessions ----------------------------------------------------------

    def session_path(self, session_id: str) -> Path:
        return self.root / "sessions" / f"{session_id}.json"

    def save_session(self, session: SendSession) -> None:
        self._write_document(self.session_path(session.session_id), session_to_record(session))

    def load_session(self, session_id: str) -> SendSession:
        return session_from_record(self._read_document(self.session_path(session_id), "session"))

    # -- models ------------------------------------------------------------

    def model_path(self, user_id: str) -> Path:
        return self.root / "models" / f"{user_id}.json"

    # -- audit log ---------------------------------------------------------

    def append_audit(self, user_id: str, session_id: str | None, event: str, detail: dict, ts: float | None = None) -> None:
        self._require_writable()
        record = {
            "ts": rfc3339(ts if ts is not None else time.time()),
            "user_id": user_id,
            "session_id": session_id,
            "event": event,
            "detail": detail,
        }
        line = json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n"
        try:
            with open(self.root / "audit.log", "a", encoding="utf-8") as fh:
                fh.write(line)
                fh.flush()
                os.fsync(fh.fileno())
        except OSError as exc:
            raise IoFailure(f"audit append failed: {exc}") from exc

    def read_audit(self) -> list[AuditEvent]:
        path = self.root / "audit.log"
        if not path.exists():
            return []
        events = []
        for line in path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            record = json.loads(line)
            events.append(AuditEvent(
                ts=record["ts"],
                user_id=record["user_id"],
                session_id=record["session_id"],
                event=record["event"],
                detail=record["detail"],
            ))
        return events

    # -- outbox ------------------------------------------------------------

    def deliver_outbox(self, msg: Message, session: SendSession, ts: float | None = None) -> Path:
        self._require_writable()
        stamp = int(ts if ts is not None else time.time())
        path = self.root / "outbox" / f"{stamp}-{session.session_id}.eml"
        self._atomic_write(path, serialize_message(msg).encode("utf-8"))
        return path
