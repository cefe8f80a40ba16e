import json
import os
import random
import string

import pytest

from conftest import make_profile
from fourdigit.errors import CorruptRecord, IoFailure, NotFound, StoreLocked, VersionMismatch
from fourdigit.message import Message
from fourdigit.sendgate import Settings, new_session
from fourdigit.store import Store, decode_letters, encode_letters


def random_profile(rng: random.Random, user_id: str):
    return make_profile(
        user_id=user_id,
        code=f"{rng.randrange(10000):04d}",
        iterations=60,
        address=f"{user_id}@example.com",
        contacts={
            f"{''.join(rng.choices(string.ascii_lowercase, k=6))}@x.yz"
            for _ in range(rng.randint(0, 4))
        },
        locked=rng.random() < 0.2,
        failed_attempts=rng.randint(0, 3),
        settings=Settings(
            forwarding_address=None if rng.random() < 0.5 else "fwd@x.yz",
            signature="".join(rng.choices(string.printable, k=rng.randint(0, 20))),
        ),
        model_ref=None if rng.random() < 0.5 else "models/custom.json",
    )


class TestLetterEncoding:
    def test_round_trip(self):
        rng = random.Random(1)
        for _ in range(50):
            data = bytes(rng.randrange(256) for _ in range(rng.randint(0, 40)))
            assert decode_letters(encode_letters(data)) == data

    def test_digit_free(self):
        assert not any(ch.isdigit() for ch in encode_letters(bytes(range(256))))


class TestProfileRoundTrip:
    def test_field_for_field(self, store):
        profile = make_profile()
        store.save_profile(profile)
        loaded = store.load_profile("alice")
        assert loaded == profile

    def test_many_random_profiles_byte_identical(self, store, rng):
        for i in range(50):
            profile = random_profile(rng, f"user{i}")
            store.save_profile(profile)
            first_bytes = store.profile_path(profile.user_id).read_bytes()
            loaded = store.load_profile(profile.user_id)
            assert loaded == profile
            store.save_profile(loaded)
            assert store.profile_path(profile.user_id).read_bytes() == first_bytes

    def test_unknown_user(self, store):
        with pytest.raises(NotFound):
            store.load_profile("nobody")

    def test_bit_flip_detected(self, store):
        store.save_profile(make_profile())
        path = store.profile_path("alice")
        data = bytearray(path.read_bytes())
        target = data.index(b'"record"') + 20
        data[target] ^= 0x01
        path.write_bytes(bytes(data))
        # remove the backup so the corruption cannot be silently masked
        path.with_name(path.name + ".bak").unlink(missing_ok=True)
        with pytest.raises(CorruptRecord):
            store.load_profile("alice")

    def test_version_mismatch(self, store):
        store.save_profile(make_profile())
        path = store.profile_path("alice")
        doc = json.loads(path.read_text())
        doc["version"] = 99
        path.write_text(json.dumps(doc))
        with pytest.raises(VersionMismatch):
            store.load_profile("alice")

    def test_digest_never_contains_code(self, store, rng):
        for i in range(40):
            code = f"{rng.randrange(10000):04d}"
            profile = make_profile(user_id=f"u{i}", code=code, iterations=60)
            store.save_profile(profile)
            record = json.loads(store.profile_path(f"u{i}").read_text())["record"]
            assert code not in record["code"]["digest"]
            assert code not in record["code"]["salt"]


class TestCrashSafety:
    def test_interrupted_write_keeps_prior_version(self, store, monkeypatch):
        profile = make_profile()
        store.save_profile(profile)
        good_bytes = store.profile_path("alice").read_bytes()

        real_replace = os.replace

        def explode(src, dst):
            if str(dst).endswith("alice.json"):
                # simulate a crash after the temp file was written (and
                # truncated) but before the rename happened
                with open(src, "wb") as fh:
                    fh.write(b"{\"trunc")
                raise OSError("simulated crash")
            return real_replace(src, dst)

        profile.failed_attempts = 2
        monkeypatch.setattr(os, "replace", explode)
        with pytest.raises(IoFailure):
            store.save_profile(profile)
        monkeypatch.setattr(os, "replace", real_replace)

        assert store.profile_path("alice").read_bytes() == good_bytes
        loaded = store.load_profile("alice")
        assert loaded.failed_attempts == 0

    def test_missing_main_falls_back_to_backup(self, store):
        profile = make_profile()
        store.save_profile(profile)
        profile.failed_attempts = 1
        store.save_profile(profile)
        path = store.profile_path("alice")
        path.unlink()
        recovered = store.load_profile("alice")
        assert recovered.failed_attempts == 0  # the .bak holds the prior version

    def test_read_only_store_rejects_writes(self, tmp_path):
        with Store(tmp_path / "s", writable=True) as rw:
            rw.save_profile(make_profile())
        ro = Store(tmp_path / "s", writable=False)
        with pytest.raises(IoFailure):
            ro.save_profile(make_profile())
        assert ro.load_profile("alice").user_id == "alice"


class TestLocking:
    def test_second_writer_refused(self, tmp_path):
        with Store(tmp_path / "s", writable=True):
            with pytest.raises(StoreLocked):
                Store(tmp_path / "s", writable=True)

    def test_lock_released_on_close(self, tmp_path):
        with Store(tmp_path / "s", writable=True):
            pass
        with Store(tmp_path / "s", writable=True):
            pass

    def test_readers_allowed_alongside_writer(self, tmp_path):
        with Store(tmp_path / "s", writable=True) as rw:
            rw.save_profile(make_profile())
            reader = Store(tmp_path / "s", writable=False)
            assert reader.load_profile("alice").user_id == "alice"


class TestAudit:
    def test_appends_in_order(self, store):
        store.append_audit("alice", "s1", "first", {"n": 1})
        store.append_audit("alice", "s1", "second", {"n": 2})
        events = store.read_audit()
        assert [e.event for e in events] == ["first", "second"]
        assert events[0].detail == {"n": 1}

    def test_append_after_close_fails(self, tmp_path):
        store = Store(tmp_path / "s", writable=True)
        store.close()
        with pytest.raises(IoFailure):
            store.append_audit("alice", None, "x", {})

    def test_records_have_rfc3339_ts(self, store):
        store.append_audit("alice", None, "x", {}, ts=1700000000.0)
        event = store.read_audit()[0]
        assert event.ts.startswith("2023-11-14T")
        assert event.ts.endswith("+00:00")


class TestSessions:
    def test_round_trip(self, store):
        session = new_session("alice")
        session.draft = Message(
            sender="alice@example.com", recipients=("b@c.de",), subject="s", body="b"
        )
        store.save_session(session)
        loaded = store.load_session(session.session_id)
        assert loaded == session

    def test_draftless_round_trip(self, store):
        session = new_session("bob")
        store.save_session(session)
        assert store.load_session(session.session_id) == session


class TestOutbox:
    def test_delivery_writes_eml(self, store):
        msg = Message(sender="a@b.cd", recipients=("x@y.zz",), subject="Hi", body="Body")
        session = new_session("alice")
        path = store.deliver_outbox(msg, session, ts=1234567.0)
        assert path.name == f"1234567-{session.session_id}.eml"
        content = path.read_text()
        assert "From: a@b.cd" in content
        assert content.endswith("\nBody")
