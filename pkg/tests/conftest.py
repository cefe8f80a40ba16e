import random

import pytest

from fourdigit.sendgate import Settings, UserProfile, make_code_record
from fourdigit.store import Store


@pytest.fixture
def rng():
    return random.Random(20240901)


@pytest.fixture
def store(tmp_path):
    with Store(tmp_path / "store", writable=True) as s:
        yield s


def make_profile(user_id="alice", code="0990", iterations=500, **kwargs) -> UserProfile:
    """Profile with a cheap (low-iteration) code record for fast tests."""
    defaults = dict(
        user_id=user_id,
        address="alice@example.com",
        contacts={"team@example.com", "agaga@gmail.com"},
        code=make_code_record(code, iterations=iterations) if code else None,
        settings=Settings(),
    )
    defaults.update(kwargs)
    return UserProfile(**defaults)
