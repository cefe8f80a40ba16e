"""Token vocabulary and integer encoding for the recurrent model."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

PAD_INDEX = 0
UNK_INDEX = 1
RESERVED = 2

PAD_TOKEN = "<pad>"
UNK_TOKEN = "<unk>"


@dataclass(frozen=True)
class Vocabulary:
    """Dense token→index map; indices 0 and 1 are reserved (padding, unknown)."""

    tokens: tuple[str, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "_index", {tok: i + RESERVED for i, tok in enumerate(self.tokens)}
        )

    @property
    def size(self) -> int:
        return len(self.tokens) + RESERVED

    def index_of(self, token: str) -> int:
        return self._index.get(token, UNK_INDEX)

    def token_at(self, index: int) -> str:
        if index == PAD_INDEX:
            return PAD_TOKEN
        if index == UNK_INDEX:
            return UNK_TOKEN
        return self.tokens[index - RESERVED]


@dataclass(frozen=True)
class EncodedSequence:
    indices: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.indices)


def build_vocabulary(
    token_lists: list[list[str]],
    min_freq: int = 2,
    cap: int = 20_000,
) -> Vocabulary:
    """Tokens appearing at least ``min_freq`` times, most frequent first."""
    counts: Counter[str] = Counter()
    for tokens in token_lists:
        counts.update(tokens)
    kept = sorted(
        (tok for tok, c in counts.items() if c >= min_freq),
        key=lambda tok: (-counts[tok], tok),
    )
    return Vocabulary(tokens=tuple(kept[:cap]))


def encode(tokens: list[str], vocab: Vocabulary, max_len: int) -> EncodedSequence:
    """Map tokens to indices; unknown tokens become UNK, long tails truncate."""
    return EncodedSequence(
        indices=tuple(vocab.index_of(tok) for tok in tokens[:max_len])
    )


def decode(seq: EncodedSequence, vocab: Vocabulary) -> list[str]:
    return [vocab.token_at(i) for i in seq.indices]
