"""The 97-feature stylometric vector and derived linguistic attributes.

Feature order and names are frozen in ``build_manifest`` (and documented in
``feature_dictionary.md`` at the repository root); the manifest hash is the
compatibility contract for stored models.  All counting rules are exact and
deterministic: identical body text yields a bit-identical vector.

Conventions shared by every feature:
- N is the character count of the body, T the whitespace-token count.
- Letters/digits/uppercase are ASCII, so the 26 per-letter counts sum to the
  letter count exactly.
- A "word" is a token lowercased and stripped of leading/trailing
  non-alphanumeric characters; word-level features (types, hapax, function
  words, content words, stopwords) ignore tokens that normalize to nothing.
- Any feature whose denominator is zero is 0.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .message import TextSegmentation, split_sentences

CATEGORY_TOKEN = "token"
CATEGORY_SYNTACTIC = "syntactic"
CATEGORY_STRUCTURAL = "structural"
CATEGORY_CONTENT = "content"

ASCII_LOWER = "abcdefghijklmnopqrstuvwxyz"
ASCII_DIGITS = "0123456789"

# Table-1 prints six punctuation symbols but counts eight features; colon and
# apostrophe pad the set (see feature_dictionary.md).
PUNCTUATION_MARKS = (
    (".", "period"),
    (",", "comma"),
    ("?", "question"),
    ("!", "exclamation"),
    (";", "semicolon"),
    ("*", "asterisk"),
    (":", "colon"),
    ("'", "apostrophe"),
)

CONTENT_WORDS = (
    "agreement", "team", "section", "good", "parties", "once", "time",
    "pick", "draft", "notice", "questions", "contracts", "day",
)

# longest first so multi-word greetings win the prefix match
GREETINGS = (
    "good morning", "good afternoon", "good evening",
    "hello", "dear", "hey", "hi",
)

PHONE_RUN_CHARS = frozenset("0123456789()+-. ")
PHONE_MIN_DIGITS = 7


def _load_wordlist(name: str) -> tuple[str, ...]:
    text = resources.files("fourdigit.data").joinpath(name).read_text("utf-8")
    return tuple(
        line.strip()
        for line in text.splitlines()
        if line.strip() and not line.startswith("#")
    )


DEFAULT_FUNCTION_WORDS = _load_wordlist("function_words.txt")
DEFAULT_STOPWORDS = _load_wordlist("stopwords.txt")

assert len(DEFAULT_FUNCTION_WORDS) == 25


@dataclass(frozen=True)
class FeatureLists:
    """Configurable word lists; the function-word list shapes the manifest."""

    function_words: tuple[str, ...] = DEFAULT_FUNCTION_WORDS
    stopwords: tuple[str, ...] = DEFAULT_STOPWORDS


DEFAULT_LISTS = FeatureLists()


@dataclass(frozen=True)
class FeatureSpec:
    name: str
    index: int
    category: str


def build_manifest(function_words: tuple[str, ...] = DEFAULT_FUNCTION_WORDS) -> tuple[FeatureSpec, ...]:
    names: list[tuple[str, str]] = []

    def add(name: str, category: str) -> None:
        names.append((name, category))

    add("char_count", CATEGORY_TOKEN)
    add("digit_ratio", CATEGORY_TOKEN)
    add("letter_ratio", CATEGORY_TOKEN)
    add("upper_ratio", CATEGORY_TOKEN)
    add("space_ratio", CATEGORY_TOKEN)
    add("tab_ratio", CATEGORY_TOKEN)
    for letter in ASCII_LOWER:
        add(f"alpha_{letter}", CATEGORY_TOKEN)
    add("token_count", CATEGORY_TOKEN)
    add("avg_sentence_len_chars", CATEGORY_TOKEN)
    add("avg_token_len", CATEGORY_TOKEN)
    add("word_char_ratio", CATEGORY_TOKEN)
    add("type_token_ratio", CATEGORY_TOKEN)
    add("vocabulary_richness", CATEGORY_TOKEN)

    for word in function_words:
        add(f"fw_{word}", CATEGORY_SYNTACTIC)
    for _, punct_name in PUNCTUATION_MARKS:
        add(f"punct_{punct_name}", CATEGORY_SYNTACTIC)

    for name in (
        "line_count", "sentence_count", "paragraph_count",
        "has_greeting", "has_tab_separator", "has_blank_line_separator",
        "has_any_separator",
        "avg_para_len_chars", "avg_para_len_words", "avg_para_len_sentences",
        "sig_has_email", "sig_has_phone", "sig_has_url",
    ):
        add(name, CATEGORY_STRUCTURAL)

    for word in CONTENT_WORDS:
        add(f"content_{word}", CATEGORY_CONTENT)

    manifest = tuple(
        FeatureSpec(name=name, index=i, category=cat)
        for i, (name, cat) in enumerate(names)
    )
    assert len(manifest) == 97
    return manifest


FEATURE_MANIFEST = build_manifest()
FEATURE_COUNT = len(FEATURE_MANIFEST)
_NAME_TO_INDEX = {spec.name: spec.index for spec in FEATURE_MANIFEST}


def manifest_hash(manifest: tuple[FeatureSpec, ...] = FEATURE_MANIFEST) -> str:
    doc = [
        {"name": s.name, "index": s.index, "category": s.category}
        for s in manifest
    ]
    blob = json.dumps(doc, separators=(",", ":"), sort_keys=True)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def manifest_as_dicts(manifest: tuple[FeatureSpec, ...] = FEATURE_MANIFEST) -> list[dict]:
    return [
        {"name": s.name, "index": s.index, "category": s.category}
        for s in manifest
    ]


@dataclass(frozen=True)
class StylometricVector:
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != FEATURE_COUNT:
            raise ValueError(f"expected {FEATURE_COUNT} features, got {len(self.values)}")

    def __getitem__(self, name: str) -> float:
        return self.values[_NAME_TO_INDEX[name]]

    def as_dict(self) -> dict[str, float]:
        return {spec.name: self.values[spec.index] for spec in FEATURE_MANIFEST}

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.float64)


@dataclass(frozen=True)
class LinguisticAttributes:
    message_length: float
    word_count: float
    sentence_count: float
    avg_word_length: float
    stopword_count: float
    question_count: float
    exclamation_count: float
    capitalized_word_count: float


def normalize_word(token: str) -> str:
    """Lowercase and strip leading/trailing non-alphanumeric characters."""
    word = token.lower()
    start, end = 0, len(word)
    while start < end and not word[start].isalnum():
        start += 1
    while end > start and not word[end - 1].isalnum():
        end -= 1
    return word[start:end]


def normalize_words(tokens) -> list[str]:
    """Normalized, non-empty words for token-level lookups and the model vocabulary."""
    words = (normalize_word(t) for t in tokens)
    return [w for w in words if w]


def _mean(values) -> float:
    seq = list(values)
    return sum(seq) / len(seq) if seq else 0.0


def _has_greeting(paragraphs: tuple[str, ...]) -> bool:
    if not paragraphs:
        return False
    first = paragraphs[0].strip().lower()
    for greeting in GREETINGS:
        if first.startswith(greeting):
            rest = first[len(greeting):]
            if not rest or not rest[0].isalpha():
                return True
    return False


def _has_tab_separator(lines: tuple[str, ...]) -> bool:
    # a non-blank tab-prefixed line with non-blank content before it
    seen_content = False
    for line in lines:
        if line.strip() == "":
            continue
        if line.startswith("\t") and seen_content:
            return True
        seen_content = True
    return False


def _has_blank_line_separator(lines: tuple[str, ...]) -> bool:
    # a blank line strictly between non-blank content
    first_content = None
    last_content = None
    for i, line in enumerate(lines):
        if line.strip() != "":
            if first_content is None:
                first_content = i
            last_content = i
    if first_content is None:
        return False
    return any(
        lines[i].strip() == "" for i in range(first_content + 1, last_content)
    )


def _sig_has_email(last_paragraph: str) -> bool:
    for token in last_paragraph.split():
        at = token.find("@")
        if at >= 0 and "." in token[at + 1:]:
            return True
    return False


def _sig_has_phone(last_paragraph: str) -> bool:
    digits_in_run = 0
    best = 0
    for ch in last_paragraph:
        if ch in PHONE_RUN_CHARS:
            if ch in ASCII_DIGITS:
                digits_in_run += 1
                best = max(best, digits_in_run)
        else:
            digits_in_run = 0
    return best >= PHONE_MIN_DIGITS


def _sig_has_url(last_paragraph: str) -> bool:
    for token in last_paragraph.split():
        low = token.lower()
        if low.startswith(("http://", "https://", "www.")):
            return True
    return False


def extract_features(
    seg: TextSegmentation,
    body: str,
    lists: FeatureLists = DEFAULT_LISTS,
) -> StylometricVector:
    """Compute the full 97-feature vector for a segmented body."""
    n = len(body)
    tokens = seg.tokens
    t = len(tokens)

    digit_count = sum(1 for ch in body if ch in ASCII_DIGITS)
    letter_count = 0
    upper_count = 0
    alpha_counts = Counter()
    for ch in body:
        if "a" <= ch <= "z":
            letter_count += 1
            alpha_counts[ch] += 1
        elif "A" <= ch <= "Z":
            letter_count += 1
            upper_count += 1
            alpha_counts[ch.lower()] += 1
    space_count = body.count(" ")
    tab_count = body.count("\t")

    words = normalize_words(tokens)
    word_counts = Counter(words)
    type_count = len(word_counts)
    hapax_count = sum(1 for c in word_counts.values() if c == 1)
    chars_in_tokens = sum(len(tok) for tok in tokens)

    values: list[float] = []
    values.append(float(n))
    values.append(digit_count / n if n else 0.0)
    values.append(letter_count / n if n else 0.0)
    values.append(upper_count / n if n else 0.0)
    values.append(space_count / n if n else 0.0)
    values.append(tab_count / n if n else 0.0)
    for letter in ASCII_LOWER:
        values.append(float(alpha_counts[letter]))
    values.append(float(t))
    values.append(_mean(len(s) for s in seg.sentences))
    values.append(_mean(len(tok) for tok in tokens))
    values.append(chars_in_tokens / n if n else 0.0)
    values.append(type_count / t if t else 0.0)
    values.append(hapax_count / t if t else 0.0)

    for word in lists.function_words:
        values.append(float(word_counts[word]))
    for mark, _ in PUNCTUATION_MARKS:
        values.append(float(body.count(mark)))

    paragraphs = seg.paragraphs
    last_para = paragraphs[-1] if paragraphs else ""
    has_tab = _has_tab_separator(seg.lines)
    has_blank = _has_blank_line_separator(seg.lines)

    values.append(float(len(seg.lines)))
    values.append(float(len(seg.sentences)))
    values.append(float(len(paragraphs)))
    values.append(1.0 if _has_greeting(paragraphs) else 0.0)
    values.append(1.0 if has_tab else 0.0)
    values.append(1.0 if has_blank else 0.0)
    values.append(1.0 if (has_tab or has_blank) else 0.0)
    values.append(_mean(len(p) for p in paragraphs))
    values.append(_mean(len(p.split()) for p in paragraphs))
    values.append(_mean(len(split_sentences(p)) for p in paragraphs))
    values.append(1.0 if _sig_has_email(last_para) else 0.0)
    values.append(1.0 if _sig_has_phone(last_para) else 0.0)
    values.append(1.0 if _sig_has_url(last_para) else 0.0)

    for word in CONTENT_WORDS:
        values.append(float(word_counts[word]))

    return StylometricVector(values=tuple(values))


def extract_attributes(
    seg: TextSegmentation,
    v: StylometricVector,
    lists: FeatureLists = DEFAULT_LISTS,
) -> LinguisticAttributes:
    """Linguistic attribute set; overlapping fields alias the vector."""
    stopword_set = set(lists.stopwords)
    stopword_count = sum(1 for w in normalize_words(seg.tokens) if w in stopword_set)
    capitalized = sum(1 for tok in seg.tokens if "A" <= tok[0] <= "Z")
    return LinguisticAttributes(
        message_length=v["char_count"],
        word_count=v["token_count"],
        sentence_count=v["sentence_count"],
        avg_word_length=v["avg_token_len"],
        stopword_count=float(stopword_count),
        question_count=v["punct_question"],
        exclamation_count=v["punct_exclamation"],
        capitalized_word_count=float(capitalized),
    )


@dataclass(frozen=True)
class FeatureScaler:
    """Per-feature mean/stddev fitted by ``standardize``."""

    mean: np.ndarray
    std: np.ndarray

    def apply(self, vector: StylometricVector) -> np.ndarray:
        x = vector.as_array()
        out = np.zeros_like(x)
        nonzero = self.std > 0.0
        out[nonzero] = (x[nonzero] - self.mean[nonzero]) / self.std[nonzero]
        return out


def standardize(vectors: list[StylometricVector]) -> tuple[list[np.ndarray], FeatureScaler]:
    """Zero-mean unit-variance columns; constant columns map to 0."""
    if not vectors:
        raise ValueError("standardize requires at least one vector")
    matrix = np.stack([v.as_array() for v in vectors])
    mean = matrix.mean(axis=0)
    std = matrix.std(axis=0)
    scaler = FeatureScaler(mean=mean, std=std)
    return [scaler.apply(v) for v in vectors], scaler
