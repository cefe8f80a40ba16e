"""Draft parsing and body segmentation.

Input format is a plain-text header block, a blank line, then the body
("RFC-5322-lite").  Recognized headers: From, To (comma-separated), Subject,
Date.  Anything else is ignored; there is no MIME handling.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import MalformedAddress, MissingHeader

SENTENCE_TERMINATORS = frozenset(".!?")

_RECOGNIZED_HEADERS = ("from", "to", "subject", "date")


@dataclass(frozen=True)
class Message:
    """A parsed email draft.

    ``raw_size`` is the byte count of the raw input and is excluded from
    equality: two messages with identical content compare equal regardless
    of the framing they were parsed from.
    """

    sender: str
    recipients: tuple[str, ...]
    subject: str
    body: str
    raw_size: int = field(default=0, compare=False)


@dataclass(frozen=True)
class TextSegmentation:
    lines: tuple[str, ...]
    sentences: tuple[str, ...]
    paragraphs: tuple[str, ...]
    tokens: tuple[str, ...]


def is_valid_address(address: str) -> bool:
    """local@domain with non-empty parts, single '@', no whitespace/controls."""
    if address.count("@") != 1:
        return False
    local, domain = address.split("@")
    if not local or not domain:
        return False
    return not any(ch.isspace() or ord(ch) < 32 for ch in address)


def validate_address(address: str) -> str:
    if not is_valid_address(address):
        raise MalformedAddress(address)
    return address


def normalize_newlines(text: str) -> str:
    return text.replace("\r\n", "\n").replace("\r", "\n")


def parse_message(raw: bytes | str) -> Message:
    """Parse a raw draft into a Message.

    Invalid UTF-8 bytes are replaced, never rejected.  Raises MissingHeader
    for an absent From/To and MalformedAddress for bad address syntax.
    """
    if isinstance(raw, bytes):
        raw_size = len(raw)
        text = raw.decode("utf-8", errors="replace")
    else:
        raw_size = len(raw.encode("utf-8"))
        text = raw
    text = normalize_newlines(text)

    head, sep, body = text.partition("\n\n")
    if not sep:
        body = ""

    headers: dict[str, str] = {}
    for line in head.split("\n"):
        name, colon, value = line.partition(":")
        if not colon:
            continue
        key = name.strip().lower()
        if key in _RECOGNIZED_HEADERS and key not in headers:
            headers[key] = value.strip()

    if "from" not in headers:
        raise MissingHeader("from")
    if "to" not in headers:
        raise MissingHeader("to")

    sender = validate_address(headers["from"])
    recipients = tuple(
        validate_address(part.strip()) for part in headers["to"].split(",")
    )

    return Message(
        sender=sender,
        recipients=recipients,
        subject=headers.get("subject", ""),
        body=body,
        raw_size=raw_size,
    )


def serialize_message(msg: Message) -> str:
    """Render a Message back to the supported on-disk format."""
    return (
        f"From: {msg.sender}\n"
        f"To: {', '.join(msg.recipients)}\n"
        f"Subject: {msg.subject}\n"
        f"\n{msg.body}"
    )


def split_sentences(text: str) -> list[str]:
    """Split on {. ! ?} followed by whitespace or end-of-text.

    Sentences are returned trimmed; whitespace-only fragments are dropped.
    Abbreviations are not special-cased.
    """
    sentences: list[str] = []
    current: list[str] = []
    n = len(text)
    for i, ch in enumerate(text):
        current.append(ch)
        if ch in SENTENCE_TERMINATORS and (i + 1 == n or text[i + 1].isspace()):
            stripped = "".join(current).strip()
            if stripped:
                sentences.append(stripped)
            current = []
    tail = "".join(current).strip()
    if tail:
        sentences.append(tail)
    return sentences


def _is_blank(line: str) -> bool:
    return line.strip() == ""


def split_paragraphs(lines: list[str]) -> list[str]:
    """Group lines into paragraphs.

    A blank line ends the current paragraph; a (non-blank) tab-prefixed line
    starts a new one.  The tab line itself belongs to the paragraph it opens,
    so joining the paragraphs recovers all non-blank content.
    """
    paragraphs: list[str] = []
    current: list[str] = []
    for line in lines:
        if _is_blank(line):
            if current:
                paragraphs.append("\n".join(current))
                current = []
        elif line.startswith("\t") and current:
            paragraphs.append("\n".join(current))
            current = [line]
        else:
            current.append(line)
    if current:
        paragraphs.append("\n".join(current))
    return paragraphs


def segment(body: str) -> TextSegmentation:
    """Total segmentation of a body into lines, sentences, paragraphs, tokens."""
    if body == "":
        return TextSegmentation(lines=(), sentences=(), paragraphs=(), tokens=())
    lines = body.split("\n")
    return TextSegmentation(
        lines=tuple(lines),
        sentences=tuple(split_sentences(body)),
        paragraphs=tuple(split_paragraphs(lines)),
        tokens=tuple(body.split()),
    )
