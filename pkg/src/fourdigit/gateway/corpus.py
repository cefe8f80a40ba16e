"""Labeled corpus ingestion from a directory of .eml files.

Layout: <dir>/legitimate/*.eml and <dir>/impersonated/*.eml.  Files are
visited in sorted order; unparseable files are skipped and reported rather
than aborting the run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from ..errors import EmptyCorpus, FourDigitError
from ..message import Message, parse_message, serialize_message

LABEL_DIRS = ("legitimate", "impersonated")


@dataclass
class CorpusLoad:
    samples: list[tuple[Message, str]] = field(default_factory=list)
    skipped: list[tuple[str, str]] = field(default_factory=list)


def ingest_corpus(directory: str | Path) -> CorpusLoad:
    root = Path(directory)
    load = CorpusLoad()
    for label in LABEL_DIRS:
        subdir = root / label
        if not subdir.is_dir():
            continue
        for path in sorted(subdir.glob("*.eml")):
            try:
                msg = parse_message(path.read_bytes())
            except FourDigitError as exc:
                load.skipped.append((str(path), str(exc)))
                continue
            load.samples.append((msg, label))
    if not load.samples:
        raise EmptyCorpus(f"no parseable .eml files under {root}/{{legitimate,impersonated}}")
    return load


def write_corpus(directory: str | Path, samples: list[tuple[Message, str]]) -> int:
    """Materialize labeled messages as .eml files (inverse of ingest_corpus)."""
    root = Path(directory)
    counters = {label: 0 for label in LABEL_DIRS}
    for label in LABEL_DIRS:
        (root / label).mkdir(parents=True, exist_ok=True)
    for msg, label in samples:
        n = counters[label]
        counters[label] += 1
        (root / label / f"{n:05d}.eml").write_text(serialize_message(msg), encoding="utf-8")
    return sum(counters.values())
