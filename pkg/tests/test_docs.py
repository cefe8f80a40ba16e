"""Keeps the shipped manifest artifacts honest against the in-code manifest."""

import json
import re
from importlib import resources
from pathlib import Path

from fourdigit.stylometry import FEATURE_MANIFEST, manifest_as_dicts, manifest_hash

DOC = Path(__file__).resolve().parent.parent / "feature_dictionary.md"


def _doc_rows():
    rows = []
    for line in DOC.read_text(encoding="utf-8").splitlines():
        match = re.match(r"\|\s*(\d+)\s*\|\s*`([^`]+)`\s*\|\s*(\w+)\s*\|", line)
        if match:
            rows.append((int(match.group(1)), match.group(2), match.group(3)))
    return rows


def test_doc_table_matches_manifest():
    rows = _doc_rows()
    assert len(rows) == 97
    for spec, (index, name, category) in zip(FEATURE_MANIFEST, rows):
        assert (spec.index, spec.name, spec.category) == (index, name, category)


def test_doc_pins_current_manifest_hash():
    assert manifest_hash() in DOC.read_text(encoding="utf-8")


def test_shipped_manifest_file_matches_code():
    raw = resources.files("fourdigit.data").joinpath("feature_manifest.json").read_text("utf-8")
    doc = json.loads(raw)
    assert doc["hash"] == manifest_hash()
    assert doc["features"] == manifest_as_dicts()
