"""Lookalike address detection against a known-contact set.

Addresses are compared through a normalized "skeleton": case-folded, dots
stripped from the local part, and confusable characters mapped to their
plain-ascii targets.  The homoglyph table ships as a versioned data file
(``data/homoglyphs.json``) so it can grow without code changes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .errors import MalformedAddress
from .message import is_valid_address

TECHNIQUE_DOT = "dot_insertion"
TECHNIQUE_HOMOGLYPH = "homoglyph_substitution"
TECHNIQUE_EDIT = "edit_distance"
TECHNIQUE_DOMAIN = "domain_swap"

VERDICT_EXACT = "exact_known"
VERDICT_LOOKALIKE = "lookalike_of"
VERDICT_UNKNOWN = "unknown"

DEFAULT_THRESHOLD = 1


def _load_homoglyphs() -> tuple[dict[str, str], dict[str, str]]:
    raw = resources.files("fourdigit.data").joinpath("homoglyphs.json").read_text("utf-8")
    doc = json.loads(raw)
    return dict(doc["multi"]), dict(doc["single"])


MULTI_HOMOGLYPHS, SINGLE_HOMOGLYPHS = _load_homoglyphs()


@dataclass(frozen=True)
class Evidence:
    technique: str
    detail: str


@dataclass(frozen=True)
class LookalikeReport:
    address: str
    verdict: str
    match: str | None = None
    evidence: tuple[Evidence, ...] = ()
    distance: int = 0

    def as_dict(self) -> dict:
        return {
            "address": self.address,
            "verdict": self.verdict,
            "match": self.match,
            "evidence": [
                {"technique": e.technique, "detail": e.detail} for e in self.evidence
            ],
            "distance": self.distance,
        }


def _apply_homoglyphs(text: str) -> str:
    for seq, target in MULTI_HOMOGLYPHS.items():
        text = text.replace(seq, target)
    return text.translate(str.maketrans(SINGLE_HOMOGLYPHS))


def skeleton(address: str) -> str:
    """Normalized comparison form: lowercase, local dots removed, homoglyphs folded."""
    if not is_valid_address(address):
        raise MalformedAddress(address)
    local, domain = address.lower().split("@")
    # an all-dot local part must stay non-empty for the result to remain an address
    local = local.replace(".", "") or local
    return f"{_apply_homoglyphs(local)}@{_apply_homoglyphs(domain)}"


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance, two-row dynamic programming."""
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            current.append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost))
        previous = current
    return previous[-1]


def _gather_evidence(address: str, contact: str, distance: int) -> tuple[Evidence, ...]:
    evidence: list[Evidence] = []
    addr_local, addr_domain = address.lower().split("@")
    contact_local, contact_domain = contact.lower().split("@")

    if (
        addr_domain == contact_domain
        and addr_local != contact_local
        and addr_local.replace(".", "") == contact_local.replace(".", "")
    ):
        evidence.append(Evidence(
            technique=TECHNIQUE_DOT,
            detail=f"local part {addr_local!r} matches {contact_local!r} after removing dots",
        ))

    if distance == 0 and skeleton(address) == skeleton(contact):
        dotless_a = addr_local.replace(".", "") + "@" + addr_domain
        dotless_c = contact_local.replace(".", "") + "@" + contact_domain
        if dotless_a != dotless_c:
            evidence.append(Evidence(
                technique=TECHNIQUE_HOMOGLYPH,
                detail=f"{address!r} maps to the same skeleton as {contact!r}",
            ))

    if distance >= 1:
        evidence.append(Evidence(
            technique=TECHNIQUE_EDIT,
            detail=f"skeleton edit distance {distance} from {contact!r}",
        ))

    skel_addr_local, skel_addr_domain = skeleton(address).split("@")
    skel_contact_local, skel_contact_domain = skeleton(contact).split("@")
    if skel_addr_local == skel_contact_local and skel_addr_domain != skel_contact_domain:
        evidence.append(Evidence(
            technique=TECHNIQUE_DOMAIN,
            detail=f"same local part as {contact!r} on domain {addr_domain!r}",
        ))

    return tuple(evidence)


def analyze_address(
    address: str,
    contacts: set[str] | frozenset[str],
    threshold: int = DEFAULT_THRESHOLD,
) -> LookalikeReport:
    """Classify an address as exact_known, lookalike_of a contact, or unknown.

    Exact matching is case-insensitive (mail addresses are case-insensitive
    in deployment).  A non-exact address is a lookalike when its skeleton is
    within ``threshold`` edits of some contact's skeleton; ties are broken
    lexicographically by contact address.
    """
    skel = skeleton(address)
    lowered = address.lower()
    for contact in contacts:
        if not is_valid_address(contact):
            raise MalformedAddress(contact)

    exact = any(contact.lower() == lowered for contact in contacts)

    best_contact: str | None = None
    best_distance: int | None = None
    for contact in sorted(contacts):
        d = edit_distance(skel, skeleton(contact))
        if best_distance is None or d < best_distance:
            best_contact, best_distance = contact, d

    if exact:
        return LookalikeReport(address=address, verdict=VERDICT_EXACT, distance=0)

    if best_contact is not None and best_distance is not None and best_distance <= threshold:
        return LookalikeReport(
            address=address,
            verdict=VERDICT_LOOKALIKE,
            match=best_contact,
            evidence=_gather_evidence(address, best_contact, best_distance),
            distance=best_distance,
        )

    return LookalikeReport(
        address=address,
        verdict=VERDICT_UNKNOWN,
        distance=best_distance if best_distance is not None else 0,
    )


def load_contacts(text: str) -> set[str]:
    """Parse a contacts file: one address per line, '#' comments."""
    contacts: set[str] = set()
    for line in text.splitlines():
        entry = line.split("#", 1)[0].strip()
        if not entry:
            continue
        if not is_valid_address(entry):
            raise MalformedAddress(entry)
        contacts.add(entry)
    return contacts
