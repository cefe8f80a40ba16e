import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fourdigit.errors import MalformedAddress
from fourdigit.identity import (
    TECHNIQUE_DOT,
    TECHNIQUE_EDIT,
    TECHNIQUE_HOMOGLYPH,
    VERDICT_EXACT,
    VERDICT_LOOKALIKE,
    VERDICT_UNKNOWN,
    analyze_address,
    edit_distance,
    load_contacts,
    skeleton,
)
from oracles import oracle_levenshtein

ADDRESS = st.from_regex(r"[a-z0-9.]{1,10}@[a-z0-9]{1,8}\.[a-z]{2,4}", fullmatch=True).filter(
    lambda a: a.count("@") == 1 and a.split("@")[0] != ""
)


class TestSkeleton:
    def test_paper_pair_dot_removal(self):
        assert skeleton("aga.ga@gmail.com") == "agaga@gmail.com"

    def test_case_folding(self):
        assert skeleton("ALICE@Example.COM") == "alice@example.com"

    def test_homoglyph_table(self):
        # hand-applied table: 1->l in local and domain
        assert skeleton("a1ice@examp1e.com") == "alice@example.com"
        assert skeleton("b0b@site.org") == "bob@site.org"
        assert skeleton("ke3per@mai5.net") == "keeper@mais.net"
        assert skeleton("arnie@corp.com") == "amie@corp.com"  # rn -> m
        assert skeleton("kathvv@w.co") == "kathw@w.co"        # vv -> w

    def test_domain_keeps_dots(self):
        assert skeleton("a@b.c.d") == "a@b.c.d"

    def test_malformed_rejected(self):
        for bad in ("nodomain", "@x.y", "a@", "two@@ats.com", "sp ace@x.y"):
            with pytest.raises(MalformedAddress):
                skeleton(bad)

    @given(ADDRESS)
    def test_idempotent(self, address):
        once = skeleton(address)
        assert skeleton(once) == once


class TestEditDistance:
    def test_known_values(self):
        assert edit_distance("", "") == 0
        assert edit_distance("abc", "abc") == 0
        assert edit_distance("abc", "abd") == 1
        assert edit_distance("kitten", "sitting") == 3

    @given(st.text(max_size=12), st.text(max_size=12))
    def test_matches_full_matrix_oracle(self, a, b):
        assert edit_distance(a, b) == oracle_levenshtein(a, b)

    def test_1000_random_skeleton_pairs_match_oracle(self):
        rng = random.Random(5150)
        alphabet = "abcdefgh013.rnvv"
        for _ in range(1000):
            local_a = "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 8))).strip(".") or "a"
            local_b = "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 8))).strip(".") or "b"
            a = skeleton(f"{local_a}@dom.com".replace("..", "a"))
            b = skeleton(f"{local_b}@dom.com".replace("..", "b"))
            assert edit_distance(a, b) == oracle_levenshtein(a, b)


class TestAnalyze:
    CONTACTS = {"agaga@gmail.com"}

    def test_paper_lookalike_with_dot_evidence(self):
        report = analyze_address("aga.ga@gmail.com", self.CONTACTS)
        assert report.verdict == VERDICT_LOOKALIKE
        assert report.match == "agaga@gmail.com"
        assert TECHNIQUE_DOT in {e.technique for e in report.evidence}
        assert report.distance == 0

    def test_exact_known(self):
        report = analyze_address("agaga@gmail.com", self.CONTACTS)
        assert report.verdict == VERDICT_EXACT
        assert report.distance == 0
        assert report.evidence == ()

    def test_exact_is_case_insensitive(self):
        report = analyze_address("AGAGA@Gmail.Com", self.CONTACTS)
        assert report.verdict == VERDICT_EXACT

    def test_distant_address_unknown(self):
        report = analyze_address("bob@other.org", self.CONTACTS)
        assert report.verdict == VERDICT_UNKNOWN
        assert report.distance == oracle_levenshtein(
            skeleton("bob@other.org"), skeleton("agaga@gmail.com")
        )

    def test_homoglyph_lookalike(self):
        report = analyze_address("agag4@gmail.com", self.CONTACTS)  # one edit
        assert report.verdict == VERDICT_LOOKALIKE
        assert TECHNIQUE_EDIT in {e.technique for e in report.evidence}

        report = analyze_address("4g4g4@gmail.com", self.CONTACTS)  # three edits
        assert report.verdict == VERDICT_UNKNOWN

        report = analyze_address("agag0@gmail.com", self.CONTACTS)  # 0 -> a? no: 0 -> o
        assert report.distance == 1

    def test_pure_homoglyph_any_count(self):
        # three substitutions (0->o, 1->l, 3->e): skeleton-equal despite edit count
        report = analyze_address("01iv3r@mail.com", {"oliver@mail.com"})
        assert report.verdict == VERDICT_LOOKALIKE
        assert report.distance == 0
        assert TECHNIQUE_HOMOGLYPH in {e.technique for e in report.evidence}

    def test_never_lookalike_of_itself(self):
        report = analyze_address("x@y.zz", {"x@y.zz", "xx@y.zz"})
        assert report.verdict == VERDICT_EXACT

    def test_tie_broken_lexicographically(self):
        contacts = {"ac@dom.com", "ab@dom.com"}  # both distance 1 from "aa"
        report = analyze_address("aa@dom.com", contacts)
        assert report.verdict == VERDICT_LOOKALIKE
        assert report.match == "ab@dom.com"

    @given(ADDRESS, st.sets(ADDRESS, min_size=1, max_size=5))
    def test_verdict_invariant_under_contact_permutation(self, address, contacts):
        baseline = analyze_address(address, contacts)
        for _ in range(3):
            again = analyze_address(address, set(sorted(contacts, reverse=True)))
            assert again.verdict == baseline.verdict
            assert again.match == baseline.match
            assert again.distance == baseline.distance

    @given(ADDRESS, st.sets(ADDRESS, min_size=1, max_size=5))
    def test_report_invariants(self, address, contacts):
        report = analyze_address(address, contacts)
        assert report.distance >= 0
        if report.verdict == VERDICT_EXACT:
            assert report.distance == 0
            assert report.evidence == ()
        if report.verdict == VERDICT_LOOKALIKE:
            assert report.evidence
            assert report.match in contacts

    def test_malformed_contact_rejected(self):
        with pytest.raises(MalformedAddress):
            analyze_address("a@b.cd", {"not-an-address"})


class TestContactsFile:
    def test_comments_and_blanks(self):
        text = "# team\nagaga@gmail.com\n\nbob@x.yz  # partner\n"
        assert load_contacts(text) == {"agaga@gmail.com", "bob@x.yz"}

    def test_bad_entry_raises(self):
        with pytest.raises(MalformedAddress):
            load_contacts("good@x.yz\nbad entry\n")
