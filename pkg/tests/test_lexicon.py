import pytest
from hypothesis import given
from hypothesis import strategies as st

from lrmkit.errors import EmptyWord
from lrmkit.lexicon import (
    FALLBACK,
    LEXICON,
    annotate_song,
    choose_pronunciation,
    fallback_syllable_count,
    load_lexicon,
    reconcile,
    stress_label,
    surface_fragments,
    syllabify,
)
from lrmkit.lrm_format import parse_lrm

from conftest import SYLLABLE_ROWS

SMALL = """\
;;; version: test-0.1
;;; a comment line
VALLEY  V AE1 L IY0
SMILE  S M AY1 L
AND  AH0 N D
AND(2)  AE1 N D
READ  R EH1 D  # past tense
READ(2)  R IY1 D
BROKEN
WHAT? W AH1 T
"""


@pytest.fixture(scope="module")
def small():
    return load_lexicon(SMALL)


class TestLoader:
    def test_entries(self, small):
        assert small.lookup("valley") == (("V", "AE1", "L", "IY0"),)
        assert small.lookup("SMILE") == (("S", "M", "AY1", "L"),)
        assert "Valley" in small

    def test_variants_kept_in_order(self, small):
        assert [p[0:2] for p in small.lookup("and")] == [("AH0", "N"), ("AE1", "N")]

    def test_trailing_comment_stripped(self, small):
        assert small.lookup("read")[0] == ("R", "EH1", "D")

    def test_version_and_malformed(self, small):
        assert small.version == "test-0.1"
        assert small.malformed_lines == (9,)
        assert len(small) == 5

    def test_explicit_version_wins(self):
        assert load_lexicon(SMALL, version="x").version == "x"

    def test_unknown_version(self):
        assert load_lexicon("A  AH0\n").version == "unknown"

    def test_bundled(self, lexicon):
        assert lexicon.version == "cmudict-1.1.3-subset"
        assert lexicon.malformed == 0
        assert len(lexicon) > 150


class TestStress:
    @pytest.mark.parametrize("digit, stressed", [(0, False), (1, True), (2, False)])
    def test_label(self, digit, stressed):
        assert stress_label(digit) is stressed

    def test_label_range(self):
        with pytest.raises(ValueError):
            stress_label(3)

    def test_variant_policies(self, small):
        prons = small.lookup("and")
        assert choose_pronunciation(prons, "first") == ("AH0", "N", "D")
        assert choose_pronunciation(prons, "stressed") == ("AE1", "N", "D")

    def test_stressed_policy_keeps_syllable_count(self):
        prons = (("AH0", "B", "AW1", "T"), ("B", "AW1", "T"))
        assert choose_pronunciation(prons) == prons[0]

    def test_unknown_policy(self, small):
        with pytest.raises(ValueError):
            choose_pronunciation(small.lookup("and"), "last")


class TestSyllabify:
    @pytest.mark.parametrize(
        "word, expected",
        [
            ("valley", (("val", True), ("ley", False))),
            ("going", (("go", True), ("ing", False))),
            ("from", (("from", True),)),
            ("Smile", (("smile", True),)),
            ("eyes,", (("eyes", True),)),
        ],
    )
    def test_fixture_words(self, lexicon, word, expected):
        ann = syllabify(word, lexicon)
        assert ann.syllables == expected
        assert ann.source == LEXICON

    def test_first_variant_reduces_and(self, lexicon):
        assert syllabify("and", lexicon, "first").stresses == (False,)
        assert syllabify("and", lexicon).stresses == (True,)

    def test_oov_fallback(self, lexicon):
        ann = syllabify("zorblatt", lexicon)
        assert ann.source == FALLBACK
        assert ann.stresses == (True, False)

    def test_apostrophe_suffix(self, lexicon):
        ann = syllabify("river's", lexicon)
        assert ann.note == "apostrophe-suffix"
        assert ann.pronunciation[-1] == "Z"
        assert ann.stresses == (True, False)

    def test_hyphen_compound(self, lexicon):
        ann = syllabify("red-river", lexicon)
        assert ann.note == "hyphen-compound"
        assert ann.stresses == (True, True, False)

    def test_empty_word(self, lexicon):
        with pytest.raises(EmptyWord):
            syllabify("--", lexicon)

    def test_curly_apostrophe(self, lexicon):
        assert syllabify("river’s", lexicon).note == "apostrophe-suffix"


class TestFallbackCount:
    @pytest.mark.parametrize(
        "word, n",
        [("cat", 1), ("make", 1), ("the", 1), ("banana", 3), ("rhythm", 1), ("queue", 1), ("xyz", 1),
         ("bbb", 1), ("beautiful", 3)],
    )
    def test_counts(self, word, n):
        assert fallback_syllable_count(word) == n

    @given(st.text(alphabet="abcdefghijklmnopqrstuvwxyz", min_size=1, max_size=20))
    def test_at_least_one(self, word):
        assert fallback_syllable_count(word) >= 1


class TestFragments:
    @pytest.mark.parametrize(
        "word, n, parts",
        [("valley", 2, ["val", "ley"]), ("going", 2, ["go", "ing"]), ("mother", 2, ["mo", "ther"]),
         ("tomorrow", 3, ["to", "mor", "row"]), ("smile", 1, ["smile"])],
    )
    def test_split(self, word, n, parts):
        assert surface_fragments(word, n) == parts

    @given(st.text(alphabet="abcdefghijklmnopqrstuvwxyz'", min_size=1, max_size=15), st.integers(1, 5))
    def test_fragments_rebuild_word(self, word, n):
        parts = surface_fragments(word, n)
        assert "".join(parts) == word
        assert len(parts) == n or len(word) < n


class TestReconcile:
    def test_truncate_merges_tail(self, lexicon):
        ann = reconcile(syllabify("tomorrow", lexicon), 2)
        assert [frag for frag, _ in ann.syllables] == ["to", "morrow"]

    def test_pad_unstressed(self, lexicon):
        ann = reconcile(syllabify("smile", lexicon), 3)
        assert ann.stresses == (True, False, False)

    def test_same_count_unchanged(self, lexicon):
        ann = syllabify("valley", lexicon)
        assert reconcile(ann, 2) is ann


class TestAnnotateSong:
    def test_fixture_matches_published_stress(self, fixture_song, lexicon):
        result = annotate_song(fixture_song, lexicon)
        flags = [s for ann in result.annotations for s in ann.stresses]
        assert len(flags) == 19
        assert sum(flags) == 17
        assert flags == [bool(stress) for _, stress, _ in SYLLABLE_ROWS]
        assert result.diagnostics == [] and result.fallback_words == 0

    def test_mismatch_is_reported_and_reconciled(self, lexicon):
        song = parse_lrm("TITLE: T\nTIMESIG: 4 4\nvalley 1 (1)\nqwrtz 1 (2) 0 (2)\n")
        result = annotate_song(song, lexicon, song_id="s")
        assert [(d.code, d.severity) for d in result.diagnostics] == [
            ("syllable-count", "warning"), ("oov-fallback", "info"), ("syllable-count", "warning")
        ]
        assert [len(a) for a in result.annotations] == [1, 2]
        assert result.mismatched_words == 2 and result.fallback_words == 1

    def test_no_letter_word(self, lexicon):
        song = parse_lrm("TITLE: T\nTIMESIG: 4 4\n-- 1 (1)\n")
        result = annotate_song(song, lexicon)
        assert result.diagnostics[0].code == "empty-word"
        assert result.annotations[0].stresses == (False,)
