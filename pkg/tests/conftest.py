from importlib import resources
from pathlib import Path

import pytest

from lrmkit.keywords import bundled_stoplist
from lrmkit.lexicon import bundled_lexicon
from lrmkit.lrm_format import parse_lrm

TESTS = Path(__file__).parent
FIXTURE_DIR = Path(str(resources.files("lrmkit").joinpath("data/fixtures")))
FIXTURE_FILE = FIXTURE_DIR / "red_river_valley.lrm"
FULL_LYRICS = TESTS / "fixtures" / "red_river_valley_lyrics.txt"

# Word-level rows of the published example: (word, keyword flag, printed beat code).
WORD_ROWS = [
    ("from", 0, 0), ("this", 0, 0), ("valley", 1, 1), ("they", 0, 0), ("say", 1, 1), ("you", 0, 2),
    ("are", 0, 0), ("going", 1, 1), ("we", 0, 0), ("shall", 0, 0), ("miss", 1, 1), ("your", 0, 2),
    ("bright", 1, 0), ("eyes", 1, 1), ("and", 0, 2), ("sweet", 1, 0), ("smile", 1, 1),
]

# Syllable-level rows of the published example: (syllable, stress flag, printed beat code).
SYLLABLE_ROWS = [
    ("from", 1, 0), ("this", 1, 0), ("val-", 1, 1), ("ley", 0, 2), ("they", 1, 1), ("say", 1, 1),
    ("you", 1, 2), ("are", 1, 0), ("go-", 1, 1), ("ing", 0, 0), ("we", 1, 0), ("shall", 1, 0),
    ("miss", 1, 1), ("your", 1, 2), ("bright", 1, 0), ("eyes", 1, 1), ("and", 1, 2), ("sweet", 1, 0),
    ("smile", 1, 1),
]

# Published derived score: (pitch, duration, beat, word); None is a dashed measure line.
SCORE_ROWS = [
    ("C4", "4", "0", "from"), ("C4", "4", "0", "this"), None,
    ("C4", "2", "1", "valley"), ("C4", "4", "2", ""), ("C4", "4", "0", "they"), None,
    ("C4", "2", "1", "say"), ("C4", "4", "2", "you"), ("C4", "4", "0", "are"), None,
    ("C4", "4", "1", "going"), ("C4", "2.5", "0", ""), None,
    ("C4", "2", "0", ""), ("C4", "4", "0", "we"), ("C4", "4", "0", "shall"), None,
    ("C4", "2", "1", "miss"), ("C4", "4", "2", "your"), ("C4", "4", "0", "bright"), None,
    ("C4", "2", "1", "eyes"), ("C4", "4", "2", "and"), ("C4", "4", "0", "sweet"), None,
    ("C4", "1", "1", "smile"),
]

KEYWORD_FLAGS = [bool(kw) for _, kw, _ in WORD_ROWS]


@pytest.fixture(scope="session")
def fixture_text():
    return FIXTURE_FILE.read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def fixture_song(fixture_text):
    return parse_lrm(fixture_text)


@pytest.fixture(scope="session")
def lexicon():
    return bundled_lexicon()


@pytest.fixture(scope="session")
def stoplist():
    return bundled_stoplist()


@pytest.fixture(scope="session")
def full_lyrics():
    return FULL_LYRICS.read_text(encoding="utf-8")


# Verdict lines appended by the acceptance tests, repeated in the terminal summary.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
