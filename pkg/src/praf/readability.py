"""SMOG readability: sentence segmentation, syllable counting, grade, bands, points.

The grade uses the standard SMOG regression

    grade = 1.0430 * sqrt(polysyllables * 30 / sentences) + 3.1291

where a polysyllable is a word of three or more syllables. The 30-sentence
normalization makes the grade length-independent. Grades map onto six
difficulty bands, which convert to the 1..6 points used by the usability
element of the risk rubric.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum

from .errors import NonAlphabetic, NoSentences

SMOG_SLOPE = 1.0430
SMOG_INTERCEPT = 3.1291

# Band boundaries fitted against the bundled reference audit (see
# scripts/fit_band_thresholds.py for the feasible intervals).
BAND_EDGES = (9.5, 10.5, 11.5, 12.5, 13.5)


class ReadabilityBand(Enum):
    SLIGHTLY_DIFFICULT = "SD"
    SOMEWHAT_DIFFICULT = "SWD"
    FAIRLY_DIFFICULT = "FD"
    DIFFICULT = "D"
    VERY_DIFFICULT = "VD"
    PROFESSIONAL = "P"

    @property
    def code(self) -> str:
        return self.value

    @property
    def label(self) -> str:
        return self.name.replace("_", " ").title()


_BAND_ORDER = (
    ReadabilityBand.SLIGHTLY_DIFFICULT,
    ReadabilityBand.SOMEWHAT_DIFFICULT,
    ReadabilityBand.FAIRLY_DIFFICULT,
    ReadabilityBand.DIFFICULT,
    ReadabilityBand.VERY_DIFFICULT,
    ReadabilityBand.PROFESSIONAL,
)

# Easier bands earn more usability points: Professional=1 .. Slightly Difficult=6.
_BAND_POINTS = {
    ReadabilityBand.PROFESSIONAL: 1,
    ReadabilityBand.VERY_DIFFICULT: 2,
    ReadabilityBand.DIFFICULT: 3,
    ReadabilityBand.FAIRLY_DIFFICULT: 4,
    ReadabilityBand.SOMEWHAT_DIFFICULT: 5,
    ReadabilityBand.SLIGHTLY_DIFFICULT: 6,
}


def band(grade: float) -> ReadabilityBand:
    """Map a SMOG grade to its difficulty band (right-open intervals)."""
    if grade < 0:
        raise ValueError(f"grade must be non-negative, got {grade}")
    for edge, b in zip(BAND_EDGES, _BAND_ORDER):
        if grade < edge:
            return b
    return ReadabilityBand.PROFESSIONAL


def readability_points(b: ReadabilityBand) -> int:
    return _BAND_POINTS[b]


@dataclass(frozen=True)
class ReadabilityResult:
    smog_grade: float
    sentence_count: int
    polysyllable_count: int
    band: ReadabilityBand
    points: int

    def __post_init__(self):
        if self.points != readability_points(self.band):
            raise ValueError("points do not match band")
        if self.smog_grade < SMOG_INTERCEPT - 1e-9:
            raise ValueError("SMOG grade below formula intercept")
        if self.sentence_count > 0:
            expected = smog_from_counts(self.sentence_count, self.polysyllable_count)
            if abs(expected - self.smog_grade) > 1e-9:
                raise ValueError("grade inconsistent with counts")

    @classmethod
    def from_grade(cls, grade: float) -> "ReadabilityResult":
        """Wrap a pre-computed grade (e.g. reference data) without counts."""
        b = band(grade)
        return cls(
            smog_grade=float(grade),
            sentence_count=0,
            polysyllable_count=0,
            band=b,
            points=readability_points(b),
        )


def smog_from_counts(sentences: int, polysyllables: int) -> float:
    """SMOG grade from raw counts; sentences must be >= 1."""
    if sentences < 1:
        raise NoSentences("SMOG requires at least one sentence")
    return SMOG_SLOPE * math.sqrt(polysyllables * 30.0 / sentences) + SMOG_INTERCEPT


# --- sentence segmentation -------------------------------------------------

# Trailing period does not end a sentence after these tokens (lowercased,
# trailing dot stripped, internal dots kept: "u.s." -> "u.s").
ABBREVIATIONS = frozenset({
    "dr", "mr", "mrs", "ms", "prof", "rev", "sr", "jr", "st",
    "inc", "ltd", "llc", "co", "corp", "dept", "assn",
    "vs", "etc", "approx", "est",
    "e.g", "i.e", "eg", "ie", "u.s", "u.k", "u.s.a", "al", "a.m", "p.m",
})

_TERMINATORS = ".!?"
_CLOSERS = "\"'”’)]"
_TERM_OR_CLOSE = _TERMINATORS + _CLOSERS


def _token_before(text: str, i: int) -> str:
    """Word (letters and internal dots) immediately before position i."""
    j = i
    while j > 0 and (text[j - 1].isalpha() or text[j - 1] == "."):
        j -= 1
    return text[j:i].lower().strip(".")


def _boundary_ok(text: str, j: int) -> bool:
    """A terminator run ending at j splits only before an uppercase letter,
    digit, opening quote, or end of text."""
    k = j + 1
    while k < len(text) and text[k] in " \t":
        k += 1
    if k >= len(text) or text[k] == "\n":
        return True
    c = text[k]
    return c.isupper() or c.isdigit() or c in "\"'“‘("


def sentence_spans(text: str) -> list[tuple[int, int]]:
    """Deterministic sentence boundaries as (start, end) offsets.

    Splits on . ! ? and on hard newlines; a period does not split after a
    known abbreviation or inside a decimal number. Whitespace-only segments
    are dropped.
    """
    spans: list[tuple[int, int]] = []

    def emit(a: int, b: int) -> None:
        while a < b and text[a].isspace():
            a += 1
        while b > a and text[b - 1].isspace():
            b -= 1
        if b > a:
            spans.append((a, b))

    start = 0
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            emit(start, i)
            start = i + 1
        elif c in _TERMINATORS:
            j = i
            while j + 1 < n and text[j + 1] in _TERM_OR_CLOSE:
                j += 1
            split = True
            if c == ".":
                before = _token_before(text, i)
                if 0 < i < n - 1 and text[i - 1].isdigit() and text[i + 1].isdigit():
                    split = False  # decimal like 3.5
                elif before in ABBREVIATIONS or len(before) == 1:
                    split = False  # known abbreviation or an initial ("J. Smith")
            if split and not _boundary_ok(text, j):
                split = False
            if split:
                emit(start, j + 1)
                start = j + 1
            i = j
        i += 1
    emit(start, n)
    return spans


def segment_sentences(text: str) -> list[str]:
    return [text[a:b] for a, b in sentence_spans(text)]


# --- syllables --------------------------------------------------------------

_VOWELS = set("aeiouy")


def count_syllables(word: str) -> int:
    """Heuristic syllable count: maximal vowel groups (a e i o u y), minus one
    for a terminal silent 'e' (kept when the word ends in consonant + 'le');
    never less than one. Raises NonAlphabetic for tokens without letters."""
    letters = [c for c in word.lower() if c.isalpha()]
    if not letters:
        raise NonAlphabetic(f"no letters in token {word!r}")
    groups = 0
    prev_vowel = False
    for c in letters:
        is_vowel = c in _VOWELS
        if is_vowel and not prev_vowel:
            groups += 1
        prev_vowel = is_vowel
    if groups > 1 and letters[-1] == "e" and len(letters) >= 2 and letters[-2] not in _VOWELS:
        # terminal silent e; "-le" after a consonant keeps its syllable (table)
        if not (letters[-2] == "l" and len(letters) >= 3 and letters[-3] not in _VOWELS):
            groups -= 1
    return max(groups, 1)


_WORD_RE = re.compile(r"[A-Za-z]+(?:['’-][A-Za-z]+)*")


def words(text: str) -> list[str]:
    """Alphabetic tokens (with internal apostrophes/hyphens)."""
    return _WORD_RE.findall(text)


def count_polysyllables(text: str) -> int:
    return sum(1 for w in words(text) if count_syllables(w) >= 3)


def smog_grade(text: str) -> ReadabilityResult:
    """Full SMOG computation over plain text."""
    sentences = sentence_spans(text)
    if not sentences:
        raise NoSentences("no sentences in text")
    poly = count_polysyllables(text)
    grade = smog_from_counts(len(sentences), poly)
    b = band(grade)
    return ReadabilityResult(
        smog_grade=grade,
        sentence_count=len(sentences),
        polysyllable_count=poly,
        band=b,
        points=readability_points(b),
    )
