import json
import math
import random
from pathlib import Path

import pytest

from praf.errors import NonAlphabetic, NoSentences
from praf.readability import (
    ReadabilityBand,
    ReadabilityResult,
    band,
    count_syllables,
    readability_points,
    segment_sentences,
    sentence_spans,
    smog_from_counts,
    smog_grade,
)

DATA = Path(__file__).parent / "data"


class TestSegmentation:
    def test_two_terminators(self):
        assert segment_sentences("We collect data. We share it.") == [
            "We collect data.",
            "We share it.",
        ]

    def test_abbreviation_does_not_terminate(self):
        assert segment_sentences("Dr. Smith retains data.") == ["Dr. Smith retains data."]

    def test_empty(self):
        assert segment_sentences("") == []
        assert segment_sentences("   \n  ") == []

    def test_newline_splits(self):
        assert segment_sentences("Privacy Policy\nWe explain things here.") == [
            "Privacy Policy",
            "We explain things here.",
        ]

    def test_hand_labeled_fixture(self):
        cases = json.loads((DATA / "sentence_fixture.json").read_text())["cases"]
        total = sum(len(c["sentences"]) for c in cases)
        assert total == 50
        for case in cases:
            assert segment_sentences(case["text"]) == case["sentences"], case["text"]

    def test_spans_index_into_text(self):
        text = "First rule. Second rule! Third?"
        for a, b in sentence_spans(text):
            assert 0 <= a < b <= len(text)
            assert text[a:b] == text[a:b].strip()


class TestSyllables:
    @pytest.mark.parametrize(
        "word,expected",
        [("a", 1), ("data", 2), ("encryption", 3), ("table", 2), ("whale", 1),
         ("the", 1), ("one", 1), ("healthcare", 2), ("HIPAA", 2), ("don't", 1)],
    )
    def test_examples(self, word, expected):
        assert count_syllables(word) == expected

    def test_non_alphabetic_rejected(self):
        with pytest.raises(NonAlphabetic):
            count_syllables("42")

    def test_dictionary_fixture_agreement(self):
        fixture = json.loads((DATA / "syllable_words.json").read_text())["words"]
        assert len(fixture) == 200
        agree = sum(1 for w, n in fixture.items() if count_syllables(w) == n)
        assert agree / len(fixture) >= 0.95


class TestSmogFormula:
    def test_intercept(self):
        assert smog_from_counts(30, 0) == 3.1291

    def test_hand_evaluated_points(self):
        # 1.0430 * sqrt(30) + 3.1291 and 1.0430 * sqrt(40) + 3.1291
        assert smog_from_counts(30, 30) == pytest.approx(8.8419, abs=5e-4)
        assert smog_from_counts(45, 60) == pytest.approx(9.7257, abs=5e-4)

    def test_matches_formula_directly(self):
        for s, p in [(7, 3), (120, 240), (1, 0), (33, 5)]:
            assert smog_from_counts(s, p) == pytest.approx(
                1.0430 * math.sqrt(p * 30 / s) + 3.1291, abs=1e-12
            )

    def test_monotone_in_polysyllables(self):
        rng = random.Random(11)
        for _ in range(200):
            s = rng.randint(1, 400)
            p = rng.randint(0, 400)
            assert smog_from_counts(s, p + 1) >= smog_from_counts(s, p)

    def test_zero_sentences_rejected(self):
        with pytest.raises(NoSentences):
            smog_from_counts(0, 5)


class TestGradeOnText:
    def test_thirty_plain_sentences(self):
        text = " ".join(["We do it."] * 30)
        result = smog_grade(text)
        assert result.sentence_count == 30
        assert result.polysyllable_count == 0
        assert result.smog_grade == 3.1291
        assert result.band is ReadabilityBand.SLIGHTLY_DIFFICULT
        assert result.points == 6

    def test_polysyllables_counted(self):
        text = "Encryption and anonymization protect confidentiality."
        result = smog_grade(text)
        assert result.sentence_count == 1
        assert result.polysyllable_count == 3

    def test_empty_text_rejected(self):
        with pytest.raises(NoSentences):
            smog_grade("   ")

    def test_from_grade_wrapper(self):
        r = ReadabilityResult.from_grade(12.8)
        assert r.band is ReadabilityBand.VERY_DIFFICULT
        assert r.points == 2


class TestBands:
    @pytest.mark.parametrize(
        "grade,expected",
        [
            (9.2, ReadabilityBand.SLIGHTLY_DIFFICULT),
            (9.5, ReadabilityBand.SOMEWHAT_DIFFICULT),
            (10.5, ReadabilityBand.FAIRLY_DIFFICULT),
            (11.5, ReadabilityBand.DIFFICULT),
            (12.4, ReadabilityBand.DIFFICULT),
            (12.8, ReadabilityBand.VERY_DIFFICULT),
            (13.5, ReadabilityBand.PROFESSIONAL),
            (14.2, ReadabilityBand.PROFESSIONAL),
        ],
    )
    def test_thresholds(self, grade, expected):
        assert band(grade) is expected

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            band(-0.1)

    def test_points_scale(self):
        assert readability_points(ReadabilityBand.PROFESSIONAL) == 1
        assert readability_points(ReadabilityBand.VERY_DIFFICULT) == 2
        assert readability_points(ReadabilityBand.DIFFICULT) == 3
        assert readability_points(ReadabilityBand.FAIRLY_DIFFICULT) == 4
        assert readability_points(ReadabilityBand.SOMEWHAT_DIFFICULT) == 5
        assert readability_points(ReadabilityBand.SLIGHTLY_DIFFICULT) == 6

    def test_points_anti_monotone_in_grade(self):
        rng = random.Random(3)
        grades = sorted(rng.uniform(0, 20) for _ in range(500))
        points = [readability_points(band(g)) for g in grades]
        assert all(a >= b for a, b in zip(points, points[1:]))

    def test_result_invariants_enforced(self):
        with pytest.raises(ValueError):
            ReadabilityResult(
                smog_grade=12.0,
                sentence_count=0,
                polysyllable_count=0,
                band=ReadabilityBand.DIFFICULT,
                points=5,
            )
        with pytest.raises(ValueError):
            ReadabilityResult(
                smog_grade=2.0,
                sentence_count=0,
                polysyllable_count=0,
                band=ReadabilityBand.SLIGHTLY_DIFFICULT,
                points=6,
            )
