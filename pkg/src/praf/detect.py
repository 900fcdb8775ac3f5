"""Rule-based detection of regulation mentions and privacy principles.

Verdicts are tri-state (yes / partial / no) and every positive verdict from a
detector carries evidence spans that re-match the rule which produced them.
Human annotations override detector verdicts via :func:`apply_overrides`.

Rule files map each dimension to ``{"strong": [...], "weak": [...],
"thresholds": {...}}``. Patterns are case-insensitive phrases; a trailing
``*`` on a word matches any suffix ("encrypt*" hits "encrypted"), and
``a ~ b`` requires both sub-patterns within one sentence. For the language
detectors, ``ambiguous_language.strong`` holds the hedge terms and
``vague_commitments`` uses ``strong`` for generic assurances with ``weak``
for the concrete-mechanism terms that defuse them.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Mapping

from .errors import MalformedRules, MissingFile, NoSentences, UnknownDimension, UnsupportedDimension
from .readability import sentence_spans


class Verdict(Enum):
    YES = "yes"
    PARTIAL = "partial"
    NO = "no"


class DetectionDimension(Enum):
    HIPAA_MENTION = "hipaa_mention"
    GDPR_MENTION = "gdpr_mention"
    OTHER_REGULATION = "other_regulation"
    DATA_MINIMIZATION = "data_minimization"
    DATA_ENCRYPTION = "data_encryption"
    ACCESS_CONTROLS = "access_controls"
    CONSENT_REQUIREMENTS = "consent_requirements"
    RETENTION_TIME = "retention_time"
    BREACH_PROTOCOL = "breach_protocol"
    AMBIGUOUS_LANGUAGE = "ambiguous_language"
    VAGUE_COMMITMENTS = "vague_commitments"
    ACCESSIBILITY_ACCOMMODATIONS = "accessibility_accommodations"
    THIRD_PARTY_SHARING = "third_party_sharing"


# Table column order: regulations, key principles, limitations/gaps.
DIMENSION_ORDER = (
    DetectionDimension.HIPAA_MENTION,
    DetectionDimension.GDPR_MENTION,
    DetectionDimension.OTHER_REGULATION,
    DetectionDimension.DATA_MINIMIZATION,
    DetectionDimension.DATA_ENCRYPTION,
    DetectionDimension.ACCESS_CONTROLS,
    DetectionDimension.CONSENT_REQUIREMENTS,
    DetectionDimension.RETENTION_TIME,
    DetectionDimension.BREACH_PROTOCOL,
    DetectionDimension.AMBIGUOUS_LANGUAGE,
    DetectionDimension.VAGUE_COMMITMENTS,
    DetectionDimension.ACCESSIBILITY_ACCOMMODATIONS,
    DetectionDimension.THIRD_PARTY_SHARING,
)

REGULATION_DIMENSIONS = (
    DetectionDimension.HIPAA_MENTION,
    DetectionDimension.GDPR_MENTION,
    DetectionDimension.OTHER_REGULATION,
)

PRINCIPLE_DIMENSIONS = (
    DetectionDimension.DATA_MINIMIZATION,
    DetectionDimension.DATA_ENCRYPTION,
    DetectionDimension.ACCESS_CONTROLS,
    DetectionDimension.CONSENT_REQUIREMENTS,
    DetectionDimension.RETENTION_TIME,
    DetectionDimension.BREACH_PROTOCOL,
    DetectionDimension.THIRD_PARTY_SHARING,
    DetectionDimension.ACCESSIBILITY_ACCOMMODATIONS,
)

# Canonical display names for matched regulation patterns.
REGULATION_ALIASES = {
    "ccpa": "CCPA",
    "california consumer privacy act": "CCPA",
    "eea": "EEA",
    "european economic area": "EEA",
    "pipeda": "PIPEDA",
    "personal information protection and electronic documents act": "PIPEDA",
    "data protection act": "Data Protection Act",
    "data protection law*": "data protection laws",
    "lgpd": "LGPD",
    "privacy shield": "Privacy Shield",
}


@dataclass(frozen=True)
class EvidenceSpan:
    """Character offsets into the source text plus the rule that matched."""

    start: int
    end: int
    rule_id: str


@dataclass(frozen=True)
class Finding:
    dimension: DetectionDimension
    verdict: Verdict
    evidence: tuple[EvidenceSpan, ...] = ()
    detail: Mapping | None = None
    manual: bool = False

    def __post_init__(self):
        if not self.manual:
            if self.verdict is Verdict.NO and self.evidence:
                raise ValueError(f"{self.dimension.value}: verdict no with evidence")
            if self.verdict is not Verdict.NO and not self.evidence:
                raise ValueError(f"{self.dimension.value}: positive verdict without evidence")


@dataclass(frozen=True)
class CompiledPattern:
    raw: str
    rule_id: str
    regex: re.Pattern | None            # plain phrase
    parts: tuple[re.Pattern, ...] = ()  # proximity sub-patterns (all in one sentence)

    def matches_in(self, text: str) -> bool:
        """True when the pattern re-matches inside the given text slice."""
        if self.regex is not None:
            return self.regex.search(text) is not None
        return all(p.search(text) for p in self.parts)


def _phrase_regex(phrase: str) -> re.Pattern:
    words = phrase.split()
    if not words:
        raise MalformedRules(f"empty pattern {phrase!r}")
    pieces = []
    for w in words:
        if w.endswith("*"):
            pieces.append(re.escape(w[:-1]) + r"\w*")
        else:
            pieces.append(re.escape(w))
    return re.compile(r"\b" + r"\s+".join(pieces) + r"\b", re.IGNORECASE)


def compile_pattern(raw: str, rule_id: str) -> CompiledPattern:
    try:
        if "~" in raw:
            parts = tuple(_phrase_regex(p.strip()) for p in raw.split("~"))
            if len(parts) < 2:
                raise MalformedRules(f"proximity pattern needs two sides: {raw!r}")
            return CompiledPattern(raw=raw, rule_id=rule_id, regex=None, parts=parts)
        return CompiledPattern(raw=raw, rule_id=rule_id, regex=_phrase_regex(raw))
    except re.error as exc:
        raise MalformedRules(f"pattern {raw!r} does not compile: {exc}") from exc


@dataclass(frozen=True)
class DimensionRules:
    strong: tuple[CompiledPattern, ...]
    weak: tuple[CompiledPattern, ...]
    thresholds: Mapping[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class RuleSet:
    by_dimension: Mapping[DetectionDimension, DimensionRules]

    def __post_init__(self):
        for dim in DetectionDimension:
            rules = self.by_dimension.get(dim)
            if rules is None or not (rules.strong or rules.weak):
                raise MalformedRules(f"dimension {dim.value} has no rules")

    def rules_for(self, dim: DetectionDimension) -> DimensionRules:
        return self.by_dimension[dim]


def load_rules(path: str | Path) -> RuleSet:
    path = Path(path)
    if not path.exists():
        raise MissingFile(f"rules file not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise MalformedRules(f"rules file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise MalformedRules(f"rules file {path} must hold an object")
    known = {d.value: d for d in DetectionDimension}
    by_dim = {}
    for key, spec in data.items():
        dim = known.get(key)
        if dim is None:
            raise MalformedRules(f"unknown dimension {key!r} in {path}")
        if not isinstance(spec, dict):
            raise MalformedRules(f"dimension {key}: expected an object")
        strong = spec.get("strong", [])
        weak = spec.get("weak", [])
        thresholds = spec.get("thresholds", {})
        if not isinstance(strong, list) or not isinstance(weak, list):
            raise MalformedRules(f"dimension {key}: strong/weak must be lists")
        patterns = []
        for i, raw in enumerate(strong + weak):
            patterns.append(compile_pattern(raw, f"{key}:{i}"))
        n_strong = len(strong)
        by_dim[dim] = DimensionRules(
            strong=tuple(patterns[:n_strong]),
            weak=tuple(patterns[n_strong:]),
            thresholds=thresholds,
        )
    return RuleSet(by_dimension=by_dim)


def default_rules_path() -> Path:
    return Path(__file__).parent / "data" / "rules.json"


def _pattern_spans(pattern: CompiledPattern, text: str,
                   sentences: list[tuple[int, int]]) -> list[EvidenceSpan]:
    """All evidence spans for one pattern; proximity patterns yield the covering
    span of their sub-matches within each sentence where all sides occur."""
    spans: list[EvidenceSpan] = []
    if pattern.regex is not None:
        for m in pattern.regex.finditer(text):
            spans.append(EvidenceSpan(m.start(), m.end(), pattern.rule_id))
        return spans
    for a, b in sentences:
        segment = text[a:b]
        hits = [p.search(segment) for p in pattern.parts]
        if all(hits):
            start = a + min(h.start() for h in hits)
            end = a + max(h.end() for h in hits)
            spans.append(EvidenceSpan(start, end, pattern.rule_id))
    return spans


def _collect(patterns: tuple[CompiledPattern, ...], text: str,
             sentences: list[tuple[int, int]]) -> tuple[tuple[EvidenceSpan, ...], list[str]]:
    spans: list[EvidenceSpan] = []
    matched: list[str] = []
    for pat in patterns:
        found = _pattern_spans(pat, text, sentences)
        if found:
            matched.append(pat.raw)
            spans.extend(found)
    spans.sort(key=lambda s: (s.start, s.end, s.rule_id))
    return tuple(spans), matched


def detect_regulations(text: str, rules: RuleSet) -> list[Finding]:
    """Findings for the three regulation dimensions, in column order."""
    sentences = sentence_spans(text)
    findings = []
    for dim in REGULATION_DIMENSIONS:
        dr = rules.rules_for(dim)
        strong_spans, matched = _collect(dr.strong, text, sentences)
        if strong_spans:
            detail = None
            if dim is DetectionDimension.OTHER_REGULATION:
                names = sorted({REGULATION_ALIASES.get(raw.lower(), raw) for raw in matched})
                detail = {"regulations": names}
            findings.append(Finding(dim, Verdict.YES, strong_spans, detail))
            continue
        weak_spans, _ = _collect(dr.weak, text, sentences)
        if weak_spans:
            findings.append(Finding(dim, Verdict.PARTIAL, weak_spans))
        else:
            findings.append(Finding(dim, Verdict.NO))
    return findings


_DURATION_RE = re.compile(r"\b(\d+)\s*(day|week|month|year)s?\b", re.IGNORECASE)
_DAYS_PER_UNIT = {"day": 1, "week": 7, "month": 30, "year": 365}


def _retention_detail(text: str, spans: tuple[EvidenceSpan, ...],
                      sentences: list[tuple[int, int]]) -> Mapping | None:
    """Duration found in any sentence that holds a retention match."""
    for a, b in sentences:
        if any(a <= s.start < b for s in spans):
            m = _DURATION_RE.search(text[a:b])
            if m:
                value = int(m.group(1))
                unit = m.group(2).lower()
                return {
                    "duration_value": value,
                    "duration_unit": unit,
                    "duration_days": value * _DAYS_PER_UNIT[unit],
                }
    return None


def detect_principle(text: str, dimension: DetectionDimension, rules: RuleSet) -> Finding:
    """Detect one of the eight principle dimensions.

    Strong rules assert an explicit commitment (yes); weak rules alone read as
    hedged coverage (partial). Retention findings carry an extracted duration
    when a number+unit appears near the retention language.
    """
    if dimension not in PRINCIPLE_DIMENSIONS:
        raise UnsupportedDimension(
            f"{dimension.value} is not a principle dimension; use its dedicated detector"
        )
    sentences = sentence_spans(text)
    dr = rules.rules_for(dimension)
    strong_spans, _ = _collect(dr.strong, text, sentences)
    if strong_spans:
        detail = None
        if dimension is DetectionDimension.RETENTION_TIME:
            detail = _retention_detail(text, strong_spans, sentences)
        return Finding(dimension, Verdict.YES, strong_spans, detail)
    weak_spans, _ = _collect(dr.weak, text, sentences)
    if weak_spans:
        return Finding(dimension, Verdict.PARTIAL, weak_spans)
    return Finding(dimension, Verdict.NO)


def detect_ambiguity(text: str, rules: RuleSet) -> Finding:
    """Hedge density over sentences; evidence spans are the hedged sentences."""
    sentences = sentence_spans(text)
    if not sentences:
        raise NoSentences("ambiguity detection needs at least one sentence")
    dr = rules.rules_for(DetectionDimension.AMBIGUOUS_LANGUAGE)
    partial_at = float(dr.thresholds.get("partial_density", 0.15))
    yes_at = float(dr.thresholds.get("yes_density", 0.35))
    spans: list[EvidenceSpan] = []
    for a, b in sentences:
        segment = text[a:b]
        for pat in dr.strong:
            if pat.matches_in(segment):
                spans.append(EvidenceSpan(a, b, pat.rule_id))
                break
    density = len(spans) / len(sentences)
    detail = {"hedged_sentences": len(spans), "sentences": len(sentences),
              "density": round(density, 4)}
    if density >= yes_at:
        return Finding(DetectionDimension.AMBIGUOUS_LANGUAGE, Verdict.YES, tuple(spans), detail)
    if density >= partial_at:
        return Finding(DetectionDimension.AMBIGUOUS_LANGUAGE, Verdict.PARTIAL, tuple(spans), detail)
    return Finding(DetectionDimension.AMBIGUOUS_LANGUAGE, Verdict.NO, (), detail)


def detect_vague_commitments(text: str, rules: RuleSet) -> Finding:
    """Generic security assurances with no concrete mechanism in the same sentence."""
    sentences = sentence_spans(text)
    dr = rules.rules_for(DetectionDimension.VAGUE_COMMITMENTS)
    yes_at = int(dr.thresholds.get("yes_sentences", 3))
    spans: list[EvidenceSpan] = []
    for a, b in sentences:
        segment = text[a:b]
        hit = next((p for p in dr.strong if p.matches_in(segment)), None)
        if hit is None:
            continue
        if any(mech.matches_in(segment) for mech in dr.weak):
            continue  # names a concrete safeguard, not vague
        spans.append(EvidenceSpan(a, b, hit.rule_id))
    detail = {"vague_sentences": len(spans)}
    if len(spans) >= yes_at:
        return Finding(DetectionDimension.VAGUE_COMMITMENTS, Verdict.YES, tuple(spans), detail)
    if spans:
        return Finding(DetectionDimension.VAGUE_COMMITMENTS, Verdict.PARTIAL, tuple(spans), detail)
    return Finding(DetectionDimension.VAGUE_COMMITMENTS, Verdict.NO, (), detail)


def detect_all(text: str, rules: RuleSet) -> list[Finding]:
    """All thirteen findings in table column order."""
    by_dim = {f.dimension: f for f in detect_regulations(text, rules)}
    for dim in PRINCIPLE_DIMENSIONS:
        by_dim[dim] = detect_principle(text, dim, rules)
    by_dim[DetectionDimension.AMBIGUOUS_LANGUAGE] = detect_ambiguity(text, rules)
    by_dim[DetectionDimension.VAGUE_COMMITMENTS] = detect_vague_commitments(text, rules)
    return [by_dim[dim] for dim in DIMENSION_ORDER]


def no_findings() -> list[Finding]:
    """All-no findings, used for policies with no analyzable text."""
    return [Finding(dim, Verdict.NO) for dim in DIMENSION_ORDER]


def apply_overrides(findings: list[Finding], overrides: Mapping[DetectionDimension, Verdict]) -> list[Finding]:
    """Replace detector verdicts with reviewer decisions.

    Overridden findings are flagged manual; a manual "no" drops the automated
    evidence, while positive overrides keep it for reference. Raises
    UnknownDimension when an override names a dimension absent from findings.
    """
    present = {f.dimension for f in findings}
    for dim in overrides:
        if dim not in present:
            raise UnknownDimension(f"override for {dim.value} matches no finding")
    result = []
    for f in findings:
        verdict = overrides.get(f.dimension)
        if verdict is None or (verdict is f.verdict and f.manual):
            result.append(f)
            continue
        evidence = f.evidence if verdict is not Verdict.NO else ()
        result.append(Finding(f.dimension, verdict, evidence, f.detail, manual=True))
    return result
