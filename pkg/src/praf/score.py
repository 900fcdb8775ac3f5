"""Five-element privacy risk scoring.

Element scales (accessible policies):
  regulatory 1..4, security 3..6, usability 4..12, minimization/retention 2..4,
  third-party 1..2. An inaccessible policy scores zero on every element.
The overall risk score is the plain sum of the five elements (max 28).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .detect import DetectionDimension as Dim, Finding, Verdict
from .errors import MissingReadability
from .readability import ReadabilityResult


@dataclass(frozen=True)
class PrafProfile:
    app: str
    regulatory: int
    security: int
    usability: int
    min_retention: int
    third_party: int
    overall: int

    def __post_init__(self):
        if self.overall != (self.regulatory + self.security + self.usability
                            + self.min_retention + self.third_party):
            raise ValueError(f"{self.app}: overall is not the sum of elements")

    def elements(self) -> dict[str, int]:
        return {
            "regulatory": self.regulatory,
            "security": self.security,
            "usability": self.usability,
            "min_retention": self.min_retention,
            "third_party": self.third_party,
        }


@dataclass(frozen=True)
class ScoringInput:
    app: str
    accessible: bool
    findings: Mapping[Dim, Finding]
    readability: ReadabilityResult | None = None

    def __post_init__(self):
        if self.accessible:
            if self.readability is None:
                raise MissingReadability(f"{self.app}: accessible policy needs readability")
            missing = [d.value for d in Dim if d not in self.findings]
            if missing:
                raise ValueError(f"{self.app}: findings missing for {missing}")
        elif self.readability is not None:
            raise ValueError(f"{self.app}: inaccessible policy cannot carry readability")

    def verdict(self, dim: Dim) -> Verdict:
        return self.findings[dim].verdict


def _present(verdict: Verdict) -> int:
    """2 points for implementation, 1 for non-implementation; partial claims
    score as non-implementation."""
    return 2 if verdict is Verdict.YES else 1


def score_regulatory(inp: ScoringInput) -> int:
    if not inp.accessible:
        return 0
    hipaa = inp.verdict(Dim.HIPAA_MENTION) is Verdict.YES
    gdpr = inp.verdict(Dim.GDPR_MENTION) is Verdict.YES
    if hipaa and gdpr:
        return 4
    if hipaa or gdpr:
        return 3
    if inp.verdict(Dim.OTHER_REGULATION) is Verdict.YES:
        return 2
    return 1


def score_security(inp: ScoringInput) -> int:
    if not inp.accessible:
        return 0
    return sum(_present(inp.verdict(d)) for d in
               (Dim.DATA_ENCRYPTION, Dim.ACCESS_CONTROLS, Dim.BREACH_PROTOCOL))


def score_usability(inp: ScoringInput) -> int:
    if not inp.accessible:
        return 0
    if inp.readability is None:
        raise MissingReadability(f"{inp.app}: usability needs a readability result")
    ambiguity = 2 if inp.verdict(Dim.AMBIGUOUS_LANGUAGE) is Verdict.NO else 1
    commitments = 2 if inp.verdict(Dim.VAGUE_COMMITMENTS) is Verdict.NO else 1
    accessibility = _present(inp.verdict(Dim.ACCESSIBILITY_ACCOMMODATIONS))
    return inp.readability.points + ambiguity + commitments + accessibility


def score_min_retention(inp: ScoringInput) -> int:
    if not inp.accessible:
        return 0
    return (_present(inp.verdict(Dim.DATA_MINIMIZATION))
            + _present(inp.verdict(Dim.RETENTION_TIME)))


def score_third_party(inp: ScoringInput) -> int:
    if not inp.accessible:
        return 0
    return _present(inp.verdict(Dim.THIRD_PARTY_SHARING))


def score_app(inp: ScoringInput) -> PrafProfile:
    regulatory = score_regulatory(inp)
    security = score_security(inp)
    usability = score_usability(inp)
    min_retention = score_min_retention(inp)
    third_party = score_third_party(inp)
    return PrafProfile(
        app=inp.app,
        regulatory=regulatory,
        security=security,
        usability=usability,
        min_retention=min_retention,
        third_party=third_party,
        overall=regulatory + security + usability + min_retention + third_party,
    )
