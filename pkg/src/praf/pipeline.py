"""Pipeline orchestration shared by the CLI commands.

fetch: resolve each codebook record to a cached PolicyDocument (live HTTP or
cache/offline replay). audit: detect, apply annotation overrides, compute
readability, score, and assemble report artifacts. Per-app work runs on a
bounded thread pool; results are always collected in codebook order so output
is deterministic.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import AppRecord, Codebook
from .detect import (
    DetectionDimension as Dim,
    Finding,
    RuleSet,
    Verdict,
    apply_overrides,
    detect_all,
    no_findings,
)
from .ingest import (
    FetchFailure,
    InaccessibleReason,
    PolicyDocument,
    cache_get,
    cache_put,
    document_from_fetch,
    fetch_policy,
)
from .readability import ReadabilityResult, smog_grade
from .score import PrafProfile, ScoringInput, score_app

DEFAULT_JOBS = 4


@dataclass(frozen=True)
class RunConfig:
    codebook_path: Path
    cache_dir: Path
    rules_path: Path
    out_dir: Path
    formats: tuple[str, ...] = ("markdown", "csv", "json")
    offline: bool = False
    jobs: int = DEFAULT_JOBS
    reveal_names: bool = False


# --- fetch ---------------------------------------------------------------------


def _fetch_one(record: AppRecord, cache_dir: Path, offline: bool,
               transport, respect_robots: bool) -> dict:
    app = record.pseudonym
    url = record.policy_url
    if not url:
        return {"app": app, "url": None, "status": "inaccessible",
                "reason": InaccessibleReason.NO_URL.value, "cached": False}
    cached = cache_get(cache_dir, url)
    if cached is not None:
        return _manifest_entry(app, url, cached, cached=True)
    if offline:
        return {"app": app, "url": url, "status": "inaccessible",
                "reason": InaccessibleReason.NO_CACHE.value, "cached": False}
    outcome = fetch_policy(url, transport=transport, respect_robots=respect_robots)
    doc = document_from_fetch(app, outcome)
    cache_put(cache_dir, url, doc)
    return _manifest_entry(app, url, doc, cached=False)


def _manifest_entry(app: str, url: str, doc: PolicyDocument, cached: bool) -> dict:
    entry = {"app": app, "url": url, "cached": cached}
    if doc.accessible:
        entry["status"] = "accessible"
        entry["text_chars"] = len(doc.text)
    else:
        entry["status"] = "inaccessible"
        entry["reason"] = doc.reason.value
        if doc.http_status:
            entry["http_status"] = doc.http_status
    return entry


def fetch_corpus(codebook: Codebook, cache_dir: Path, *, offline: bool = False,
                 jobs: int = DEFAULT_JOBS, transport=None,
                 respect_robots: bool = False) -> list[dict]:
    """Fetch/refresh every record's policy; returns one manifest entry per app
    in codebook order. Failures are recorded per app, never raised."""
    if not codebook.records:
        return []
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        futures = [
            pool.submit(_fetch_one, rec, cache_dir, offline, transport, respect_robots)
            for rec in codebook.records
        ]
        return [f.result() for f in futures]


# --- audit ---------------------------------------------------------------------


@dataclass
class AppAudit:
    record: AppRecord
    document: PolicyDocument | None
    findings: dict[Dim, Finding]
    detected: dict[Dim, Finding]
    readability: ReadabilityResult | None
    profile: PrafProfile

    @property
    def text(self) -> str | None:
        if self.document is not None and self.document.accessible:
            return self.document.text
        return None


@dataclass
class AuditResult:
    audits: list[AppAudit]
    incomplete: list[str] = field(default_factory=list)

    @property
    def findings_by_app(self) -> dict[str, dict[Dim, Finding]]:
        return {a.record.pseudonym: a.findings for a in self.audits}

    @property
    def readability_by_app(self) -> dict[str, ReadabilityResult | None]:
        return {a.record.pseudonym: a.readability for a in self.audits}

    @property
    def profiles_by_app(self) -> dict[str, PrafProfile]:
        return {a.record.pseudonym: a.profile for a in self.audits}

    def agreement(self) -> dict:
        """Detector/annotation agreement over manually annotated cells of
        accessible policies; reported as a metric, never asserted."""
        total = 0
        agree = 0
        for audit in self.audits:
            if audit.document is None or not audit.document.accessible:
                continue
            for dim, final in audit.findings.items():
                if not final.manual:
                    continue
                total += 1
                if audit.detected[dim].verdict is final.verdict:
                    agree += 1
        return {
            "annotated_cells": total,
            "agreeing_cells": agree,
            "rate": round(agree / total, 4) if total else None,
        }


def audit_app(record: AppRecord, document: PolicyDocument | None,
              overrides: dict[Dim, Verdict], rules: RuleSet) -> AppAudit:
    accessible = document is not None and document.accessible
    if accessible:
        detected = detect_all(document.text, rules)
        readability = smog_grade(document.text)
    else:
        detected = no_findings()
        readability = None
    findings = apply_overrides(detected, overrides)
    findings_map = {f.dimension: f for f in findings}
    inp = ScoringInput(
        app=record.pseudonym,
        accessible=accessible,
        findings=findings_map,
        readability=readability,
    )
    return AppAudit(
        record=record,
        document=document,
        findings=findings_map,
        detected={f.dimension: f for f in detected},
        readability=readability,
        profile=score_app(inp),
    )


def missing_inputs(codebook: Codebook, cache_dir: Path) -> list[str]:
    """Apps that have neither a cached document nor complete annotations."""
    missing = []
    for rec in codebook.records:
        doc = cache_get(cache_dir, rec.policy_url) if rec.policy_url else None
        if doc is not None:
            continue
        overrides = codebook.overrides_for(rec.pseudonym)
        if len(overrides) < len(Dim):
            missing.append(rec.pseudonym)
    return missing


def run_audit(codebook: Codebook, cache_dir: Path, rules: RuleSet,
              jobs: int = DEFAULT_JOBS) -> AuditResult:
    docs = {
        rec.pseudonym: (cache_get(cache_dir, rec.policy_url) if rec.policy_url else None)
        for rec in codebook.records
    }

    def work(rec: AppRecord) -> AppAudit:
        return audit_app(rec, docs[rec.pseudonym], codebook.overrides_for(rec.pseudonym), rules)

    if not codebook.records:
        return AuditResult(audits=[])
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        futures = [pool.submit(work, rec) for rec in codebook.records]
        return AuditResult(audits=[f.result() for f in futures])
