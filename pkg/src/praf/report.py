"""Report emission: corpus matrix, per-app narratives, summary statistics.

Matrix columns follow the reference layout: app, category, three regulation
verdicts, six key-principle verdicts, four limitation/gap verdicts, SMOG grade
and band code, the five element scores and the overall score. Markdown uses
the verdict glyphs (yes=●, partial=○, no=−); CSV and JSON carry the words so
they parse back losslessly.
"""

from __future__ import annotations

import csv
import io
import json
import statistics
from dataclasses import dataclass
from typing import Mapping, Sequence

from .corpus import AppRecord, Codebook
from .detect import DetectionDimension as Dim, Finding, Verdict
from .errors import EmptyCorpus, RowMismatch
from .readability import ReadabilityResult
from .score import PrafProfile

GLYPHS = {Verdict.YES: "●", Verdict.PARTIAL: "○", Verdict.NO: "−"}

VERDICT_COLUMNS = [
    ("hipaa", Dim.HIPAA_MENTION),
    ("gdpr", Dim.GDPR_MENTION),
    ("other_regulations", Dim.OTHER_REGULATION),
    ("data_minimization", Dim.DATA_MINIMIZATION),
    ("data_encryption", Dim.DATA_ENCRYPTION),
    ("access_controls", Dim.ACCESS_CONTROLS),
    ("consent_requirements", Dim.CONSENT_REQUIREMENTS),
    ("retention_time", Dim.RETENTION_TIME),
    ("breach_protocol", Dim.BREACH_PROTOCOL),
    ("ambiguous_language", Dim.AMBIGUOUS_LANGUAGE),
    ("vague_commitments", Dim.VAGUE_COMMITMENTS),
    ("accessibility_accommodations", Dim.ACCESSIBILITY_ACCOMMODATIONS),
    ("third_party_sharing", Dim.THIRD_PARTY_SHARING),
]

SCORE_COLUMNS = [
    ("regulatory_compliance", "regulatory"),
    ("data_security", "security"),
    ("usability_accessibility", "usability"),
    ("minimization_retention", "min_retention"),
    ("third_party", "third_party"),
    ("overall_risk", "overall"),
]

MATRIX_COLUMNS = (
    ["pseudonym", "category"]
    + [name for name, _ in VERDICT_COLUMNS]
    + ["smog", "level"]
    + [name for name, _ in SCORE_COLUMNS]
)

ELEMENT_LABELS = {
    "regulatory": ("Regulatory compliance", 4),
    "security": ("Data security", 6),
    "usability": ("Usability & accessibility", 12),
    "min_retention": ("Minimization & retention", 4),
    "third_party": ("Third-party sharing", 2),
}


@dataclass(frozen=True)
class CorpusSummary:
    total_apps: int
    accessible_apps: int
    counts: Mapping[str, int]
    percentages: Mapping[str, float]
    element_means: Mapping[str, float]
    element_sds: Mapping[str, float]
    smog_mean: float | None
    overall_min: tuple[int, tuple[str, ...]]
    overall_max: tuple[int, tuple[str, ...]]


def _pct(count: int, total: int) -> float:
    return round(100.0 * count / total, 1)


def _app_key(pseudonym: str) -> tuple[str, int]:
    return pseudonym[0], int(pseudonym[1:])


_COUNT_DIMS = {
    "hipaa": Dim.HIPAA_MENTION,
    "gdpr": Dim.GDPR_MENTION,
    "other_regulation": Dim.OTHER_REGULATION,
    "minimization": Dim.DATA_MINIMIZATION,
    "encryption": Dim.DATA_ENCRYPTION,
    "access_controls": Dim.ACCESS_CONTROLS,
    "retention": Dim.RETENTION_TIME,
    "breach_protocol": Dim.BREACH_PROTOCOL,
    "third_party": Dim.THIRD_PARTY_SHARING,
}


def summarize(
    profiles: Sequence[PrafProfile],
    findings_by_app: Mapping[str, Mapping[Dim, Finding]],
    readability_by_app: Mapping[str, ReadabilityResult | None],
) -> CorpusSummary:
    """Corpus statistics; means and population SDs include zero-scored
    inaccessible apps, SMOG mean covers only apps with readability."""
    if not profiles:
        raise EmptyCorpus("summarize needs at least one profile")
    total = len(profiles)

    counts = {}
    for key, dim in _COUNT_DIMS.items():
        counts[key] = sum(
            1 for app in findings_by_app
            if findings_by_app[app][dim].verdict is Verdict.YES
        )
    # Apps whose policy names no regulation at all; inaccessible policies are
    # reported separately, not in this count.
    accessible_apps = [p.app for p in profiles if p.regulatory > 0]
    counts["no_regulation"] = sum(
        1 for app in accessible_apps
        if all(findings_by_app[app][d].verdict is not Verdict.YES
               for d in (Dim.HIPAA_MENTION, Dim.GDPR_MENTION, Dim.OTHER_REGULATION))
    )
    percentages = {key: _pct(n, total) for key, n in counts.items()}

    element_means = {}
    element_sds = {}
    for name in ("regulatory", "security", "usability", "min_retention", "third_party", "overall"):
        values = [getattr(p, name) for p in profiles]
        element_means[name] = statistics.fmean(values)
        element_sds[name] = statistics.pstdev(values)

    grades = [r.smog_grade for r in readability_by_app.values() if r is not None]
    smog_mean = statistics.fmean(grades) if grades else None

    accessible = [p for p in profiles if p.regulatory > 0]
    pool = accessible or list(profiles)
    lo = min(p.overall for p in pool)
    hi = max(p.overall for p in pool)
    overall_min = (lo, tuple(sorted((p.app for p in pool if p.overall == lo), key=_app_key)))
    overall_max = (hi, tuple(sorted((p.app for p in pool if p.overall == hi), key=_app_key)))

    return CorpusSummary(
        total_apps=total,
        accessible_apps=len(accessible),
        counts=counts,
        percentages=percentages,
        element_means=element_means,
        element_sds=element_sds,
        smog_mean=smog_mean,
        overall_min=overall_min,
        overall_max=overall_max,
    )


# --- matrix -------------------------------------------------------------------


def _smog_str(readability: ReadabilityResult | None) -> str:
    if readability is None:
        return ""
    g = round(readability.smog_grade, 1)
    return str(int(g)) if g == int(g) else f"{g:.1f}"


def _matrix_rows(
    codebook: Codebook,
    findings_by_app: Mapping[str, Mapping[Dim, Finding]],
    readability_by_app: Mapping[str, ReadabilityResult | None],
    profiles_by_app: Mapping[str, PrafProfile],
) -> list[dict]:
    rows = []
    for rec in codebook.records:
        app = rec.pseudonym
        if app not in profiles_by_app or app not in findings_by_app:
            raise RowMismatch(f"no profile/findings for {app}")
        profile = profiles_by_app[app]
        readability = readability_by_app.get(app)
        row: dict = {"pseudonym": app, "category": rec.category.value}
        for name, dim in VERDICT_COLUMNS:
            row[name] = findings_by_app[app][dim].verdict.value
        row["smog"] = None if readability is None else round(readability.smog_grade, 1)
        row["level"] = None if readability is None else readability.band.code
        for name, attr in SCORE_COLUMNS:
            row[name] = getattr(profile, attr)
        rows.append(row)
    extra = set(profiles_by_app) - {r.pseudonym for r in codebook.records}
    if extra:
        raise RowMismatch(f"profiles for apps not in codebook: {sorted(extra)}")
    return rows


def emit_matrix(
    codebook: Codebook,
    findings_by_app: Mapping[str, Mapping[Dim, Finding]],
    readability_by_app: Mapping[str, ReadabilityResult | None],
    profiles_by_app: Mapping[str, PrafProfile],
    fmt: str,
) -> str:
    """Corpus matrix in markdown, csv, or json; one row per codebook record."""
    rows = _matrix_rows(codebook, findings_by_app, readability_by_app, profiles_by_app)
    if fmt == "json":
        return json.dumps({"columns": MATRIX_COLUMNS, "rows": rows},
                          indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=MATRIX_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            out = dict(row)
            out["smog"] = "" if row["smog"] is None else _fmt_grade(row["smog"])
            out["level"] = row["level"] or ""
            writer.writerow(out)
        return buf.getvalue()
    if fmt == "markdown":
        header = ("| App | Use | HIPAA | GDPR | Other | Min | Enc | Access | Consent "
                  "| Ret | Breach | Ambig | Vague | A11y | 3rd | SMOG | Level "
                  "| Reg | Sec | Usab | M/R | 3rd | Overall |")
        sep = "|" + "---|" * 23
        lines = [header, sep]
        for row in rows:
            cells = [row["pseudonym"], row["category"]]
            cells += [GLYPHS[Verdict(row[name])] for name, _ in VERDICT_COLUMNS]
            cells.append("-" if row["smog"] is None else _fmt_grade(row["smog"]))
            cells.append(row["level"] or "-")
            cells += [str(row[name]) for name, _ in SCORE_COLUMNS]
            lines.append("| " + " | ".join(cells) + " |")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown matrix format {fmt!r}")


def _fmt_grade(value: float) -> str:
    return str(int(value)) if float(value) == int(value) else f"{value:.1f}"


def parse_matrix(document: str, fmt: str) -> list[dict]:
    """Inverse of emit_matrix for csv/json; verdicts and scores round-trip."""
    if fmt == "json":
        return json.loads(document)["rows"]
    if fmt == "csv":
        rows = []
        for raw in csv.DictReader(io.StringIO(document)):
            row: dict = dict(raw)
            row["smog"] = float(raw["smog"]) if raw["smog"] else None
            row["level"] = raw["level"] or None
            for name, _ in SCORE_COLUMNS:
                row[name] = int(raw[name])
            rows.append(row)
        return rows
    raise ValueError(f"unknown matrix format {fmt!r}")


# --- per-app report -----------------------------------------------------------

_EXCERPT_LIMIT = 200


def _excerpt(text: str, start: int, end: int) -> str:
    snippet = " ".join(text[start:end].split())
    if len(snippet) > _EXCERPT_LIMIT:
        snippet = snippet[: _EXCERPT_LIMIT - 1] + "…"
    return snippet


def emit_app_report(
    record: AppRecord,
    findings: Mapping[Dim, Finding],
    readability: ReadabilityResult | None,
    profile: PrafProfile,
    text: str | None = None,
    reveal_names: bool = False,
) -> str:
    """Markdown narrative for one app: scores, verdicts, and the evidence
    excerpts behind them; manual overrides are flagged."""
    name = record.pseudonym
    if reveal_names and record.real_name:
        name = f"{record.pseudonym} ({record.real_name})"
    lines = [f"# {name}", ""]
    lines.append(f"Category: {record.category.value}")
    if profile.overall == 0:
        lines.append("Policy: inaccessible; every element scores 0.")
        lines.append(f"Overall risk score: {profile.overall} / 28")
        return "\n".join(lines) + "\n"
    lines.append(f"Policy source: {record.policy_url or 'n/a'}")
    if readability is not None:
        lines.append(
            f"Readability: SMOG {_smog_str(readability)} "
            f"({readability.band.label}, {readability.points} points)"
        )
    lines.append(f"Overall risk score: {profile.overall} / 28")
    lines.append("")

    groups = [
        ("regulatory", [Dim.HIPAA_MENTION, Dim.GDPR_MENTION, Dim.OTHER_REGULATION]),
        ("security", [Dim.DATA_ENCRYPTION, Dim.ACCESS_CONTROLS, Dim.BREACH_PROTOCOL]),
        ("usability", [Dim.AMBIGUOUS_LANGUAGE, Dim.VAGUE_COMMITMENTS,
                       Dim.ACCESSIBILITY_ACCOMMODATIONS]),
        ("min_retention", [Dim.DATA_MINIMIZATION, Dim.RETENTION_TIME]),
        ("third_party", [Dim.THIRD_PARTY_SHARING]),
    ]
    elements = profile.elements()
    for key, dims in groups:
        label, ceiling = ELEMENT_LABELS[key]
        lines.append(f"## {label} — {elements[key]}/{ceiling}")
        for dim in dims:
            finding = findings[dim]
            flag = " (manual)" if finding.manual else ""
            lines.append(f"- {dim.value}: {finding.verdict.value}{flag}")
            if text and finding.evidence:
                span = finding.evidence[0]
                lines.append(f'  - "{_excerpt(text, span.start, span.end)}"')
            if finding.detail and "duration_value" in finding.detail:
                d = finding.detail
                lines.append(f"  - retention duration: {d['duration_value']} {d['duration_unit']}(s)")
        lines.append("")
    # Consent is tracked and reported but feeds no element score.
    consent = findings[Dim.CONSENT_REQUIREMENTS]
    flag = " (manual)" if consent.manual else ""
    lines.append(f"Noted (unscored): consent_requirements: {consent.verdict.value}{flag}")
    return "\n".join(lines) + "\n"


# --- summary rendering ----------------------------------------------------------

_COUNT_LABELS = [
    ("hipaa", "HIPAA mentioned"),
    ("gdpr", "GDPR mentioned"),
    ("other_regulation", "Other regulations mentioned"),
    ("no_regulation", "No regulation mentioned"),
    ("minimization", "Data minimization addressed"),
    ("encryption", "Encryption addressed"),
    ("access_controls", "Access controls addressed"),
    ("retention", "Retention period stated"),
    ("breach_protocol", "Breach protocol described"),
    ("third_party", "Third-party sharing disclosed"),
]


def emit_summary_markdown(summary: CorpusSummary) -> str:
    lines = ["# Corpus summary", ""]
    lines.append(f"Apps audited: {summary.total_apps} "
                 f"({summary.accessible_apps} accessible policies)")
    lines.append("")
    lines.append("| Signal | Apps | Share |")
    lines.append("|---|---|---|")
    for key, label in _COUNT_LABELS:
        lines.append(f"| {label} | {summary.counts[key]} | {summary.percentages[key]}% |")
    lines.append("")
    lines.append("Note: the no-regulation count covers accessible policies only; "
                 "inaccessible policies are tallied separately.")
    lines.append("")
    lines.append("| Element | Mean | SD (population) |")
    lines.append("|---|---|---|")
    for name in ("regulatory", "security", "usability", "min_retention", "third_party", "overall"):
        label = ELEMENT_LABELS.get(name, ("Overall risk", 28))[0]
        lines.append(f"| {label} | {summary.element_means[name]:.2f} "
                     f"| {summary.element_sds[name]:.2f} |")
    lines.append("")
    if summary.smog_mean is not None:
        lines.append(f"Mean SMOG grade (accessible apps): {summary.smog_mean:.2f}")
    lo, lo_apps = summary.overall_min
    hi, hi_apps = summary.overall_max
    lines.append(f"Overall risk range among accessible apps: {lo} "
                 f"({', '.join(lo_apps)}) to {hi} ({', '.join(hi_apps)})")
    lines.append(f"Computed overall mean is {summary.element_means['overall']:.2f}; "
                 "headline summaries elsewhere round this coarsely.")
    return "\n".join(lines) + "\n"


def summary_to_json(summary: CorpusSummary) -> str:
    payload = {
        "total_apps": summary.total_apps,
        "accessible_apps": summary.accessible_apps,
        "counts": dict(summary.counts),
        "percentages": dict(summary.percentages),
        "element_means": {k: round(v, 4) for k, v in summary.element_means.items()},
        "element_sds": {k: round(v, 4) for k, v in summary.element_sds.items()},
        "smog_mean": None if summary.smog_mean is None else round(summary.smog_mean, 4),
        "overall_min": {"value": summary.overall_min[0], "apps": list(summary.overall_min[1])},
        "overall_max": {"value": summary.overall_max[0], "apps": list(summary.overall_max[1])},
    }
    return json.dumps(payload, indent=2) + "\n"


def emit_smog_csv(
    codebook: Codebook,
    readability_by_app: Mapping[str, ReadabilityResult | None],
) -> str:
    """Plot-data export: pseudonym and SMOG grade for each accessible app."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["pseudonym", "smog_grade"])
    for rec in codebook.records:
        readability = readability_by_app.get(rec.pseudonym)
        if readability is not None:
            writer.writerow([rec.pseudonym, f"{readability.smog_grade:.4f}"])
    return buf.getvalue()
