"""Regression verification against the bundled reference audit.

Rebuilds every risk profile from the codebook annotations plus the reference
readability grades, then compares each cell against the reference results
file. Two cells (A2 usability and the A2 overall that follows from it) are
carried as documented waivers: for those the rubric value is asserted and the
reference value is reported as waived rather than failed. Summary statistics
are checked against their pinned targets and tolerances.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Codebook
from .detect import DetectionDimension as Dim, Finding
from .errors import MissingFile, PrafError
from .readability import ReadabilityResult, band
from .report import summarize
from .score import PrafProfile, ScoringInput, score_app

SCORE_FIELDS = ("regulatory", "security", "usability", "min_retention", "third_party", "overall")


@dataclass
class CellCheck:
    app: str
    fieldname: str
    computed: object
    expected: object
    status: str  # "ok" | "waived" | "fail"
    note: str = ""


@dataclass
class VerifyReport:
    cells: list[CellCheck] = field(default_factory=list)
    summary_checks: list[CellCheck] = field(default_factory=list)
    profiles: dict[str, PrafProfile] = field(default_factory=dict)

    @property
    def failures(self) -> list[CellCheck]:
        return [c for c in self.cells + self.summary_checks if c.status == "fail"]

    @property
    def waived(self) -> list[CellCheck]:
        return [c for c in self.cells if c.status == "waived"]

    @property
    def passed(self) -> bool:
        return not self.failures


def load_reference(path: str | Path) -> dict:
    path = Path(path)
    if not path.exists():
        raise MissingFile(f"reference results not found: {path}")
    return json.loads(path.read_text(encoding="utf-8"))


def build_profiles(codebook: Codebook, reference: dict) -> tuple[dict, dict, dict]:
    """Findings/readability/profiles computed from annotations + reference grades."""
    smog = {row["pseudonym"]: row["smog"] for row in reference["apps"]}
    findings_by_app: dict[str, dict[Dim, Finding]] = {}
    readability_by_app: dict[str, ReadabilityResult | None] = {}
    profiles: dict[str, PrafProfile] = {}
    for rec in codebook.records:
        app = rec.pseudonym
        if app not in smog:
            raise PrafError(f"reference results missing app {app}")
        overrides = codebook.overrides_for(app)
        missing = [d.value for d in Dim if d not in overrides]
        if missing:
            raise PrafError(f"{app}: annotations missing dimensions {missing}")
        findings = {dim: Finding(dim, verdict, manual=True)
                    for dim, verdict in overrides.items()}
        accessible = smog[app] is not None
        readability = ReadabilityResult.from_grade(smog[app]) if accessible else None
        profiles[app] = score_app(ScoringInput(
            app=app, accessible=accessible, findings=findings, readability=readability,
        ))
        findings_by_app[app] = findings
        readability_by_app[app] = readability
    return findings_by_app, readability_by_app, profiles


def _check_bands(reference: dict, report: VerifyReport) -> None:
    for row in reference["apps"]:
        if row["smog"] is None:
            continue
        computed = band(row["smog"]).code
        status = "ok" if computed == row["level"] else "fail"
        report.cells.append(CellCheck(row["pseudonym"], "level", computed, row["level"], status))


def _check_scores(reference: dict, profiles: dict[str, PrafProfile],
                  report: VerifyReport) -> None:
    waivers = {(w["pseudonym"], w["field"]): w for w in reference.get("waivers", [])}
    for row in reference["apps"]:
        app = row["pseudonym"]
        profile = profiles[app]
        for fieldname in SCORE_FIELDS:
            computed = getattr(profile, fieldname)
            expected = row["scores"][fieldname]
            waiver = waivers.get((app, fieldname))
            if waiver is not None:
                ok = computed == waiver["rubric"]
                report.cells.append(CellCheck(
                    app, fieldname, computed, expected,
                    "waived" if ok else "fail",
                    note=waiver["note"],
                ))
            else:
                report.cells.append(CellCheck(
                    app, fieldname, computed, expected,
                    "ok" if computed == expected else "fail",
                ))


def _summary_cell(name: str, computed, expected, ok: bool) -> CellCheck:
    return CellCheck("corpus", name, computed, expected, "ok" if ok else "fail")


def _check_summary(reference: dict, summary, report: VerifyReport) -> None:
    targets = reference["summary"]
    tol = targets.get("tolerances", {})
    mean_tol = float(tol.get("mean", 0.05))
    sd_tol = float(tol.get("sd", 0.05))
    usab_sd_tol = float(tol.get("usability_sd", 0.15))

    for key, (count, pct) in targets["counts"].items():
        report.summary_checks.append(_summary_cell(
            f"count.{key}", summary.counts[key], count, summary.counts[key] == count))
        report.summary_checks.append(_summary_cell(
            f"pct.{key}", summary.percentages[key], pct, summary.percentages[key] == pct))

    for name, target in targets["means"].items():
        computed = summary.element_means[name]
        report.summary_checks.append(_summary_cell(
            f"mean.{name}", round(computed, 3), target, abs(computed - target) <= mean_tol))

    for name, target in targets["sds"].items():
        computed = summary.element_sds[name]
        tolerance = usab_sd_tol if name == "usability" else sd_tol
        report.summary_checks.append(_summary_cell(
            f"sd.{name}", round(computed, 3), target, abs(computed - target) <= tolerance))

    smog_target = targets["smog_mean"]
    report.summary_checks.append(_summary_cell(
        "smog_mean", round(summary.smog_mean, 3), smog_target,
        abs(summary.smog_mean - smog_target) <= mean_tol))

    lo = targets["overall_min"]
    hi = targets["overall_max"]
    report.summary_checks.append(_summary_cell(
        "overall_min", [summary.overall_min[0], list(summary.overall_min[1])],
        [lo["value"], lo["apps"]],
        summary.overall_min == (lo["value"], tuple(lo["apps"]))))
    report.summary_checks.append(_summary_cell(
        "overall_max", [summary.overall_max[0], list(summary.overall_max[1])],
        [hi["value"], hi["apps"]],
        summary.overall_max == (hi["value"], tuple(hi["apps"]))))


def run_verify(codebook: Codebook, reference: dict) -> VerifyReport:
    report = VerifyReport()
    findings_by_app, readability_by_app, profiles = build_profiles(codebook, reference)
    report.profiles = profiles
    _check_bands(reference, report)
    _check_scores(reference, profiles, report)
    summary = summarize(list(profiles.values()), findings_by_app, readability_by_app)
    _check_summary(reference, summary, report)
    return report


def render_report(report: VerifyReport) -> str:
    lines = []
    bad = [c for c in report.cells if c.status == "fail"]
    for cell in bad:
        lines.append(f"FAIL {cell.app} {cell.fieldname}: computed {cell.computed} "
                     f"!= reference {cell.expected}")
    for cell in report.waived:
        lines.append(f"WAIVED {cell.app} {cell.fieldname}: rubric {cell.computed}, "
                     f"reference {cell.expected} ({cell.note})")
    for cell in report.summary_checks:
        if cell.status == "fail":
            lines.append(f"FAIL summary {cell.fieldname}: computed {cell.computed} "
                         f"!= target {cell.expected}")
    n_cells = len(report.cells)
    n_ok = sum(1 for c in report.cells if c.status == "ok")
    lines.append(f"cells: {n_ok} ok, {len(report.waived)} waived, "
                 f"{len(bad)} failed (of {n_cells})")
    n_sum = len(report.summary_checks)
    n_sum_ok = sum(1 for c in report.summary_checks if c.status == "ok")
    lines.append(f"summary checks: {n_sum_ok}/{n_sum} ok")
    lines.append("verification: PASS" if report.passed else "verification: FAIL")
    return "\n".join(lines) + "\n"
