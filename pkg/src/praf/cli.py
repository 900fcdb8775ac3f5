"""Command-line interface: fetch, audit, verify.

Exit codes: 0 success, 1 verification failure, 2 configuration or input
error, 3 incomplete inputs (an app with neither a cached document nor
complete annotations). Defaults point at the bundled reference fixtures so
`praf audit` and `praf verify` work out of the box; timestamps appear only
in the header line of markdown artifacts and in run.json.
"""

from __future__ import annotations

import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import click

from . import pipeline
from .corpus import load_codebook
from .detect import default_rules_path, load_rules
from .errors import PrafError
from .report import (
    emit_app_report,
    emit_matrix,
    emit_smog_csv,
    emit_summary_markdown,
    summarize,
    summary_to_json,
)
from .verify import load_reference, render_report, run_verify

DATA_DIR = Path(__file__).parent / "data"
FIXTURES_DIR = DATA_DIR / "fixtures"

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_INCOMPLETE = 3


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _resolve_cache(cache: str | None, *, for_write: bool, offline: bool) -> Path:
    if cache:
        return Path(cache)
    env = os.environ.get("PRAF_CACHE")
    if env:
        return Path(env)
    if for_write and not offline:
        _fail(EXIT_CONFIG, "no writable cache directory; pass --cache or set PRAF_CACHE")
    return FIXTURES_DIR / "cache"


def _load_codebook_or_fail(path: Path):
    try:
        return load_codebook(path)
    except PrafError as exc:
        _fail(EXIT_CONFIG, str(exc))


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _write(path: Path, body: str, *, stamp: bool = False) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    if stamp:
        body = f"<!-- generated: {_timestamp()} -->\n" + body
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(body, encoding="utf-8")
    os.replace(tmp, path)


@click.group()
def main() -> None:
    """Privacy-policy risk auditing for healthcare apps."""


@main.command()
@click.option("--codebook", type=click.Path(), default=str(FIXTURES_DIR / "codebook.json"),
              show_default=True, help="Codebook JSON file.")
@click.option("--cache", type=click.Path(), default=None,
              help="Cache directory (falls back to $PRAF_CACHE).")
@click.option("--offline", is_flag=True, help="Never touch the network; replay the cache.")
@click.option("--jobs", type=int, default=pipeline.DEFAULT_JOBS, show_default=True,
              help="Concurrent fetch workers.")
@click.option("--respect-robots/--ignore-robots", default=True, show_default=True)
def fetch(codebook, cache, offline, jobs, respect_robots):
    """Fetch privacy policies into the cache and print a status manifest."""
    cb = _load_codebook_or_fail(Path(codebook))
    cache_dir = _resolve_cache(cache, for_write=True, offline=offline)
    manifest = pipeline.fetch_corpus(
        cb, cache_dir, offline=offline, jobs=jobs, respect_robots=respect_robots,
    )
    click.echo(json.dumps({"cache": str(cache_dir), "apps": manifest}, indent=2))


@main.command()
@click.option("--codebook", type=click.Path(), default=str(FIXTURES_DIR / "codebook.json"),
              show_default=True, help="Codebook JSON file.")
@click.option("--cache", type=click.Path(), default=None,
              help="Cache directory (falls back to $PRAF_CACHE, then bundled fixtures).")
@click.option("--rules", type=click.Path(), default=str(default_rules_path()),
              show_default=True, help="Detection rule file.")
@click.option("--out", type=click.Path(), default="praf-out", show_default=True,
              help="Output directory for report artifacts.")
@click.option("--format", "formats", multiple=True,
              type=click.Choice(["markdown", "csv", "json"]),
              help="Matrix formats to emit (repeatable; default: all three).")
@click.option("--offline", is_flag=True,
              help="Audit strictly from the cache (the default behavior; flag kept for parity).")
@click.option("--jobs", type=int, default=pipeline.DEFAULT_JOBS, show_default=True)
@click.option("--reveal-names", is_flag=True,
              help="Include real app names in per-app reports (redacted by default).")
def audit(codebook, cache, rules, out, formats, offline, jobs, reveal_names):
    """Score every app from cached policies + annotations and write reports."""
    del offline  # audit never fetches; it always runs from the cache
    cb = _load_codebook_or_fail(Path(codebook))
    rules_path = Path(rules)
    try:
        ruleset = load_rules(rules_path)
    except PrafError as exc:
        _fail(EXIT_CONFIG, str(exc))
    cache_dir = _resolve_cache(cache, for_write=False, offline=True)
    missing = pipeline.missing_inputs(cb, cache_dir)
    if missing:
        _fail(EXIT_INCOMPLETE,
              "no cached policy and incomplete annotations for: " + ", ".join(missing))
    result = pipeline.run_audit(cb, cache_dir, ruleset, jobs=jobs)

    out_dir = Path(out)
    formats = tuple(formats) or ("markdown", "csv", "json")
    findings = result.findings_by_app
    readability = result.readability_by_app
    profiles = result.profiles_by_app

    ext = {"markdown": "md", "csv": "csv", "json": "json"}
    for fmt in formats:
        _write(out_dir / f"matrix.{ext[fmt]}",
               emit_matrix(cb, findings, readability, profiles, fmt),
               stamp=(fmt == "markdown"))

    summary = None
    if profiles:
        summary = summarize(list(profiles.values()), findings, readability)
        if "markdown" in formats:
            _write(out_dir / "summary.md", emit_summary_markdown(summary), stamp=True)
        _write(out_dir / "summary.json", summary_to_json(summary))
    _write(out_dir / "smog.csv", emit_smog_csv(cb, readability))

    if "markdown" in formats:
        for audit_item in result.audits:
            body = emit_app_report(
                audit_item.record, audit_item.findings, audit_item.readability,
                audit_item.profile, text=audit_item.text, reveal_names=reveal_names,
            )
            _write(out_dir / "apps" / f"{audit_item.record.pseudonym}.md", body, stamp=True)

    run_meta = {
        "generated_at": _timestamp(),
        "codebook": str(codebook),
        "cache": str(cache_dir),
        "rules": str(rules_path),
        "formats": list(formats),
        "apps": [
            {
                "app": a.record.pseudonym,
                "accessible": a.document is not None and a.document.accessible,
                "overall": a.profile.overall,
            }
            for a in result.audits
        ],
        "detector_agreement": result.agreement(),
    }
    _write(out_dir / "run.json", json.dumps(run_meta, indent=2) + "\n")
    click.echo(f"audited {len(result.audits)} apps -> {out_dir}")
    agreement = run_meta["detector_agreement"]
    if agreement["rate"] is not None:
        click.echo(
            f"detector/annotation agreement: {agreement['agreeing_cells']}"
            f"/{agreement['annotated_cells']} cells ({agreement['rate']:.1%})"
        )


@main.command()
@click.option("--codebook", type=click.Path(), default=str(FIXTURES_DIR / "codebook.json"),
              show_default=True, help="Codebook with the reference annotations.")
@click.option("--expected", type=click.Path(),
              default=str(FIXTURES_DIR / "reference_results.json"),
              show_default=True, help="Reference results file.")
def verify(codebook, expected):
    """Recompute all profiles from annotations and diff them against the
    bundled reference results."""
    cb = _load_codebook_or_fail(Path(codebook))
    try:
        reference = load_reference(expected)
    except PrafError as exc:
        _fail(EXIT_CONFIG, str(exc))
    try:
        report = run_verify(cb, reference)
    except PrafError as exc:
        _fail(EXIT_CONFIG, str(exc))
    click.echo(render_report(report), nl=False)
    sys.exit(EXIT_OK if report.passed else EXIT_VERIFY_FAILED)


if __name__ == "__main__":
    main()
