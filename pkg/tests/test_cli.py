import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from praf.cli import main

FIXTURES = Path(__file__).parents[1] / "src" / "praf" / "data" / "fixtures"


@pytest.fixture()
def runner():
    return CliRunner()


def invoke(runner, args, **kwargs):
    return runner.invoke(main, args, env={"PRAF_CACHE": ""}, **kwargs)


class TestFetch:
    def test_offline_replay_of_fixture_cache(self, runner):
        result = invoke(runner, ["fetch", "--offline", "--cache", str(FIXTURES / "cache")])
        assert result.exit_code == 0
        manifest = json.loads(result.output)
        statuses = {a["app"]: a["status"] for a in manifest["apps"]}
        assert len(statuses) == 28
        assert sum(1 for s in statuses.values() if s == "accessible") == 27
        assert statuses["A24"] == "inaccessible"

    def test_offline_cold_cache_gives_no_cache(self, runner, tmp_path):
        result = invoke(runner, ["fetch", "--offline", "--cache", str(tmp_path / "cold")])
        assert result.exit_code == 0
        manifest = json.loads(result.output)
        assert all(a["status"] == "inaccessible" for a in manifest["apps"])
        assert all(a["reason"] == "no_cache" for a in manifest["apps"])

    def test_empty_codebook(self, runner, tmp_path):
        cb = tmp_path / "empty.json"
        cb.write_text(json.dumps({"records": [], "annotations": []}))
        result = invoke(runner, ["fetch", "--offline", "--codebook", str(cb)])
        assert result.exit_code == 0
        assert json.loads(result.output)["apps"] == []

    def test_online_without_cache_dir_is_config_error(self, runner):
        result = invoke(runner, ["fetch"])
        assert result.exit_code == 2
        assert "cache" in result.output

    def test_malformed_codebook_exit_2(self, runner, tmp_path):
        cb = tmp_path / "bad.json"
        cb.write_text("{broken")
        result = invoke(runner, ["fetch", "--offline", "--codebook", str(cb)])
        assert result.exit_code == 2


class TestAudit:
    def test_default_fixtures_full_run(self, runner, tmp_path):
        out = tmp_path / "out"
        result = invoke(runner, ["audit", "--out", str(out)])
        assert result.exit_code == 0
        for name in ["matrix.md", "matrix.csv", "matrix.json", "summary.md",
                     "summary.json", "smog.csv", "run.json"]:
            assert (out / name).exists(), name
        assert len(list((out / "apps").glob("*.md"))) == 28
        run = json.loads((out / "run.json").read_text())
        assert run["detector_agreement"]["rate"] == 1.0

    def test_missing_rules_exit_2_names_path(self, runner, tmp_path):
        missing = tmp_path / "nope-rules.json"
        result = invoke(runner, ["audit", "--rules", str(missing), "--out", str(tmp_path / "o")])
        assert result.exit_code == 2
        assert "nope-rules.json" in result.output

    def test_missing_doc_and_annotations_exit_3(self, runner, tmp_path):
        cb = tmp_path / "cb.json"
        cb.write_text(json.dumps({
            "records": [{"pseudonym": "A1", "real_name": None, "category": "Telehealth",
                         "policy_url": "https://a1.example/privacy", "store_source": "other"}],
            "annotations": [],
        }))
        result = invoke(runner, [
            "audit", "--codebook", str(cb), "--cache", str(tmp_path / "cold"),
            "--out", str(tmp_path / "o"),
        ])
        assert result.exit_code == 3
        assert "A1" in result.output

    def test_fully_annotated_app_without_document_scores_zero(self, runner, tmp_path):
        fixture_cb = json.loads((FIXTURES / "codebook.json").read_text())
        one = {
            "records": [r for r in fixture_cb["records"] if r["pseudonym"] == "A1"],
            "annotations": [a for a in fixture_cb["annotations"] if a["app"] == "A1"],
        }
        cb = tmp_path / "cb.json"
        cb.write_text(json.dumps(one))
        out = tmp_path / "o"
        result = invoke(runner, [
            "audit", "--codebook", str(cb), "--cache", str(tmp_path / "cold"),
            "--out", str(out), "--format", "json",
        ])
        assert result.exit_code == 0
        rows = json.loads((out / "matrix.json").read_text())["rows"]
        assert rows[0]["overall_risk"] == 0
        assert rows[0]["smog"] is None

    def test_redaction_and_reveal(self, runner, tmp_path):
        fixture_cb = json.loads((FIXTURES / "codebook.json").read_text())
        fixture_cb["records"][0]["real_name"] = "Acme Telecare Suite"
        cb = tmp_path / "cb.json"
        cb.write_text(json.dumps(fixture_cb))
        out_hidden = tmp_path / "hidden"
        out_shown = tmp_path / "shown"
        assert invoke(runner, ["audit", "--codebook", str(cb), "--out", str(out_hidden)]).exit_code == 0
        assert invoke(runner, ["audit", "--codebook", str(cb), "--out", str(out_shown),
                               "--reveal-names"]).exit_code == 0
        hidden_text = "".join(p.read_text() for p in out_hidden.rglob("*") if p.is_file())
        assert "Acme Telecare Suite" not in hidden_text
        assert "Acme Telecare Suite" in (out_shown / "apps" / "A1.md").read_text()

    def test_single_app_corpus(self, runner, tmp_path):
        fixture_cb = json.loads((FIXTURES / "codebook.json").read_text())
        one = {
            "records": [r for r in fixture_cb["records"] if r["pseudonym"] == "A1"],
            "annotations": [a for a in fixture_cb["annotations"] if a["app"] == "A1"],
        }
        cb = tmp_path / "cb.json"
        cb.write_text(json.dumps(one))
        out = tmp_path / "o"
        result = invoke(runner, [
            "audit", "--codebook", str(cb), "--cache", str(FIXTURES / "cache"),
            "--out", str(out), "--format", "csv",
        ])
        assert result.exit_code == 0
        lines = (out / "matrix.csv").read_text().strip().split("\n")
        assert len(lines) == 2


class TestVerify:
    def test_shipped_fixtures_pass(self, runner):
        result = invoke(runner, ["verify"])
        assert result.exit_code == 0
        assert "verification: PASS" in result.output
        assert "WAIVED A2 usability" in result.output
        assert "WAIVED A2 overall" in result.output

    def test_tampered_fixture_fails_with_cell_diff(self, runner, tmp_path):
        data = json.loads((FIXTURES / "codebook.json").read_text())
        for ann in data["annotations"]:
            if ann["app"] == "A1":
                ann["overrides"]["breach_protocol"] = "no"
        cb = tmp_path / "tampered.json"
        cb.write_text(json.dumps(data))
        result = invoke(runner, ["verify", "--codebook", str(cb)])
        assert result.exit_code == 1
        assert "FAIL A1 security: computed 5 != reference 6" in result.output
        assert "FAIL A1 overall: computed 22 != reference 23" in result.output

    def test_missing_expectations_exit_2(self, runner, tmp_path):
        result = invoke(runner, ["verify", "--expected", str(tmp_path / "none.json")])
        assert result.exit_code == 2

    def test_unknown_flag_exit_2(self, runner):
        result = invoke(runner, ["verify", "--bogus"])
        assert result.exit_code == 2
