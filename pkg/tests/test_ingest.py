from datetime import datetime, timezone
from pathlib import Path

import pytest

from praf.errors import EmptyAfterExtraction, IoFailure
from praf.ingest import (
    FetchFailure,
    InaccessibleReason,
    PolicyDocument,
    RawFetch,
    cache_get,
    cache_put,
    document_from_fetch,
    extract_text,
    fetch_policy,
)

DATA = Path(__file__).parent / "data"
TS = datetime(2025, 1, 15, tzinfo=timezone.utc)


class FakeTransport:
    """Scripted transport: url -> (status, content_type, body, final_url) or exception."""

    def __init__(self, responses):
        self.responses = responses
        self.calls = []

    def get(self, url, timeout):
        self.calls.append(url)
        outcome = self.responses[url]
        if isinstance(outcome, list):
            outcome = outcome[min(len(outcome) - 1, len([c for c in self.calls if c == url]) - 1)]
        if isinstance(outcome, Exception):
            raise outcome
        return outcome


class TestExtractText:
    def test_script_stripped(self):
        out = extract_text(b"<p>We collect data.</p><script>x()</script>", "text/html")
        assert out == "We collect data."

    def test_plain_text_passthrough(self):
        out = extract_text(b"We collect data.", "text/plain")
        assert out == "We collect data."

    def test_headings_become_lines(self):
        out = extract_text(b"<h1>Privacy</h1><p>We encrypt data.</p>", "text/html")
        assert out == "Privacy\nWe encrypt data."

    def test_hand_written_fixture(self):
        raw = (DATA / "sample_page.html").read_bytes()
        expected = (DATA / "sample_page_expected.txt").read_text().rstrip("\n")
        assert extract_text(raw, "text/html") == expected

    def test_idempotent_when_refed_as_plain(self):
        raw = (DATA / "sample_page.html").read_bytes()
        once = extract_text(raw, "text/html")
        again = extract_text(once.encode(), "text/plain")
        assert once == again

    def test_no_tag_remnants_or_control_chars(self):
        raw = b"<div>safe\x00 text\xe2\x80\x8b here</div><p>more &amp; more</p>"
        out = extract_text(raw, "text/html")
        assert "<" not in out and ">" not in out
        assert "\x00" not in out and "​" not in out
        assert out == "safe text here\nmore & more"

    def test_empty_after_extraction(self):
        with pytest.raises(EmptyAfterExtraction):
            extract_text(b"<script>only()</script>", "text/html")
        with pytest.raises(EmptyAfterExtraction):
            extract_text(b"   ", "text/plain")

    def test_pdf_is_not_parseable(self):
        with pytest.raises(EmptyAfterExtraction):
            extract_text(b"%PDF-1.7 binary junk", "application/pdf")
        with pytest.raises(EmptyAfterExtraction):
            extract_text(b"anything", "application/octet-stream")

    def test_entities_unescaped(self):
        assert extract_text(b"<p>Terms &amp; Conditions</p>", "text/html") == "Terms & Conditions"

    def test_link_dominated_block_dropped(self):
        html = b'<div><a href="/a">Alpha</a> <a href="/b">Beta</a></div><p>Real content here.</p>'
        assert extract_text(html, "text/html") == "Real content here."


class TestFetchPolicy:
    def test_happy_path(self):
        transport = FakeTransport({
            "https://x.example/p": (200, "text/html", b"<p>hello world</p>", "https://x.example/p"),
        })
        out = fetch_policy("https://x.example/p", transport=transport)
        assert isinstance(out, RawFetch)
        assert out.body == b"<p>hello world</p>"
        assert out.status == 200

    def test_404_is_http_error_without_retry(self):
        transport = FakeTransport({
            "https://x.example/gone": (404, "text/html", b"", "https://x.example/gone"),
        })
        out = fetch_policy("https://x.example/gone", transport=transport)
        assert isinstance(out, FetchFailure)
        assert out.reason is InaccessibleReason.HTTP_ERROR
        assert out.status == 404
        assert transport.calls.count("https://x.example/gone") == 1

    def test_network_error_retried_then_succeeds(self, monkeypatch):
        monkeypatch.setattr("praf.ingest.time.sleep", lambda s: None)
        transport = FakeTransport({
            "https://x.example/p": [
                ConnectionError("boom"),
                (200, "text/html", b"<p>ok fine</p>", "https://x.example/p"),
            ],
        })
        out = fetch_policy("https://x.example/p", transport=transport, retries=2)
        assert isinstance(out, RawFetch)
        assert transport.calls.count("https://x.example/p") == 2

    def test_retry_bound_respected(self, monkeypatch):
        monkeypatch.setattr("praf.ingest.time.sleep", lambda s: None)
        transport = FakeTransport({"https://x.example/p": ConnectionError("down")})
        out = fetch_policy("https://x.example/p", transport=transport, retries=2)
        assert isinstance(out, FetchFailure)
        assert out.reason is InaccessibleReason.NETWORK_ERROR
        assert len(transport.calls) == 3  # initial + 2 retries

    def test_redirect_final_url_kept(self):
        transport = FakeTransport({
            "https://x.example/old": (200, "text/html", b"<p>moved fine</p>", "https://x.example/new"),
        })
        out = fetch_policy("https://x.example/old", transport=transport)
        assert out.final_url == "https://x.example/new"

    def test_robots_disallow(self):
        transport = FakeTransport({
            "https://x.example/robots.txt": (200, "text/plain", b"User-agent: *\nDisallow: /", "https://x.example/robots.txt"),
            "https://x.example/p": (200, "text/html", b"<p>never seen</p>", "https://x.example/p"),
        })
        out = fetch_policy("https://x.example/p", transport=transport, respect_robots=True)
        assert isinstance(out, FetchFailure)
        assert out.status == 403

    def test_local_file_fetch(self, tmp_path):
        page = tmp_path / "policy.html"
        page.write_text("<p>Local policy text.</p>")
        out = fetch_policy(str(page))
        assert isinstance(out, RawFetch)
        assert out.content_type == "text/html"
        doc = document_from_fetch("A1", out, TS)
        assert doc.accessible and doc.text == "Local policy text."

    def test_local_file_missing(self, tmp_path):
        out = fetch_policy(str(tmp_path / "absent.html"))
        assert isinstance(out, FetchFailure)
        assert out.reason is InaccessibleReason.NETWORK_ERROR


class TestDocumentFromFetch:
    def test_accessible(self):
        fetched = RawFetch("u", "u", b"<p>We protect data.</p>", "text/html", 200)
        doc = document_from_fetch("A1", fetched, TS)
        assert doc.accessible
        assert doc.text == "We protect data."

    def test_failure_becomes_inaccessible(self):
        doc = document_from_fetch("A1", FetchFailure("u", InaccessibleReason.HTTP_ERROR, 404), TS)
        assert not doc.accessible
        assert doc.reason is InaccessibleReason.HTTP_ERROR
        assert doc.text == ""

    def test_empty_extraction_becomes_inaccessible(self):
        fetched = RawFetch("u", "u", b"<script>x()</script>", "text/html", 200)
        doc = document_from_fetch("A1", fetched, TS)
        assert not doc.accessible
        assert doc.reason is InaccessibleReason.EMPTY_AFTER_EXTRACTION

    def test_document_invariants(self):
        with pytest.raises(ValueError):
            PolicyDocument("A1", "u", b"", "", TS, accessible=True)
        with pytest.raises(ValueError):
            PolicyDocument("A1", "u", b"", "text", TS, accessible=False,
                           reason=InaccessibleReason.NO_URL)
        with pytest.raises(ValueError):
            PolicyDocument("A1", "u", b"", "", TS, accessible=False)


class TestCache:
    def _doc(self, app="A1", text="Some policy text."):
        return PolicyDocument(app, f"https://{app.lower()}.example/privacy",
                              b"<p>Some policy text.</p>", text, TS, accessible=True,
                              http_status=200, content_type="text/html")

    def test_round_trip(self, tmp_path):
        doc = self._doc()
        cache_put(tmp_path, doc.source, doc)
        assert cache_get(tmp_path, doc.source) == doc

    def test_get_on_empty_cache(self, tmp_path):
        assert cache_get(tmp_path, "https://nobody.example/") is None

    def test_last_writer_wins(self, tmp_path):
        url = "https://a1.example/privacy"
        first = self._doc(text="First version.")
        second = self._doc(text="Second version.")
        cache_put(tmp_path, url, first)
        cache_put(tmp_path, url, second)
        assert cache_get(tmp_path, url).text == "Second version."

    def test_unwritable_dir(self, tmp_path):
        blocker = tmp_path / "blocked"
        blocker.write_text("not a directory")
        with pytest.raises(IoFailure):
            cache_put(blocker / "cache", "https://a1.example/", self._doc())

    def test_no_partial_files_after_put(self, tmp_path):
        cache_put(tmp_path, "https://a1.example/", self._doc())
        leftovers = [p for p in tmp_path.iterdir() if p.suffix == ".tmp"]
        assert leftovers == []
