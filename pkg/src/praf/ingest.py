"""Policy ingestion: HTTP fetch, HTML text extraction, and a file cache.

Fetching never raises for network problems; failures come back as
:class:`FetchFailure` and end up as inaccessible documents. Extraction is a
pure function from response bytes to plain text: markup, scripts, styles and
boilerplate (nav/header/footer/aside, link-dominated blocks) are dropped,
block boundaries become newlines, and whitespace inside lines is collapsed.
The cache holds one JSON file per URL hash with the full serialized document;
writes are atomic so concurrent readers never see torn files.
"""

from __future__ import annotations

import base64
import hashlib
import json
import os
import re
import tempfile
import time
import unicodedata
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from html.parser import HTMLParser
from pathlib import Path
from urllib import robotparser
from urllib.parse import urljoin, urlparse

import requests

from .errors import EmptyAfterExtraction, IoFailure

DEFAULT_USER_AGENT = "praf-policy-auditor/0.1 (+privacy policy research)"
DEFAULT_TIMEOUT = 10.0
DEFAULT_RETRIES = 2
MAX_REDIRECTS = 5


class InaccessibleReason(Enum):
    NETWORK_ERROR = "network_error"
    HTTP_ERROR = "http_error"
    EMPTY_AFTER_EXTRACTION = "empty_after_extraction"
    NO_URL = "no_url"
    NO_CACHE = "no_cache"


@dataclass(frozen=True)
class PolicyDocument:
    app: str
    source: str
    raw: bytes
    text: str
    fetched_at: datetime
    accessible: bool
    reason: InaccessibleReason | None = None
    http_status: int | None = None
    content_type: str | None = None

    def __post_init__(self):
        if self.accessible:
            if not self.text:
                raise ValueError(f"{self.app}: accessible document with empty text")
            if self.reason is not None:
                raise ValueError(f"{self.app}: accessible document with a failure reason")
        else:
            if self.text:
                raise ValueError(f"{self.app}: inaccessible document with text")
            if self.reason is None:
                raise ValueError(f"{self.app}: inaccessible document needs a reason")


@dataclass(frozen=True)
class RawFetch:
    url: str
    final_url: str
    body: bytes
    content_type: str
    status: int


@dataclass(frozen=True)
class FetchFailure:
    url: str
    reason: InaccessibleReason
    status: int | None = None
    detail: str = ""


class RequestsTransport:
    """Thin wrapper so tests and fixture replay can swap the network out."""

    def __init__(self, user_agent: str = DEFAULT_USER_AGENT):
        self.session = requests.Session()
        self.session.max_redirects = MAX_REDIRECTS
        self.session.headers["User-Agent"] = user_agent

    def get(self, url: str, timeout: float):
        resp = self.session.get(url, timeout=timeout, allow_redirects=True)
        return resp.status_code, resp.headers.get("Content-Type", ""), resp.content, resp.url


def _robots_allows(url: str, transport, timeout: float, user_agent: str) -> bool:
    parsed = urlparse(url)
    robots_url = urljoin(f"{parsed.scheme}://{parsed.netloc}", "/robots.txt")
    try:
        status, _, body, _ = transport.get(robots_url, timeout)
    except Exception:
        return True  # unreachable robots.txt does not block
    if status != 200:
        return True
    parser = robotparser.RobotFileParser()
    parser.parse(body.decode("utf-8", errors="replace").splitlines())
    return parser.can_fetch(user_agent, url)


def _read_local(url: str) -> RawFetch | FetchFailure:
    path = Path(urlparse(url).path) if url.startswith("file://") else Path(url)
    try:
        body = path.read_bytes()
    except OSError as exc:
        return FetchFailure(url, InaccessibleReason.NETWORK_ERROR, detail=str(exc))
    content_type = "text/html" if path.suffix.lower() in {".html", ".htm"} else "text/plain"
    return RawFetch(url=url, final_url=url, body=body, content_type=content_type, status=200)


def fetch_policy(
    url: str,
    timeout: float = DEFAULT_TIMEOUT,
    *,
    retries: int = DEFAULT_RETRIES,
    transport=None,
    respect_robots: bool = False,
    user_agent: str = DEFAULT_USER_AGENT,
) -> RawFetch | FetchFailure:
    """GET a policy page. 2xx yields the body and final URL after redirects;
    anything else (HTTP errors, timeouts, DNS failures) yields FetchFailure.
    Network errors and 5xx responses are retried with exponential backoff,
    at most `retries` extra attempts. file:// URLs and bare paths are read
    from disk."""
    if not urlparse(url).scheme or url.startswith("file://"):
        return _read_local(url)
    if transport is None:
        transport = RequestsTransport(user_agent)
    if respect_robots and not _robots_allows(url, transport, timeout, user_agent):
        return FetchFailure(url, InaccessibleReason.HTTP_ERROR, status=403,
                            detail="blocked by robots.txt")
    last_failure = FetchFailure(url, InaccessibleReason.NETWORK_ERROR)
    for attempt in range(retries + 1):
        if attempt:
            time.sleep(0.5 * 2 ** (attempt - 1))
        try:
            status, content_type, body, final_url = transport.get(url, timeout)
        except Exception as exc:
            last_failure = FetchFailure(url, InaccessibleReason.NETWORK_ERROR, detail=str(exc))
            continue
        if 200 <= status < 300:
            return RawFetch(url=url, final_url=str(final_url), body=body,
                            content_type=content_type, status=status)
        last_failure = FetchFailure(url, InaccessibleReason.HTTP_ERROR, status=status)
        if status < 500:
            break  # client errors are not transient
    return last_failure


# --- extraction ---------------------------------------------------------------

_SKIP_TAGS = {"script", "style", "noscript", "template", "head", "nav", "header",
              "footer", "aside"}
_BLOCK_TAGS = {"p", "div", "section", "article", "main", "ul", "ol", "li", "table",
               "tr", "td", "th", "h1", "h2", "h3", "h4", "h5", "h6", "blockquote",
               "figure", "figcaption", "form", "pre", "dl", "dt", "dd", "hr"}
_LINK_RATIO_LIMIT = 0.5


class _TextExtractor(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.lines: list[str] = []
        self._parts: list[str] = []
        self._link_chars = 0
        self._skip_depth = 0
        self._anchor_depth = 0

    def _flush(self):
        text = _collapse(" ".join(self._parts))
        self._parts = []
        link_chars = self._link_chars
        self._link_chars = 0
        if not text:
            return
        visible = len(text.replace(" ", ""))
        if visible and link_chars / visible > _LINK_RATIO_LIMIT:
            return  # link-dominated boilerplate block
        self.lines.append(text)

    def handle_starttag(self, tag, attrs):
        if tag in _SKIP_TAGS:
            self._skip_depth += 1
            return
        if self._skip_depth:
            return
        if tag == "a":
            self._anchor_depth += 1
        if tag in _BLOCK_TAGS or tag == "br":
            self._flush()

    def handle_endtag(self, tag):
        if tag in _SKIP_TAGS:
            self._skip_depth = max(0, self._skip_depth - 1)
            return
        if self._skip_depth:
            return
        if tag == "a":
            self._anchor_depth = max(0, self._anchor_depth - 1)
        if tag in _BLOCK_TAGS:
            self._flush()

    def handle_data(self, data):
        if self._skip_depth or not data:
            return
        self._parts.append(data)
        if self._anchor_depth:
            self._link_chars += len(data.replace(" ", "").replace("\n", ""))

    def close(self):
        super().close()
        self._flush()


_WS_RE = re.compile(r"[ \t\f\v]+")


def _collapse(text: str) -> str:
    return _WS_RE.sub(" ", text).strip()


def _strip_control(text: str) -> str:
    """Drop zero-width and control characters, keeping newlines."""
    out = []
    for ch in text:
        if ch == "\n":
            out.append(ch)
        elif ch in "​‌‍﻿":
            continue
        elif unicodedata.category(ch) == "Cc":
            continue
        else:
            out.append(ch)
    return "".join(out)


def _decode(raw: bytes, content_type: str) -> str:
    m = re.search(r"charset=([\w\-]+)", content_type or "", re.IGNORECASE)
    encoding = m.group(1) if m else "utf-8"
    try:
        return raw.decode(encoding, errors="replace")
    except LookupError:
        return raw.decode("utf-8", errors="replace")


def _normalize_plain(text: str) -> str:
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    lines = [_collapse(line) for line in text.split("\n")]
    return "\n".join(line for line in lines if line)


def extract_text(raw: bytes, content_type: str = "") -> str:
    """Plain analyzable text from a response body.

    HTML is parsed with block boundaries mapped to newlines; text/plain passes
    through whitespace normalization only. Binary payloads (PDF and friends)
    are not parseable here and raise EmptyAfterExtraction, as does any body
    with no visible text.
    """
    if raw[:5] == b"%PDF-" or re.search(r"application/(pdf|octet-stream)",
                                        content_type or "", re.IGNORECASE):
        raise EmptyAfterExtraction("binary document; no extractable policy text")
    decoded = _strip_control(_decode(raw, content_type))
    if "text/plain" in (content_type or "").lower():
        text = _normalize_plain(decoded)
    else:
        parser = _TextExtractor()
        parser.feed(decoded)
        parser.close()
        text = "\n".join(parser.lines)
    if not text.strip():
        raise EmptyAfterExtraction("no visible text after extraction")
    return text


def document_from_fetch(app: str, outcome: RawFetch | FetchFailure,
                        fetched_at: datetime | None = None) -> PolicyDocument:
    """Build the cached document for a fetch outcome, running extraction."""
    ts = fetched_at or datetime.now(timezone.utc)
    if isinstance(outcome, FetchFailure):
        return PolicyDocument(
            app=app, source=outcome.url, raw=b"", text="", fetched_at=ts,
            accessible=False, reason=outcome.reason, http_status=outcome.status,
        )
    try:
        text = extract_text(outcome.body, outcome.content_type)
    except EmptyAfterExtraction:
        return PolicyDocument(
            app=app, source=outcome.final_url, raw=outcome.body, text="",
            fetched_at=ts, accessible=False,
            reason=InaccessibleReason.EMPTY_AFTER_EXTRACTION,
            http_status=outcome.status, content_type=outcome.content_type,
        )
    return PolicyDocument(
        app=app, source=outcome.final_url, raw=outcome.body, text=text,
        fetched_at=ts, accessible=True, http_status=outcome.status,
        content_type=outcome.content_type,
    )


# --- cache --------------------------------------------------------------------

def cache_key(url: str) -> str:
    return hashlib.sha256(url.encode("utf-8")).hexdigest()


def _cache_path(cache_dir: str | Path, url: str) -> Path:
    return Path(cache_dir) / f"{cache_key(url)}.json"


def _doc_to_json(doc: PolicyDocument) -> dict:
    return {
        "app": doc.app,
        "source": doc.source,
        "raw_b64": base64.b64encode(doc.raw).decode("ascii"),
        "text": doc.text,
        "fetched_at": doc.fetched_at.isoformat(),
        "accessible": doc.accessible,
        "reason": doc.reason.value if doc.reason else None,
        "http_status": doc.http_status,
        "content_type": doc.content_type,
    }


def _doc_from_json(data: dict) -> PolicyDocument:
    return PolicyDocument(
        app=data["app"],
        source=data["source"],
        raw=base64.b64decode(data["raw_b64"]),
        text=data["text"],
        fetched_at=datetime.fromisoformat(data["fetched_at"]),
        accessible=data["accessible"],
        reason=InaccessibleReason(data["reason"]) if data.get("reason") else None,
        http_status=data.get("http_status"),
        content_type=data.get("content_type"),
    )


def cache_get(cache_dir: str | Path, url: str) -> PolicyDocument | None:
    path = _cache_path(cache_dir, url)
    if not path.exists():
        return None
    return _doc_from_json(json.loads(path.read_text(encoding="utf-8")))


def cache_put(cache_dir: str | Path, url: str, doc: PolicyDocument) -> None:
    cache_dir = Path(cache_dir)
    try:
        cache_dir.mkdir(parents=True, exist_ok=True)
        path = _cache_path(cache_dir, url)
        body = json.dumps(_doc_to_json(doc), indent=2, ensure_ascii=False)
        fd, tmp = tempfile.mkstemp(dir=cache_dir, prefix=".cache.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(body)
            os.replace(tmp, path)
        except BaseException:
            os.unlink(tmp)
            raise
    except OSError as exc:
        raise IoFailure(f"cannot write cache entry for {url}: {exc}") from exc
