import io
import sys

import pytest

from c5corpus.records import Document, STAGE_CLEANED, STAGE_RAW, STAGE_SEGMENTED


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One line per acceptance criterion, outside stdout capture."""
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "CRITERION_RESULTS", None) if mod else None
    if results:
        terminalreporter.section("acceptance criteria")
        for number, status, title in sorted(set(results)):
            terminalreporter.write_line(f"criterion {number:2d} {status}  {title}")


def make_wet_record(
    body: bytes | str,
    url: str = "http://example.com/page",
    warc_type: str = "conversion",
    languages: str | None = None,
    date: str = "2019-08-20T01:02:03Z",
    extra_headers: dict | None = None,
) -> bytes:
    """One well-formed WARC record (CRLF line endings, exact Content-Length)."""
    payload = body.encode("utf-8") if isinstance(body, str) else body
    headers = [
        ("WARC-Type", warc_type),
        ("WARC-Target-URI", url),
        ("WARC-Date", date),
        ("WARC-Record-ID", "<urn:uuid:00000000-0000-0000-0000-000000000000>"),
        ("Content-Type", "text/plain"),
    ]
    if languages is not None:
        headers.append(("WARC-Identified-Content-Language", languages))
    for key, value in (extra_headers or {}).items():
        headers.append((key, value))
    headers.append(("Content-Length", str(len(payload))))
    head = b"WARC/1.0\r\n" + b"".join(
        f"{k}: {v}\r\n".encode("utf-8") for k, v in headers
    )
    return head + b"\r\n" + payload + b"\r\n\r\n"


def make_wet_file(records: list[bytes], warcinfo: bool = True) -> bytes:
    parts = []
    if warcinfo:
        info_payload = b"software: test-fixture\r\n"
        parts.append(
            b"WARC/1.0\r\n"
            b"WARC-Type: warcinfo\r\n"
            b"WARC-Target-URI: http://example.com/warcinfo\r\n"
            b"Content-Type: application/warc-fields\r\n"
            + f"Content-Length: {len(info_payload)}\r\n\r\n".encode()
            + info_payload
            + b"\r\n\r\n"
        )
    parts.extend(records)
    return b"".join(parts)


def raw_doc(doc_id: int, lines: list[str], languages: list[str] | None = None) -> Document:
    return Document(
        doc_id=doc_id,
        source_url=f"http://example.com/{doc_id}",
        declared_languages=languages or [],
        stage=STAGE_RAW,
        lines=lines,
    )


def cleaned_doc(doc_id: int, lines: list[str]) -> Document:
    doc = raw_doc(doc_id, lines)
    doc.stage = STAGE_CLEANED
    return doc


def seg_doc(doc_id: int, sentences: list[str]) -> Document:
    return Document(
        doc_id=doc_id,
        source_url=f"http://example.com/{doc_id}",
        stage=STAGE_SEGMENTED,
        sentences=sentences,
    )


@pytest.fixture
def wet_stream():
    def _build(records: list[bytes], warcinfo: bool = True):
        return io.BytesIO(make_wet_file(records, warcinfo=warcinfo))

    return _build
