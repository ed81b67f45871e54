"""Streaming parser for WET archives (WARC conversion records).

Reads the WARC record grammar directly: version line, header fields,
blank line, Content-Length payload, blank separator lines.  Only
``WARC-Type: conversion`` records are emitted; malformed or non-UTF-8
records are counted and skipped, a short payload aborts the stream.
"""

import gzip
import zlib
from dataclasses import dataclass
from typing import IO, Iterator

from .errors import BadCompression, MalformedHeader, TruncatedRecord
from .records import Document, STAGE_RAW


@dataclass
class RawRecord:
    url: str
    declared_languages: list[str]
    timestamp: str
    body: str


@dataclass
class IngestCounters:
    emitted: int = 0
    skipped: int = 0
    non_conversion: int = 0

    def merge(self, other: "IngestCounters") -> "IngestCounters":
        self.emitted += other.emitted
        self.skipped += other.skipped
        self.non_conversion += other.non_conversion
        return self


class _LineReader:
    """Byte stream wrapper: readline / read(n) with one-line pushback."""

    def __init__(self, stream: IO[bytes]):
        self._stream = stream
        self._pushback: bytes | None = None

    def readline(self) -> bytes:
        if self._pushback is not None:
            line, self._pushback = self._pushback, None
            return line
        try:
            return self._stream.readline()
        except (gzip.BadGzipFile, EOFError, zlib.error) as exc:
            raise BadCompression(str(exc)) from exc

    def read(self, n: int) -> bytes:
        parts = []
        if self._pushback is not None:
            parts.append(self._pushback[:n])
            rest = self._pushback[n:]
            self._pushback = rest or None
            n -= len(parts[0])
        try:
            while n > 0:
                chunk = self._stream.read(n)
                if not chunk:
                    break
                parts.append(chunk)
                n -= len(chunk)
        except (gzip.BadGzipFile, EOFError, zlib.error) as exc:
            raise BadCompression(str(exc)) from exc
        return b"".join(parts)

    def push_back(self, line: bytes) -> None:
        self._pushback = line


def _parse_header_block(reader: _LineReader) -> dict[str, str]:
    """Parse 'Name: value' lines (with continuations) up to the blank line."""
    headers: dict[str, str] = {}
    last_name = None
    while True:
        raw = reader.readline()
        if not raw:
            raise MalformedHeader("EOF inside header block")
        line = raw.rstrip(b"\r\n")
        if not line:
            return headers
        try:
            text = line.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedHeader(f"undecodable header line: {line[:40]!r}") from exc
        if text[0] in (" ", "\t"):
            if last_name is None:
                raise MalformedHeader("continuation line before any field")
            headers[last_name] += " " + text.strip()
            continue
        name, sep, value = text.partition(":")
        if not sep or not name or any(c.isspace() for c in name):
            raise MalformedHeader(f"unparseable field line: {text[:40]!r}")
        last_name = name.lower()
        headers[last_name] = value.strip()


def _resync(reader: _LineReader) -> None:
    """After a framing error, scan forward to the next version line."""
    while True:
        line = reader.readline()
        if not line:
            return
        if line.startswith(b"WARC/"):
            reader.push_back(line)
            return


def read_wet_stream(
    source: IO[bytes],
    compressed: bool = False,
    counters: IngestCounters | None = None,
) -> Iterator[RawRecord]:
    """Yield conversion records from a WET byte stream, in file order."""
    if counters is None:
        counters = IngestCounters()
    if compressed:
        source = gzip.GzipFile(fileobj=source, mode="rb")  # multi-member ok
    reader = _LineReader(source)

    while True:
        raw = reader.readline()
        if not raw:
            return
        line = raw.rstrip(b"\r\n")
        if not line:
            continue
        if not line.startswith(b"WARC/"):
            counters.skipped += 1
            _resync(reader)
            continue
        try:
            headers = _parse_header_block(reader)
            length_text = headers.get("content-length")
            if length_text is None or not length_text.isdigit():
                raise MalformedHeader(f"bad Content-Length: {length_text!r}")
        except MalformedHeader:
            counters.skipped += 1
            _resync(reader)
            continue

        length = int(length_text)
        payload = reader.read(length)
        if len(payload) < length:
            raise TruncatedRecord(
                f"payload ended after {len(payload)} of {length} bytes"
            )
        # Consume the blank separator lines; push back the next version line.
        while True:
            nxt = reader.readline()
            if not nxt:
                break
            if nxt.rstrip(b"\r\n"):
                reader.push_back(nxt)
                break

        if headers.get("warc-type", "").strip().lower() != "conversion":
            counters.non_conversion += 1
            continue
        url = headers.get("warc-target-uri", "").strip()
        if not url:
            counters.skipped += 1
            continue
        try:
            body = payload.decode("utf-8")
        except UnicodeDecodeError:
            counters.skipped += 1
            continue

        languages = [
            code.strip()
            for code in headers.get("warc-identified-content-language", "").split(",")
            if code.strip()
        ]
        counters.emitted += 1
        yield RawRecord(
            url=url,
            declared_languages=languages,
            timestamp=headers.get("warc-date", "").strip(),
            body=body,
        )


def record_to_document(rec: RawRecord, next_id: int) -> Document:
    """Lift a record into a raw-stage Document, splitting the body on newlines."""
    lines = [ln.rstrip("\r") for ln in rec.body.split("\n")]
    if lines and lines[-1] == "":
        lines.pop()
    return Document(
        doc_id=next_id,
        source_url=rec.url,
        declared_languages=list(rec.declared_languages),
        stage=STAGE_RAW,
        lines=lines,
    )


def sniff_gzip(stream: IO[bytes]) -> bool:
    """True when the buffered byte stream starts with the gzip magic."""
    head = stream.peek(2)[:2] if hasattr(stream, "peek") else b""
    return head == b"\x1f\x8b"


def ingest_files(
    paths,
    gzip_mode: str = "auto",
    counters: IngestCounters | None = None,
    start_id: int = 0,
) -> Iterator[Document]:
    """Read WET files in the given order, assigning sequential doc ids."""
    if counters is None:
        counters = IngestCounters()
    next_id = start_id
    for path in paths:
        with open(path, "rb") as fp:
            if gzip_mode == "on":
                compressed = True
            elif gzip_mode == "off":
                compressed = False
            else:
                compressed = str(path).endswith(".gz") or sniff_gzip(fp)
            for rec in read_wet_stream(fp, compressed=compressed, counters=counters):
                yield record_to_document(rec, next_id)
                next_id += 1
