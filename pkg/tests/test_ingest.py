import gzip
import io

import pytest

from c5corpus.errors import BadCompression, TruncatedRecord
from c5corpus.ingest import (
    IngestCounters,
    RawRecord,
    ingest_files,
    read_wet_stream,
    record_to_document,
)

from conftest import make_wet_file, make_wet_record


def read_all(stream, compressed=False):
    counters = IngestCounters()
    records = list(read_wet_stream(stream, compressed=compressed, counters=counters))
    return records, counters


class TestReadWetStream:
    def test_single_record_identity(self, wet_stream):
        records, counters = read_all(wet_stream([make_wet_record("你好。")]))
        assert len(records) == 1
        assert records[0].body == "你好。"
        assert records[0].url == "http://example.com/page"
        assert counters.emitted == 1 and counters.skipped == 0

    def test_empty_input(self):
        records, counters = read_all(io.BytesIO(b""))
        assert records == []
        assert counters.skipped == 0

    def test_non_utf8_record_skipped_and_counted(self, wet_stream):
        stream = wet_stream(
            [
                make_wet_record("第一篇。", url="http://a/1"),
                make_wet_record(b"\xff\xfe broken \x80", url="http://a/2"),
                make_wet_record("第三篇。", url="http://a/3"),
            ]
        )
        records, counters = read_all(stream)
        assert [r.url for r in records] == ["http://a/1", "http://a/3"]
        assert counters.skipped == 1
        assert counters.emitted == 2

    def test_emitted_plus_skipped_covers_all_conversions(self, wet_stream):
        recs = [make_wet_record(f"记录{i}。", url=f"http://a/{i}") for i in range(5)]
        recs.insert(2, make_wet_record(b"\x80\x80", url="http://a/bad"))
        records, counters = read_all(wet_stream(recs))
        assert counters.emitted + counters.skipped == 6

    def test_non_conversion_records_filtered(self, wet_stream):
        stream = wet_stream(
            [
                make_wet_record("request payload", warc_type="request"),
                make_wet_record("正文。"),
            ]
        )
        records, counters = read_all(stream)
        assert len(records) == 1 and records[0].body == "正文。"
        assert counters.skipped == 0
        assert counters.non_conversion >= 2  # warcinfo + request

    def test_declared_languages_parsed(self, wet_stream):
        stream = wet_stream([make_wet_record("正文。", languages="zho,eng")])
        records, _ = read_all(stream)
        assert records[0].declared_languages == ["zho", "eng"]

    def test_timestamp_from_warc_date(self, wet_stream):
        records, _ = read_all(wet_stream([make_wet_record("正文。")]))
        assert records[0].timestamp == "2019-08-20T01:02:03Z"

    def test_missing_url_skipped(self, wet_stream):
        stream = wet_stream([make_wet_record("正文。", url="")])
        records, counters = read_all(stream)
        assert records == []
        assert counters.skipped == 1

    def test_malformed_header_line_skips_one_record(self, wet_stream):
        good = make_wet_record("好的记录。")
        bad = good.replace(b"WARC-Date: ", b"WARC-Date ")  # no colon
        records, counters = read_all(wet_stream([bad, good]))
        assert len(records) == 1
        assert counters.skipped == 1

    def test_bad_content_length_skips_record(self, wet_stream):
        good = make_wet_record("好的记录。")
        bad = good.replace(b"Content-Length: ", b"Content-Length: x")
        records, counters = read_all(wet_stream([bad, good]))
        assert len(records) == 1
        assert counters.skipped == 1

    def test_garbage_prefix_counts_one_skip(self, wet_stream):
        payload = make_wet_file([make_wet_record("正文。")])
        stream = io.BytesIO(b"not a warc header\nmore junk\n" + payload)
        records, counters = read_all(stream)
        assert len(records) == 1
        assert counters.skipped == 1

    def test_truncated_payload_aborts(self):
        record = make_wet_record("这是一个很长的正文。")
        truncated = record[:-12]  # cut payload + trailer
        with pytest.raises(TruncatedRecord):
            read_all(io.BytesIO(truncated))

    def test_record_order_preserved(self, wet_stream):
        recs = [make_wet_record(f"记录{i}。", url=f"http://a/{i}") for i in range(20)]
        records, _ = read_all(wet_stream(recs))
        assert [r.url for r in records] == [f"http://a/{i}" for i in range(20)]

    def test_rereading_is_identical(self, wet_stream):
        data = make_wet_file([make_wet_record(f"记录{i}。") for i in range(5)])
        first, _ = read_all(io.BytesIO(data))
        second, _ = read_all(io.BytesIO(data))
        assert first == second

    def test_gzip_single_member(self):
        data = make_wet_file([make_wet_record("压缩的正文。")])
        records, _ = read_all(io.BytesIO(gzip.compress(data)), compressed=True)
        assert records[0].body == "压缩的正文。"

    def test_gzip_multi_member(self):
        a = gzip.compress(make_wet_file([make_wet_record("第一篇。")]))
        b = gzip.compress(make_wet_file([make_wet_record("第二篇。")], warcinfo=False))
        records, _ = read_all(io.BytesIO(a + b), compressed=True)
        assert [r.body for r in records] == ["第一篇。", "第二篇。"]

    def test_bad_gzip_aborts(self):
        with pytest.raises(BadCompression):
            read_all(io.BytesIO(b"\x1f\x8b\x08\x00garbage-not-gzip"), compressed=True)

    def test_lf_only_line_endings_tolerated(self):
        body = "宽容的解析。".encode("utf-8")
        raw = (
            b"WARC/1.0\n"
            b"WARC-Type: conversion\n"
            b"WARC-Target-URI: http://a/1\n"
            + f"Content-Length: {len(body)}\n\n".encode()
            + body
            + b"\n\n"
        )
        records, _ = read_all(io.BytesIO(raw))
        assert records[0].body == "宽容的解析。"

    def test_header_continuation_line(self):
        body = "x".encode()
        raw = (
            b"WARC/1.0\r\n"
            b"WARC-Type: conversion\r\n"
            b"WARC-Target-URI: http://a/\r\n very-long-path\r\n"
            + f"Content-Length: {len(body)}\r\n\r\n".encode()
            + body
            + b"\r\n\r\n"
        )
        records, _ = read_all(io.BytesIO(raw))
        assert records[0].url == "http://a/ very-long-path"


class TestRecordToDocument:
    def _rec(self, body):
        return RawRecord(url="http://a/1", declared_languages=[], timestamp="", body=body)

    def test_newline_splitting(self):
        doc = record_to_document(self._rec("a\nb\r\nc"), 0)
        assert doc.lines == ["a", "b", "c"]

    def test_empty_body(self):
        assert record_to_document(self._rec(""), 0).lines == []

    def test_trailing_newline_adds_no_line(self):
        assert record_to_document(self._rec("a\nb\n"), 0).lines == ["a", "b"]

    def test_line_count_and_id(self):
        body = "\n".join(f"第{i}行。" for i in range(100))
        doc = record_to_document(self._rec(body), 42)
        assert len(doc.lines) == 100
        assert doc.doc_id == 42
        assert doc.stage == "raw"


class TestIngestFiles:
    def test_sequential_ids_across_files(self, tmp_path):
        f1 = tmp_path / "a.wet"
        f2 = tmp_path / "b.wet.gz"
        f1.write_bytes(make_wet_file([make_wet_record("甲文件。")]))
        f2.write_bytes(gzip.compress(make_wet_file([make_wet_record("乙文件。")])))
        docs = list(ingest_files([f1, f2]))
        assert [d.doc_id for d in docs] == [0, 1]
        assert [d.lines for d in docs] == [["甲文件。"], ["乙文件。"]]

    def test_gzip_auto_detect_without_suffix(self, tmp_path):
        f = tmp_path / "data.bin"
        f.write_bytes(gzip.compress(make_wet_file([make_wet_record("压缩。")])))
        docs = list(ingest_files([f], gzip_mode="auto"))
        assert docs[0].lines == ["压缩。"]

    def test_gzip_off_forces_plain(self, tmp_path):
        f = tmp_path / "data.wet"
        f.write_bytes(make_wet_file([make_wet_record("正文。")]))
        docs = list(ingest_files([f], gzip_mode="off"))
        assert docs[0].lines == ["正文。"]
