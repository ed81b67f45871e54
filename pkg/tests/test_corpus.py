import io
import random

import pytest

from c5corpus.corpus import (
    CorpusStats,
    SplitConfig,
    assign_split,
    compute_stats,
    emit_pretraining,
    emit_splits,
    parse_pretraining,
    split_unit,
)
from c5corpus.errors import FormatViolation
from c5corpus.records import Document, STAGE_DEDUPED

def deduped(doc_id, sentences):
    return Document(
        doc_id=doc_id,
        source_url=f"http://x/{doc_id}",
        stage=STAGE_DEDUPED,
        sentences=sentences,
    )


def random_docs(rng, n):
    docs = []
    for i in range(n):
        sents = ["句%d之%d。" % (i, j) for j in range(rng.randint(1, 8))]
        docs.append(deduped(i, sents))
    return docs


class TestAssignSplit:
    def test_degenerate_ratio_all_train(self):
        cfg = SplitConfig(ratios=(1, 0, 0), seed=9)
        assert all(
            assign_split(deduped(i, ["x。"]), cfg) == "train" for i in range(500)
        )

    def test_half_half_within_binomial_bound(self):
        cfg = SplitConfig(ratios=(0.5, 0.5, 0), seed=123)
        labels = [assign_split(deduped(i, []), cfg) for i in range(10_000)]
        train_fraction = labels.count("train") / len(labels)
        assert abs(train_fraction - 0.5) <= 0.02
        assert labels.count("test") == 0

    def test_pure_function_of_seed_and_id(self):
        cfg = SplitConfig(ratios=(99, 0.5, 0.5), seed=7)
        a = deduped(11, ["内容甲。"])
        b = deduped(11, ["完全不同的内容。"])
        assert assign_split(a, cfg) == assign_split(b, cfg)
        assert split_unit(7, 11) == split_unit(7, 11)

    def test_seed_changes_assignment_not_proportion(self):
        ids = range(20_000)
        for seed in (1, 2):
            cfg = SplitConfig(ratios=(99, 0.5, 0.5), seed=seed)
            labels = [assign_split(deduped(i, []), cfg) for i in ids]
            assert abs(labels.count("train") / 20_000 - 0.99) < 0.005
        cfg1 = SplitConfig(ratios=(0.5, 0.5, 0), seed=1)
        cfg2 = SplitConfig(ratios=(0.5, 0.5, 0), seed=2)
        diffs = sum(
            assign_split(deduped(i, []), cfg1) != assign_split(deduped(i, []), cfg2)
            for i in ids
        )
        assert diffs > 1000  # different seeds really reshuffle

    def test_invalid_ratios_rejected(self):
        with pytest.raises(ValueError):
            SplitConfig(ratios=(0, 0, 0))
        with pytest.raises(ValueError):
            SplitConfig(ratios=(-1, 1, 0))


class TestEmit:
    def test_exact_byte_layout(self):
        sink = io.BytesIO()
        stats = emit_pretraining([deduped(0, ["今天很好。", "明天见。"])], sink)
        assert sink.getvalue() == "今天很好。\n明天见。\n\n".encode("utf-8")
        assert stats.sentence_count == 2
        assert stats.document_count == 1
        assert stats.byte_size == len(sink.getvalue())
        assert stats.token_count == 9  # scalar count over both sentences

    def test_zero_documents_empty_file(self):
        sink = io.BytesIO()
        stats = emit_pretraining([], sink)
        assert sink.getvalue() == b""
        assert stats.as_dict() == CorpusStats().as_dict()

    def test_round_trip_50_random_docs(self):
        rng = random.Random(42)
        docs = random_docs(rng, 50)
        sink = io.BytesIO()
        emit_pretraining(docs, sink)
        text = sink.getvalue().decode("utf-8")
        parsed = list(parse_pretraining(io.StringIO(text)))
        assert parsed == [list(d.sentences) for d in docs]


class TestParse:
    def test_consecutive_blank_lines_rejected(self):
        with pytest.raises(FormatViolation):
            list(parse_pretraining(io.StringIO("你好。\n\n\n")))

    def test_leading_blank_line_rejected(self):
        with pytest.raises(FormatViolation):
            list(parse_pretraining(io.StringIO("\n你好。\n\n")))

    def test_missing_final_blank_rejected(self):
        with pytest.raises(FormatViolation):
            list(parse_pretraining(io.StringIO("你好。\n")))

    def test_empty_file_ok(self):
        assert list(parse_pretraining(io.StringIO(""))) == []


class TestComputeStats:
    def test_hand_counted_example(self, tmp_path):
        path = tmp_path / "corpus.txt"
        path.write_text("你好吗。\n\n", encoding="utf-8")
        stats = compute_stats(path)
        assert stats.token_count == 4
        assert stats.sentence_count == 1
        assert stats.document_count == 1
        assert stats.byte_size == path.stat().st_size

    def test_empty_file_all_zero(self, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_bytes(b"")
        assert compute_stats(path).as_dict() == CorpusStats().as_dict()

    def test_additivity_over_directory(self, tmp_path):
        rng = random.Random(7)
        stats_parts = []
        for k in range(3):
            part = tmp_path / f"part-{k}.txt"
            with open(part, "wb") as fp:
                emit_pretraining(random_docs(rng, 5 + k), fp)
            stats_parts.append(compute_stats(part))
        total = compute_stats(tmp_path)
        summed = CorpusStats()
        for s in stats_parts:
            summed.merge(s)
        assert total.as_dict() == summed.as_dict()

    def test_tokenizer_mode(self, tmp_path):
        path = tmp_path / "corpus.txt"
        path.write_text("你好。\n\n", encoding="utf-8")
        stats = compute_stats(path, tokenizer=lambda line: ["single-token"])
        assert stats.token_count == 1


class TestEmitSplits:
    def test_directories_and_rotation(self, tmp_path):
        rng = random.Random(3)
        docs = random_docs(rng, 200)
        cfg = SplitConfig(ratios=(1, 1, 0), seed=4)
        stats = emit_splits(docs, tmp_path, cfg, max_file_bytes=512)
        train_files = sorted((tmp_path / "train").glob("*.txt"))
        assert len(train_files) > 1  # rotation happened
        for split in ("train", "dev", "test"):
            got = compute_stats(tmp_path / split)
            assert got.as_dict() == stats[split].as_dict()
        total_docs = sum(stats[s].document_count for s in ("train", "dev", "test"))
        assert total_docs == 200
        # every file except possibly the last stays close to the limit
        for file in train_files[:-1]:
            assert file.stat().st_size >= 512
