"""Train/dev/test assignment, pre-training text emission, corpus statistics.

The pre-training format is UTF-8 text, one sentence per line, one empty
line closing each document.  Split assignment hashes (seed, doc_id) so it
is stable under corpus growth and needs no shuffle buffer.
"""

import hashlib
import os
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Callable, Iterable, Iterator

from .errors import FormatViolation
from .records import Document

SPLIT_NAMES = ("train", "dev", "test")
DEFAULT_RATIOS = (99.0, 0.5, 0.5)
DEFAULT_MAX_FILE_BYTES = 4 * 1024 * 1024


@dataclass(frozen=True)
class SplitConfig:
    ratios: tuple[float, float, float] = DEFAULT_RATIOS
    seed: int = 0

    def __post_init__(self):
        if any(r < 0 for r in self.ratios) or sum(self.ratios) <= 0:
            raise ValueError("ratios must be non-negative with a positive sum")

    def cumulative(self) -> tuple[float, float]:
        total = sum(self.ratios)
        c1 = self.ratios[0] / total
        return c1, c1 + self.ratios[1] / total


def split_unit(seed: int, doc_id: int) -> float:
    """Stable hash of (seed, doc_id) scaled to [0, 1)."""
    digest = hashlib.blake2b(
        struct.pack("<Q", doc_id), digest_size=8, key=struct.pack("<Q", seed)
    ).digest()
    return int.from_bytes(digest, "little") / 2.0**64


def assign_split(doc: Document, cfg: SplitConfig) -> str:
    u = split_unit(cfg.seed, doc.doc_id)
    c1, c2 = cfg.cumulative()
    if u < c1:
        return "train"
    if u < c2:
        return "dev"
    return "test"


@dataclass
class CorpusStats:
    token_count: int = 0
    sentence_count: int = 0
    document_count: int = 0
    byte_size: int = 0

    def merge(self, other: "CorpusStats") -> "CorpusStats":
        self.token_count += other.token_count
        self.sentence_count += other.sentence_count
        self.document_count += other.document_count
        self.byte_size += other.byte_size
        return self

    def as_dict(self) -> dict[str, int]:
        return {
            "token_count": self.token_count,
            "sentence_count": self.sentence_count,
            "document_count": self.document_count,
            "byte_size": self.byte_size,
        }


def emit_pretraining(docs: Iterable[Document], out: IO[bytes]) -> CorpusStats:
    """Write documents in the pre-training format; tokens counted per scalar."""
    stats = CorpusStats()
    for doc in docs:
        for sent in doc.sentences:
            data = sent.encode("utf-8") + b"\n"
            out.write(data)
            stats.byte_size += len(data)
            stats.sentence_count += 1
            stats.token_count += len(sent)
        out.write(b"\n")
        stats.byte_size += 1
        stats.document_count += 1
    return stats


def parse_pretraining(fp: IO[str]) -> Iterator[list[str]]:
    """Recover sentence lists per document; raises on format violations."""
    sentences: list[str] = []
    last_blank = True  # file start behaves like a document boundary
    for raw in fp:
        line = raw.rstrip("\n")
        if line == "":
            if last_blank:
                raise FormatViolation("empty document (consecutive blank lines)")
            yield sentences
            sentences = []
            last_blank = True
        else:
            sentences.append(line)
            last_blank = False
    if not last_blank:
        raise FormatViolation("file does not end with a blank line")


class SplitWriter:
    """One serialized writer per split, rotating numbered files by size."""

    def __init__(self, out_dir, max_file_bytes: int = DEFAULT_MAX_FILE_BYTES):
        self.out_dir = Path(out_dir)
        self.max_file_bytes = max_file_bytes
        self._open: dict[str, IO[bytes]] = {}
        self._sizes: dict[str, int] = {}
        self._indices: dict[str, int] = {}
        self.stats = {name: CorpusStats() for name in SPLIT_NAMES}
        for name in SPLIT_NAMES:
            (self.out_dir / name).mkdir(parents=True, exist_ok=True)

    def _sink(self, split: str) -> IO[bytes]:
        fp = self._open.get(split)
        if fp is None:
            index = self._indices.get(split, 0)
            path = self.out_dir / split / f"part-{index:05d}.txt"
            fp = open(path, "wb")
            self._open[split] = fp
            self._sizes[split] = 0
        return fp

    def write_document(self, doc: Document, split: str) -> None:
        fp = self._sink(split)
        delta = emit_pretraining([doc], fp)
        self.stats[split].merge(delta)
        self._sizes[split] += delta.byte_size
        if self._sizes[split] >= self.max_file_bytes:
            fp.close()
            del self._open[split]
            self._indices[split] = self._indices.get(split, 0) + 1

    def close(self) -> None:
        for fp in self._open.values():
            fp.close()
        self._open.clear()

    def __enter__(self) -> "SplitWriter":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def emit_splits(
    docs: Iterable[Document],
    out_dir,
    cfg: SplitConfig,
    max_file_bytes: int = DEFAULT_MAX_FILE_BYTES,
) -> dict[str, CorpusStats]:
    with SplitWriter(out_dir, max_file_bytes) as writer:
        for doc in docs:
            writer.write_document(doc, assign_split(doc, cfg))
        return writer.stats


def corpus_files(path) -> list[Path]:
    """The corpus file, or every *.txt under a directory, in sorted order."""
    p = Path(path)
    if p.is_dir():
        return sorted(q for q in p.rglob("*.txt") if q.is_file())
    return [p]


def compute_stats(path, tokenizer: Callable[[str], list] | None = None) -> CorpusStats:
    """Validate format and count tokens/sentences/documents/bytes.

    Without a tokenizer a sentence counts its Unicode scalars as tokens.
    Stats over a directory are the sum over its files (each file must be
    valid on its own).
    """
    total = CorpusStats()
    for file in corpus_files(path):
        stats = CorpusStats(byte_size=os.path.getsize(file))
        with open(file, "r", encoding="utf-8") as fp:
            for sentences in parse_pretraining(fp):
                stats.document_count += 1
                stats.sentence_count += len(sentences)
                for sent in sentences:
                    stats.token_count += len(tokenizer(sent)) if tokenizer else len(sent)
        total.merge(stats)
    return total
