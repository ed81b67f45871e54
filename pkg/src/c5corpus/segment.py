"""Sentence segmentation and the sentence-level filters.

Lines are cut after sentence-final punctuation (。！？；…) with closing
quotes attached; sentences containing curly brackets or badwords, or not
longer than the minimum length, are removed; document tails are truncated
back to the last terminal-punctuated sentence.
"""

import re
from dataclasses import dataclass
from functools import lru_cache

from . import kernels
from .chartables import TERMINAL_MARKS_DEFAULT, TERMINAL_MARKS_STRICT
from .errors import BadwordListMissing
from .records import Document, STAGE_SEGMENTED
from .report import CleanReport


@dataclass(frozen=True)
class SegmentConfig:
    terminal_marks: frozenset[str] = TERMINAL_MARKS_DEFAULT
    min_sentence_len: int = 5  # retain strictly longer
    badwords: frozenset[str] | None = None
    curly_chars: frozenset[str] = frozenset("{}")

    def __post_init__(self):
        if self.min_sentence_len < 0:
            raise ValueError("min_sentence_len must be >= 0")
        if not self.terminal_marks:
            raise ValueError("terminal_marks must be non-empty")


def strict_segment_config(
    badwords: frozenset[str] | None = None, min_sentence_len: int = 5
) -> SegmentConfig:
    """Literal readings: terminal marks 。？” only and '{' as the only curly."""
    return SegmentConfig(
        terminal_marks=TERMINAL_MARKS_STRICT,
        min_sentence_len=min_sentence_len,
        badwords=badwords,
        curly_chars=frozenset("{"),
    )


def load_badwords(path) -> frozenset[str]:
    """One term per line, UTF-8; '#' lines are comments."""
    terms = set()
    with open(path, "r", encoding="utf-8") as fp:
        for line in fp:
            term = line.strip()
            if term and not term.startswith("#"):
                terms.add(term)
    return frozenset(terms)


@lru_cache(maxsize=8)
def _badword_pattern(badwords: frozenset[str]) -> re.Pattern | None:
    if not badwords:
        return None
    alternation = "|".join(re.escape(t) for t in sorted(badwords, key=len, reverse=True))
    return re.compile(alternation)


def split_sentences(line: str, cfg: SegmentConfig | None = None) -> list[str]:
    """Split one normalized line into sentences.

    Joining the result reproduces the input exactly; the split marks are
    fixed, `cfg` only matters for the later filter/truncate steps.
    """
    return kernels.split_after_marks(line)


def segment_document(doc: Document, cfg: SegmentConfig | None = None) -> Document:
    sentences: list[str] = []
    for line in doc.lines:
        sentences.extend(kernels.split_after_marks(line))
    return doc.advanced(STAGE_SEGMENTED, sentences=sentences)


def filter_sentences(doc: Document, cfg: SegmentConfig) -> tuple[Document, CleanReport]:
    """Drop curly-bracket, badword, and too-short sentences (in that order)."""
    if cfg.badwords is None:
        raise BadwordListMissing("no badword list was loaded (an empty file is fine)")
    pattern = _badword_pattern(cfg.badwords)
    delta = CleanReport()
    kept = []
    for sent in doc.sentences:
        if any(c in sent for c in cfg.curly_chars):
            delta.sentences_dropped_curly += 1
        elif pattern is not None and pattern.search(sent):
            delta.sentences_dropped_badword += 1
        elif len(sent) <= cfg.min_sentence_len:
            delta.sentences_dropped_short += 1
        else:
            kept.append(sent)
    return doc.advanced(doc.stage, sentences=kept), delta


def truncate_to_terminal(doc: Document, cfg: SegmentConfig) -> tuple[Document, CleanReport]:
    """Drop trailing sentences until the last one ends with a terminal mark."""
    delta = CleanReport()
    sentences = list(doc.sentences)
    while sentences and (not sentences[-1] or sentences[-1][-1] not in cfg.terminal_marks):
        sentences.pop()
        delta.sentences_dropped_truncation += 1
    return doc.advanced(doc.stage, sentences=sentences), delta


def segment_stage(doc: Document, cfg: SegmentConfig) -> tuple[Document | None, CleanReport]:
    """split -> filter -> truncate; None when nothing survives."""
    segmented = segment_document(doc, cfg)
    filtered, delta = filter_sentences(segmented, cfg)
    truncated, tdelta = truncate_to_terminal(filtered, cfg)
    delta.merge(tdelta)
    if not truncated.sentences:
        return None, delta
    return truncated, delta
