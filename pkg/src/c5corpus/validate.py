"""Full-corpus validation of stage invariants.

Each stage artifact is checked against its own contract: segment output
(per-sentence filters plus terminal-mark tails), dedup output (no repeated
normalized window anywhere), and emitted pre-training files (format).
"""

from typing import Iterable

from .dedup import find_repeated_windows
from .corpus import compute_stats
from .records import Document
from .segment import SegmentConfig, _badword_pattern


def check_segmented(docs: Iterable[Document], cfg: SegmentConfig) -> list[str]:
    """Violation messages for the segment-stage invariants (empty = pass)."""
    pattern = _badword_pattern(cfg.badwords or frozenset())
    problems = []
    for doc in docs:
        if not doc.sentences:
            problems.append(f"doc {doc.doc_id}: empty document survived")
            continue
        for i, sent in enumerate(doc.sentences):
            if "\n" in sent:
                problems.append(f"doc {doc.doc_id} sentence {i}: embedded newline")
            if len(sent) <= cfg.min_sentence_len:
                problems.append(f"doc {doc.doc_id} sentence {i}: length {len(sent)} not above minimum")
            if any(c in sent for c in cfg.curly_chars):
                problems.append(f"doc {doc.doc_id} sentence {i}: curly bracket")
            if pattern is not None and pattern.search(sent):
                problems.append(f"doc {doc.doc_id} sentence {i}: badword")
        last = doc.sentences[-1]
        if not last or last[-1] not in cfg.terminal_marks:
            problems.append(f"doc {doc.doc_id}: final sentence lacks terminal mark")
    return problems


def check_deduped(docs: Iterable[Document], seed: int = 0) -> list[str]:
    repeats = find_repeated_windows(docs, seed)
    return [f"doc {doc_id}: repeated window at sentence {start}" for doc_id, start in repeats]


def check_corpus_format(path) -> list[str]:
    """Format violations of an emitted file or directory (empty = pass)."""
    try:
        compute_stats(path)
    except Exception as exc:  # FormatViolation or undecodable bytes
        return [f"{path}: {exc}"]
    return []
