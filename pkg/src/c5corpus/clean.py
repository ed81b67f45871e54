"""Document- and line-level filters applied before sentence segmentation:
Chinese-language selection, blank-run normalization, Javascript-line removal.
"""

from dataclasses import dataclass

from . import kernels
from .records import Document, STAGE_CLEANED
from .report import CleanReport

CHINESE_LANGUAGE_CODES = frozenset({"zh", "zho"})


@dataclass(frozen=True)
class CleanConfig:
    min_chinese_ratio: float = 0.5
    language_metadata_trusted: bool = True
    javascript_case_insensitive: bool = True

    def __post_init__(self):
        if not 0.0 <= self.min_chinese_ratio <= 1.0:
            raise ValueError("min_chinese_ratio must be in [0, 1]")


def is_chinese(doc: Document, cfg: CleanConfig) -> tuple[bool, float | None]:
    """Keep/drop decision plus the measured CJK ratio.

    With trusted, non-empty language metadata the declared codes decide and
    no ratio is measured (returned ratio is None).  Otherwise the ratio of
    CJK ideographs to non-blank code points decides against the threshold.
    """
    if cfg.language_metadata_trusted and doc.declared_languages:
        codes = {code.lower() for code in doc.declared_languages}
        return bool(codes & CHINESE_LANGUAGE_CODES), None
    han = 0
    nonblank = 0
    for line in doc.lines:
        h, nb = kernels.han_counts(line)
        han += h
        nonblank += nb
    if nonblank == 0:
        return False, 0.0
    ratio = han / nonblank
    return ratio >= cfg.min_chinese_ratio, ratio


def normalize_whitespace(line: str) -> str:
    """Collapse each blank run to one space and trim the ends."""
    return kernels.collapse_blanks(line)


def line_has_javascript(line: str, cfg: CleanConfig) -> bool:
    if cfg.javascript_case_insensitive:
        return "javascript" in line.lower()
    return "Javascript" in line or "JavaScript" in line


def drop_javascript_lines(doc: Document, cfg: CleanConfig) -> Document:
    kept = [ln for ln in doc.lines if not line_has_javascript(ln, cfg)]
    return doc.advanced(doc.stage, lines=kept)


def clean_document(doc: Document, cfg: CleanConfig) -> tuple[Document | None, CleanReport]:
    """Per-line normalization, Javascript removal, then the language gate.

    The language decision is made on the Javascript-free content so that
    cleaning an already-cleaned document changes nothing (boilerplate lines
    must not be able to tip the Chinese ratio either way).
    """
    delta = CleanReport()
    lines = []
    for line in doc.lines:
        norm = kernels.collapse_blanks(line)
        if norm != line:
            delta.lines_whitespace_normalized += 1
        if line_has_javascript(norm, cfg):
            delta.lines_dropped_javascript += 1
        else:
            lines.append(norm)

    cleaned = doc.advanced(STAGE_CLEANED, lines=lines)
    keep, _ratio = is_chinese(cleaned, cfg)
    if not keep:
        delta.docs_dropped_language += 1
        return None, delta
    return cleaned, delta
