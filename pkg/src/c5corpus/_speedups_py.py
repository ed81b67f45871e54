"""Pure-Python implementations of the hot text kernels.

Drop-in fallback for the compiled `c5corpus._speedups` module; both must
produce byte-identical results (tests enforce this).
"""

import re

from .chartables import (
    ATTACH_QUOTES,
    BLANK_CHARS,
    CJK_FIRST,
    CJK_LAST,
    SPLIT_MARKS,
)

BACKEND = "python"

_BLANK_RUN = re.compile("[%s]+" % "".join(re.escape(c) for c in sorted(BLANK_CHARS)))


def collapse_blanks(s: str) -> str:
    """Replace each run of blank characters with one space; trim the ends."""
    return _BLANK_RUN.sub(" ", s).strip(" ")


def strip_blanks(s: str) -> str:
    """Remove every blank character."""
    return _BLANK_RUN.sub("", s)


def han_counts(s: str) -> tuple[int, int]:
    """Return (CJK ideograph count, non-blank count) for a string."""
    han = 0
    nonblank = 0
    for ch in s:
        if ch in BLANK_CHARS:
            continue
        nonblank += 1
        if CJK_FIRST <= ord(ch) <= CJK_LAST:
            han += 1
    return han, nonblank


def split_after_marks(s: str) -> list[str]:
    """Cut after each sentence-final mark, attaching one closing quote."""
    out = []
    start = 0
    i = 0
    n = len(s)
    while i < n:
        if s[i] in SPLIT_MARKS:
            end = i + 1
            if end < n and s[end] in ATTACH_QUOTES:
                end += 1
            out.append(s[start:end])
            start = end
            i = end
        else:
            i += 1
    if start < n:
        out.append(s[start:])
    return out
