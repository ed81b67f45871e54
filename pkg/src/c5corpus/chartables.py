"""Character tables shared by the compiled and pure-Python text kernels.

Everything that decides "is this code point blank / CJK / a sentence-final
mark" lives here, so the two kernel backends and the tests agree on one
definition.
"""

# Unicode White_Space property (PropList.txt) plus the two zero-width
# characters that show up constantly in web text: ZERO WIDTH SPACE and
# ZERO WIDTH NO-BREAK SPACE (stray BOMs).
BLANK_CODEPOINTS = frozenset(
    list(range(0x0009, 0x000E))  # TAB, LF, VT, FF, CR
    + [0x0020, 0x0085, 0x00A0, 0x1680]
    + list(range(0x2000, 0x200B))  # EN QUAD .. HAIR SPACE
    + [0x2028, 0x2029, 0x202F, 0x205F, 0x3000]
    + [0x200B, 0xFEFF]
)

BLANK_CHARS = frozenset(chr(cp) for cp in BLANK_CODEPOINTS)

# CJK Unified Ideographs block; the basis of the Chinese-content ratio and
# of single-character tokenization.
CJK_FIRST = 0x4E00
CJK_LAST = 0x9FFF

# Marks a sentence is split after.  The closing quotes attach to the
# preceding sentence when they directly follow a split mark.
SPLIT_MARKS = frozenset("。！？；…")  # 。！？；…
ATTACH_QUOTES = frozenset("”’")  # ” ’

# Marks accepted as a document-final sentence ending (tail truncation).
TERMINAL_MARKS_DEFAULT = frozenset("。？！”；…")  # 。？！”；…
TERMINAL_MARKS_STRICT = frozenset("。？”")  # 。？”


def is_blank(ch: str) -> bool:
    return ch in BLANK_CHARS


def is_cjk(ch: str) -> bool:
    return CJK_FIRST <= ord(ch) <= CJK_LAST
